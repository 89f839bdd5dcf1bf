// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// required criterion fails. Runs against the bundled fixtures in data/.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "cmtag/annotate.hpp"
#include "cmtag/cli.hpp"
#include "cmtag/corpus.hpp"
#include "cmtag/crf.hpp"
#include "cmtag/embed.hpp"
#include "cmtag/eval.hpp"
#include "cmtag/hmm.hpp"
#include "cmtag/neural.hpp"
#include "cmtag/normalize.hpp"
#include "cmtag/rand.hpp"

using namespace cmtag;

namespace {

const std::string kFixtures = std::string(CMTAG_DATA_DIR) + "/fixtures";

struct Failure {
    std::string message;
};

void require(bool ok, const std::string& message) {
    if (!ok) throw Failure{message};
}

int failures = 0;

void criterion(int number, const std::string& title, const std::function<void()>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string verdict = "PASS";
    std::string detail;
    try {
        body();
    } catch (const Failure& f) {
        verdict = "FAIL";
        detail = f.message;
        ++failures;
    } catch (const std::exception& e) {
        verdict = "FAIL";
        detail = e.what();
        ++failures;
    }
    const auto seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    std::printf("[%s] criterion %d: %s (%.1fs)%s%s\n", verdict.c_str(), number,
                title.c_str(), seconds, detail.empty() ? "" : " -- ",
                detail.c_str());
    std::fflush(stdout);
}

// ---- shared oracle helpers -------------------------------------------------

double hmm_joint(const HmmModel& model, const Sentence& sentence,
                 const std::vector<int>& tags) {
    double total = model.initial_log[tags[0]] +
                   model.emission(static_cast<LangTag>(tags[0]), sentence.tokens[0]);
    for (std::size_t i = 1; i < sentence.size(); ++i)
        total += model.transition_log[tags[i - 1]][tags[i]] +
                 model.emission(static_cast<LangTag>(tags[i]), sentence.tokens[i]);
    return total;
}

// Enumeration with the front position varying fastest: the first strict
// maximum is the sequence Viterbi's backpointer tie rule selects.
template <typename Score>
std::pair<std::vector<int>, double> enumerate_sequences(std::size_t n, Score&& score) {
    std::vector<int> tags(n, 0), best(n, 0);
    double best_score = -1e300, max_seen = -1e300;
    std::vector<double> scores;
    while (true) {
        const double s = score(tags);
        scores.push_back(s);
        max_seen = std::max(max_seen, s);
        if (s > best_score) {
            best_score = s;
            best = tags;
        }
        std::size_t pos = 0;
        while (pos < n && tags[pos] == 2) tags[pos++] = 0;
        if (pos == n) break;
        tags[pos]++;
    }
    double acc = 0.0;
    for (double s : scores) acc += std::exp(s - max_seen);
    return {best, max_seen + std::log(acc)};
}

Sentence random_sentence(std::mt19937_64& rng, const std::vector<std::string>& words,
                         int max_len) {
    Sentence sentence;
    const int len = 1 + static_cast<int>(uniform_index(rng, static_cast<std::size_t>(max_len)));
    for (int i = 0; i < len; ++i)
        sentence.tokens.push_back(words[uniform_index(rng, words.size())]);
    return sentence;
}

std::vector<std::string> sample_vocabulary(const Corpus& corpus) {
    std::vector<std::string> words;
    for (const auto& sentence : corpus.sentences)
        for (const auto& token : sentence.tokens) {
            words.push_back(token);
            if (words.size() >= 40) return words;
        }
    return words;
}

double token_accuracy(const Corpus& gold,
                      const std::vector<std::vector<LangTag>>& predicted) {
    return evaluate(gold, predicted).accuracy;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), "cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("cmtag");
    for (const auto& arg : args) argv.push_back(arg.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

// ---- criteria ---------------------------------------------------------------

void criterion_hmm_oracle() {
    const Corpus corpus =
        read_corpus(kFixtures + "/synth_clean.conll", CorpusFormat::Conll);
    const HmmModel model = train_hmm(corpus, 0.5);
    std::vector<std::string> words = sample_vocabulary(corpus);
    words.push_back("totally-oov");
    words.push_back("alsooo-new");

    std::mt19937_64 rng(2024);
    for (int iter = 0; iter < 200; ++iter) {
        const Sentence sentence = random_sentence(rng, words, 8);
        const auto [oracle_tags, oracle_log_z] = enumerate_sequences(
            sentence.size(),
            [&](const std::vector<int>& tags) { return hmm_joint(model, sentence, tags); });

        const auto decoded = viterbi(model, sentence);
        for (std::size_t i = 0; i < decoded.size(); ++i)
            require(static_cast<int>(decoded[i]) == oracle_tags[i],
                    "viterbi disagrees with enumeration on sentence " +
                        std::to_string(iter));

        const double fwd = forward_log_partition(model, sentence);
        const double bwd = backward_log_partition(model, sentence);
        require(std::abs(fwd - oracle_log_z) <= 1e-9 * std::abs(oracle_log_z),
                "forward partition off at sentence " + std::to_string(iter));
        require(std::abs(fwd - bwd) <= 1e-9 * std::abs(fwd),
                "forward/backward disagree at sentence " + std::to_string(iter));
    }
}

void criterion_crf_oracle() {
    const Corpus corpus =
        read_corpus(kFixtures + "/synth_clean.conll", CorpusFormat::Conll);
    Corpus subset;
    subset.annotated = true;
    for (std::size_t s = 0; s < 30; ++s) subset.sentences.push_back(corpus.sentences[s]);
    CrfTrainOpts opts;
    opts.epochs = 10;
    const CrfModel model = train_crf(subset, FeatureSet::build(subset), opts);

    // zero weights: partition is exactly n log 3 within 1e-12
    CrfModel zeros;
    zeros.features = model.features;
    zeros.unary_weights.assign(model.unary_weights.size(), 0.0);
    for (int n = 1; n <= 8; ++n) {
        Sentence sentence;
        for (int i = 0; i < n; ++i) sentence.tokens.push_back("w" + std::to_string(i));
        require(std::abs(crf_log_partition(zeros, sentence) - n * std::log(3.0)) < 1e-12,
                "zero-weight partition differs from n log 3");
    }

    std::vector<std::string> words = sample_vocabulary(corpus);
    words.push_back("unseen-token");
    std::mt19937_64 rng(2025);
    for (int iter = 0; iter < 200; ++iter) {
        const Sentence sentence = random_sentence(rng, words, 8);
        const auto [oracle_tags, oracle_log_z] =
            enumerate_sequences(sentence.size(), [&](const std::vector<int>& tags) {
                std::vector<LangTag> seq;
                for (int t : tags) seq.push_back(static_cast<LangTag>(t));
                return crf_sequence_score(model, sentence, seq);
            });
        require(std::abs(crf_log_partition(model, sentence) - oracle_log_z) <=
                    1e-8 * std::max(1.0, std::abs(oracle_log_z)),
                "log partition off at sentence " + std::to_string(iter));
        const auto decoded = crf_decode(model, sentence);
        for (std::size_t i = 0; i < decoded.size(); ++i)
            require(static_cast<int>(decoded[i]) == oracle_tags[i],
                    "decode disagrees with enumeration at sentence " +
                        std::to_string(iter));
    }
}

void criterion_gradient_checks() {
    const double tolerance = 1e-4;
    auto rel_error = [](double a, double b) {
        return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
    };

    // CRF log-likelihood gradient
    {
        std::mt19937_64 rng(11);
        Corpus corpus;
        corpus.annotated = true;
        Sentence s;
        s.tokens = {"qafu", "zelo"};
        s.tags = {LangTag::EN, LangTag::RU};
        corpus.sentences.push_back(s);
        CrfModel model;
        model.features = FeatureSet::build(corpus);
        model.unary_weights.assign(model.features.size() * kNumTags, 0.0);
        auto log_likelihood = [&] {
            return crf_sentence_log_prob(model, corpus.sentences[0],
                                         corpus.sentences[0].tags);
        };
        for (int instance = 0; instance < 5; ++instance) {
            for (double& w : model.unary_weights) w = uniform_range(rng, -0.5, 0.5);
            for (auto& row : model.transition_weights)
                for (double& w : row) w = uniform_range(rng, -0.5, 0.5);
            const CrfGradient grad = crf_batch_gradient(model, corpus);
            const double eps = 1e-6;
            for (std::size_t i = 0; i < model.unary_weights.size(); ++i) {
                const double saved = model.unary_weights[i];
                model.unary_weights[i] = saved + eps;
                const double up = log_likelihood();
                model.unary_weights[i] = saved - eps;
                const double down = log_likelihood();
                model.unary_weights[i] = saved;
                require(rel_error(grad.unary[i], (up - down) / (2 * eps)) < tolerance,
                        "crf unary gradient mismatch");
            }
        }
    }

    // skipgram pair loss gradient
    {
        std::mt19937_64 rng(12);
        Corpus corpus;
        Sentence s;
        s.tokens = {"one", "two", "three"};
        corpus.sentences.push_back(s);
        EmbedConfig cfg;
        cfg.dim = 4;
        cfg.window = 1;
        cfg.epochs = 0;
        cfg.min_ngram = 2;
        cfg.max_ngram = 3;
        for (int instance = 0; instance < 5; ++instance) {
            cfg.seed = 300 + static_cast<std::uint64_t>(instance);
            EmbeddingTable table = train_skipgram(corpus, cfg);
            for (Eigen::Index r = 0; r < table.output_vecs.rows(); ++r)
                for (Eigen::Index c = 0; c < table.output_vecs.cols(); ++c)
                    table.output_vecs(r, c) = uniform_range(rng, -0.7, 0.7);
            const int center = instance % 3, target = (instance + 2) % 3;
            const SkipgramPairGrad grad = skipgram_pair_gradient(table, center, target);
            const double eps = 1e-6;
            for (int k = 0; k < cfg.dim; ++k) {
                const double saved = table.word_vecs(center, k);
                table.word_vecs(center, k) = saved + eps;
                const double up = skipgram_pair_loss(table, center, target);
                table.word_vecs(center, k) = saved - eps;
                const double down = skipgram_pair_loss(table, center, target);
                table.word_vecs(center, k) = saved;
                require(rel_error(grad.hidden[k], (up - down) / (2 * eps)) < tolerance,
                        "skipgram hidden gradient mismatch");
            }
            for (Eigen::Index r = 0; r < table.output_vecs.rows(); ++r)
                for (Eigen::Index c = 0; c < table.output_vecs.cols(); ++c) {
                    const double saved = table.output_vecs(r, c);
                    table.output_vecs(r, c) = saved + eps;
                    const double up = skipgram_pair_loss(table, center, target);
                    table.output_vecs(r, c) = saved - eps;
                    const double down = skipgram_pair_loss(table, center, target);
                    table.output_vecs(r, c) = saved;
                    require(rel_error(grad.output(r, c), (up - down) / (2 * eps)) <
                                tolerance,
                            "skipgram output gradient mismatch");
                }
        }
    }

    // neural BPTT, both architectures, T <= 4 and H <= 5
    {
        std::mt19937_64 rng(13);
        for (auto arch : {NeuralArch::Bilstm, NeuralArch::Attention}) {
            for (int instance = 0; instance < 5; ++instance) {
                NeuralConfig cfg;
                cfg.arch = arch;
                cfg.hidden = 2 + instance % 4;
                cfg.tag_embed_dim = 2;
                cfg.seed = 400 + static_cast<std::uint64_t>(instance);
                const int steps = 1 + instance % 4;
                const int dim = 3;
                NeuralModel model = init_neural(cfg, dim, 0);
                Eigen::MatrixXd features(steps, dim);
                for (int r = 0; r < steps; ++r)
                    for (int c = 0; c < dim; ++c)
                        features(r, c) = uniform_range(rng, -1.0, 1.0);
                std::vector<LangTag> gold;
                for (int t = 0; t < steps; ++t)
                    gold.push_back(static_cast<LangTag>(uniform_index(rng, 3)));

                NeuralGradient grad(model);
                loss_and_gradient(model, features, gold, grad);
                auto model_blocks = param_blocks(model);
                auto grad_blocks = grad.blocks();
                const double eps = 1e-5;
                for (std::size_t b = 0; b < model_blocks.size(); ++b)
                    for (Eigen::Index i = 0; i < model_blocks[b].size(); ++i) {
                        const double saved = model_blocks[b].data[i];
                        NeuralGradient scratch(model);
                        model_blocks[b].data[i] = saved + eps;
                        const double up = loss_and_gradient(model, features, gold, scratch);
                        scratch.set_zero();
                        model_blocks[b].data[i] = saved - eps;
                        const double down =
                            loss_and_gradient(model, features, gold, scratch);
                        model_blocks[b].data[i] = saved;
                        require(rel_error(grad_blocks[b].data[i],
                                          (up - down) / (2 * eps)) < tolerance,
                                "bptt gradient mismatch in " + model_blocks[b].name);
                    }
            }
        }
    }
}

void criterion_attention_invariants() {
    std::mt19937_64 rng(14);
    for (int iter = 0; iter < 200; ++iter) {
        NeuralConfig cfg;
        cfg.arch = NeuralArch::Attention;
        cfg.hidden = 2 + static_cast<int>(uniform_index(rng, 5));
        cfg.tag_embed_dim = 2;
        cfg.seed = 500 + static_cast<std::uint64_t>(iter);
        const NeuralModel model = init_neural(cfg, 3, 0);
        const int steps = 1 + static_cast<int>(uniform_index(rng, 7));

        Eigen::MatrixXd features(steps, 3);
        for (int r = 0; r < steps; ++r)
            for (int c = 0; c < 3; ++c) features(r, c) = uniform_range(rng, -1.0, 1.0);
        const EncoderState enc = encode(features, model.encoder_fwd, model.encoder_bwd);
        Eigen::VectorXd state(cfg.hidden);
        for (int i = 0; i < cfg.hidden; ++i) state[i] = uniform_range(rng, -1.0, 1.0);

        const Attended att = attend(state, enc, model.attention);
        require(std::abs(att.weights.sum() - 1.0) <= 1e-9, "weights do not sum to 1");

        if (steps == 1) {
            require(std::abs(att.weights[0] - 1.0) <= 1e-12, "singleton weight not 1");
            require((att.context.transpose() - enc.combined.row(0)).cwiseAbs().maxCoeff() <
                        1e-12,
                    "singleton context is not the encoder state");
        }

        EncoderState uniform_enc = enc;
        for (int i = 1; i < steps; ++i)
            uniform_enc.combined.row(i) = uniform_enc.combined.row(0);
        const Attended uniform_att = attend(state, uniform_enc, model.attention);
        for (int i = 0; i < steps; ++i)
            require(std::abs(uniform_att.weights[i] - 1.0 / steps) <= 1e-9,
                    "identical states do not give uniform weights");
    }
}

void criterion_separable_learning() {
    const Corpus corpus =
        read_corpus(kFixtures + "/synth_clean.conll", CorpusFormat::Conll);
    SplitSpec spec;
    spec.seed = 7;
    const SplitResult parts = split_corpus(corpus, spec);

    auto accuracy_of = [&](auto&& tagger) {
        std::vector<std::vector<LangTag>> predictions;
        for (const auto& sentence : parts.test.sentences)
            predictions.push_back(tagger(sentence));
        return token_accuracy(parts.test, predictions);
    };

    const HmmModel hmm = train_hmm(parts.train, 0.1);
    const double hmm_acc =
        accuracy_of([&](const Sentence& s) { return viterbi(hmm, s); });
    require(hmm_acc >= 0.95, "hmm held-out accuracy " + std::to_string(hmm_acc));

    CrfTrainOpts crf_opts;  // 50 epochs, step 0.1
    const CrfModel crf = train_crf(parts.train, FeatureSet::build(parts.train), crf_opts);
    const double crf_acc =
        accuracy_of([&](const Sentence& s) { return crf_decode(crf, s); });
    require(crf_acc >= 0.95, "crf held-out accuracy " + std::to_string(crf_acc));

    EmbedConfig embed_cfg;
    embed_cfg.dim = 50;
    const EmbeddingTable table = train_skipgram(parts.train, embed_cfg);

    for (auto arch : {NeuralArch::Bilstm, NeuralArch::Attention}) {
        NeuralConfig cfg;  // 30 epochs
        cfg.arch = arch;
        const NeuralModel model = train_neural(parts.train, table, cfg);
        const double acc =
            accuracy_of([&](const Sentence& s) { return tag_neural(model, table, s); });
        require(acc >= 0.95, std::string(arch == NeuralArch::Bilstm ? "bilstm" : "attn") +
                                 " held-out accuracy " + std::to_string(acc));
    }
}

void criterion_qualitative_ordering() {
    const Corpus corpus =
        read_corpus(kFixtures + "/synth_noisy.conll", CorpusFormat::Conll);
    std::string report;
    for (std::uint64_t seed : {1, 2, 3}) {
        SplitSpec spec;
        spec.seed = seed;
        const SplitResult parts = split_corpus(corpus, spec);

        auto macro_f1_of = [&](auto&& tagger) {
            std::vector<std::vector<LangTag>> predictions;
            for (const auto& sentence : parts.test.sentences)
                predictions.push_back(tagger(sentence));
            return evaluate(parts.test, predictions).macro_f1;
        };

        const HmmModel hmm = train_hmm(parts.train, 0.1);
        const double hmm_f1 =
            macro_f1_of([&](const Sentence& s) { return viterbi(hmm, s); });

        CrfTrainOpts crf_opts;
        const CrfModel crf =
            train_crf(parts.train, FeatureSet::build(parts.train), crf_opts);
        const double crf_f1 =
            macro_f1_of([&](const Sentence& s) { return crf_decode(crf, s); });

        EmbedConfig embed_cfg;
        embed_cfg.dim = 50;
        embed_cfg.seed = 42 + seed;
        const EmbeddingTable table = train_skipgram(parts.train, embed_cfg);

        NeuralConfig attn_cfg;
        attn_cfg.arch = NeuralArch::Attention;
        attn_cfg.seed = seed;
        const NeuralModel attn = train_neural(parts.train, table, attn_cfg);
        const double attn_f1 =
            macro_f1_of([&](const Sentence& s) { return tag_neural(attn, table, s); });

        NeuralConfig bilstm_cfg;
        bilstm_cfg.arch = NeuralArch::Bilstm;
        bilstm_cfg.seed = seed;
        const NeuralModel bilstm = train_neural(parts.train, table, bilstm_cfg);
        const double bilstm_f1 = macro_f1_of(
            [&](const Sentence& s) { return tag_neural(bilstm, table, s); });

        std::ostringstream line;
        line << "seed " << seed << ": macro-F1 hmm=" << hmm_f1 << " crf=" << crf_f1
             << " bilstm=" << bilstm_f1 << " attn=" << attn_f1;
        std::cout << "  " << line.str() << "\n";

        require(crf_f1 >= hmm_f1, "crf < hmm at " + line.str());
        require(attn_f1 >= hmm_f1, "attn < hmm at " + line.str());
        if (attn_f1 < bilstm_f1)
            report += " [reported, not failed: bilstm > attn at seed " +
                      std::to_string(seed) + "]";
    }
    if (!report.empty()) std::cout << " " << report << "\n";
}

void criterion_pipeline_determinism() {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "cmtag_acceptance_walkthrough";
    fs::remove_all(base);

    auto walkthrough = [&](const fs::path& dir) {
        fs::create_directories(dir);
        auto p = [&](const std::string& name) { return (dir / name).string(); };

        require(run_cli({"normalize", "--in", kFixtures + "/synth_clean.txt", "--out",
                         p("clean.txt")}) == 0,
                "normalize failed");
        require(run_cli({"annotate", "--in", p("clean.txt"), "--out", p("gold.conll"),
                         "--en-lexicon", kFixtures + "/en_lexicon.txt", "--ru-lexicon",
                         kFixtures + "/ru_lexicon.txt"}) == 0,
                "annotate failed");
        require(run_cli({"split", "--in", p("gold.conll"), "--train", p("train.conll"),
                         "--dev", p("dev.conll"), "--test", p("test.conll"),
                         "--config", kFixtures + "/pipeline.cfg"}) == 0,
                "split failed");
        require(run_cli({"train-embeddings", "--in", p("train.conll"), "--out",
                         p("vectors.emb"), "--config", kFixtures + "/pipeline.cfg"}) == 0,
                "train-embeddings failed");
        for (const std::string model : {"hmm", "crf", "bilstm", "attn"}) {
            std::vector<std::string> args = {"train",  "--model", model,
                                             "--train", p("train.conll"),
                                             "--out",   p(model + ".model"),
                                             "--config", kFixtures + "/pipeline.cfg"};
            if (model == "bilstm" || model == "attn") {
                args.push_back("--embeddings");
                args.push_back(p("vectors.emb"));
            }
            require(run_cli(args) == 0, "train " + model + " failed");
        }
        const Corpus test = read_corpus(dir / "test.conll", CorpusFormat::Conll);
        write_corpus(test, dir / "test.txt", CorpusFormat::Plain);
        for (const std::string model : {"hmm", "crf", "bilstm", "attn"}) {
            std::vector<std::string> args = {"tag",   "--model-file", p(model + ".model"),
                                             "--in",  p("test.txt"),  "--out",
                                             p("pred_" + model + ".conll")};
            if (model == "bilstm" || model == "attn") {
                args.push_back("--embeddings");
                args.push_back(p("vectors.emb"));
            }
            require(run_cli(args) == 0, "tag " + model + " failed");
            require(run_cli({"eval", "--gold", p("test.conll"), "--pred",
                             p("pred_" + model + ".conll"), "--name", model, "--out",
                             p(model + ".report")}) == 0,
                    "eval " + model + " failed");
        }
        require(run_cli({"compare", p("hmm.report"), p("crf.report"),
                         p("bilstm.report"), p("attn.report")}) == 0,
                "compare failed");
    };

    walkthrough(base / "run1");
    walkthrough(base / "run2");

    for (const std::string name :
         {"clean.txt", "gold.conll", "train.conll", "dev.conll", "test.conll",
          "vectors.emb", "hmm.model", "crf.model", "bilstm.model", "attn.model",
          "pred_hmm.conll", "pred_crf.conll", "pred_bilstm.conll", "pred_attn.conll",
          "hmm.report", "crf.report", "bilstm.report", "attn.report"}) {
        require(slurp(base / "run1" / name) == slurp(base / "run2" / name),
                name + " differs between identically-seeded runs");
    }
    fs::remove_all(base);
}

void criterion_normalization() {
    require(collapse_lengthening("youuuu") == "you", "youuuu does not collapse to you");
    require(collapse_lengthening("kiaaa") == "kia", "kiaaa does not collapse to kia");

    std::mt19937_64 rng(15);
    for (int iter = 0; iter < 100000; ++iter) {
        std::string word;
        const int len = 1 + static_cast<int>(uniform_index(rng, 10));
        for (int i = 0; i < len; ++i) {
            switch (uniform_index(rng, 5)) {
                case 0: word += 'a'; break;
                case 1: word += 'b'; break;
                case 2: word += 'o'; break;
                case 3: word += 'u'; break;
                default: word += "é"; break;
            }
        }
        const std::string once = collapse_lengthening(word);
        require(collapse_lengthening(once) == once, "collapse is not idempotent on " + word);
    }

    Lexicon en, ru;
    en.language = LangTag::EN;
    ru.language = LangTag::RU;
    for (const char* word : {"ab", "abc", "ba", "cab"}) en.add_surface(word);
    for (const char* word : {"bca", "aab", "cc", "b"}) ru.add_surface(word);
    for (int iter = 0; iter < 10000; ++iter) {
        std::string text;
        const int len = 1 + static_cast<int>(uniform_index(rng, 24));
        for (int i = 0; i < len; ++i)
            text += static_cast<char>('a' + uniform_index(rng, 3));
        std::string joined;
        for (const auto& token : segment_spaceless(text, en, ru)) joined += token;
        require(joined == text, "segmentation lost characters on " + text);
    }
}

}  // namespace

int main() {
    std::printf("acceptance suite, fixtures at %s\n", kFixtures.c_str());
    criterion(1, "HMM viterbi and partitions match brute-force enumeration",
              criterion_hmm_oracle);
    criterion(2, "CRF partition and decoding match brute-force enumeration",
              criterion_crf_oracle);
    criterion(3, "CRF, skipgram and BPTT gradients match finite differences",
              criterion_gradient_checks);
    criterion(4, "attention weight invariants hold under random parameters",
              criterion_attention_invariants);
    criterion(5, "all four models reach 0.95 held-out accuracy on the clean corpus",
              criterion_separable_learning);
    criterion(6, "macro-F1 ordering CRF >= HMM and attention >= HMM on the noisy corpus",
              criterion_qualitative_ordering);
    criterion(7, "the end-to-end walkthrough is byte-identical across reruns",
              criterion_pipeline_determinism);
    criterion(8, "collapse idempotence and segmentation losslessness at scale",
              criterion_normalization);

    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
