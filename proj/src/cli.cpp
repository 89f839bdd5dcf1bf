#include "cmtag/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "cmtag/config.hpp"
#include "cmtag/eval.hpp"
#include "cmtag/hmm.hpp"
#include "cmtag/normalize.hpp"
#include "cmtag/textio.hpp"

namespace cmtag {

namespace {

CorpusFormat format_from(const std::string& name) {
    auto format = parse_format(name);
    if (!format) throw UsageError("unknown format \"" + name + "\" (plain or conll)");
    return *format;
}

void require_inputs(std::initializer_list<std::string> paths) {
    for (const auto& path : paths)
        if (!path.empty() && !std::filesystem::exists(path))
            throw UsageError("input file does not exist: " + path);
}

std::string need(const std::optional<std::string>& flag,
                 const std::optional<std::string>& config_value, const char* what) {
    if (flag) return *flag;
    if (config_value) return *config_value;
    throw UsageError(std::string("missing ") + what +
                     " (pass the flag or set it in the config file)");
}

struct LexiconPair {
    Lexicon en, ru;
};

LexiconPair load_lexicons(const std::string& en_path, const std::string& ru_path) {
    require_inputs({en_path, ru_path});
    return {load_lexicon(en_path, LangTag::EN), load_lexicon(ru_path, LangTag::RU)};
}

std::string sniff_model_kind(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    std::string magic;
    in >> magic;
    if (magic == "CMHMM") return "hmm";
    if (magic == "CMCRF") return "crf";
    if (magic == "CMNN") return "neural";
    throw DataError(path + ": unrecognized model file (magic \"" + magic + "\")");
}

std::vector<double> parse_fractions(const std::string& text) {
    std::vector<double> out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            out.push_back(parse_double(item));
        } catch (const DataError&) {
            throw UsageError("malformed fractions \"" + text + "\"");
        }
    }
    if (out.size() != 3)
        throw UsageError("--fractions needs three comma-separated values");
    return out;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    // The config file supplies defaults, so it must load before CLI11 parses
    // flag overrides into the same variables.
    PipelineConfig cfg;
    try {
        for (int i = 1; i + 1 < argc; ++i)
            if (std::string_view(argv[i]) == "--config") {
                cfg = parse_pipeline_config(argv[i + 1]);
                break;
            }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    CLI::App app{"token-level language identification for code-switched text"};
    app.require_subcommand(1);
    std::string config_path;  // consumed above; declared so parsing accepts it

    // normalize
    auto* norm_cmd = app.add_subcommand("normalize", "deduplicate sentences, optionally collapse lengthening");
    std::string norm_in, norm_out, norm_format = "plain";
    bool norm_collapse = false, norm_keep_dup = false;
    norm_cmd->add_option("--in", norm_in, "input corpus")->required();
    norm_cmd->add_option("--out", norm_out, "output corpus")->required();
    norm_cmd->add_option("--format", norm_format, "plain or conll");
    norm_cmd->add_flag("--collapse", norm_collapse, "rewrite tokens to base forms");
    norm_cmd->add_flag("--keep-duplicates", norm_keep_dup, "skip deduplication");
    norm_cmd->add_option("--config", config_path, "pipeline config file");

    // segment
    auto* seg_cmd = app.add_subcommand("segment", "split spaceless text by dictionary longest match");
    std::string seg_in, seg_out;
    std::optional<std::string> seg_en, seg_ru;
    seg_cmd->add_option("--in", seg_in, "input text, one line per sentence")->required();
    seg_cmd->add_option("--out", seg_out, "output plain corpus")->required();
    seg_cmd->add_option("--en-lexicon", seg_en, "English word list");
    seg_cmd->add_option("--ru-lexicon", seg_ru, "Roman Urdu word list");
    seg_cmd->add_option("--config", config_path, "pipeline config file");

    // annotate
    auto* ann_cmd = app.add_subcommand("annotate", "tag a plain corpus en/ru/rs via lexicons");
    std::string ann_in, ann_out;
    std::optional<std::string> ann_en, ann_ru, ann_ambiguous, ann_review;
    bool ann_ne = cfg.annotate.capitalized_is_rs;
    ann_cmd->add_option("--in", ann_in, "plain input corpus")->required();
    ann_cmd->add_option("--out", ann_out, "conll output corpus")->required();
    ann_cmd->add_option("--en-lexicon", ann_en, "English word list");
    ann_cmd->add_option("--ru-lexicon", ann_ru, "Roman Urdu word list");
    ann_cmd->add_option("--ambiguous", ann_ambiguous, "en, ru or unresolved");
    ann_cmd->add_option("--review", ann_review, "review file for unresolved tokens");
    ann_cmd->add_flag("--ne-heuristic", ann_ne, "treat capitalized tokens as rs");
    ann_cmd->add_option("--config", config_path, "pipeline config file");

    // split
    auto* split_cmd = app.add_subcommand("split", "deterministic train/dev/test split");
    std::string split_in, split_train, split_dev, split_test, split_format = "conll";
    std::optional<std::string> split_fractions;
    split_cmd->add_option("--in", split_in, "input corpus")->required();
    split_cmd->add_option("--train", split_train, "train output")->required();
    split_cmd->add_option("--dev", split_dev, "dev output")->required();
    split_cmd->add_option("--test", split_test, "test output")->required();
    split_cmd->add_option("--fractions", split_fractions, "train,dev,test e.g. 0.8,0.1,0.1");
    split_cmd->add_option("--seed", cfg.split.seed, "split seed");
    split_cmd->add_option("--format", split_format, "plain or conll");
    split_cmd->add_option("--config", config_path, "pipeline config file");

    // train-embeddings
    auto* emb_cmd = app.add_subcommand("train-embeddings", "train subword skipgram vectors");
    std::string emb_in, emb_out, emb_format = "conll";
    emb_cmd->add_option("--in", emb_in, "training corpus")->required();
    emb_cmd->add_option("--out", emb_out, "embedding file")->required();
    emb_cmd->add_option("--format", emb_format, "plain or conll");
    emb_cmd->add_option("--dim", cfg.embed.dim, "vector dimension");
    emb_cmd->add_option("--window", cfg.embed.window, "context window");
    emb_cmd->add_option("--epochs", cfg.embed.epochs, "training epochs");
    emb_cmd->add_option("--step", cfg.embed.learning_rate, "learning rate");
    emb_cmd->add_option("--min-ngram", cfg.embed.min_ngram, "shortest char n-gram");
    emb_cmd->add_option("--max-ngram", cfg.embed.max_ngram, "longest char n-gram");
    emb_cmd->add_option("--negative", cfg.embed.negative_samples,
                        "negative samples (0 = full softmax)");
    emb_cmd->add_option("--seed", cfg.embed.seed, "init seed");
    emb_cmd->add_option("--config", config_path, "pipeline config file");

    // train
    auto* train_cmd = app.add_subcommand("train", "train a tagger");
    std::string train_model, train_in, train_out;
    std::optional<std::string> train_embeddings;
    std::optional<int> train_epochs;
    std::optional<double> train_step;
    std::optional<std::uint64_t> train_seed;
    train_cmd->add_option("--model", train_model, "hmm, crf, bilstm or attn")->required();
    train_cmd->add_option("--train", train_in, "annotated training corpus")->required();
    train_cmd->add_option("--out", train_out, "model file")->required();
    train_cmd->add_option("--embeddings", train_embeddings, "embedding file (neural models)");
    train_cmd->add_option("--k", cfg.hmm_k, "hmm add-k smoothing");
    train_cmd->add_option("--l2", cfg.crf.l2, "crf l2 strength");
    train_cmd->add_option("--epochs", train_epochs, "training epochs (crf/neural)");
    train_cmd->add_option("--step", train_step, "step size (crf/neural)");
    train_cmd->add_option("--hidden", cfg.neural.hidden, "rnn hidden size");
    train_cmd->add_option("--tag-embed", cfg.neural.tag_embed_dim, "tag embedding dim");
    train_cmd->add_option("--attention-dim", cfg.neural.attention_dim,
                          "attention dim (0 = hidden)");
    train_cmd->add_option("--clip", cfg.neural.clip, "gradient clip threshold");
    train_cmd->add_option("--seed", train_seed, "training seed (neural)");
    train_cmd->add_option("--config", config_path, "pipeline config file");

    // tag
    auto* tag_cmd = app.add_subcommand("tag", "tag a plain corpus with a trained model");
    std::string tag_model, tag_in, tag_out, tag_decoder = "viterbi";
    std::optional<std::string> tag_embeddings;
    tag_cmd->add_option("--model-file", tag_model, "trained model")->required();
    tag_cmd->add_option("--in", tag_in, "plain input corpus")->required();
    tag_cmd->add_option("--out", tag_out, "conll output")->required();
    tag_cmd->add_option("--embeddings", tag_embeddings, "embedding file (neural models)");
    tag_cmd->add_option("--decoder", tag_decoder, "hmm decoding: viterbi or posterior");
    tag_cmd->add_option("--config", config_path, "pipeline config file");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "score predictions against gold");
    std::string eval_gold, eval_pred, eval_name = "model";
    std::optional<std::string> eval_out;
    eval_cmd->add_option("--gold", eval_gold, "gold conll corpus")->required();
    eval_cmd->add_option("--pred", eval_pred, "predicted conll corpus")->required();
    eval_cmd->add_option("--name", eval_name, "model name for the report");
    eval_cmd->add_option("--out", eval_out, "write machine-readable report here");
    eval_cmd->add_option("--config", config_path, "pipeline config file");

    // compare
    auto* cmp_cmd = app.add_subcommand("compare", "tabulate reports side by side");
    std::vector<std::string> cmp_files;
    cmp_cmd->add_option("reports", cmp_files, "report files from eval --out")
        ->required()
        ->expected(-1);
    cmp_cmd->add_option("--config", config_path, "pipeline config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*norm_cmd) {
            require_inputs({norm_in});
            const auto format = format_from(norm_format);
            Corpus corpus = read_corpus(norm_in, format);
            if (norm_collapse)
                for (auto& sentence : corpus.sentences)
                    for (auto& token : sentence.tokens) token = collapse_lengthening(token);
            const std::size_t before = corpus.sentences.size();
            if (!norm_keep_dup) corpus = dedup_sentences(corpus);
            write_corpus(corpus, norm_out, format);
            std::cout << "normalize: " << before << " sentences in, "
                      << corpus.sentences.size() << " out, " << corpus.token_count()
                      << " tokens\n";
        } else if (*seg_cmd) {
            const auto lexicons =
                load_lexicons(need(seg_en, cfg.en_lexicon, "--en-lexicon"),
                              need(seg_ru, cfg.ru_lexicon, "--ru-lexicon"));
            require_inputs({seg_in});
            std::ifstream in(seg_in);
            if (!in) throw DataError("cannot open input file: " + seg_in);
            std::ofstream out(seg_out);
            if (!out) throw DataError("cannot write output file: " + seg_out);
            std::string line;
            std::size_t tokens = 0;
            while (std::getline(in, line)) {
                if (!line.empty() && line.back() == '\r') line.pop_back();
                bool first = true;
                std::istringstream chunks(line);
                std::string chunk;
                while (chunks >> chunk) {
                    for (const auto& token :
                         segment_spaceless(chunk, lexicons.en, lexicons.ru)) {
                        if (!first) out << ' ';
                        out << token;
                        first = false;
                        ++tokens;
                    }
                }
                out << '\n';
            }
            std::cout << "segment: " << tokens << " tokens written\n";
        } else if (*ann_cmd) {
            const auto lexicons =
                load_lexicons(need(ann_en, cfg.en_lexicon, "--en-lexicon"),
                              need(ann_ru, cfg.ru_lexicon, "--ru-lexicon"));
            require_inputs({ann_in});
            AnnotationPolicy policy = cfg.annotate;
            policy.capitalized_is_rs = ann_ne;
            if (ann_review) policy.review_file = *ann_review;
            if (ann_ambiguous) {
                if (*ann_ambiguous == "unresolved") policy.ambiguous_default.reset();
                else if (auto tag = parse_tag(*ann_ambiguous); tag && *tag != LangTag::RS)
                    policy.ambiguous_default = *tag;
                else throw UsageError("--ambiguous must be en, ru or unresolved");
            }
            const Corpus corpus = read_corpus(ann_in, CorpusFormat::Plain);
            const AnnotationResult result =
                annotate_corpus(corpus, lexicons.en, lexicons.ru, policy);
            write_corpus(result.corpus, ann_out, CorpusFormat::Conll);
            std::cout << "annotate: " << result.corpus.token_count() << " tokens, "
                      << result.unresolved.size() << " unresolved\n";
            if (!result.unresolved.empty() && policy.review_file)
                std::cout << "annotate: review file written to "
                          << policy.review_file->string() << "\n";
        } else if (*split_cmd) {
            require_inputs({split_in});
            if (split_fractions) {
                const auto fracs = parse_fractions(*split_fractions);
                cfg.split.train_frac = fracs[0];
                cfg.split.dev_frac = fracs[1];
                cfg.split.test_frac = fracs[2];
            }
            const auto format = format_from(split_format);
            const Corpus corpus = read_corpus(split_in, format);
            const SplitResult parts = split_corpus(corpus, cfg.split);
            write_corpus(parts.train, split_train, format);
            write_corpus(parts.dev, split_dev, format);
            write_corpus(parts.test, split_test, format);
            std::cout << "split: " << parts.train.sentences.size() << "/"
                      << parts.dev.sentences.size() << "/" << parts.test.sentences.size()
                      << " sentences (seed " << cfg.split.seed << ")\n";
        } else if (*emb_cmd) {
            require_inputs({emb_in});
            const Corpus corpus = read_corpus(emb_in, format_from(emb_format));
            std::vector<double> losses;
            const EmbeddingTable table = train_skipgram(corpus, cfg.embed, &losses);
            save_embeddings(table, emb_out);
            std::cout << "train-embeddings: " << table.words.size() << " words, "
                      << table.ngrams.size() << " ngrams, dim " << table.dim;
            if (!losses.empty()) std::cout << ", final loss " << losses.back();
            std::cout << "\n";
        } else if (*train_cmd) {
            require_inputs({train_in});
            const Corpus corpus = read_corpus(train_in, CorpusFormat::Conll);
            if (train_model == "hmm") {
                save_hmm(train_hmm(corpus, cfg.hmm_k), train_out);
                std::cout << "train: hmm over " << corpus.token_count()
                          << " tokens, k=" << cfg.hmm_k << ", written to " << train_out
                          << "\n";
            } else if (train_model == "crf") {
                if (train_epochs) cfg.crf.epochs = *train_epochs;
                if (train_step) cfg.crf.step = *train_step;
                std::vector<double> objectives;
                const CrfModel model =
                    train_crf(corpus, FeatureSet::build(corpus), cfg.crf, &objectives);
                save_crf(model, train_out);
                std::cout << "train: crf, " << model.features.size() << " features, "
                          << cfg.crf.epochs << " epochs, objective "
                          << (objectives.empty() ? 0.0 : objectives.back())
                          << ", written to " << train_out << "\n";
            } else if (train_model == "bilstm" || train_model == "attn") {
                const std::string emb_path =
                    need(train_embeddings, cfg.embeddings, "--embeddings");
                require_inputs({emb_path});
                const EmbeddingTable table = load_embeddings(emb_path);
                cfg.neural.arch =
                    train_model == "bilstm" ? NeuralArch::Bilstm : NeuralArch::Attention;
                if (train_epochs) cfg.neural.epochs = *train_epochs;
                if (train_step) cfg.neural.step = *train_step;
                if (train_seed) cfg.neural.seed = *train_seed;
                std::vector<double> losses;
                const NeuralModel model = train_neural(corpus, table, cfg.neural, &losses);
                save_neural(model, train_out);
                std::cout << "train: " << train_model << ", hidden " << cfg.neural.hidden
                          << ", " << cfg.neural.epochs << " epochs, final loss "
                          << (losses.empty() ? 0.0 : losses.back()) << ", written to "
                          << train_out << "\n";
            } else {
                throw UsageError("unknown model \"" + train_model +
                                 "\" (hmm, crf, bilstm or attn)");
            }
        } else if (*tag_cmd) {
            require_inputs({tag_model, tag_in});
            const Corpus corpus = read_corpus(tag_in, CorpusFormat::Plain);
            Corpus tagged;
            tagged.annotated = true;
            const std::string kind = sniff_model_kind(tag_model);
            if (tag_decoder != "viterbi" && tag_decoder != "posterior")
                throw UsageError("--decoder must be viterbi or posterior");

            std::vector<std::vector<LangTag>> predictions;
            if (kind == "hmm") {
                const HmmModel model = load_hmm(tag_model);
                for (const auto& sentence : corpus.sentences)
                    predictions.push_back(tag_decoder == "posterior"
                                              ? posterior_decode(model, sentence)
                                              : viterbi(model, sentence));
            } else if (kind == "crf") {
                const CrfModel model = load_crf(tag_model);
                for (const auto& sentence : corpus.sentences)
                    predictions.push_back(crf_decode(model, sentence));
            } else {
                const std::string emb_path =
                    need(tag_embeddings, cfg.embeddings, "--embeddings");
                require_inputs({emb_path});
                const EmbeddingTable table = load_embeddings(emb_path);
                const NeuralModel model = load_neural(tag_model);
                require_embedding_match(model, table);
                for (const auto& sentence : corpus.sentences)
                    predictions.push_back(tag_neural(model, table, sentence));
            }
            for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
                Sentence sentence = corpus.sentences[s];
                sentence.tags = predictions[s];
                tagged.sentences.push_back(std::move(sentence));
            }
            write_corpus(tagged, tag_out, CorpusFormat::Conll);
            std::cout << "tag: " << tagged.token_count() << " tokens written to "
                      << tag_out << "\n";
        } else if (*eval_cmd) {
            require_inputs({eval_gold, eval_pred});
            const Corpus gold = read_corpus(eval_gold, CorpusFormat::Conll);
            const Corpus pred = read_corpus(eval_pred, CorpusFormat::Conll);
            std::vector<std::vector<LangTag>> predictions;
            for (const auto& sentence : pred.sentences) predictions.push_back(sentence.tags);
            const EvalReport report = evaluate(gold, predictions);
            std::cout << format_report(report);
            if (eval_out) {
                std::ofstream out(*eval_out);
                if (!out) throw DataError("cannot write report file: " + *eval_out);
                out << report_kv(report, eval_name);
            }
        } else if (*cmp_cmd) {
            std::vector<NamedReport> reports;
            for (const auto& file : cmp_files) {
                require_inputs({file});
                std::ifstream in(file);
                if (!in) throw DataError("cannot open report file: " + file);
                reports.push_back(parse_report_kv(in, file));
            }
            std::cout << compare(reports);
        }
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace cmtag
