#include <doctest.h>

#include <cmath>

#include "cmtag/embed.hpp"
#include "helpers.hpp"

using namespace cmtag;
using namespace cmtag::test;

namespace {

Corpus alternating_corpus(int repeats) {
    Corpus corpus;
    for (int s = 0; s < repeats; ++s) {
        Sentence sentence;
        for (int i = 0; i < 8; ++i) sentence.tokens.push_back(i % 2 ? "b" : "a");
        corpus.sentences.push_back(std::move(sentence));
    }
    return corpus;
}

EmbedConfig small_config() {
    EmbedConfig cfg;
    cfg.dim = 4;
    cfg.window = 1;
    cfg.epochs = 30;
    cfg.learning_rate = 0.2;
    cfg.min_ngram = 3;
    cfg.max_ngram = 3;
    cfg.seed = 7;
    return cfg;
}

}  // namespace

TEST_CASE("char n-grams decorate word boundaries") {
    const auto grams = char_ngrams("kia", 3, 4);
    // "<kia>" has code points < k i a >
    CHECK(grams == std::vector<std::string>{"<ki", "kia", "ia>", "<kia", "kia>"});
    CHECK(char_ngrams("a", 3, 6) == std::vector<std::string>{"<a>"});
    CHECK(char_ngrams("a", 4, 6).empty());
}

TEST_CASE("two-word language: trained softmax picks the other word") {
    const Corpus corpus = alternating_corpus(20);
    const EmbeddingTable table = train_skipgram(corpus, small_config());
    REQUIRE(table.words.size() == 2);
    const int a = table.word_index.at("a");
    const int b = table.word_index.at("b");
    const Eigen::VectorXd p_given_a = skipgram_predict(table, a);
    CHECK(p_given_a[b] > 0.9);
    const Eigen::VectorXd p_given_b = skipgram_predict(table, b);
    CHECK(p_given_b[a] > 0.9);
}

TEST_CASE("softmax outputs are a probability distribution") {
    std::mt19937_64 rng(81);
    const Corpus corpus = random_corpus(rng, 10, false);
    EmbedConfig cfg = small_config();
    cfg.epochs = 2;
    const EmbeddingTable table = train_skipgram(corpus, cfg);
    for (int word = 0; word < static_cast<int>(table.words.size()); word += 3) {
        const Eigen::VectorXd p = skipgram_predict(table, word);
        CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(p.minCoeff() >= 0.0);
        CHECK(p.maxCoeff() <= 1.0);
    }
}

TEST_CASE("pair gradient matches central finite differences") {
    // 3-word vocabulary, a few random parameter draws
    Corpus corpus;
    Sentence sentence;
    sentence.tokens = {"one", "two", "three"};
    corpus.sentences.push_back(sentence);

    EmbedConfig cfg = small_config();
    cfg.epochs = 1;
    std::mt19937_64 rng(82);
    for (int instance = 0; instance < 5; ++instance) {
        cfg.seed = 100 + static_cast<std::uint64_t>(instance);
        EmbeddingTable table = train_skipgram(corpus, cfg);
        // non-degenerate output side
        for (Eigen::Index r = 0; r < table.output_vecs.rows(); ++r)
            for (Eigen::Index c = 0; c < table.output_vecs.cols(); ++c)
                table.output_vecs(r, c) = uniform_range(rng, -0.8, 0.8);

        const int center = instance % 3;
        const int target = (instance + 1) % 3;
        const SkipgramPairGrad grad = skipgram_pair_gradient(table, center, target);
        const double eps = 1e-6;
        auto check_close = [&](double analytic, double numeric) {
            const double rel = std::abs(analytic - numeric) /
                               std::max({1.0, std::abs(analytic), std::abs(numeric)});
            CHECK(rel < 1e-5);
        };

        // d loss / d word_vecs(center, k) == grad.hidden[k]
        for (int k = 0; k < cfg.dim; ++k) {
            const double saved = table.word_vecs(center, k);
            table.word_vecs(center, k) = saved + eps;
            const double up = skipgram_pair_loss(table, center, target);
            table.word_vecs(center, k) = saved - eps;
            const double down = skipgram_pair_loss(table, center, target);
            table.word_vecs(center, k) = saved;
            check_close(grad.hidden[k], (up - down) / (2 * eps));
        }
        // n-gram rows receive hidden / |grams|
        const auto& grams = table.word_ngram_ids[static_cast<std::size_t>(center)];
        REQUIRE(!grams.empty());
        const double share = 1.0 / static_cast<double>(grams.size());
        for (int k = 0; k < cfg.dim; ++k) {
            const double saved = table.ngram_vecs(grams[0], k);
            table.ngram_vecs(grams[0], k) = saved + eps;
            const double up = skipgram_pair_loss(table, center, target);
            table.ngram_vecs(grams[0], k) = saved - eps;
            const double down = skipgram_pair_loss(table, center, target);
            table.ngram_vecs(grams[0], k) = saved;
            check_close(grad.hidden[k] * share, (up - down) / (2 * eps));
        }
        // output matrix
        for (Eigen::Index r = 0; r < table.output_vecs.rows(); ++r)
            for (Eigen::Index c = 0; c < table.output_vecs.cols(); ++c) {
                const double saved = table.output_vecs(r, c);
                table.output_vecs(r, c) = saved + eps;
                const double up = skipgram_pair_loss(table, center, target);
                table.output_vecs(r, c) = saved - eps;
                const double down = skipgram_pair_loss(table, center, target);
                table.output_vecs(r, c) = saved;
                check_close(grad.output(r, c), (up - down) / (2 * eps));
            }
    }
}

TEST_CASE("average epoch loss is non-increasing early on the fixture") {
    const Corpus corpus =
        read_corpus(std::string(CMTAG_DATA_DIR) + "/fixtures/synth_clean.conll",
                    CorpusFormat::Conll);
    EmbedConfig cfg;
    cfg.dim = 16;
    cfg.window = 2;
    cfg.epochs = 3;
    cfg.learning_rate = 0.05;
    cfg.seed = 3;
    std::vector<double> losses;
    train_skipgram(corpus, cfg, &losses);
    REQUIRE(losses.size() == 3);
    CHECK(losses[1] <= losses[0]);
    CHECK(losses[2] <= losses[1]);
}

TEST_CASE("training is bitwise deterministic under a fixed seed") {
    std::mt19937_64 rng(83);
    const Corpus corpus = random_corpus(rng, 8, false);
    EmbedConfig cfg = small_config();
    cfg.epochs = 3;
    const EmbeddingTable a = train_skipgram(corpus, cfg);
    const EmbeddingTable b = train_skipgram(corpus, cfg);
    CHECK(a.word_vecs == b.word_vecs);
    CHECK(a.ngram_vecs == b.ngram_vecs);
    CHECK(a.output_vecs == b.output_vecs);
    CHECK(a.digest() == b.digest());
}

TEST_CASE("negative sampling trains and stays deterministic") {
    const Corpus corpus = alternating_corpus(10);
    EmbedConfig cfg = small_config();
    cfg.negative_samples = 2;
    cfg.epochs = 5;
    const EmbeddingTable a = train_skipgram(corpus, cfg);
    const EmbeddingTable b = train_skipgram(corpus, cfg);
    CHECK(a.word_vecs == b.word_vecs);
    CHECK(a.word_vecs.allFinite());
}

TEST_CASE("lookup covers in-vocab, subword-OOV and unknown tokens") {
    Corpus corpus;
    Sentence sentence;
    sentence.tokens = {"kia", "kiya"};
    corpus.sentences.push_back(sentence);
    EmbedConfig cfg = small_config();
    const EmbeddingTable table = train_skipgram(corpus, cfg);

    bool has_subwords = false;
    const Eigen::VectorXd in_vocab = table.lookup("kia", &has_subwords);
    CHECK(has_subwords);
    CHECK(in_vocab.size() == cfg.dim);
    CHECK(in_vocab.allFinite());
    const int kia = table.word_index.at("kia");
    CHECK(in_vocab == table.input_vector(kia));

    // OOV spelling variant shares n-grams with training words
    const Eigen::VectorXd oov = table.lookup("kiyaa", &has_subwords);
    CHECK(has_subwords);
    CHECK(oov.norm() > 0.0);

    // nothing shared at all
    const Eigen::VectorXd unknown = table.lookup("好的", &has_subwords);
    CHECK_FALSE(has_subwords);
    CHECK(unknown.norm() == 0.0);
}

TEST_CASE("embedding files round trip exactly") {
    TempDir dir("embed_io");
    const Corpus corpus = alternating_corpus(5);
    EmbedConfig cfg = small_config();
    cfg.epochs = 2;
    const EmbeddingTable table = train_skipgram(corpus, cfg);
    save_embeddings(table, dir.file("v.emb"));
    const EmbeddingTable loaded = load_embeddings(dir.file("v.emb"));
    CHECK(loaded.dim == table.dim);
    CHECK(loaded.words == table.words);
    CHECK(loaded.ngrams == table.ngrams);
    CHECK(loaded.word_vecs == table.word_vecs);
    CHECK(loaded.ngram_vecs == table.ngram_vecs);
    CHECK(loaded.digest() == table.digest());
    save_embeddings(loaded, dir.file("v2.emb"));
    CHECK(read_file(dir.file("v.emb")) == read_file(dir.file("v2.emb")));

    const std::string header = read_file(dir.file("v.emb")).substr(0, 10);
    CHECK(header.starts_with("CMEMB 1 4 "));
}

TEST_CASE("bad configs and corpora are rejected") {
    EmbedConfig cfg;
    cfg.dim = 0;
    CHECK_THROWS_AS(train_skipgram(alternating_corpus(2), cfg), DataError);
    CHECK_THROWS_AS(train_skipgram(Corpus{}, EmbedConfig{}), DataError);
    EmbedConfig bad_ngram;
    bad_ngram.min_ngram = 5;
    bad_ngram.max_ngram = 3;
    CHECK_THROWS_AS(train_skipgram(alternating_corpus(2), bad_ngram), DataError);
}
