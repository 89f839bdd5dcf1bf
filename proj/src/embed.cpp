#include "cmtag/embed.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "cmtag/rand.hpp"
#include "cmtag/textio.hpp"
#include "cmtag/utf8.hpp"

namespace cmtag {

void EmbedConfig::validate() const {
    if (dim < 1) throw DataError("embedding dim must be >= 1");
    if (window < 1) throw DataError("embedding window must be >= 1");
    if (epochs < 0) throw DataError("embedding epochs must be >= 0");
    if (!(learning_rate > 0)) throw DataError("embedding learning rate must be > 0");
    if (min_ngram < 1 || min_ngram > max_ngram)
        throw DataError("need 1 <= min_ngram <= max_ngram");
    if (negative_samples < 0) throw DataError("negative_samples must be >= 0");
}

std::vector<std::string> char_ngrams(std::string_view word, int min_n, int max_n) {
    std::string decorated = "<";
    decorated += word;
    decorated += ">";
    const auto bounds = utf8::boundaries(decorated);
    const int cps = static_cast<int>(bounds.size()) - 1;
    std::vector<std::string> grams;
    for (int len = min_n; len <= max_n && len <= cps; ++len)
        for (int start = 0; start + len <= cps; ++start)
            grams.push_back(
                decorated.substr(bounds[start], bounds[start + len] - bounds[start]));
    return grams;
}

Eigen::VectorXd EmbeddingTable::input_vector(int word_id) const {
    Eigen::VectorXd v = word_vecs.row(word_id);
    const auto& grams = word_ngram_ids[word_id];
    if (!grams.empty()) {
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
        for (int g : grams) mean += ngram_vecs.row(g);
        v += mean / static_cast<double>(grams.size());
    }
    return v;
}

Eigen::VectorXd EmbeddingTable::lookup(std::string_view token, bool* has_subwords) const {
    if (has_subwords) *has_subwords = true;
    if (auto it = word_index.find(std::string(token)); it != word_index.end())
        return input_vector(it->second);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
    int known = 0;
    for (const auto& gram : char_ngrams(token, min_ngram, max_ngram)) {
        auto it = ngram_index.find(gram);
        if (it == ngram_index.end()) continue;
        mean += ngram_vecs.row(it->second);
        ++known;
    }
    if (known == 0) {
        if (has_subwords) *has_subwords = false;
        return Eigen::VectorXd::Zero(dim);
    }
    return mean / static_cast<double>(known);
}

void EmbeddingTable::rebuild_indexes() {
    word_index.clear();
    for (std::size_t i = 0; i < words.size(); ++i)
        word_index[words[i]] = static_cast<int>(i);
    ngram_index.clear();
    for (std::size_t i = 0; i < ngrams.size(); ++i)
        ngram_index[ngrams[i]] = static_cast<int>(i);
    word_ngram_ids.assign(words.size(), {});
    for (std::size_t i = 0; i < words.size(); ++i)
        for (const auto& gram : char_ngrams(words[i], min_ngram, max_ngram)) {
            auto it = ngram_index.find(gram);
            if (it != ngram_index.end()) word_ngram_ids[i].push_back(it->second);
        }
}

namespace {

Eigen::VectorXd softmax(const Eigen::VectorXd& scores) {
    Eigen::VectorXd p = (scores.array() - scores.maxCoeff()).exp();
    return p / p.sum();
}

}  // namespace

Eigen::VectorXd skipgram_predict(const EmbeddingTable& table, int center_id) {
    return softmax(table.output_vecs.transpose() * table.input_vector(center_id));
}

double skipgram_pair_loss(const EmbeddingTable& table, int center_id, int target_id) {
    const Eigen::VectorXd scores = table.output_vecs.transpose() * table.input_vector(center_id);
    const double max = scores.maxCoeff();
    const double log_z = max + std::log((scores.array() - max).exp().sum());
    return log_z - scores[target_id];
}

SkipgramPairGrad skipgram_pair_gradient(const EmbeddingTable& table, int center_id,
                                        int target_id) {
    const Eigen::VectorXd h = table.input_vector(center_id);
    Eigen::VectorXd residual = softmax(table.output_vecs.transpose() * h);
    residual[target_id] -= 1.0;
    SkipgramPairGrad grad;
    grad.hidden = table.output_vecs * residual;
    grad.output = h * residual.transpose();
    return grad;
}

EmbeddingTable train_skipgram(const Corpus& corpus, const EmbedConfig& cfg,
                              std::vector<double>* epoch_losses) {
    cfg.validate();
    if (corpus.sentences.empty()) throw DataError("train_skipgram: empty corpus");

    EmbeddingTable table;
    table.dim = cfg.dim;
    table.min_ngram = cfg.min_ngram;
    table.max_ngram = cfg.max_ngram;

    // vocabulary in first-occurrence order, n-grams in word order
    for (const auto& sentence : corpus.sentences)
        for (const auto& token : sentence.tokens)
            if (table.word_index.emplace(token, static_cast<int>(table.words.size())).second)
                table.words.push_back(token);
    for (const auto& word : table.words)
        for (const auto& gram : char_ngrams(word, cfg.min_ngram, cfg.max_ngram))
            if (table.ngram_index.emplace(gram, static_cast<int>(table.ngrams.size())).second)
                table.ngrams.push_back(gram);
    table.word_ngram_ids.assign(table.words.size(), {});
    for (std::size_t i = 0; i < table.words.size(); ++i)
        for (const auto& gram : char_ngrams(table.words[i], cfg.min_ngram, cfg.max_ngram))
            table.word_ngram_ids[i].push_back(table.ngram_index.at(gram));

    const auto vocab = static_cast<Eigen::Index>(table.words.size());
    std::mt19937_64 rng(cfg.seed);
    const double bound = 0.5 / static_cast<double>(cfg.dim);
    table.word_vecs.resize(vocab, cfg.dim);
    for (Eigen::Index r = 0; r < table.word_vecs.rows(); ++r)
        for (Eigen::Index c = 0; c < table.word_vecs.cols(); ++c)
            table.word_vecs(r, c) = uniform_range(rng, -bound, bound);
    table.ngram_vecs.resize(static_cast<Eigen::Index>(table.ngrams.size()), cfg.dim);
    for (Eigen::Index r = 0; r < table.ngram_vecs.rows(); ++r)
        for (Eigen::Index c = 0; c < table.ngram_vecs.cols(); ++c)
            table.ngram_vecs(r, c) = uniform_range(rng, -bound, bound);
    table.output_vecs = Eigen::MatrixXd::Zero(cfg.dim, vocab);

    // word ids per sentence
    std::vector<std::vector<int>> sentence_ids;
    sentence_ids.reserve(corpus.sentences.size());
    for (const auto& sentence : corpus.sentences) {
        std::vector<int> ids;
        ids.reserve(sentence.tokens.size());
        for (const auto& token : sentence.tokens)
            ids.push_back(table.word_index.at(token));
        sentence_ids.push_back(std::move(ids));
    }

    // unigram^0.75 table for negative sampling
    std::vector<double> sample_cdf;
    if (cfg.negative_samples > 0) {
        std::vector<double> counts(static_cast<std::size_t>(vocab), 0.0);
        for (const auto& ids : sentence_ids)
            for (int id : ids) counts[static_cast<std::size_t>(id)] += 1.0;
        double total = 0.0;
        sample_cdf.resize(counts.size());
        for (std::size_t i = 0; i < counts.size(); ++i) {
            total += std::pow(counts[i], 0.75);
            sample_cdf[i] = total;
        }
        for (double& v : sample_cdf) v /= total;
    }
    auto draw_negative = [&](std::mt19937_64& r) {
        const double u = uniform01(r);
        return static_cast<int>(std::lower_bound(sample_cdf.begin(), sample_cdf.end(), u) -
                                sample_cdf.begin());
    };
    auto sigmoid = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };

    const double lr = cfg.learning_rate;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double loss_sum = 0.0;
        std::size_t pairs = 0;
        for (const auto& ids : sentence_ids) {
            const int n = static_cast<int>(ids.size());
            for (int center = 0; center < n; ++center) {
                const int center_id = ids[static_cast<std::size_t>(center)];
                const auto& grams = table.word_ngram_ids[static_cast<std::size_t>(center_id)];
                const double gram_share =
                    grams.empty() ? 0.0 : 1.0 / static_cast<double>(grams.size());
                for (int off = -cfg.window; off <= cfg.window; ++off) {
                    if (off == 0) continue;
                    const int ctx = center + off;
                    if (ctx < 0 || ctx >= n) continue;
                    const int target_id = ids[static_cast<std::size_t>(ctx)];
                    const Eigen::VectorXd h = table.input_vector(center_id);

                    Eigen::VectorXd hidden_grad;
                    if (cfg.negative_samples == 0) {
                        Eigen::VectorXd residual =
                            softmax(table.output_vecs.transpose() * h);
                        loss_sum -= std::log(std::max(residual[target_id], 1e-300));
                        residual[target_id] -= 1.0;
                        hidden_grad = table.output_vecs * residual;
                        table.output_vecs.noalias() -= lr * h * residual.transpose();
                    } else {
                        hidden_grad = Eigen::VectorXd::Zero(cfg.dim);
                        const double pos_score = table.output_vecs.col(target_id).dot(h);
                        const double pos_sig = sigmoid(pos_score);
                        loss_sum -= std::log(std::max(pos_sig, 1e-300));
                        hidden_grad += (pos_sig - 1.0) * table.output_vecs.col(target_id);
                        table.output_vecs.col(target_id) -= lr * (pos_sig - 1.0) * h;
                        for (int s = 0; s < cfg.negative_samples; ++s) {
                            int neg = draw_negative(rng);
                            if (neg == target_id) continue;
                            const double sig = sigmoid(table.output_vecs.col(neg).dot(h));
                            loss_sum -= std::log(std::max(1.0 - sig, 1e-300));
                            hidden_grad += sig * table.output_vecs.col(neg);
                            table.output_vecs.col(neg) -= lr * sig * h;
                        }
                    }

                    table.word_vecs.row(center_id) -= lr * hidden_grad.transpose();
                    for (int g : grams)
                        table.ngram_vecs.row(g) -=
                            lr * gram_share * hidden_grad.transpose();
                    ++pairs;
                }
            }
        }
        if (epoch_losses)
            epoch_losses->push_back(pairs ? loss_sum / static_cast<double>(pairs) : 0.0);
    }
    return table;
}

std::string EmbeddingTable::serialize() const {
    std::ostringstream out;
    out << "CMEMB 1 " << dim << ' ' << words.size() << "\n";
    for (std::size_t i = 0; i < words.size(); ++i) {
        out << words[i];
        for (int c = 0; c < dim; ++c)
            out << ' ' << fmt_double(word_vecs(static_cast<Eigen::Index>(i), c));
        out << "\n";
    }
    out << "ngrams " << ngrams.size() << ' ' << min_ngram << ' ' << max_ngram << "\n";
    for (std::size_t i = 0; i < ngrams.size(); ++i) {
        out << ngrams[i];
        for (int c = 0; c < dim; ++c)
            out << ' ' << fmt_double(ngram_vecs(static_cast<Eigen::Index>(i), c));
        out << "\n";
    }
    return out.str();
}

std::uint64_t EmbeddingTable::digest() const { return fnv1a64(serialize()); }

void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write embedding file: " + path.string());
    out << table.serialize();
    if (!out) throw DataError("write failed: " + path.string());
}

EmbeddingTable read_embeddings_stream(std::istream& in, std::string_view name) {
    std::string line;
    auto next_line = [&]() -> std::string& {
        if (!std::getline(in, line))
            throw DataError(std::string(name) + ": truncated embedding file");
        return line;
    };

    auto header = split_ws(next_line());
    if (header.size() != 4 || header[0] != "CMEMB" || header[1] != "1")
        throw DataError(std::string(name) + ": not a CMEMB 1 embedding file");
    EmbeddingTable table;
    table.dim = static_cast<int>(parse_long(header[2]));
    const long vocab = parse_long(header[3]);
    if (table.dim < 1 || vocab < 0)
        throw DataError(std::string(name) + ": bad embedding header");

    table.word_vecs.resize(vocab, table.dim);
    for (long i = 0; i < vocab; ++i) {
        auto fields = split_ws(next_line());
        if (fields.size() != static_cast<std::size_t>(table.dim) + 1)
            throw DataError(std::string(name) + ": malformed word vector line");
        table.words.emplace_back(fields[0]);
        for (int c = 0; c < table.dim; ++c)
            table.word_vecs(i, c) = parse_double(fields[static_cast<std::size_t>(c) + 1]);
    }

    auto gram_header = split_ws(next_line());
    if (gram_header.size() != 4 || gram_header[0] != "ngrams")
        throw DataError(std::string(name) + ": expected ngrams header");
    const long gram_count = parse_long(gram_header[1]);
    table.min_ngram = static_cast<int>(parse_long(gram_header[2]));
    table.max_ngram = static_cast<int>(parse_long(gram_header[3]));
    table.ngram_vecs.resize(gram_count, table.dim);
    for (long i = 0; i < gram_count; ++i) {
        auto fields = split_ws(next_line());
        if (fields.size() != static_cast<std::size_t>(table.dim) + 1)
            throw DataError(std::string(name) + ": malformed ngram vector line");
        table.ngrams.emplace_back(fields[0]);
        for (int c = 0; c < table.dim; ++c)
            table.ngram_vecs(i, c) = parse_double(fields[static_cast<std::size_t>(c) + 1]);
    }

    table.output_vecs = Eigen::MatrixXd::Zero(table.dim, vocab);
    table.rebuild_indexes();
    return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open embedding file: " + path.string());
    return read_embeddings_stream(in, path.string());
}

}  // namespace cmtag
