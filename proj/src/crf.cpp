#include "cmtag/crf.hpp"

#include <cmath>
#include <fstream>

#include "cmtag/annotate.hpp"
#include "cmtag/logmath.hpp"
#include "cmtag/normalize.hpp"
#include "cmtag/textio.hpp"
#include "cmtag/utf8.hpp"

namespace cmtag {

namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

bool contains_digit(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size())
        if (utf8::is_ascii_digit(utf8::decode(s, i))) return true;
    return false;
}

}  // namespace

std::vector<std::vector<std::string>> extract_features(const Sentence& sentence) {
    const std::size_t n = sentence.size();
    std::vector<std::string> bases(n);
    for (std::size_t t = 0; t < n; ++t) bases[t] = collapse_lengthening(sentence.tokens[t]);

    std::vector<std::vector<std::string>> features(n);
    for (std::size_t t = 0; t < n; ++t) {
        auto& out = features[t];
        const std::string& base = bases[t];
        const std::string& surface = sentence.tokens[t];
        out.push_back("w=" + base);
        out.push_back("lo=" + ascii_lower(surface));
        const auto bounds = utf8::boundaries(base);
        const std::size_t cps = bounds.size() - 1;
        for (std::size_t len = 1; len <= 3 && len <= cps; ++len) {
            out.push_back("p" + std::to_string(len) + "=" + base.substr(0, bounds[len]));
            out.push_back("s" + std::to_string(len) + "=" +
                          base.substr(bounds[cps - len]));
        }
        if (contains_digit(surface)) out.push_back("dig");
        if (is_rest_token(surface)) out.push_back("pun");
        out.push_back("pw=" + (t > 0 ? bases[t - 1] : std::string("<s>")));
        out.push_back("nw=" + (t + 1 < n ? bases[t + 1] : std::string("</s>")));
    }
    return features;
}

FeatureSet FeatureSet::build(const Corpus& train) {
    FeatureSet set;
    for (const auto& sentence : train.sentences)
        for (const auto& position : extract_features(sentence))
            for (const auto& feature : position) set.index.emplace(feature, 0);
    int next = 0;
    for (auto& [feature, slot] : set.index) slot = next++;
    return set;
}

namespace {

// Per-position unary score table, kNumTags entries per position.
std::vector<std::array<double, kNumTags>> unary_scores(
    const CrfModel& model, const std::vector<std::vector<std::string>>& features) {
    std::vector<std::array<double, kNumTags>> scores(features.size(), {0.0, 0.0, 0.0});
    for (std::size_t t = 0; t < features.size(); ++t)
        for (const auto& feature : features[t]) {
            auto it = model.features.index.find(feature);
            if (it == model.features.index.end()) continue;
            const std::size_t offset = static_cast<std::size_t>(it->second) * kNumTags;
            for (int y = 0; y < kNumTags; ++y)
                scores[t][y] += model.unary_weights[offset + y];
        }
    return scores;
}

std::vector<std::array<double, kNumTags>> forward_table(
    const CrfModel& model, const std::vector<std::array<double, kNumTags>>& unary) {
    const std::size_t n = unary.size();
    std::vector<std::array<double, kNumTags>> fwd(n);
    fwd[0] = unary[0];
    for (std::size_t i = 1; i < n; ++i)
        for (int to = 0; to < kNumTags; ++to)
            fwd[i][to] =
                log_sum_exp3(fwd[i - 1][0] + model.transition_weights[0][to],
                             fwd[i - 1][1] + model.transition_weights[1][to],
                             fwd[i - 1][2] + model.transition_weights[2][to]) +
                unary[i][to];
    return fwd;
}

std::vector<std::array<double, kNumTags>> backward_table(
    const CrfModel& model, const std::vector<std::array<double, kNumTags>>& unary) {
    const std::size_t n = unary.size();
    std::vector<std::array<double, kNumTags>> bwd(n);
    bwd[n - 1] = {0.0, 0.0, 0.0};
    for (std::size_t i = n - 1; i-- > 0;)
        for (int from = 0; from < kNumTags; ++from)
            bwd[i][from] =
                log_sum_exp3(model.transition_weights[from][0] + unary[i + 1][0] + bwd[i + 1][0],
                             model.transition_weights[from][1] + unary[i + 1][1] + bwd[i + 1][1],
                             model.transition_weights[from][2] + unary[i + 1][2] + bwd[i + 1][2]);
    return bwd;
}

}  // namespace

double crf_sequence_score(const CrfModel& model, const Sentence& sentence,
                          const std::vector<LangTag>& tags) {
    if (sentence.size() == 0) throw DataError("crf_sequence_score: empty sentence");
    if (tags.size() != sentence.size())
        throw DataError("crf_sequence_score: tag/token length mismatch");
    const auto unary = unary_scores(model, extract_features(sentence));
    double score = 0.0;
    for (std::size_t t = 0; t < sentence.size(); ++t) {
        score += unary[t][static_cast<int>(tags[t])];
        if (t > 0)
            score += model.transition_weights[static_cast<int>(tags[t - 1])]
                                             [static_cast<int>(tags[t])];
    }
    return score;
}

double crf_log_partition(const CrfModel& model, const Sentence& sentence) {
    if (sentence.size() == 0) throw DataError("crf_log_partition: empty sentence");
    const auto fwd = forward_table(model, unary_scores(model, extract_features(sentence)));
    return log_sum_exp3(fwd.back()[0], fwd.back()[1], fwd.back()[2]);
}

double crf_sentence_log_prob(const CrfModel& model, const Sentence& sentence,
                             const std::vector<LangTag>& tags) {
    return crf_sequence_score(model, sentence, tags) - crf_log_partition(model, sentence);
}

std::vector<LangTag> crf_decode(const CrfModel& model, const Sentence& sentence) {
    const std::size_t n = sentence.size();
    if (n == 0) throw DataError("crf_decode: empty sentence");
    const auto unary = unary_scores(model, extract_features(sentence));

    std::vector<std::array<double, kNumTags>> best(n);
    std::vector<std::array<int, kNumTags>> back(n);
    best[0] = unary[0];
    for (std::size_t i = 1; i < n; ++i) {
        for (int to = 0; to < kNumTags; ++to) {
            double top = kLogZero;
            int arg = 0;
            for (int from = 0; from < kNumTags; ++from) {
                const double score = best[i - 1][from] + model.transition_weights[from][to];
                if (score > top) {
                    top = score;
                    arg = from;
                }
            }
            best[i][to] = top + unary[i][to];
            back[i][to] = arg;
        }
    }
    int tail = 0;
    for (int t = 1; t < kNumTags; ++t)
        if (best[n - 1][t] > best[n - 1][tail]) tail = t;
    std::vector<LangTag> tags(n);
    for (std::size_t i = n; i-- > 0;) {
        tags[i] = static_cast<LangTag>(tail);
        if (i > 0) tail = back[i][tail];
    }
    return tags;
}

CrfGradient crf_batch_gradient(const CrfModel& model, const Corpus& corpus) {
    CrfGradient grad;
    grad.unary.assign(model.unary_weights.size(), 0.0);

    for (const auto& sentence : corpus.sentences) {
        const std::size_t n = sentence.size();
        const auto features = extract_features(sentence);
        const auto unary = unary_scores(model, features);
        const auto fwd = forward_table(model, unary);
        const auto bwd = backward_table(model, unary);
        const double log_z = log_sum_exp3(fwd[n - 1][0], fwd[n - 1][1], fwd[n - 1][2]);

        double gold_score = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const int gold = static_cast<int>(sentence.tags[t]);
            gold_score += unary[t][gold];
            if (t > 0)
                gold_score +=
                    model.transition_weights[static_cast<int>(sentence.tags[t - 1])][gold];

            std::array<double, kNumTags> marginal;
            for (int y = 0; y < kNumTags; ++y)
                marginal[y] = std::exp(fwd[t][y] + bwd[t][y] - log_z);

            for (const auto& feature : features[t]) {
                auto it = model.features.index.find(feature);
                if (it == model.features.index.end()) continue;
                const std::size_t offset = static_cast<std::size_t>(it->second) * kNumTags;
                grad.unary[offset + gold] += 1.0;
                for (int y = 0; y < kNumTags; ++y) grad.unary[offset + y] -= marginal[y];
            }
        }
        for (std::size_t t = 0; t + 1 < n; ++t) {
            grad.transition[static_cast<int>(sentence.tags[t])]
                           [static_cast<int>(sentence.tags[t + 1])] += 1.0;
            for (int from = 0; from < kNumTags; ++from)
                for (int to = 0; to < kNumTags; ++to)
                    grad.transition[from][to] -=
                        std::exp(fwd[t][from] + model.transition_weights[from][to] +
                                 unary[t + 1][to] + bwd[t + 1][to] - log_z);
        }
        grad.log_likelihood += gold_score - log_z;
    }
    return grad;
}

CrfModel train_crf(const Corpus& train, FeatureSet features, const CrfTrainOpts& opts,
                   std::vector<double>* objectives) {
    if (!train.annotated) throw DataError("train_crf requires an annotated corpus");
    if (train.sentences.empty()) throw DataError("train_crf: empty corpus");
    if (opts.l2 < 0) throw DataError("train_crf: l2 must be >= 0");

    CrfModel model;
    model.features = std::move(features);
    model.unary_weights.assign(model.features.size() * kNumTags, 0.0);
    model.l2 = opts.l2;

    const double scale = opts.step / static_cast<double>(train.sentences.size());
    for (int epoch = 0; epoch < opts.epochs; ++epoch) {
        CrfGradient grad = crf_batch_gradient(model, train);

        if (objectives) {
            double norm_sq = 0.0;
            for (double w : model.unary_weights) norm_sq += w * w;
            for (const auto& row : model.transition_weights)
                for (double w : row) norm_sq += w * w;
            objectives->push_back(grad.log_likelihood - 0.5 * opts.l2 * norm_sq);
        }

        for (std::size_t i = 0; i < model.unary_weights.size(); ++i)
            model.unary_weights[i] +=
                scale * (grad.unary[i] - opts.l2 * model.unary_weights[i]);
        for (int from = 0; from < kNumTags; ++from)
            for (int to = 0; to < kNumTags; ++to)
                model.transition_weights[from][to] +=
                    scale * (grad.transition[from][to] -
                             opts.l2 * model.transition_weights[from][to]);
    }
    return model;
}

void save_crf(const CrfModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file: " + path.string());
    out << "CMCRF 1\n";
    out << "l2 " << fmt_double(model.l2) << "\n";
    for (int from = 0; from < kNumTags; ++from) {
        out << "transition " << tag_name(static_cast<LangTag>(from));
        for (double w : model.transition_weights[from]) out << ' ' << fmt_double(w);
        out << "\n";
    }
    out << "features " << model.features.size() << "\n";
    for (const auto& [feature, slot] : model.features.index) {
        out << feature;
        const std::size_t offset = static_cast<std::size_t>(slot) * kNumTags;
        for (int y = 0; y < kNumTags; ++y)
            out << '\t' << fmt_double(model.unary_weights[offset + y]);
        out << "\n";
    }
    if (!out) throw DataError("write failed: " + path.string());
}

CrfModel load_crf(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path.string());
    std::string line;
    auto next_line = [&]() -> std::string& {
        if (!std::getline(in, line))
            throw DataError(path.string() + ": truncated CRF model file");
        return line;
    };

    if (next_line() != "CMCRF 1")
        throw DataError(path.string() + ": not a CMCRF 1 model file");

    CrfModel model;
    auto l2_fields = split_ws(next_line());
    if (l2_fields.size() != 2 || l2_fields[0] != "l2")
        throw DataError(path.string() + ": expected l2 line");
    model.l2 = parse_double(l2_fields[1]);

    for (int from = 0; from < kNumTags; ++from) {
        auto fields = split_ws(next_line());
        if (fields.size() != 2 + kNumTags || fields[0] != "transition" ||
            fields[1] != tag_name(static_cast<LangTag>(from)))
            throw DataError(path.string() + ": malformed transition line");
        for (int to = 0; to < kNumTags; ++to)
            model.transition_weights[from][to] = parse_double(fields[2 + to]);
    }

    auto count_fields = split_ws(next_line());
    if (count_fields.size() != 2 || count_fields[0] != "features")
        throw DataError(path.string() + ": expected features line");
    const long count = parse_long(count_fields[1]);
    model.unary_weights.assign(static_cast<std::size_t>(count) * kNumTags, 0.0);
    for (long i = 0; i < count; ++i) {
        next_line();
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw DataError(path.string() + ": malformed feature line: " + line);
        const std::string feature = line.substr(0, tab);
        auto weights = split_ws(std::string_view(line).substr(tab + 1));
        if (weights.size() != kNumTags)
            throw DataError(path.string() + ": malformed feature line: " + line);
        model.features.index[feature] = static_cast<int>(i);
        for (int y = 0; y < kNumTags; ++y)
            model.unary_weights[static_cast<std::size_t>(i) * kNumTags + y] =
                parse_double(weights[y]);
    }
    return model;
}

}  // namespace cmtag
