#include "cmtag/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "cmtag/logmath.hpp"
#include "cmtag/normalize.hpp"
#include "cmtag/textio.hpp"

namespace cmtag {

double HmmModel::emission(LangTag tag, const std::string& surface) const {
    const std::string base = collapse_lengthening(surface);
    auto it = vocab_index.find(base);
    const int t = static_cast<int>(tag);
    return it == vocab_index.end() ? unknown_log[t] : emission_log[t][it->second];
}

HmmModel train_hmm(const Corpus& train, double smoothing_k) {
    if (!train.annotated) throw DataError("train_hmm requires an annotated corpus");
    if (train.sentences.empty()) throw DataError("train_hmm: empty corpus");
    if (!(smoothing_k > 0)) throw DataError("train_hmm: smoothing k must be > 0");

    std::array<std::size_t, kNumTags> initial_count{};
    std::array<std::array<std::size_t, kNumTags>, kNumTags> transition_count{};
    std::array<std::size_t, kNumTags> tag_count{};
    std::map<std::string, std::array<std::size_t, kNumTags>> emission_count;

    for (const auto& sentence : train.sentences) {
        for (std::size_t i = 0; i < sentence.size(); ++i) {
            const int t = static_cast<int>(sentence.tags[i]);
            if (i == 0)
                initial_count[t]++;
            else
                transition_count[static_cast<int>(sentence.tags[i - 1])][t]++;
            tag_count[t]++;
            emission_count[collapse_lengthening(sentence.tokens[i])][t]++;
        }
    }

    HmmModel model;
    model.smoothing_k = smoothing_k;
    const double k = smoothing_k;

    const double init_denom = static_cast<double>(train.sentences.size()) + 3.0 * k;
    for (int t = 0; t < kNumTags; ++t)
        model.initial_log[t] = std::log((initial_count[t] + k) / init_denom);

    for (int from = 0; from < kNumTags; ++from) {
        std::size_t row_total = 0;
        for (int to = 0; to < kNumTags; ++to) row_total += transition_count[from][to];
        const double denom = static_cast<double>(row_total) + 3.0 * k;
        for (int to = 0; to < kNumTags; ++to)
            model.transition_log[from][to] =
                std::log((transition_count[from][to] + k) / denom);
    }

    model.vocab.reserve(emission_count.size());
    for (const auto& [base, counts] : emission_count) model.vocab.push_back(base);
    for (std::size_t i = 0; i < model.vocab.size(); ++i)
        model.vocab_index[model.vocab[i]] = static_cast<int>(i);

    const double vocab_slots = static_cast<double>(model.vocab.size()) + 1.0;
    for (int t = 0; t < kNumTags; ++t) {
        const double denom = static_cast<double>(tag_count[t]) + k * vocab_slots;
        model.emission_log[t].resize(model.vocab.size());
        for (std::size_t i = 0; i < model.vocab.size(); ++i)
            model.emission_log[t][i] =
                std::log((emission_count.at(model.vocab[i])[t] + k) / denom);
        model.unknown_log[t] = std::log(k / denom);
    }
    return model;
}

std::vector<LangTag> viterbi(const HmmModel& model, const Sentence& sentence) {
    const std::size_t n = sentence.size();
    if (n == 0) throw DataError("viterbi: empty sentence");

    std::vector<std::array<double, kNumTags>> best(n);
    std::vector<std::array<int, kNumTags>> back(n);
    for (int t = 0; t < kNumTags; ++t)
        best[0][t] = model.initial_log[t] +
                     model.emission(static_cast<LangTag>(t), sentence.tokens[0]);

    for (std::size_t i = 1; i < n; ++i) {
        for (int to = 0; to < kNumTags; ++to) {
            double top = kLogZero;
            int arg = 0;
            for (int from = 0; from < kNumTags; ++from) {
                const double score = best[i - 1][from] + model.transition_log[from][to];
                if (score > top) {  // strict: ties keep the lower tag index
                    top = score;
                    arg = from;
                }
            }
            best[i][to] =
                top + model.emission(static_cast<LangTag>(to), sentence.tokens[i]);
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

namespace {

std::vector<std::array<double, kNumTags>> forward_table(const HmmModel& model,
                                                        const Sentence& sentence) {
    const std::size_t n = sentence.size();
    std::vector<std::array<double, kNumTags>> fwd(n);
    for (int t = 0; t < kNumTags; ++t)
        fwd[0][t] = model.initial_log[t] +
                    model.emission(static_cast<LangTag>(t), sentence.tokens[0]);
    for (std::size_t i = 1; i < n; ++i)
        for (int to = 0; to < kNumTags; ++to)
            fwd[i][to] = log_sum_exp3(fwd[i - 1][0] + model.transition_log[0][to],
                                      fwd[i - 1][1] + model.transition_log[1][to],
                                      fwd[i - 1][2] + model.transition_log[2][to]) +
                         model.emission(static_cast<LangTag>(to), sentence.tokens[i]);
    return fwd;
}

std::vector<std::array<double, kNumTags>> backward_table(const HmmModel& model,
                                                         const Sentence& sentence) {
    const std::size_t n = sentence.size();
    std::vector<std::array<double, kNumTags>> bwd(n);
    bwd[n - 1] = {0.0, 0.0, 0.0};
    for (std::size_t i = n - 1; i-- > 0;) {
        std::array<double, kNumTags> next_emit;
        for (int to = 0; to < kNumTags; ++to)
            next_emit[to] =
                model.emission(static_cast<LangTag>(to), sentence.tokens[i + 1]) +
                bwd[i + 1][to];
        for (int from = 0; from < kNumTags; ++from)
            bwd[i][from] = log_sum_exp3(model.transition_log[from][0] + next_emit[0],
                                        model.transition_log[from][1] + next_emit[1],
                                        model.transition_log[from][2] + next_emit[2]);
    }
    return bwd;
}

}  // namespace

double forward_log_partition(const HmmModel& model, const Sentence& sentence) {
    if (sentence.size() == 0) throw DataError("forward_log_partition: empty sentence");
    const auto fwd = forward_table(model, sentence);
    const auto& last = fwd.back();
    return log_sum_exp3(last[0], last[1], last[2]);
}

double backward_log_partition(const HmmModel& model, const Sentence& sentence) {
    if (sentence.size() == 0) throw DataError("backward_log_partition: empty sentence");
    const auto bwd = backward_table(model, sentence);
    std::array<double, kNumTags> head;
    for (int t = 0; t < kNumTags; ++t)
        head[t] = model.initial_log[t] +
                  model.emission(static_cast<LangTag>(t), sentence.tokens[0]) + bwd[0][t];
    return log_sum_exp3(head[0], head[1], head[2]);
}

std::vector<std::array<double, kNumTags>> posterior_log_marginals(
    const HmmModel& model, const Sentence& sentence) {
    if (sentence.size() == 0) throw DataError("posterior_log_marginals: empty sentence");
    const auto fwd = forward_table(model, sentence);
    const auto bwd = backward_table(model, sentence);
    const double log_z = log_sum_exp3(fwd.back()[0], fwd.back()[1], fwd.back()[2]);
    std::vector<std::array<double, kNumTags>> marginals(sentence.size());
    for (std::size_t i = 0; i < sentence.size(); ++i)
        for (int t = 0; t < kNumTags; ++t)
            marginals[i][t] = fwd[i][t] + bwd[i][t] - log_z;
    return marginals;
}

std::vector<LangTag> posterior_decode(const HmmModel& model, const Sentence& sentence) {
    const auto marginals = posterior_log_marginals(model, sentence);
    std::vector<LangTag> tags(sentence.size());
    for (std::size_t i = 0; i < sentence.size(); ++i) {
        int arg = 0;
        for (int t = 1; t < kNumTags; ++t)
            if (marginals[i][t] > marginals[i][arg]) arg = t;
        tags[i] = static_cast<LangTag>(arg);
    }
    return tags;
}

void save_hmm(const HmmModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file: " + path.string());
    out << "CMHMM 1\n";
    out << "k " << fmt_double(model.smoothing_k) << "\n";
    out << "vocab " << model.vocab.size() << "\n";
    for (const auto& base : model.vocab) out << base << "\n";
    out << "initial";
    for (double v : model.initial_log) out << ' ' << fmt_double(v);
    out << "\n";
    for (int from = 0; from < kNumTags; ++from) {
        out << "transition " << tag_name(static_cast<LangTag>(from));
        for (double v : model.transition_log[from]) out << ' ' << fmt_double(v);
        out << "\n";
    }
    for (int t = 0; t < kNumTags; ++t) {
        out << "emission " << tag_name(static_cast<LangTag>(t));
        for (double v : model.emission_log[t]) out << ' ' << fmt_double(v);
        out << "\n";
    }
    out << "unknown";
    for (double v : model.unknown_log) out << ' ' << fmt_double(v);
    out << "\n";
    if (!out) throw DataError("write failed: " + path.string());
}

HmmModel load_hmm(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path.string());
    std::string line;
    auto next_line = [&]() -> std::string& {
        if (!std::getline(in, line))
            throw DataError(path.string() + ": truncated HMM model file");
        return line;
    };

    if (next_line() != "CMHMM 1")
        throw DataError(path.string() + ": not a CMHMM 1 model file");

    HmmModel model;
    auto k_fields = split_ws(next_line());
    if (k_fields.size() != 2 || k_fields[0] != "k")
        throw DataError(path.string() + ": expected k line");
    model.smoothing_k = parse_double(k_fields[1]);

    auto vocab_fields = split_ws(next_line());
    if (vocab_fields.size() != 2 || vocab_fields[0] != "vocab")
        throw DataError(path.string() + ": expected vocab line");
    const long vocab_size = parse_long(vocab_fields[1]);
    model.vocab.reserve(static_cast<std::size_t>(vocab_size));
    for (long i = 0; i < vocab_size; ++i) {
        model.vocab.push_back(next_line());
        model.vocab_index[model.vocab.back()] = static_cast<int>(i);
    }

    auto read_row = [&](std::string_view keyword, std::string_view tag,
                        std::size_t count) {
        auto fields = split_ws(next_line());
        const std::size_t header = tag.empty() ? 1 : 2;
        if (fields.size() != header + count || fields[0] != keyword ||
            (!tag.empty() && fields[1] != tag))
            throw DataError(path.string() + ": malformed " + std::string(keyword) +
                            " line");
        std::vector<double> values(count);
        for (std::size_t i = 0; i < count; ++i)
            values[i] = parse_double(fields[header + i]);
        return values;
    };

    auto initial = read_row("initial", "", kNumTags);
    std::copy(initial.begin(), initial.end(), model.initial_log.begin());
    for (int from = 0; from < kNumTags; ++from) {
        auto row = read_row("transition", tag_name(static_cast<LangTag>(from)), kNumTags);
        std::copy(row.begin(), row.end(), model.transition_log[from].begin());
    }
    for (int t = 0; t < kNumTags; ++t)
        model.emission_log[t] = read_row("emission", tag_name(static_cast<LangTag>(t)),
                                         static_cast<std::size_t>(vocab_size));
    auto unknown = read_row("unknown", "", kNumTags);
    std::copy(unknown.begin(), unknown.end(), model.unknown_log.begin());
    return model;
}

}  // namespace cmtag
