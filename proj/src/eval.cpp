#include "cmtag/eval.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <sstream>

namespace cmtag {

EvalReport report_from_confusion(
    const std::array<std::array<std::size_t, kNumTags>, kNumTags>& confusion) {
    EvalReport r;
    r.confusion = confusion;
    std::size_t diagonal = 0;
    std::array<std::size_t, kNumTags> gold_count{}, pred_count{};
    for (int g = 0; g < kNumTags; ++g)
        for (int p = 0; p < kNumTags; ++p) {
            r.total += confusion[g][p];
            gold_count[g] += confusion[g][p];
            pred_count[p] += confusion[g][p];
            if (g == p) diagonal += confusion[g][p];
        }
    r.accuracy = r.total ? static_cast<double>(diagonal) / static_cast<double>(r.total) : 0.0;

    for (int k = 0; k < kNumTags; ++k) {
        const double tp = static_cast<double>(confusion[k][k]);
        r.precision[k] = pred_count[k] ? tp / static_cast<double>(pred_count[k]) : 0.0;
        r.recall[k] = gold_count[k] ? tp / static_cast<double>(gold_count[k]) : 0.0;
        const double pr = r.precision[k] + r.recall[k];
        r.f1[k] = pr > 0 ? 2.0 * r.precision[k] * r.recall[k] / pr : 0.0;
        r.class_absent[k] = gold_count[k] == 0 && pred_count[k] == 0;
        r.macro_precision += r.precision[k] / kNumTags;
        r.macro_recall += r.recall[k] / kNumTags;
        r.macro_f1 += r.f1[k] / kNumTags;
    }
    // single label per token: micro TP == diagonal, FP == FN
    r.micro_precision = r.micro_recall = r.micro_f1 = r.accuracy;
    return r;
}

EvalReport evaluate(const Corpus& gold,
                    const std::vector<std::vector<LangTag>>& predicted) {
    if (!gold.annotated) throw DataError("evaluate requires an annotated gold corpus");
    if (gold.sentences.size() != predicted.size())
        throw DataError("gold has " + std::to_string(gold.sentences.size()) +
                        " sentences but predictions have " +
                        std::to_string(predicted.size()));
    std::array<std::array<std::size_t, kNumTags>, kNumTags> confusion{};
    for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
        const auto& sentence = gold.sentences[s];
        if (sentence.tags.size() != predicted[s].size())
            throw DataError("sentence " + std::to_string(s) + ": gold has " +
                            std::to_string(sentence.tags.size()) +
                            " tokens but prediction has " +
                            std::to_string(predicted[s].size()));
        for (std::size_t t = 0; t < sentence.tags.size(); ++t)
            confusion[static_cast<int>(sentence.tags[t])]
                     [static_cast<int>(predicted[s][t])]++;
    }
    return report_from_confusion(confusion);
}

namespace {

std::string fixed4(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4) << v;
    return out.str();
}

}  // namespace

std::string format_report(const EvalReport& r) {
    std::ostringstream out;
    out << "tokens    " << r.total << "\n";
    out << "accuracy  " << fixed4(r.accuracy) << "\n\n";
    out << "class  precision  recall  f1\n";
    for (int k = 0; k < kNumTags; ++k) {
        out << tag_name(static_cast<LangTag>(k)) << "     " << fixed4(r.precision[k])
            << "     " << fixed4(r.recall[k]) << "  " << fixed4(r.f1[k]);
        if (r.class_absent[k]) out << "  (absent)";
        out << "\n";
    }
    out << "macro  " << fixed4(r.macro_precision) << "     " << fixed4(r.macro_recall)
        << "  " << fixed4(r.macro_f1) << "\n";
    out << "micro  " << fixed4(r.micro_precision) << "     " << fixed4(r.micro_recall)
        << "  " << fixed4(r.micro_f1) << "\n\n";
    out << "confusion (rows gold, cols predicted; en ru rs)\n";
    for (int g = 0; g < kNumTags; ++g) {
        out << tag_name(static_cast<LangTag>(g));
        for (int p = 0; p < kNumTags; ++p) out << "  " << r.confusion[g][p];
        out << "\n";
    }
    return out.str();
}

std::string report_kv(const EvalReport& r, const std::string& name) {
    std::ostringstream out;
    out << name << ".tokens " << r.total << "\n";
    out << name << ".accuracy " << fixed4(r.accuracy) << "\n";
    for (int k = 0; k < kNumTags; ++k) {
        auto cls = tag_name(static_cast<LangTag>(k));
        out << name << ".precision." << cls << " " << fixed4(r.precision[k]) << "\n";
        out << name << ".recall." << cls << " " << fixed4(r.recall[k]) << "\n";
        out << name << ".f1." << cls << " " << fixed4(r.f1[k]) << "\n";
    }
    out << name << ".precision.macro " << fixed4(r.macro_precision) << "\n";
    out << name << ".recall.macro " << fixed4(r.macro_recall) << "\n";
    out << name << ".f1.macro " << fixed4(r.macro_f1) << "\n";
    out << name << ".precision.micro " << fixed4(r.micro_precision) << "\n";
    out << name << ".recall.micro " << fixed4(r.micro_recall) << "\n";
    out << name << ".f1.micro " << fixed4(r.micro_f1) << "\n";
    for (int g = 0; g < kNumTags; ++g)
        for (int p = 0; p < kNumTags; ++p)
            out << name << ".confusion." << tag_name(static_cast<LangTag>(g)) << "."
                << tag_name(static_cast<LangTag>(p)) << " " << r.confusion[g][p] << "\n";
    return out.str();
}

NamedReport parse_report_kv(std::istream& in, std::string_view source_name) {
    NamedReport named;
    std::array<std::array<std::size_t, kNumTags>, kNumTags> confusion{};
    bool any = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto space = line.rfind(' ');
        auto dot = line.find('.');
        if (space == std::string::npos || dot == std::string::npos || dot > space)
            throw DataError(std::string(source_name) + ": malformed report line: " + line);
        const std::string name = line.substr(0, dot);
        const std::string key = line.substr(dot + 1, space - dot - 1);
        const std::string value = line.substr(space + 1);
        if (named.name.empty())
            named.name = name;
        else if (named.name != name)
            throw DataError(std::string(source_name) + ": mixed model names \"" +
                            named.name + "\" and \"" + name + "\"");
        if (key.starts_with("confusion.")) {
            auto rest = key.substr(10);
            auto sep = rest.find('.');
            auto g = parse_tag(rest.substr(0, sep));
            auto p = sep == std::string::npos ? std::nullopt : parse_tag(rest.substr(sep + 1));
            if (!g || !p)
                throw DataError(std::string(source_name) + ": bad confusion key: " + key);
            confusion[static_cast<int>(*g)][static_cast<int>(*p)] =
                static_cast<std::size_t>(std::stoull(value));
            any = true;
        }
    }
    if (!any)
        throw DataError(std::string(source_name) + ": no confusion entries found");
    named.report = report_from_confusion(confusion);
    return named;
}

std::string compare(const std::vector<NamedReport>& reports) {
    if (reports.empty()) throw DataError("compare requires at least one report");
    std::size_t width = 5;  // "Model"
    for (const auto& r : reports) width = std::max(width, r.name.size());
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(width)) << "Model"
        << "  Accuracy  Precision  Recall  F1 Score\n";
    for (const auto& r : reports) {
        out << std::left << std::setw(static_cast<int>(width)) << r.name << "  "
            << fixed4(r.report.accuracy) << "    " << fixed4(r.report.macro_precision)
            << "     " << fixed4(r.report.macro_recall) << "  "
            << fixed4(r.report.macro_f1) << "\n";
    }
    return out.str();
}

}  // namespace cmtag
