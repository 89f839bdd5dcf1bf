#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "cmtag/corpus.hpp"

namespace cmtag {

struct EvalReport {
    // rows = gold, cols = predicted, tag order EN, RU, RS
    std::array<std::array<std::size_t, kNumTags>, kNumTags> confusion{};
    std::size_t total = 0;
    double accuracy = 0.0;
    std::array<double, kNumTags> precision{}, recall{}, f1{};
    double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
    // micro precision == recall == accuracy for single-label tagging
    double micro_precision = 0.0, micro_recall = 0.0, micro_f1 = 0.0;
    // classes absent from both gold and predictions (metrics are 0 by convention)
    std::array<bool, kNumTags> class_absent{};
};

// Shape mismatches (sentence count or lengths) raise DataError naming the
// first offending sentence.
EvalReport evaluate(const Corpus& gold,
                    const std::vector<std::vector<LangTag>>& predicted);

EvalReport report_from_confusion(
    const std::array<std::array<std::size_t, kNumTags>, kNumTags>& confusion);

// Aligned human-readable report.
std::string format_report(const EvalReport& report);

// Machine-readable "name.metric value" lines, one per metric.
std::string report_kv(const EvalReport& report, const std::string& name);

struct NamedReport {
    std::string name;
    EvalReport report;
};

NamedReport parse_report_kv(std::istream& in, std::string_view source_name);

// Model-per-row comparison table: Accuracy, Precision, Recall, F1 columns
// (macro averages). Rows keep input order.
std::string compare(const std::vector<NamedReport>& reports);

}  // namespace cmtag
