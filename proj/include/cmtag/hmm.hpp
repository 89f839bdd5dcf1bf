#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "cmtag/corpus.hpp"

namespace cmtag {

// First-order HMM over LangTag states. Emissions are over collapsed base
// forms, add-k smoothed with a single shared unseen-word slot per tag, so
// every probability table is a proper distribution.
struct HmmModel {
    double smoothing_k = 0.1;
    std::array<double, kNumTags> initial_log{};
    std::array<std::array<double, kNumTags>, kNumTags> transition_log{};
    std::vector<std::string> vocab;  // sorted base forms
    std::unordered_map<std::string, int> vocab_index;
    std::array<std::vector<double>, kNumTags> emission_log;  // [tag][vocab idx]
    std::array<double, kNumTags> unknown_log{};              // [tag], unseen mass

    // Total over surfaces: collapses, then vocab or unseen slot.
    double emission(LangTag tag, const std::string& surface) const;
};

HmmModel train_hmm(const Corpus& train, double smoothing_k);

// Most likely tag sequence; ties broken toward the lower tag index.
std::vector<LangTag> viterbi(const HmmModel& model, const Sentence& sentence);

// Per-position argmax of forward*backward marginals.
std::vector<LangTag> posterior_decode(const HmmModel& model, const Sentence& sentence);

double forward_log_partition(const HmmModel& model, const Sentence& sentence);
double backward_log_partition(const HmmModel& model, const Sentence& sentence);

// log P(tag at position | sentence), rows sum to 1 in probability space.
std::vector<std::array<double, kNumTags>> posterior_log_marginals(
    const HmmModel& model, const Sentence& sentence);

void save_hmm(const HmmModel& model, const std::filesystem::path& path);
HmmModel load_hmm(const std::filesystem::path& path);

}  // namespace cmtag
