#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cmtag/corpus.hpp"

namespace cmtag {

// Per-position feature strings: base-form identity, lowercased surface,
// base-form prefixes/suffixes up to length 3, digit/punct flags, neighbor
// base forms. Tag bigrams are handled by the dense transition table.
std::vector<std::vector<std::string>> extract_features(const Sentence& sentence);

struct FeatureSet {
    std::map<std::string, int> index;  // feature string -> slot, sorted

    static FeatureSet build(const Corpus& train);
    std::size_t size() const { return index.size(); }
};

struct CrfModel {
    FeatureSet features;
    // layout: unary_weights[slot * 3 + tag]
    std::vector<double> unary_weights;
    std::array<std::array<double, kNumTags>, kNumTags> transition_weights{};
    double l2 = 0.0;
};

struct CrfTrainOpts {
    double l2 = 0.0;
    int epochs = 50;
    double step = 0.1;
};

// Full-batch conditional log-likelihood ascent; the step is applied to the
// per-sentence-averaged gradient. Appends the regularized objective after
// each epoch to `objectives` when given.
CrfModel train_crf(const Corpus& train, FeatureSet features, const CrfTrainOpts& opts,
                   std::vector<double>* objectives = nullptr);

// Unnormalized global score of a tag sequence.
double crf_sequence_score(const CrfModel& model, const Sentence& sentence,
                          const std::vector<LangTag>& tags);

// log sum over all 3^n tag sequences of exp(score), by forward recursion.
double crf_log_partition(const CrfModel& model, const Sentence& sentence);

double crf_sentence_log_prob(const CrfModel& model, const Sentence& sentence,
                             const std::vector<LangTag>& tags);

// Viterbi argmax; ties toward the lower tag index.
std::vector<LangTag> crf_decode(const CrfModel& model, const Sentence& sentence);

struct CrfGradient {
    std::vector<double> unary;  // same layout as unary_weights
    std::array<std::array<double, kNumTags>, kNumTags> transition{};
    double log_likelihood = 0.0;
};

// Sum over sentences of (empirical - expected) feature counts; no l2 term.
CrfGradient crf_batch_gradient(const CrfModel& model, const Corpus& corpus);

void save_crf(const CrfModel& model, const std::filesystem::path& path);
CrfModel load_crf(const std::filesystem::path& path);

}  // namespace cmtag
