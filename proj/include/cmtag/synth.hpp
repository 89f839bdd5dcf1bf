#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cmtag/corpus.hpp"

namespace cmtag {

// Seeded generator for a bilingual mini-corpus with gold tags. The two
// artificial vocabularies carry disjoint character signatures: every
// language-1 word contains 'q', every language-2 word contains 'z'. Words
// from the shared pool carry neither and are valid in both languages; their
// gold tag is the language of the surrounding run, so only context can
// recover it. Words never contain doubled letters, which keeps them stable
// under lengthening collapse.
struct SynthConfig {
    int sentences = 200;
    int vocab_per_language = 60;
    double shared_frac = 0.0;    // shared-pool size as a fraction of each vocab
    double lengthen_prob = 0.0;  // per-token chance of character lengthening
    double switch_prob = 0.35;   // chance of switching language between tokens
    double digit_prob = 0.03;    // chance a position is a numeric rs token
    double punct_prob = 0.6;     // chance of a sentence-final punctuation token
    int min_tokens = 3;
    int max_tokens = 10;
    std::uint64_t seed = 1;
};

struct SynthData {
    Corpus corpus;                      // annotated with gold tags
    std::vector<std::string> en_words;  // lexicon contents, shared pool included
    std::vector<std::string> ru_words;
};

SynthData generate_synthetic(const SynthConfig& cfg);

}  // namespace cmtag
