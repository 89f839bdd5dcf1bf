#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cmtag/corpus.hpp"

namespace cmtag {

// Collapses every maximal run of a repeated code point to one occurrence:
// "youuuu" -> "you", "kiaaa" -> "kia". Idempotent.
std::string collapse_lengthening(std::string_view token);

// Language-keyed dictionary of base forms. surface_variants maps each base
// form to the raw spellings that collapsed to it.
struct Lexicon {
    LangTag language = LangTag::EN;  // EN or RU only
    std::set<std::string> entries;
    std::map<std::string, std::set<std::string>> surface_variants;

    bool contains_base(const std::string& base) const {
        return entries.count(base) != 0;
    }
    void add_surface(std::string_view raw);
};

// One surface word per line, UTF-8; '#'-prefixed comment lines ignored.
Lexicon load_lexicon(const std::filesystem::path& path, LangTag language);

// Greedy left-to-right longest match of `text` (no whitespace) against both
// lexicons' entries and recorded variants. Positions with no matching prefix
// emit a single-code-point token, so outputs always concatenate back to the
// input.
std::vector<std::string> segment_spaceless(std::string_view text, const Lexicon& en,
                                           const Lexicon& ru);

// Drops exact-duplicate sentences, keeping first occurrences in order.
Corpus dedup_sentences(const Corpus& corpus);

}  // namespace cmtag
