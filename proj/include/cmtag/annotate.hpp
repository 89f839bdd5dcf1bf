#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmtag/corpus.hpp"
#include "cmtag/normalize.hpp"

namespace cmtag {

// Tokens in the "rest" class: no letters at all (punctuation, digits,
// symbols), URLs, @-mentions and #-hashtags.
bool is_rest_token(std::string_view surface);

struct AnnotationPolicy {
    // Tag for words found in both lexicons ("common words"). Unset means
    // mark-unresolved and queue for human review.
    std::optional<LangTag> ambiguous_default;
    // Capitalized-word-as-named-entity heuristic; too noisy for chat text,
    // so off unless asked for.
    bool capitalized_is_rs = false;
    // When set: previously reviewed decisions are merged from this file, and
    // tokens still unresolved are written back to it as "surface<TAB>?".
    std::optional<std::filesystem::path> review_file;
};

// Decision order: rest-class check, review overrides (handled by
// annotate_corpus), base-form lookup in both lexicons, policy for two hits.
// nullopt = unresolved.
std::optional<LangTag> annotate_token(std::string_view surface, const Lexicon& en,
                                      const Lexicon& ru, const AnnotationPolicy& policy);

struct AnnotationResult {
    // Fully tagged; tokens without a decision fall back to rs until a review
    // round supplies one.
    Corpus corpus;
    // Unique unresolved surfaces, first-seen order.
    std::vector<std::string> unresolved;
};

AnnotationResult annotate_corpus(const Corpus& corpus, const Lexicon& en,
                                 const Lexicon& ru, const AnnotationPolicy& policy);

// Review file lines are "surface<TAB>tag" with "?" for still-undecided.
// Writing keeps already-made decisions so review rounds accumulate.
std::map<std::string, LangTag> read_review_file(const std::filesystem::path& path);
void write_review_file(const std::filesystem::path& path,
                       const std::map<std::string, LangTag>& decided,
                       const std::vector<std::string>& unresolved);

}  // namespace cmtag
