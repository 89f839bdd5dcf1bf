#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cmtag {

// Raised for malformed or inconsistent data (bad files, shape mismatches).
// The CLI maps it to exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tag order EN < RU < RS is fixed: it indexes confusion matrices and breaks
// decoding ties.
enum class LangTag : int { EN = 0, RU = 1, RS = 2 };

inline constexpr int kNumTags = 3;
inline constexpr std::array<LangTag, kNumTags> kAllTags = {LangTag::EN, LangTag::RU,
                                                           LangTag::RS};

std::string_view tag_name(LangTag tag);                       // "en" / "ru" / "rs"
std::optional<LangTag> parse_tag(std::string_view name);

// Surface tokens are non-empty strings without whitespace code points.
bool is_valid_token(std::string_view surface);

struct TaggedToken {
    std::string surface;
    LangTag tag;
    bool operator==(const TaggedToken&) const = default;
};

// Tokens with an optional parallel tag array (empty when unannotated).
struct Sentence {
    std::vector<std::string> tokens;
    std::vector<LangTag> tags;

    bool annotated() const { return !tags.empty(); }
    std::size_t size() const { return tokens.size(); }
    bool operator==(const Sentence&) const = default;
};

// All sentences annotated or none.
struct Corpus {
    std::vector<Sentence> sentences;
    bool annotated = false;

    std::size_t size() const { return sentences.size(); }
    std::size_t token_count() const;
    bool operator==(const Corpus&) const = default;
};

enum class CorpusFormat { Plain, Conll };

std::optional<CorpusFormat> parse_format(std::string_view name);  // "plain" / "conll"

// Plain: one sentence per line, whitespace-tokenized; blank lines skipped.
// CoNLL: "surface<TAB>tag" per token, blank line between sentences.
// Malformed records raise DataError naming file and line.
Corpus read_corpus(const std::filesystem::path& path, CorpusFormat format);
Corpus read_corpus_stream(std::istream& in, CorpusFormat format, std::string_view name);

void write_corpus(const Corpus& corpus, const std::filesystem::path& path,
                  CorpusFormat format);
void write_corpus_stream(const Corpus& corpus, std::ostream& out, CorpusFormat format);

struct SplitSpec {
    double train_frac = 0.8;
    double dev_frac = 0.1;
    double test_frac = 0.1;
    std::uint64_t seed = 1;
};

struct SplitResult {
    Corpus train, dev, test;
};

// Sentence-level partition. The seed fully determines membership; counts are
// within one sentence of the requested fractions.
SplitResult split_corpus(const Corpus& corpus, const SplitSpec& spec);

struct CorpusStats {
    std::size_t sentence_count = 0;
    std::array<std::size_t, kNumTags> tag_tokens{};  // indexed by LangTag

    std::size_t total_tokens() const {
        return tag_tokens[0] + tag_tokens[1] + tag_tokens[2];
    }
};

CorpusStats corpus_stats(const Corpus& corpus);

}  // namespace cmtag
