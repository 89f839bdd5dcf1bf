#include "cmtag/annotate.hpp"

#include <fstream>
#include <unordered_set>

#include "cmtag/utf8.hpp"

namespace cmtag {

bool is_rest_token(std::string_view surface) {
    if (surface.empty()) return false;
    if (surface[0] == '@' || surface[0] == '#') return true;
    if (surface.starts_with("http://") || surface.starts_with("https://") ||
        surface.starts_with("www."))
        return true;
    std::size_t i = 0;
    while (i < surface.size())
        if (utf8::is_letter(utf8::decode(surface, i))) return false;
    return true;
}

namespace {

bool starts_uppercase(std::string_view surface) {
    return !surface.empty() && surface[0] >= 'A' && surface[0] <= 'Z';
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

// Exact base form first, ASCII-lowercased as a fallback: lexicon files are
// normally lowercase while chat text is not.
bool lexicon_hit(const Lexicon& lexicon, const std::string& base,
                 const std::string& lowered) {
    return lexicon.contains_base(base) || lexicon.contains_base(lowered);
}

}  // namespace

std::optional<LangTag> annotate_token(std::string_view surface, const Lexicon& en,
                                      const Lexicon& ru,
                                      const AnnotationPolicy& policy) {
    if (is_rest_token(surface)) return LangTag::RS;
    if (policy.capitalized_is_rs && starts_uppercase(surface)) return LangTag::RS;

    const std::string base = collapse_lengthening(surface);
    const std::string lowered = ascii_lower(base);
    const bool in_en = lexicon_hit(en, base, lowered);
    const bool in_ru = lexicon_hit(ru, base, lowered);
    if (in_en && in_ru) return policy.ambiguous_default;  // "common words"
    if (in_en) return LangTag::EN;
    if (in_ru) return LangTag::RU;
    return std::nullopt;
}

AnnotationResult annotate_corpus(const Corpus& corpus, const Lexicon& en,
                                 const Lexicon& ru, const AnnotationPolicy& policy) {
    if (corpus.annotated) throw DataError("corpus is already annotated");

    std::map<std::string, LangTag> reviewed;
    if (policy.review_file && std::filesystem::exists(*policy.review_file))
        reviewed = read_review_file(*policy.review_file);

    AnnotationResult result;
    result.corpus.annotated = true;
    std::unordered_set<std::string> queued;

    for (const auto& sentence : corpus.sentences) {
        Sentence tagged;
        tagged.tokens = sentence.tokens;
        tagged.tags.reserve(sentence.tokens.size());
        for (const auto& surface : sentence.tokens) {
            std::optional<LangTag> tag;
            if (is_rest_token(surface)) {
                tag = LangTag::RS;  // rest class wins even over review entries
            } else if (auto it = reviewed.find(surface); it != reviewed.end()) {
                tag = it->second;
            } else {
                tag = annotate_token(surface, en, ru, policy);
            }
            if (!tag) {
                if (queued.insert(surface).second) result.unresolved.push_back(surface);
                tag = LangTag::RS;  // provisional until reviewed
            }
            tagged.tags.push_back(*tag);
        }
        result.corpus.sentences.push_back(std::move(tagged));
    }

    if (policy.review_file && !result.unresolved.empty())
        write_review_file(*policy.review_file, reviewed, result.unresolved);
    return result;
}

std::map<std::string, LangTag> read_review_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open review file: " + path.string());
    std::map<std::string, LangTag> decisions;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": expected \"surface<TAB>tag\"");
        std::string surface = line.substr(0, tab);
        std::string decision = line.substr(tab + 1);
        if (decision == "?") continue;  // still pending
        auto tag = parse_tag(decision);
        if (!tag)
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": unknown tag \"" + decision + "\" (expected en, ru, rs or ?)");
        decisions[surface] = *tag;
    }
    return decisions;
}

void write_review_file(const std::filesystem::path& path,
                       const std::map<std::string, LangTag>& decided,
                       const std::vector<std::string>& unresolved) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write review file: " + path.string());
    for (const auto& [surface, tag] : decided) out << surface << '\t' << tag_name(tag) << '\n';
    for (const auto& surface : unresolved)
        if (!decided.count(surface)) out << surface << "\t?\n";
}

}  // namespace cmtag
