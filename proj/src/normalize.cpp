#include "cmtag/normalize.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "cmtag/utf8.hpp"

namespace cmtag {

std::string collapse_lengthening(std::string_view token) {
    std::string out;
    out.reserve(token.size());
    std::size_t i = 0;
    char32_t prev = 0;
    bool first = true;
    while (i < token.size()) {
        std::size_t start = i;
        char32_t cp = utf8::decode(token, i);
        if (first || cp != prev) out.append(token.substr(start, i - start));
        prev = cp;
        first = false;
    }
    return out;
}

void Lexicon::add_surface(std::string_view raw) {
    std::string base = collapse_lengthening(raw);
    if (base.empty()) return;
    entries.insert(base);
    surface_variants[base].insert(std::string(raw));
}

Lexicon load_lexicon(const std::filesystem::path& path, LangTag language) {
    if (language == LangTag::RS)
        throw DataError("lexicons exist only for en and ru, not rs");
    std::ifstream in(path);
    if (!in) throw DataError("cannot open lexicon file: " + path.string());

    Lexicon lexicon;
    lexicon.language = language;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!is_valid_token(line)) continue;  // skip lines with embedded whitespace
        lexicon.add_surface(line);
    }
    return lexicon;
}

std::vector<std::string> segment_spaceless(std::string_view text, const Lexicon& en,
                                           const Lexicon& ru) {
    std::unordered_set<std::string_view> words;
    std::size_t max_bytes = 0;
    auto absorb = [&](const Lexicon& lex) {
        for (const auto& entry : lex.entries) {
            words.insert(entry);
            max_bytes = std::max(max_bytes, entry.size());
        }
        for (const auto& [base, variants] : lex.surface_variants)
            for (const auto& variant : variants) {
                words.insert(variant);
                max_bytes = std::max(max_bytes, variant.size());
            }
    };
    absorb(en);
    absorb(ru);

    const auto bounds = utf8::boundaries(text);
    std::vector<std::string> tokens;
    std::size_t b = 0;  // index into bounds
    while (b + 1 < bounds.size()) {
        const std::size_t start = bounds[b];
        // longest candidate first; e == b+1 is the single-code-point fallback
        std::size_t e = b + 1;
        while (e + 1 < bounds.size() && bounds[e + 1] - start <= max_bytes) ++e;
        for (; e > b + 1; --e)
            if (words.count(text.substr(start, bounds[e] - start))) break;
        tokens.emplace_back(text.substr(start, bounds[e] - start));
        b = e;
    }
    return tokens;
}

Corpus dedup_sentences(const Corpus& corpus) {
    Corpus out;
    out.annotated = corpus.annotated;
    std::unordered_set<std::string> seen;
    for (const auto& sentence : corpus.sentences) {
        std::string key;
        for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
            key += sentence.tokens[i];
            key += '\x1f';
            if (sentence.annotated()) key += static_cast<char>('0' + static_cast<int>(sentence.tags[i]));
        }
        if (seen.insert(std::move(key)).second) out.sentences.push_back(sentence);
    }
    return out;
}

}  // namespace cmtag
