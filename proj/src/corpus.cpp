#include "cmtag/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "cmtag/utf8.hpp"

namespace cmtag {

namespace {

bool is_space_cp(char32_t cp) {
    switch (cp) {
        case U' ': case U'\t': case U'\n': case U'\r': case U'\f': case U'\v':
        case 0x85: case 0xA0: case 0x2028: case 0x2029:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

std::string location(std::string_view name, std::size_t line) {
    return std::string(name) + ":" + std::to_string(line);
}

}  // namespace

std::string_view tag_name(LangTag tag) {
    switch (tag) {
        case LangTag::EN: return "en";
        case LangTag::RU: return "ru";
        case LangTag::RS: return "rs";
    }
    return "";
}

std::optional<LangTag> parse_tag(std::string_view name) {
    if (name == "en") return LangTag::EN;
    if (name == "ru") return LangTag::RU;
    if (name == "rs") return LangTag::RS;
    return std::nullopt;
}

bool is_valid_token(std::string_view surface) {
    if (surface.empty()) return false;
    std::size_t i = 0;
    while (i < surface.size()) {
        if (is_space_cp(utf8::decode(surface, i))) return false;
    }
    return true;
}

std::size_t Corpus::token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.size();
    return n;
}

std::optional<CorpusFormat> parse_format(std::string_view name) {
    if (name == "plain") return CorpusFormat::Plain;
    if (name == "conll") return CorpusFormat::Conll;
    return std::nullopt;
}

Corpus read_corpus_stream(std::istream& in, CorpusFormat format, std::string_view name) {
    Corpus corpus;
    corpus.annotated = (format == CorpusFormat::Conll);
    Sentence current;
    std::string line;
    std::size_t lineno = 0;

    auto flush = [&] {
        if (!current.tokens.empty()) {
            corpus.sentences.push_back(std::move(current));
            current = Sentence{};
        }
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        if (format == CorpusFormat::Plain) {
            std::istringstream fields(line);
            Sentence sentence;
            std::string token;
            while (fields >> token) sentence.tokens.push_back(token);
            if (!sentence.tokens.empty()) corpus.sentences.push_back(std::move(sentence));
            continue;
        }

        // conll
        if (line.empty()) {
            flush();
            continue;
        }
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw DataError(location(name, lineno) + ": expected \"token<TAB>tag\", got \"" +
                            line + "\"");
        std::string surface = line.substr(0, tab);
        std::string tag_str = line.substr(tab + 1);
        if (surface.empty())
            throw DataError(location(name, lineno) + ": empty token");
        if (!is_valid_token(surface))
            throw DataError(location(name, lineno) + ": token contains whitespace: \"" +
                            surface + "\"");
        auto tag = parse_tag(tag_str);
        if (!tag)
            throw DataError(location(name, lineno) + ": unknown tag \"" + tag_str +
                            "\" (expected en, ru or rs)");
        current.tokens.push_back(std::move(surface));
        current.tags.push_back(*tag);
    }
    if (format == CorpusFormat::Conll) flush();
    return corpus;
}

Corpus read_corpus(const std::filesystem::path& path, CorpusFormat format) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus file: " + path.string());
    return read_corpus_stream(in, format, path.string());
}

void write_corpus_stream(const Corpus& corpus, std::ostream& out, CorpusFormat format) {
    if (format == CorpusFormat::Conll && !corpus.annotated)
        throw DataError("conll output requires an annotated corpus");
    bool first = true;
    for (const auto& sentence : corpus.sentences) {
        if (format == CorpusFormat::Plain) {
            for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
                if (i) out << ' ';
                out << sentence.tokens[i];
            }
            out << '\n';
        } else {
            if (!first) out << '\n';
            for (std::size_t i = 0; i < sentence.tokens.size(); ++i)
                out << sentence.tokens[i] << '\t' << tag_name(sentence.tags[i]) << '\n';
            first = false;
        }
    }
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path,
                  CorpusFormat format) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write corpus file: " + path.string());
    write_corpus_stream(corpus, out, format);
    if (!out) throw DataError("write failed: " + path.string());
}

SplitResult split_corpus(const Corpus& corpus, const SplitSpec& spec) {
    if (corpus.sentences.empty()) throw DataError("cannot split an empty corpus");
    const double sum = spec.train_frac + spec.dev_frac + spec.test_frac;
    if (std::abs(sum - 1.0) > 1e-9)
        throw DataError("split fractions sum to " + std::to_string(sum) + ", expected 1");
    if (spec.train_frac < 0 || spec.dev_frac < 0 || spec.test_frac < 0)
        throw DataError("split fractions must be non-negative");

    const std::size_t n = corpus.sentences.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    // Hand-rolled Fisher-Yates: std::shuffle's draw sequence is
    // implementation-defined, and the split must be stable across platforms.
    std::mt19937_64 rng(spec.seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
        std::swap(order[i], order[j]);
    }

    // Largest-remainder apportionment keeps each count within 1 of n*frac.
    const std::array<double, 3> fracs = {spec.train_frac, spec.dev_frac, spec.test_frac};
    std::array<std::size_t, 3> counts{};
    std::array<double, 3> remainders{};
    std::size_t assigned = 0;
    for (int k = 0; k < 3; ++k) {
        double exact = fracs[k] * static_cast<double>(n);
        counts[k] = static_cast<std::size_t>(std::floor(exact));
        remainders[k] = exact - std::floor(exact);
        assigned += counts[k];
    }
    std::array<int, 3> by_remainder = {0, 1, 2};
    std::stable_sort(by_remainder.begin(), by_remainder.end(),
                     [&](int a, int b) { return remainders[a] > remainders[b]; });
    for (int k = 0; assigned < n; ++k, ++assigned) counts[by_remainder[k % 3]]++;

    SplitResult result;
    result.train.annotated = result.dev.annotated = result.test.annotated =
        corpus.annotated;
    std::array<Corpus*, 3> parts = {&result.train, &result.dev, &result.test};
    std::size_t pos = 0;
    for (int k = 0; k < 3; ++k) {
        std::vector<std::size_t> members(order.begin() + pos,
                                         order.begin() + pos + counts[k]);
        pos += counts[k];
        std::sort(members.begin(), members.end());  // keep original corpus order
        for (std::size_t idx : members)
            parts[k]->sentences.push_back(corpus.sentences[idx]);
    }
    return result;
}

CorpusStats corpus_stats(const Corpus& corpus) {
    if (!corpus.annotated) throw DataError("corpus_stats requires an annotated corpus");
    CorpusStats stats;
    stats.sentence_count = corpus.sentences.size();
    for (const auto& sentence : corpus.sentences)
        for (LangTag tag : sentence.tags) stats.tag_tokens[static_cast<int>(tag)]++;
    return stats;
}

}  // namespace cmtag
