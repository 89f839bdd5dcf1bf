#include "cmtag/synth.hpp"

#include <random>
#include <set>

#include "cmtag/rand.hpp"

namespace cmtag {

namespace {

constexpr std::string_view kConsonants = "bdfgklmnprst";
constexpr std::string_view kVowels = "aeiou";

// CV syllables alternate disjoint character classes, so no doubled letters.
std::string make_word(std::mt19937_64& rng, char marker) {
    const int syllables = 2 + static_cast<int>(uniform_index(rng, 2));
    std::string word;
    for (int s = 0; s < syllables; ++s) {
        word += kConsonants[uniform_index(rng, kConsonants.size())];
        word += kVowels[uniform_index(rng, kVowels.size())];
    }
    if (marker) word[2 * uniform_index(rng, static_cast<std::size_t>(syllables))] = marker;
    return word;
}

std::vector<std::string> make_vocab(std::mt19937_64& rng, int count, char marker,
                                    std::set<std::string>& taken) {
    std::vector<std::string> words;
    while (static_cast<int>(words.size()) < count) {
        std::string word = make_word(rng, marker);
        if (marker && word.find(marker) == std::string::npos) continue;
        if (!marker && (word.find('q') != std::string::npos ||
                        word.find('z') != std::string::npos))
            continue;
        if (taken.insert(word).second) words.push_back(std::move(word));
    }
    return words;
}

std::string lengthen(std::mt19937_64& rng, const std::string& word) {
    const std::size_t at = uniform_index(rng, word.size());
    const int extra = 1 + static_cast<int>(uniform_index(rng, 3));
    std::string out = word.substr(0, at + 1);
    out.append(static_cast<std::size_t>(extra), word[at]);
    out += word.substr(at + 1);
    return out;
}

}  // namespace

SynthData generate_synthetic(const SynthConfig& cfg) {
    if (cfg.sentences < 1) throw DataError("synthetic corpus needs at least 1 sentence");
    if (cfg.vocab_per_language < 1) throw DataError("vocab_per_language must be >= 1");
    if (cfg.min_tokens < 1 || cfg.min_tokens > cfg.max_tokens)
        throw DataError("need 1 <= min_tokens <= max_tokens");

    std::mt19937_64 rng(cfg.seed);
    std::set<std::string> taken;
    SynthData data;
    data.en_words = make_vocab(rng, cfg.vocab_per_language, 'q', taken);
    data.ru_words = make_vocab(rng, cfg.vocab_per_language, 'z', taken);
    const int shared_count =
        static_cast<int>(cfg.shared_frac * static_cast<double>(cfg.vocab_per_language));
    const auto shared = make_vocab(rng, shared_count, 0, taken);
    for (const auto& word : shared) {
        data.en_words.push_back(word);
        data.ru_words.push_back(word);
    }

    const std::array<const std::vector<std::string>*, 2> pools = {&data.en_words,
                                                                  &data.ru_words};
    const std::array<LangTag, 2> pool_tags = {LangTag::EN, LangTag::RU};
    const char* puncts[] = {".", "!", "?"};

    data.corpus.annotated = true;
    for (int s = 0; s < cfg.sentences; ++s) {
        const int tokens =
            cfg.min_tokens +
            static_cast<int>(uniform_index(
                rng, static_cast<std::size_t>(cfg.max_tokens - cfg.min_tokens + 1)));
        std::size_t lang = uniform_index(rng, 2);
        Sentence sentence;
        for (int t = 0; t < tokens; ++t) {
            if (t > 0 && uniform01(rng) < cfg.switch_prob) lang = 1 - lang;
            if (uniform01(rng) < cfg.digit_prob) {
                const int digits = 1 + static_cast<int>(uniform_index(rng, 4));
                std::string number;
                for (int d = 0; d < digits; ++d)
                    number += static_cast<char>('0' + uniform_index(rng, 10));
                sentence.tokens.push_back(std::move(number));
                sentence.tags.push_back(LangTag::RS);
                continue;
            }
            const auto& pool = *pools[lang];
            std::string word = pool[uniform_index(rng, pool.size())];
            if (uniform01(rng) < cfg.lengthen_prob) word = lengthen(rng, word);
            sentence.tokens.push_back(std::move(word));
            sentence.tags.push_back(pool_tags[lang]);
        }
        if (uniform01(rng) < cfg.punct_prob) {
            sentence.tokens.push_back(puncts[uniform_index(rng, 3)]);
            sentence.tags.push_back(LangTag::RS);
        }
        data.corpus.sentences.push_back(std::move(sentence));
    }
    return data;
}

}  // namespace cmtag
