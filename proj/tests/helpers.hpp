#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "cmtag/corpus.hpp"
#include "cmtag/rand.hpp"

namespace cmtag::test {

// Scratch directory removed on scope exit.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& label) {
        path = std::filesystem::temp_directory_path() /
               ("cmtag_" + label + "_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::filesystem::path file(const std::string& name) const { return path / name; }
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

inline Sentence make_sentence(const std::vector<std::string>& tokens,
                              const std::vector<LangTag>& tags = {}) {
    Sentence s;
    s.tokens = tokens;
    s.tags = tags;
    return s;
}

inline Corpus make_corpus(const std::vector<Sentence>& sentences) {
    Corpus c;
    c.sentences = sentences;
    c.annotated = !sentences.empty() && sentences.front().annotated();
    return c;
}

inline std::string random_word(std::mt19937_64& rng, int min_len = 1, int max_len = 8) {
    const int len =
        min_len + static_cast<int>(uniform_index(
                      rng, static_cast<std::size_t>(max_len - min_len + 1)));
    std::string word;
    for (int i = 0; i < len; ++i)
        word += static_cast<char>('a' + uniform_index(rng, 26));
    return word;
}

inline Corpus random_corpus(std::mt19937_64& rng, int sentences, bool annotated) {
    Corpus corpus;
    corpus.annotated = annotated;
    for (int s = 0; s < sentences; ++s) {
        Sentence sentence;
        const int len = 1 + static_cast<int>(uniform_index(rng, 9));
        for (int t = 0; t < len; ++t) {
            sentence.tokens.push_back(random_word(rng));
            if (annotated)
                sentence.tags.push_back(static_cast<LangTag>(uniform_index(rng, 3)));
        }
        corpus.sentences.push_back(std::move(sentence));
    }
    return corpus;
}

}  // namespace cmtag::test
