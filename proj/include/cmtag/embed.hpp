#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cmtag/corpus.hpp"

namespace cmtag {

struct EmbedConfig {
    int dim = 300;
    int window = 5;
    int epochs = 5;
    double learning_rate = 0.05;
    int min_ngram = 3;
    int max_ngram = 6;
    int negative_samples = 0;  // 0 = full softmax
    std::uint64_t seed = 42;

    void validate() const;
};

// Character n-grams of the boundary-decorated word "<word>", code-point
// aware, lengths min_n..max_n.
std::vector<std::string> char_ngrams(std::string_view word, int min_n, int max_n);

// Skipgram vectors over words plus subword n-grams. A word's input vector is
// its own row plus the mean of its n-gram rows, so unseen spellings that
// share n-grams with training words still map to something useful.
struct EmbeddingTable {
    int dim = 0;
    int min_ngram = 3;
    int max_ngram = 6;
    std::vector<std::string> words;  // row order
    std::unordered_map<std::string, int> word_index;
    std::vector<std::string> ngrams;  // row order
    std::unordered_map<std::string, int> ngram_index;
    Eigen::MatrixXd word_vecs;    // |V| x dim
    Eigen::MatrixXd ngram_vecs;   // |G| x dim
    Eigen::MatrixXd output_vecs;  // dim x |V|; training side, not serialized
    std::vector<std::vector<int>> word_ngram_ids;  // per word row

    std::size_t vocab_size() const { return words.size(); }

    // Input vector of an in-vocabulary word.
    Eigen::VectorXd input_vector(int word_id) const;

    // Total: in-vocab row+mean(ngrams); OOV mean of known n-gram rows; zero
    // vector when nothing is known (has_subwords set to false).
    Eigen::VectorXd lookup(std::string_view token, bool* has_subwords = nullptr) const;

    // Canonical text form ("CMEMB 1" format); digest() hashes it so dependent
    // models can reject mismatched embeddings.
    std::string serialize() const;
    std::uint64_t digest() const;

    void rebuild_indexes();  // word/ngram maps + word_ngram_ids from rows
};

EmbeddingTable train_skipgram(const Corpus& corpus, const EmbedConfig& cfg,
                              std::vector<double>* epoch_losses = nullptr);

// Softmax over the vocabulary given a center word; the training distribution.
Eigen::VectorXd skipgram_predict(const EmbeddingTable& table, int center_id);

double skipgram_pair_loss(const EmbeddingTable& table, int center_id, int target_id);

struct SkipgramPairGrad {
    Eigen::VectorXd hidden;  // dL/d input vector of the center word
    Eigen::MatrixXd output;  // dL/d output_vecs
};
SkipgramPairGrad skipgram_pair_gradient(const EmbeddingTable& table, int center_id,
                                        int target_id);

void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path);
EmbeddingTable load_embeddings(const std::filesystem::path& path);
EmbeddingTable read_embeddings_stream(std::istream& in, std::string_view name);

}  // namespace cmtag
