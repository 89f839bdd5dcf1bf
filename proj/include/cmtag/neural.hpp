#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cmtag/corpus.hpp"
#include "cmtag/embed.hpp"

namespace cmtag {

enum class CellKind { TanhRnn, Lstm };

// Single recurrent cell. LSTM weights stack the four gates row-wise in the
// order input, forget, cell, output.
struct RnnCell {
    CellKind kind = CellKind::TanhRnn;
    Eigen::MatrixXd input_weights;      // H x In, or 4H x In for LSTM
    Eigen::MatrixXd recurrent_weights;  // H x H, or 4H x H
    Eigen::VectorXd bias;               // H, or 4H

    int hidden_size() const {
        return static_cast<int>(kind == CellKind::Lstm ? bias.size() / 4 : bias.size());
    }
    int input_size() const { return static_cast<int>(input_weights.cols()); }
};

struct EncoderState {
    Eigen::MatrixXd forward_states;   // T x H, row t after reading token t left-to-right
    Eigen::MatrixXd backward_states;  // T x H, row t after reading token t right-to-left
    Eigen::MatrixXd combined;         // T x 2H, row t = [forward_t, backward_t]
};

// Additive attention: score_i = v . tanh(Wd s + We h_i).
struct AttentionParams {
    Eigen::MatrixXd decoder_proj;  // A x H
    Eigen::MatrixXd encoder_proj;  // A x 2H
    Eigen::VectorXd score_vector;  // A
};

struct Attended {
    Eigen::VectorXd weights;  // T, softmax-normalized
    Eigen::VectorXd context;  // 2H, weighted sum of encoder states
};

enum class NeuralArch { Bilstm, Attention };

std::string_view arch_name(NeuralArch arch);
std::optional<NeuralArch> parse_arch(std::string_view name);

struct NeuralConfig {
    NeuralArch arch = NeuralArch::Attention;
    int hidden = 32;
    int tag_embed_dim = 8;
    int attention_dim = 0;  // 0 = hidden
    int epochs = 30;
    double step = 0.2;
    double clip = 5.0;
    std::uint64_t seed = 1;

    void validate() const;
};

struct NeuralModel {
    NeuralArch arch = NeuralArch::Attention;
    int feature_dim = 0;
    std::uint64_t embed_digest = 0;

    RnnCell encoder_fwd, encoder_bwd;   // LSTM for bilstm, tanh for attention
    Eigen::MatrixXd output_weights;     // 3 x 2H (bilstm) or 3 x H (attention)
    Eigen::VectorXd output_bias;        // 3

    // attention arch only
    AttentionParams attention;
    RnnCell decoder;                    // tanh; input = tag_embed_dim + 2H
    Eigen::MatrixXd tag_embeddings;     // 3 x E
    Eigen::VectorXd start_embedding;    // E

    int hidden_size() const { return encoder_fwd.hidden_size(); }
};

// Named views over every trainable block, fixed order shared by the model,
// its gradients, the clipped update and the model file.
struct ParamBlock {
    std::string name;
    double* data;
    Eigen::Index rows, cols;
    Eigen::Index size() const { return rows * cols; }
};
std::vector<ParamBlock> param_blocks(NeuralModel& model);

struct NeuralGradient {
    NeuralModel shadow;  // same shapes, holds gradient values

    explicit NeuralGradient(const NeuralModel& model);
    void set_zero();
    std::vector<ParamBlock> blocks() { return param_blocks(shadow); }
    double squared_norm();
};

NeuralModel init_neural(const NeuralConfig& cfg, int feature_dim,
                        std::uint64_t embed_digest);

// Bidirectional pass with zero initial states; rows of `features` are the
// per-token vectors.
EncoderState encode(const Eigen::MatrixXd& features, const RnnCell& fwd,
                    const RnnCell& bwd);

Attended attend(const Eigen::VectorXd& decoder_state, const EncoderState& enc,
                const AttentionParams& params);

struct TagDistributions {
    std::vector<LangTag> tags;
    Eigen::MatrixXd dist;  // T x 3, rows sum to 1
};

// Greedy decode feeding back predicted labels; attention arch.
TagDistributions decode_tags(const EncoderState& enc, const NeuralModel& model);
// Per-position softmax over the concatenated encoder states; bilstm arch.
TagDistributions bilstm_distributions(const EncoderState& enc, const NeuralModel& model);

// Per-token feature matrix from embedding lookups.
Eigen::MatrixXd sentence_features(const EmbeddingTable& table, const Sentence& sentence);

// Teacher-forced cross-entropy (sum over tokens) and gradients for every
// parameter block.
double loss_and_gradient(const NeuralModel& model, const Eigen::MatrixXd& features,
                         const std::vector<LangTag>& gold, NeuralGradient& grad);

// Per-sentence SGD with global-norm gradient clipping, deterministic under
// cfg.seed. Appends mean per-token loss after each epoch to `epoch_losses`.
NeuralModel train_neural(const Corpus& train, const EmbeddingTable& table,
                         const NeuralConfig& cfg,
                         std::vector<double>* epoch_losses = nullptr);

std::vector<LangTag> tag_neural(const NeuralModel& model, const EmbeddingTable& table,
                                const Sentence& sentence);
std::vector<LangTag> tag_bilstm(const NeuralModel& model, const EmbeddingTable& table,
                                const Sentence& sentence);

void save_neural(const NeuralModel& model, const std::filesystem::path& path);
NeuralModel load_neural(const std::filesystem::path& path);

// Models remember the digest of the embedding table they were trained with.
void require_embedding_match(const NeuralModel& model, const EmbeddingTable& table);

}  // namespace cmtag
