#include "cmtag/neural.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include "cmtag/rand.hpp"
#include "cmtag/textio.hpp"

namespace cmtag {

std::string_view arch_name(NeuralArch arch) {
    return arch == NeuralArch::Bilstm ? "bilstm" : "attn";
}

std::optional<NeuralArch> parse_arch(std::string_view name) {
    if (name == "bilstm") return NeuralArch::Bilstm;
    if (name == "attn") return NeuralArch::Attention;
    return std::nullopt;
}

void NeuralConfig::validate() const {
    if (hidden < 1) throw DataError("neural hidden size must be >= 1");
    if (tag_embed_dim < 1) throw DataError("tag embedding dim must be >= 1");
    if (attention_dim < 0) throw DataError("attention dim must be >= 0");
    if (epochs < 0) throw DataError("neural epochs must be >= 0");
    if (!(step > 0)) throw DataError("neural step must be > 0");
    if (!(clip > 0)) throw DataError("clip threshold must be > 0");
}

namespace {

Eigen::VectorXd softmax_vec(const Eigen::VectorXd& scores) {
    Eigen::VectorXd p = (scores.array() - scores.maxCoeff()).exp();
    return p / p.sum();
}

int argmax_low_tie(const Eigen::VectorXd& v) {
    int arg = 0;
    for (int i = 1; i < v.size(); ++i)
        if (v[i] > v[arg]) arg = i;
    return arg;
}

Eigen::ArrayXd sigmoid(const Eigen::ArrayXd& x) { return 1.0 / (1.0 + (-x).exp()); }

// Per-direction activation history, indexed by token position.
struct CellTrace {
    Eigen::MatrixXd h;                    // T x H
    Eigen::MatrixXd c, gi, gf, gg, go;    // LSTM only, T x H each
};

CellTrace run_cell(const RnnCell& cell, const Eigen::MatrixXd& features, bool reverse) {
    const Eigen::Index steps = features.rows();
    const int hidden = cell.hidden_size();
    CellTrace trace;
    trace.h.setZero(steps, hidden);
    if (cell.kind == CellKind::Lstm) {
        trace.c.setZero(steps, hidden);
        trace.gi.setZero(steps, hidden);
        trace.gf.setZero(steps, hidden);
        trace.gg.setZero(steps, hidden);
        trace.go.setZero(steps, hidden);
    }

    Eigen::VectorXd h = Eigen::VectorXd::Zero(hidden);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(hidden);
    for (Eigen::Index k = 0; k < steps; ++k) {
        const Eigen::Index pos = reverse ? steps - 1 - k : k;
        const Eigen::VectorXd pre = cell.input_weights * features.row(pos).transpose() +
                                    cell.recurrent_weights * h + cell.bias;
        if (cell.kind == CellKind::TanhRnn) {
            h = pre.array().tanh();
        } else {
            const Eigen::ArrayXd gi = sigmoid(pre.segment(0, hidden).array());
            const Eigen::ArrayXd gf = sigmoid(pre.segment(hidden, hidden).array());
            const Eigen::ArrayXd gg = pre.segment(2 * hidden, hidden).array().tanh();
            const Eigen::ArrayXd go = sigmoid(pre.segment(3 * hidden, hidden).array());
            c = (gf * c.array() + gi * gg).matrix();
            h = (go * c.array().tanh()).matrix();
            trace.c.row(pos) = c;
            trace.gi.row(pos) = gi;
            trace.gf.row(pos) = gf;
            trace.gg.row(pos) = gg;
            trace.go.row(pos) = go;
        }
        trace.h.row(pos) = h;
    }
    return trace;
}

// Accumulates parameter gradients for one direction given dL/d(state at each
// position); the recurrent carry runs opposite to the scan order.
void backprop_cell(const RnnCell& cell, const Eigen::MatrixXd& features,
                   const CellTrace& trace, bool reverse, const Eigen::MatrixXd& dstates,
                   RnnCell& grad) {
    const Eigen::Index steps = features.rows();
    const int hidden = cell.hidden_size();
    Eigen::VectorXd dh_carry = Eigen::VectorXd::Zero(hidden);
    Eigen::VectorXd dc = Eigen::VectorXd::Zero(hidden);

    for (Eigen::Index k = steps - 1; k >= 0; --k) {
        const Eigen::Index pos = reverse ? steps - 1 - k : k;
        const Eigen::Index prev_pos = reverse ? pos + 1 : pos - 1;
        const bool has_prev = k > 0;
        const Eigen::VectorXd h_prev = has_prev
                                           ? Eigen::VectorXd(trace.h.row(prev_pos))
                                           : Eigen::VectorXd::Zero(hidden);
        const Eigen::VectorXd dh = dstates.row(pos).transpose() + dh_carry;

        Eigen::VectorXd dpre;
        if (cell.kind == CellKind::TanhRnn) {
            const Eigen::ArrayXd h = trace.h.row(pos).transpose().array();
            dpre = (dh.array() * (1.0 - h * h)).matrix();
        } else {
            const Eigen::ArrayXd gi = trace.gi.row(pos).transpose().array();
            const Eigen::ArrayXd gf = trace.gf.row(pos).transpose().array();
            const Eigen::ArrayXd gg = trace.gg.row(pos).transpose().array();
            const Eigen::ArrayXd go = trace.go.row(pos).transpose().array();
            const Eigen::ArrayXd c = trace.c.row(pos).transpose().array();
            const Eigen::ArrayXd c_prev =
                has_prev ? Eigen::ArrayXd(trace.c.row(prev_pos).transpose().array())
                         : Eigen::ArrayXd::Zero(hidden);
            const Eigen::ArrayXd tanh_c = c.tanh();

            const Eigen::ArrayXd do_ = dh.array() * tanh_c;
            dc += (dh.array() * go * (1.0 - tanh_c * tanh_c)).matrix();
            const Eigen::ArrayXd dca = dc.array();
            const Eigen::ArrayXd di = dca * gg;
            const Eigen::ArrayXd df = dca * c_prev;
            const Eigen::ArrayXd dg = dca * gi;

            dpre.resize(4 * hidden);
            dpre.segment(0, hidden) = (di * gi * (1.0 - gi)).matrix();
            dpre.segment(hidden, hidden) = (df * gf * (1.0 - gf)).matrix();
            dpre.segment(2 * hidden, hidden) = (dg * (1.0 - gg * gg)).matrix();
            dpre.segment(3 * hidden, hidden) = (do_ * go * (1.0 - go)).matrix();
            dc = (dca * gf).matrix();  // carry to the previous step
        }

        grad.input_weights.noalias() += dpre * features.row(pos);
        grad.recurrent_weights.noalias() += dpre * h_prev.transpose();
        grad.bias += dpre;
        dh_carry.noalias() = cell.recurrent_weights.transpose() * dpre;
    }
}

struct EncodeTraced {
    EncoderState state;
    CellTrace fwd, bwd;
};

EncodeTraced encode_traced(const Eigen::MatrixXd& features, const RnnCell& fwd,
                           const RnnCell& bwd) {
    EncodeTraced out;
    out.fwd = run_cell(fwd, features, false);
    out.bwd = run_cell(bwd, features, true);
    out.state.forward_states = out.fwd.h;
    out.state.backward_states = out.bwd.h;
    out.state.combined.resize(features.rows(), fwd.hidden_size() + bwd.hidden_size());
    out.state.combined << out.fwd.h, out.bwd.h;
    return out;
}

}  // namespace

EncoderState encode(const Eigen::MatrixXd& features, const RnnCell& fwd,
                    const RnnCell& bwd) {
    if (features.rows() < 1) throw DataError("encode: need at least one token");
    if (features.cols() != fwd.input_size() || features.cols() != bwd.input_size())
        throw DataError("encode: feature width " + std::to_string(features.cols()) +
                        " does not match cell input size");
    return encode_traced(features, fwd, bwd).state;
}

Attended attend(const Eigen::VectorXd& decoder_state, const EncoderState& enc,
                const AttentionParams& params) {
    const Eigen::VectorXd state_proj = params.decoder_proj * decoder_state;
    // scores_i = v . tanh(Wd s + We h_i)
    Eigen::MatrixXd combined_proj = params.encoder_proj * enc.combined.transpose();
    combined_proj.colwise() += state_proj;
    const Eigen::MatrixXd activated = combined_proj.array().tanh();
    Attended out;
    out.weights = softmax_vec(activated.transpose() * params.score_vector);
    out.context = enc.combined.transpose() * out.weights;
    return out;
}

Eigen::MatrixXd sentence_features(const EmbeddingTable& table, const Sentence& sentence) {
    Eigen::MatrixXd features(static_cast<Eigen::Index>(sentence.size()), table.dim);
    for (std::size_t t = 0; t < sentence.size(); ++t)
        features.row(static_cast<Eigen::Index>(t)) = table.lookup(sentence.tokens[t]);
    return features;
}

TagDistributions decode_tags(const EncoderState& enc, const NeuralModel& model) {
    if (model.arch != NeuralArch::Attention)
        throw DataError("decode_tags requires an attention-arch model");
    const Eigen::Index steps = enc.combined.rows();
    const int hidden = model.decoder.hidden_size();

    TagDistributions out;
    out.dist.resize(steps, kNumTags);
    Eigen::VectorXd state = Eigen::VectorXd::Zero(hidden);
    Eigen::VectorXd prev_embed = model.start_embedding;
    for (Eigen::Index t = 0; t < steps; ++t) {
        const Attended att = attend(state, enc, model.attention);
        Eigen::VectorXd x(prev_embed.size() + att.context.size());
        x << prev_embed, att.context;
        state = (model.decoder.input_weights * x + model.decoder.recurrent_weights * state +
                 model.decoder.bias)
                    .array()
                    .tanh();
        const Eigen::VectorXd p = softmax_vec(model.output_weights * state + model.output_bias);
        out.dist.row(t) = p;
        const int tag = argmax_low_tie(p);
        out.tags.push_back(static_cast<LangTag>(tag));
        prev_embed = model.tag_embeddings.row(tag);
    }
    return out;
}

TagDistributions bilstm_distributions(const EncoderState& enc, const NeuralModel& model) {
    if (model.arch != NeuralArch::Bilstm)
        throw DataError("bilstm_distributions requires a bilstm-arch model");
    const Eigen::Index steps = enc.combined.rows();
    TagDistributions out;
    out.dist.resize(steps, kNumTags);
    for (Eigen::Index t = 0; t < steps; ++t) {
        const Eigen::VectorXd p = softmax_vec(
            model.output_weights * enc.combined.row(t).transpose() + model.output_bias);
        out.dist.row(t) = p;
        out.tags.push_back(static_cast<LangTag>(argmax_low_tie(p)));
    }
    return out;
}

std::vector<ParamBlock> param_blocks(NeuralModel& model) {
    std::vector<ParamBlock> blocks;
    auto add_matrix = [&](const std::string& name, Eigen::MatrixXd& m) {
        blocks.push_back({name, m.data(), m.rows(), m.cols()});
    };
    auto add_vector = [&](const std::string& name, Eigen::VectorXd& v) {
        blocks.push_back({name, v.data(), v.size(), 1});
    };
    auto add_cell = [&](const std::string& prefix, RnnCell& cell) {
        add_matrix(prefix + ".input_w", cell.input_weights);
        add_matrix(prefix + ".recur_w", cell.recurrent_weights);
        add_vector(prefix + ".bias", cell.bias);
    };
    add_cell("enc_fwd", model.encoder_fwd);
    add_cell("enc_bwd", model.encoder_bwd);
    if (model.arch == NeuralArch::Attention) {
        add_matrix("att.decoder_proj", model.attention.decoder_proj);
        add_matrix("att.encoder_proj", model.attention.encoder_proj);
        add_vector("att.score_v", model.attention.score_vector);
        add_cell("decoder", model.decoder);
        add_matrix("tag_embed", model.tag_embeddings);
        add_vector("start_embed", model.start_embedding);
    }
    add_matrix("output_w", model.output_weights);
    add_vector("output_b", model.output_bias);
    return blocks;
}

NeuralGradient::NeuralGradient(const NeuralModel& model) : shadow(model) { set_zero(); }

void NeuralGradient::set_zero() {
    for (auto& block : param_blocks(shadow))
        std::fill(block.data, block.data + block.size(), 0.0);
}

double NeuralGradient::squared_norm() {
    double total = 0.0;
    for (auto& block : param_blocks(shadow))
        for (Eigen::Index i = 0; i < block.size(); ++i)
            total += block.data[i] * block.data[i];
    return total;
}

namespace {

RnnCell make_cell(CellKind kind, int input, int hidden, std::mt19937_64& rng,
                  double bound) {
    RnnCell cell;
    cell.kind = kind;
    const int rows = kind == CellKind::Lstm ? 4 * hidden : hidden;
    cell.input_weights.resize(rows, input);
    cell.recurrent_weights.resize(rows, hidden);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < input; ++c)
            cell.input_weights(r, c) = uniform_range(rng, -bound, bound);
        for (Eigen::Index c = 0; c < hidden; ++c)
            cell.recurrent_weights(r, c) = uniform_range(rng, -bound, bound);
    }
    cell.bias = Eigen::VectorXd::Zero(rows);
    if (kind == CellKind::Lstm)
        cell.bias.segment(hidden, hidden).setOnes();  // forget gate starts open
    return cell;
}

void fill_uniform(Eigen::MatrixXd& m, std::mt19937_64& rng, double bound) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            m(r, c) = uniform_range(rng, -bound, bound);
}

}  // namespace

NeuralModel init_neural(const NeuralConfig& cfg, int feature_dim,
                        std::uint64_t embed_digest) {
    cfg.validate();
    if (feature_dim < 1) throw DataError("init_neural: feature dim must be >= 1");

    NeuralModel model;
    model.arch = cfg.arch;
    model.feature_dim = feature_dim;
    model.embed_digest = embed_digest;

    const int hidden = cfg.hidden;
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
    std::mt19937_64 rng(cfg.seed);

    const CellKind enc_kind =
        cfg.arch == NeuralArch::Bilstm ? CellKind::Lstm : CellKind::TanhRnn;
    model.encoder_fwd = make_cell(enc_kind, feature_dim, hidden, rng, bound);
    model.encoder_bwd = make_cell(enc_kind, feature_dim, hidden, rng, bound);

    if (cfg.arch == NeuralArch::Attention) {
        const int att = cfg.attention_dim > 0 ? cfg.attention_dim : hidden;
        model.attention.decoder_proj.resize(att, hidden);
        model.attention.encoder_proj.resize(att, 2 * hidden);
        fill_uniform(model.attention.decoder_proj, rng, bound);
        fill_uniform(model.attention.encoder_proj, rng, bound);
        model.attention.score_vector.resize(att);
        for (Eigen::Index i = 0; i < att; ++i)
            model.attention.score_vector[i] = uniform_range(rng, -bound, bound);

        model.decoder =
            make_cell(CellKind::TanhRnn, cfg.tag_embed_dim + 2 * hidden, hidden, rng, bound);
        model.tag_embeddings.resize(kNumTags, cfg.tag_embed_dim);
        fill_uniform(model.tag_embeddings, rng, bound);
        model.start_embedding.resize(cfg.tag_embed_dim);
        for (Eigen::Index i = 0; i < cfg.tag_embed_dim; ++i)
            model.start_embedding[i] = uniform_range(rng, -bound, bound);

        model.output_weights.resize(kNumTags, hidden);
    } else {
        model.output_weights.resize(kNumTags, 2 * hidden);
    }
    fill_uniform(model.output_weights, rng, bound);
    model.output_bias = Eigen::VectorXd::Zero(kNumTags);
    return model;
}

double loss_and_gradient(const NeuralModel& model, const Eigen::MatrixXd& features,
                         const std::vector<LangTag>& gold, NeuralGradient& grad) {
    const Eigen::Index steps = features.rows();
    if (steps == 0) throw DataError("loss_and_gradient: empty sentence");
    if (static_cast<Eigen::Index>(gold.size()) != steps)
        throw DataError("loss_and_gradient: gold length mismatch");
    if (features.cols() != model.feature_dim)
        throw DataError("loss_and_gradient: feature dim " + std::to_string(features.cols()) +
                        " does not match model dim " + std::to_string(model.feature_dim));

    NeuralModel& g = grad.shadow;
    const auto traced = encode_traced(features, model.encoder_fwd, model.encoder_bwd);
    const Eigen::MatrixXd& combined = traced.state.combined;
    const int hidden = model.hidden_size();
    double loss = 0.0;

    Eigen::MatrixXd dcombined = Eigen::MatrixXd::Zero(steps, 2 * hidden);

    if (model.arch == NeuralArch::Bilstm) {
        for (Eigen::Index t = 0; t < steps; ++t) {
            const Eigen::VectorXd z = combined.row(t);
            Eigen::VectorXd residual =
                softmax_vec(model.output_weights * z + model.output_bias);
            loss -= std::log(std::max(residual[static_cast<int>(gold[t])], 1e-300));
            residual[static_cast<int>(gold[t])] -= 1.0;
            g.output_weights.noalias() += residual * z.transpose();
            g.output_bias += residual;
            dcombined.row(t) = model.output_weights.transpose() * residual;
        }
    } else {
        // teacher-forced decoder pass
        const int embed_dim = static_cast<int>(model.start_embedding.size());
        const Eigen::MatrixXd enc_proj_cols =
            model.attention.encoder_proj * combined.transpose();  // A x T

        Eigen::MatrixXd states(steps, hidden);
        Eigen::MatrixXd inputs(steps, embed_dim + 2 * hidden);
        Eigen::MatrixXd alphas(steps, steps);
        Eigen::MatrixXd dists(steps, kNumTags);

        Eigen::VectorXd state = Eigen::VectorXd::Zero(hidden);
        for (Eigen::Index t = 0; t < steps; ++t) {
            const Eigen::VectorXd state_proj = model.attention.decoder_proj * state;
            Eigen::MatrixXd u = enc_proj_cols;
            u.colwise() += state_proj;
            u = u.array().tanh();
            const Eigen::VectorXd alpha =
                softmax_vec(u.transpose() * model.attention.score_vector);
            const Eigen::VectorXd context = combined.transpose() * alpha;

            Eigen::VectorXd x(embed_dim + 2 * hidden);
            x.head(embed_dim) = t == 0 ? model.start_embedding
                                       : Eigen::VectorXd(model.tag_embeddings.row(
                                             static_cast<int>(gold[t - 1])));
            x.tail(2 * hidden) = context;

            state = (model.decoder.input_weights * x +
                     model.decoder.recurrent_weights * state + model.decoder.bias)
                        .array()
                        .tanh();
            const Eigen::VectorXd p =
                softmax_vec(model.output_weights * state + model.output_bias);
            loss -= std::log(std::max(p[static_cast<int>(gold[t])], 1e-300));

            states.row(t) = state;
            inputs.row(t) = x;
            alphas.row(t) = alpha;
            dists.row(t) = p;
        }

        Eigen::VectorXd ds_carry = Eigen::VectorXd::Zero(hidden);
        for (Eigen::Index t = steps - 1; t >= 0; --t) {
            const Eigen::VectorXd s_t = states.row(t);
            const Eigen::VectorXd s_prev =
                t > 0 ? Eigen::VectorXd(states.row(t - 1)) : Eigen::VectorXd::Zero(hidden);

            Eigen::VectorXd dout = dists.row(t);
            dout[static_cast<int>(gold[t])] -= 1.0;
            g.output_weights.noalias() += dout * s_t.transpose();
            g.output_bias += dout;

            const Eigen::VectorXd ds = model.output_weights.transpose() * dout + ds_carry;
            const Eigen::VectorXd dpre =
                (ds.array() * (1.0 - s_t.array() * s_t.array())).matrix();

            g.decoder.input_weights.noalias() += dpre * inputs.row(t);
            g.decoder.recurrent_weights.noalias() += dpre * s_prev.transpose();
            g.decoder.bias += dpre;

            const Eigen::VectorXd dx = model.decoder.input_weights.transpose() * dpre;
            Eigen::VectorXd ds_prev = model.decoder.recurrent_weights.transpose() * dpre;

            if (t == 0)
                g.start_embedding += dx.head(embed_dim);
            else
                g.tag_embeddings.row(static_cast<int>(gold[t - 1])) +=
                    dx.head(embed_dim);

            const Eigen::VectorXd dcontext = dx.tail(2 * hidden);
            const Eigen::VectorXd alpha = alphas.row(t);

            // context = combined^T alpha
            const Eigen::VectorXd dalpha = combined * dcontext;
            dcombined.noalias() += alpha * dcontext.transpose();

            // softmax backward
            const double inner = alpha.dot(dalpha);
            const Eigen::VectorXd dscore =
                (alpha.array() * (dalpha.array() - inner)).matrix();

            // scores_i = v . tanh(Wd s_prev + We h_i), recomputed from caches
            const Eigen::VectorXd state_proj = model.attention.decoder_proj * s_prev;
            Eigen::MatrixXd u = enc_proj_cols;
            u.colwise() += state_proj;
            u = u.array().tanh();

            g.attention.score_vector.noalias() += u * dscore;
            const Eigen::MatrixXd du =
                (model.attention.score_vector * dscore.transpose()).array() *
                (1.0 - u.array() * u.array());
            const Eigen::VectorXd du_sum = du.rowwise().sum();
            g.attention.decoder_proj.noalias() += du_sum * s_prev.transpose();
            g.attention.encoder_proj.noalias() += du * combined;
            ds_prev.noalias() += model.attention.decoder_proj.transpose() * du_sum;
            dcombined.noalias() += (model.attention.encoder_proj.transpose() * du).transpose();

            ds_carry = ds_prev;
        }
    }

    backprop_cell(model.encoder_fwd, features, traced.fwd, false,
                  dcombined.leftCols(hidden), g.encoder_fwd);
    backprop_cell(model.encoder_bwd, features, traced.bwd, true,
                  dcombined.rightCols(hidden), g.encoder_bwd);
    return loss;
}

NeuralModel train_neural(const Corpus& train, const EmbeddingTable& table,
                         const NeuralConfig& cfg, std::vector<double>* epoch_losses) {
    cfg.validate();
    if (!train.annotated) throw DataError("train_neural requires an annotated corpus");
    if (train.sentences.empty()) throw DataError("train_neural: empty corpus");
    if (table.dim < 1) throw DataError("train_neural: embedding table is empty");

    std::vector<Eigen::MatrixXd> features;
    features.reserve(train.sentences.size());
    std::size_t tokens = 0;
    for (const auto& sentence : train.sentences) {
        features.push_back(sentence_features(table, sentence));
        tokens += sentence.size();
    }

    NeuralModel model = init_neural(cfg, table.dim, table.digest());
    NeuralGradient grad(model);
    auto model_view = param_blocks(model);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double epoch_loss = 0.0;
        for (std::size_t s = 0; s < train.sentences.size(); ++s) {
            grad.set_zero();
            epoch_loss +=
                loss_and_gradient(model, features[s], train.sentences[s].tags, grad);

            const double norm = std::sqrt(grad.squared_norm());
            const double scale =
                norm > cfg.clip ? cfg.step * cfg.clip / norm : cfg.step;
            auto grad_view = grad.blocks();
            for (std::size_t b = 0; b < model_view.size(); ++b)
                for (Eigen::Index i = 0; i < model_view[b].size(); ++i)
                    model_view[b].data[i] -= scale * grad_view[b].data[i];
        }
        if (epoch_losses)
            epoch_losses->push_back(epoch_loss / static_cast<double>(tokens));
    }
    return model;
}

std::vector<LangTag> tag_neural(const NeuralModel& model, const EmbeddingTable& table,
                                const Sentence& sentence) {
    require_embedding_match(model, table);
    const Eigen::MatrixXd features = sentence_features(table, sentence);
    const EncoderState enc = encode(features, model.encoder_fwd, model.encoder_bwd);
    return model.arch == NeuralArch::Bilstm ? bilstm_distributions(enc, model).tags
                                            : decode_tags(enc, model).tags;
}

std::vector<LangTag> tag_bilstm(const NeuralModel& model, const EmbeddingTable& table,
                                const Sentence& sentence) {
    if (model.arch != NeuralArch::Bilstm)
        throw DataError("tag_bilstm requires a bilstm-arch model");
    return tag_neural(model, table, sentence);
}

void require_embedding_match(const NeuralModel& model, const EmbeddingTable& table) {
    if (model.embed_digest != table.digest())
        throw DataError(
            "embedding table does not match the one this model was trained with");
}

void save_neural(const NeuralModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file: " + path.string());
    NeuralModel& mutable_model = const_cast<NeuralModel&>(model);
    auto blocks = param_blocks(mutable_model);

    out << "CMNN 1 " << arch_name(model.arch) << "\n";
    out << "embed_digest " << model.embed_digest << "\n";
    out << "feature_dim " << model.feature_dim << "\n";
    out << "hidden " << model.hidden_size() << "\n";
    out << "tag_embed "
        << (model.arch == NeuralArch::Attention ? model.start_embedding.size() : 0) << "\n";
    out << "attention_dim "
        << (model.arch == NeuralArch::Attention ? model.attention.score_vector.size() : 0)
        << "\n";
    out << "params " << blocks.size() << "\n";
    for (const auto& block : blocks) {
        out << "param " << block.name << ' ' << block.rows << ' ' << block.cols << "\n";
        // column-major storage; emit row by row
        for (Eigen::Index r = 0; r < block.rows; ++r) {
            for (Eigen::Index c = 0; c < block.cols; ++c) {
                if (c) out << ' ';
                out << fmt_double(block.data[c * block.rows + r]);
            }
            out << "\n";
        }
    }
    if (!out) throw DataError("write failed: " + path.string());
}

namespace {

// Zero-valued model with the right shapes for loading.
NeuralModel shape_neural(NeuralArch arch, int feature_dim, int hidden, int tag_embed,
                         int attention_dim) {
    NeuralConfig cfg;
    cfg.arch = arch;
    cfg.hidden = hidden;
    cfg.tag_embed_dim = std::max(tag_embed, 1);
    cfg.attention_dim = attention_dim;
    NeuralModel model = init_neural(cfg, feature_dim, 0);
    for (auto& block : param_blocks(model))
        std::fill(block.data, block.data + block.size(), 0.0);
    return model;
}

}  // namespace

NeuralModel load_neural(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path.string());
    std::string line;
    auto next_line = [&]() -> std::string& {
        if (!std::getline(in, line))
            throw DataError(path.string() + ": truncated neural model file");
        return line;
    };
    auto scalar_line = [&](std::string_view key) -> std::string {
        auto fields = split_ws(next_line());
        if (fields.size() != 2 || fields[0] != key)
            throw DataError(path.string() + ": expected " + std::string(key) + " line");
        return std::string(fields[1]);
    };

    auto header = split_ws(next_line());
    if (header.size() != 3 || header[0] != "CMNN" || header[1] != "1")
        throw DataError(path.string() + ": not a CMNN 1 model file");
    auto arch = parse_arch(header[2]);
    if (!arch) throw DataError(path.string() + ": unknown arch \"" + std::string(header[2]) + "\"");

    std::uint64_t digest = 0;
    {
        const std::string v = scalar_line("embed_digest");
        digest = std::stoull(v);
    }
    const int feature_dim = static_cast<int>(parse_long(scalar_line("feature_dim")));
    const int hidden = static_cast<int>(parse_long(scalar_line("hidden")));
    const int tag_embed = static_cast<int>(parse_long(scalar_line("tag_embed")));
    const int attention_dim = static_cast<int>(parse_long(scalar_line("attention_dim")));

    NeuralModel model = shape_neural(*arch, feature_dim, hidden, tag_embed, attention_dim);
    model.embed_digest = digest;

    auto blocks = param_blocks(model);
    std::map<std::string, ParamBlock*> by_name;
    for (auto& block : blocks) by_name[block.name] = &block;

    const long count = parse_long(scalar_line("params"));
    if (count != static_cast<long>(blocks.size()))
        throw DataError(path.string() + ": expected " + std::to_string(blocks.size()) +
                        " parameter blocks, file has " + std::to_string(count));
    for (long b = 0; b < count; ++b) {
        auto fields = split_ws(next_line());
        if (fields.size() != 4 || fields[0] != "param")
            throw DataError(path.string() + ": malformed param header");
        auto it = by_name.find(std::string(fields[1]));
        if (it == by_name.end())
            throw DataError(path.string() + ": unknown parameter block \"" +
                            std::string(fields[1]) + "\"");
        ParamBlock& block = *it->second;
        if (parse_long(fields[2]) != block.rows || parse_long(fields[3]) != block.cols)
            throw DataError(path.string() + ": shape mismatch for block " + block.name);
        for (Eigen::Index r = 0; r < block.rows; ++r) {
            auto values = split_ws(next_line());
            if (values.size() != static_cast<std::size_t>(block.cols))
                throw DataError(path.string() + ": malformed row in block " + block.name);
            for (Eigen::Index c = 0; c < block.cols; ++c)
                block.data[c * block.rows + r] = parse_double(values[c]);
        }
    }
    return model;
}

}  // namespace cmtag
