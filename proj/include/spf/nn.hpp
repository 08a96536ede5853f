#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spf::nn {

/// Dense row-major matrix of doubles; rows are samples.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double* row(int i) { return data.data() + static_cast<size_t>(i) * cols; }
    const double* row(int i) const { return data.data() + static_cast<size_t>(i) * cols; }
    double& at(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
    double at(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }
};

enum class Activation { Tanh };
std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

/// Fully-connected softmax classifier with a flat parameter vector
/// (per layer: weight matrix out x in, then bias). Gradients are analytic.
class MlpClassifier {
public:
    MlpClassifier() = default;
    /// Zero-initialized parameters.
    explicit MlpClassifier(std::vector<int> layer_sizes, Activation act = Activation::Tanh);
    /// Glorot-uniform weight initialization, zero biases; deterministic per seed.
    static MlpClassifier glorot_init(std::vector<int> layer_sizes, uint64_t seed,
                                     Activation act = Activation::Tanh);

    const std::vector<int>& layer_sizes() const { return layer_sizes_; }
    Activation activation() const { return activation_; }
    int input_dim() const { return layer_sizes_.front(); }
    int num_classes() const { return layer_sizes_.back(); }
    int num_layers() const { return static_cast<int>(layer_sizes_.size()) - 1; }

    std::vector<double>& parameters() { return params_; }
    const std::vector<double>& parameters() const { return params_; }

    /// Softmax probabilities, one row per input row.
    Matrix forward(const Matrix& inputs) const;
    Matrix logits(const Matrix& inputs) const;

    size_t weight_offset(int layer) const { return weight_offsets_[layer]; }
    size_t bias_offset(int layer) const { return bias_offsets_[layer]; }

private:
    std::vector<int> layer_sizes_;
    Activation activation_ = Activation::Tanh;
    std::vector<double> params_;
    std::vector<size_t> weight_offsets_;
    std::vector<size_t> bias_offsets_;
};

struct LabeledBatch {
    Matrix inputs;
    std::vector<int> labels;
};

/// Unlabeled batch as the student sees it: augmented inputs, pseudo-label
/// target distributions (rows sum to 1), and per-sample filtering weights.
struct PseudoBatch {
    Matrix inputs;
    Matrix targets;
    std::vector<double> weights;
};

struct LossBreakdown {
    double supervised = 0.0;
    double unsupervised = 0.0;
    double lambda = 0.0;
    double total = 0.0;  // supervised + lambda * unsupervised
};

/// Mean cross-entropy over the labeled batch plus lambda times the weighted
/// mean cross-entropy over the pseudo-labeled batch. The labeled batch must be
/// nonempty; the pseudo batch may be empty.
LossBreakdown ssl_loss(const MlpClassifier& model, const LabeledBatch& labeled,
                       const PseudoBatch& pseudo, double lambda);

/// Cross-entropy of each input row against its target distribution row.
std::vector<double> per_sample_cross_entropy(const MlpClassifier& model,
                                             const Matrix& inputs, const Matrix& targets);

/// Gradient of ssl_loss w.r.t. the flat parameter vector. Optionally reports
/// the loss breakdown and per-sample unweighted pseudo-batch cross-entropies.
std::vector<double> ssl_gradient(const MlpClassifier& model, const LabeledBatch& labeled,
                                 const PseudoBatch& pseudo, double lambda,
                                 LossBreakdown* loss_out = nullptr,
                                 std::vector<double>* pseudo_ce_out = nullptr);

struct SgdOptions {
    double momentum = 0.9;
    double eta0 = 0.03;
    double weight_decay = 5e-4;
    bool nesterov = true;
};

struct SgdState {
    SgdOptions options;
    std::vector<double> momentum_buffer;  // sized lazily to match the parameters
};

/// One Nesterov-momentum SGD step with decoupled weight decay on the combined
/// objective. Throws std::runtime_error if the gradient is non-finite.
LossBreakdown backward_and_step(MlpClassifier& model, SgdState& state,
                                const LabeledBatch& labeled, const PseudoBatch& pseudo,
                                double lambda, double lr,
                                std::vector<double>* pseudo_ce_out = nullptr);

/// eta0 * cos(7*pi*k / (16*K)); positive and strictly decreasing on [0, K].
double cosine_lr(long step, long total_steps, double eta0);

}  // namespace spf::nn
