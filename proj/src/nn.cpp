#include "spf/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace spf::nn {

namespace {

void check_input_dim(const MlpClassifier& model, const Matrix& inputs) {
    if (inputs.cols != model.input_dim()) {
        throw std::invalid_argument("input dimension does not match the model");
    }
}

/// Row-wise softmax in place, stabilized by the row maximum.
void softmax_rows(Matrix& m) {
    for (int i = 0; i < m.rows; ++i) {
        double* r = m.row(i);
        const double mx = *std::max_element(r, r + m.cols);
        double sum = 0.0;
        for (int j = 0; j < m.cols; ++j) {
            r[j] = std::exp(r[j] - mx);
            sum += r[j];
        }
        for (int j = 0; j < m.cols; ++j) r[j] /= sum;
    }
}

double log_sum_exp(const double* v, int n) {
    const double mx = *std::max_element(v, v + n);
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += std::exp(v[j] - mx);
    return mx + std::log(s);
}

struct ForwardTrace {
    std::vector<Matrix> activations;  // activations[0] = inputs, then hidden outputs
    Matrix logits;
    Matrix probs;
};

// z_{l+1} = a_l W_l^T + b_l, tanh between layers, softmax at the top.
ForwardTrace forward_trace(const MlpClassifier& model, const Matrix& inputs) {
    check_input_dim(model, inputs);
    const auto& sizes = model.layer_sizes();
    const auto& p = model.parameters();
    ForwardTrace t;
    t.activations.push_back(inputs);
    for (int l = 0; l < model.num_layers(); ++l) {
        const Matrix& a = t.activations.back();
        const int in = sizes[l];
        const int out = sizes[l + 1];
        const double* W = p.data() + model.weight_offset(l);
        const double* b = p.data() + model.bias_offset(l);
        Matrix z(a.rows, out);
        for (int i = 0; i < a.rows; ++i) {
            const double* ar = a.row(i);
            double* zr = z.row(i);
            for (int o = 0; o < out; ++o) {
                double s = b[o];
                const double* w = W + static_cast<size_t>(o) * in;
                for (int k = 0; k < in; ++k) s += w[k] * ar[k];
                zr[o] = s;
            }
        }
        if (l + 1 < model.num_layers()) {
            for (double& v : z.data) v = std::tanh(v);
            t.activations.push_back(std::move(z));
        } else {
            t.logits = std::move(z);
        }
    }
    t.probs = t.logits;
    softmax_rows(t.probs);
    return t;
}

/// Backpropagates per-sample logit deltas (already scaled by the sample's loss
/// coefficient) through the trace, accumulating into the flat gradient.
void backprop(const MlpClassifier& model, const ForwardTrace& trace, Matrix delta,
              std::vector<double>& grad) {
    const auto& sizes = model.layer_sizes();
    const auto& p = model.parameters();
    for (int l = model.num_layers() - 1; l >= 0; --l) {
        const Matrix& a = trace.activations[l];
        const int in = sizes[l];
        const int out = sizes[l + 1];
        double* gW = grad.data() + model.weight_offset(l);
        double* gb = grad.data() + model.bias_offset(l);
        for (int i = 0; i < delta.rows; ++i) {
            const double* dr = delta.row(i);
            const double* ar = a.row(i);
            for (int o = 0; o < out; ++o) {
                const double d = dr[o];
                if (d == 0.0) continue;
                double* gw = gW + static_cast<size_t>(o) * in;
                for (int k = 0; k < in; ++k) gw[k] += d * ar[k];
                gb[o] += d;
            }
        }
        if (l == 0) break;
        const double* W = p.data() + model.weight_offset(l);
        Matrix next(delta.rows, in);
        for (int i = 0; i < delta.rows; ++i) {
            const double* dr = delta.row(i);
            const double* ar = a.row(i);
            double* nr = next.row(i);
            for (int k = 0; k < in; ++k) {
                double s = 0.0;
                for (int o = 0; o < out; ++o) s += dr[o] * W[static_cast<size_t>(o) * in + k];
                nr[k] = s * (1.0 - ar[k] * ar[k]);  // tanh'
            }
        }
        delta = std::move(next);
    }
}

}  // namespace

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::Tanh: return "tanh";
    }
    throw std::logic_error("unreachable");
}

Activation activation_from_name(const std::string& name) {
    if (name == "tanh") return Activation::Tanh;
    throw std::invalid_argument("unknown activation: " + name);
}

MlpClassifier::MlpClassifier(std::vector<int> layer_sizes, Activation act)
    : layer_sizes_(std::move(layer_sizes)), activation_(act) {
    if (layer_sizes_.size() < 2) {
        throw std::invalid_argument("MlpClassifier needs at least input and output layers");
    }
    for (int s : layer_sizes_) {
        if (s < 1) throw std::invalid_argument("layer sizes must be positive");
    }
    size_t offset = 0;
    for (size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
        weight_offsets_.push_back(offset);
        offset += static_cast<size_t>(layer_sizes_[l + 1]) * layer_sizes_[l];
        bias_offsets_.push_back(offset);
        offset += static_cast<size_t>(layer_sizes_[l + 1]);
    }
    params_.assign(offset, 0.0);
}

MlpClassifier MlpClassifier::glorot_init(std::vector<int> layer_sizes, uint64_t seed,
                                         Activation act) {
    MlpClassifier m(std::move(layer_sizes), act);
    std::mt19937_64 rng(seed);
    for (int l = 0; l < m.num_layers(); ++l) {
        const int in = m.layer_sizes_[l];
        const int out = m.layer_sizes_[l + 1];
        const double bound = std::sqrt(6.0 / (in + out));
        std::uniform_real_distribution<double> dist(-bound, bound);
        double* W = m.params_.data() + m.weight_offset(l);
        for (size_t k = 0; k < static_cast<size_t>(in) * out; ++k) W[k] = dist(rng);
    }
    return m;
}

Matrix MlpClassifier::logits(const Matrix& inputs) const {
    return forward_trace(*this, inputs).logits;
}

Matrix MlpClassifier::forward(const Matrix& inputs) const {
    return forward_trace(*this, inputs).probs;
}

LossBreakdown ssl_loss(const MlpClassifier& model, const LabeledBatch& labeled,
                       const PseudoBatch& pseudo, double lambda) {
    if (labeled.inputs.rows == 0) {
        throw std::invalid_argument("ssl_loss: labeled batch must be nonempty");
    }
    if (labeled.inputs.rows != static_cast<int>(labeled.labels.size())) {
        throw std::invalid_argument("ssl_loss: labeled batch size mismatch");
    }
    LossBreakdown out;
    out.lambda = lambda;

    Matrix lz = model.logits(labeled.inputs);
    for (int i = 0; i < lz.rows; ++i) {
        const double* r = lz.row(i);
        out.supervised += log_sum_exp(r, lz.cols) - r[labeled.labels[i]];
    }
    out.supervised /= lz.rows;

    if (pseudo.inputs.rows > 0) {
        if (pseudo.inputs.rows != pseudo.targets.rows ||
            pseudo.inputs.rows != static_cast<int>(pseudo.weights.size())) {
            throw std::invalid_argument("ssl_loss: pseudo batch size mismatch");
        }
        Matrix uz = model.logits(pseudo.inputs);
        for (int i = 0; i < uz.rows; ++i) {
            const double* r = uz.row(i);
            const double* q = pseudo.targets.row(i);
            const double lse = log_sum_exp(r, uz.cols);
            double ce = 0.0;
            for (int j = 0; j < uz.cols; ++j) ce += q[j] * (lse - r[j]);
            out.unsupervised += pseudo.weights[i] * ce;
        }
        out.unsupervised /= uz.rows;
    }

    out.total = out.supervised + lambda * out.unsupervised;
    return out;
}

std::vector<double> per_sample_cross_entropy(const MlpClassifier& model,
                                             const Matrix& inputs, const Matrix& targets) {
    Matrix z = model.logits(inputs);
    std::vector<double> out(z.rows, 0.0);
    for (int i = 0; i < z.rows; ++i) {
        const double* r = z.row(i);
        const double* q = targets.row(i);
        const double lse = log_sum_exp(r, z.cols);
        for (int j = 0; j < z.cols; ++j) out[i] += q[j] * (lse - r[j]);
    }
    return out;
}

std::vector<double> ssl_gradient(const MlpClassifier& model, const LabeledBatch& labeled,
                                 const PseudoBatch& pseudo, double lambda,
                                 LossBreakdown* loss_out,
                                 std::vector<double>* pseudo_ce_out) {
    if (labeled.inputs.rows == 0) {
        throw std::invalid_argument("ssl_gradient: labeled batch must be nonempty");
    }
    LossBreakdown loss;
    loss.lambda = lambda;
    std::vector<double> grad(model.parameters().size(), 0.0);

    {
        ForwardTrace t = forward_trace(model, labeled.inputs);
        const double coeff = 1.0 / t.probs.rows;
        Matrix delta = t.probs;
        for (int i = 0; i < delta.rows; ++i) {
            const double* r = t.logits.row(i);
            loss.supervised += log_sum_exp(r, t.logits.cols) - r[labeled.labels[i]];
            double* dr = delta.row(i);
            dr[labeled.labels[i]] -= 1.0;
            for (int j = 0; j < delta.cols; ++j) dr[j] *= coeff;
        }
        loss.supervised /= t.probs.rows;
        backprop(model, t, std::move(delta), grad);
    }

    if (pseudo.inputs.rows > 0) {
        ForwardTrace t = forward_trace(model, pseudo.inputs);
        const double inv_n = 1.0 / t.probs.rows;
        Matrix delta = t.probs;
        if (pseudo_ce_out) pseudo_ce_out->assign(t.probs.rows, 0.0);
        for (int i = 0; i < delta.rows; ++i) {
            const double* r = t.logits.row(i);
            const double* q = pseudo.targets.row(i);
            const double lse = log_sum_exp(r, t.logits.cols);
            double ce = 0.0;
            for (int j = 0; j < t.logits.cols; ++j) ce += q[j] * (lse - r[j]);
            if (pseudo_ce_out) (*pseudo_ce_out)[i] = ce;
            loss.unsupervised += pseudo.weights[i] * ce;
            const double coeff = lambda * pseudo.weights[i] * inv_n;
            double* dr = delta.row(i);
            for (int j = 0; j < delta.cols; ++j) dr[j] = coeff * (dr[j] - q[j]);
        }
        loss.unsupervised *= inv_n;
        backprop(model, t, std::move(delta), grad);
    } else if (pseudo_ce_out) {
        pseudo_ce_out->clear();
    }

    loss.total = loss.supervised + lambda * loss.unsupervised;
    if (loss_out) *loss_out = loss;
    return grad;
}

LossBreakdown backward_and_step(MlpClassifier& model, SgdState& state,
                                const LabeledBatch& labeled, const PseudoBatch& pseudo,
                                double lambda, double lr,
                                std::vector<double>* pseudo_ce_out) {
    if (!(lr > 0.0)) throw std::invalid_argument("backward_and_step: lr must be positive");
    LossBreakdown loss;
    std::vector<double> grad =
        ssl_gradient(model, labeled, pseudo, lambda, &loss, pseudo_ce_out);
    for (double g : grad) {
        if (!std::isfinite(g)) {
            throw std::runtime_error("backward_and_step: non-finite gradient");
        }
    }

    auto& p = model.parameters();
    auto& buf = state.momentum_buffer;
    if (buf.size() != p.size()) buf.assign(p.size(), 0.0);
    const double m = state.options.momentum;
    const double wd = state.options.weight_decay;
    for (size_t i = 0; i < p.size(); ++i) {
        buf[i] = m * buf[i] + grad[i];
        const double step = state.options.nesterov ? grad[i] + m * buf[i] : buf[i];
        p[i] -= lr * wd * p[i];  // decoupled decay, not part of the loss
        p[i] -= lr * step;
    }
    return loss;
}

double cosine_lr(long step, long total_steps, double eta0) {
    if (total_steps <= 0) throw std::invalid_argument("cosine_lr: total_steps must be > 0");
    if (step < 0 || step > total_steps) {
        throw std::invalid_argument("cosine_lr: step outside [0, total_steps]");
    }
    return eta0 * std::cos(7.0 * std::numbers::pi * static_cast<double>(step) /
                           (16.0 * static_cast<double>(total_steps)));
}

}  // namespace spf::nn
