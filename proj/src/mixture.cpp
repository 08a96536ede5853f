#include "spf/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace spf::mixture {

namespace {

constexpr double kTinyDensity = 1e-300;

double clamp_shape(double v, int* clamp_events) {
    if (v < kMinShape || v > kMaxShape || !std::isfinite(v)) {
        if (clamp_events) ++*clamp_events;
        if (!std::isfinite(v)) return kMaxShape;
        return std::clamp(v, kMinShape, kMaxShape);
    }
    return v;
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    double mass = 0.0;
};

Moments weighted_moments(const std::vector<double>& scores,
                         const std::vector<std::array<double, 2>>& rows, int j) {
    Moments m;
    for (size_t i = 0; i < scores.size(); ++i) m.mass += rows[i][j];
    if (m.mass <= 0.0) return m;
    for (size_t i = 0; i < scores.size(); ++i) m.mean += rows[i][j] * scores[i];
    m.mean /= m.mass;
    for (size_t i = 0; i < scores.size(); ++i) {
        const double d = scores[i] - m.mean;
        m.variance += rows[i][j] * d * d;
    }
    m.variance /= m.mass;
    return m;
}

Moments plain_moments(const double* begin, const double* end) {
    Moments m;
    m.mass = static_cast<double>(end - begin);
    for (const double* p = begin; p != end; ++p) m.mean += *p;
    m.mean /= m.mass;
    for (const double* p = begin; p != end; ++p) {
        const double d = *p - m.mean;
        m.variance += d * d;
    }
    m.variance /= m.mass;
    return m;
}

void floor_and_normalize_weights(std::array<double, 2>& w) {
    w[0] = std::max(w[0], kWeightFloor);
    w[1] = std::max(w[1], kWeightFloor);
    const double s = w[0] + w[1];
    w[0] /= s;
    w[1] /= s;
}

}  // namespace

std::string family_name(MixtureFamily family) {
    return family == MixtureFamily::Beta ? "beta" : "gauss";
}

MixtureFamily family_from_name(const std::string& name) {
    if (name == "beta") return MixtureFamily::Beta;
    if (name == "gauss") return MixtureFamily::Gauss;
    throw std::invalid_argument("unknown mixture family: " + name);
}

double clip_score(double z) {
    return std::clamp(z, kScoreClip, 1.0 - kScoreClip);
}

double beta_pdf(double z, const BetaParams& p) {
    if (!(p.alpha > 0.0) || !(p.beta > 0.0)) {
        throw std::invalid_argument("beta_pdf: shape parameters must be positive");
    }
    if (!(z > 0.0) || !(z < 1.0)) {
        throw std::domain_error("beta_pdf: z must lie in (0,1)");
    }
    // log-space evaluation; direct Gamma ratios overflow for large shapes
    const double log_norm =
        std::lgamma(p.alpha + p.beta) - std::lgamma(p.alpha) - std::lgamma(p.beta);
    const double log_pdf =
        log_norm + (p.alpha - 1.0) * std::log(z) + (p.beta - 1.0) * std::log1p(-z);
    return std::exp(log_pdf);
}

double gauss_pdf(double z, const GaussParams& p) {
    if (!(p.variance > 0.0)) {
        throw std::invalid_argument("gauss_pdf: variance must be positive");
    }
    const double d = z - p.mean;
    return std::exp(-0.5 * d * d / p.variance) /
           std::sqrt(2.0 * std::numbers::pi * p.variance);
}

double MixtureModel::component_mean(int j) const {
    return family == MixtureFamily::Beta ? beta[j].mean() : gauss[j].mean;
}

double MixtureModel::component_pdf(double z, int j) const {
    if (family == MixtureFamily::Beta) return beta_pdf(clip_score(z), beta[j]);
    return gauss_pdf(z, gauss[j]);
}

double MixtureModel::pdf(double z) const {
    return weights[0] * component_pdf(z, 0) + weights[1] * component_pdf(z, 1);
}

int MixtureModel::correct_component() const {
    const double m0 = component_mean(0);
    const double m1 = component_mean(1);
    if (m0 != m1) return m0 > m1 ? 0 : 1;
    if (weights[0] != weights[1]) return weights[0] > weights[1] ? 0 : 1;
    return 1;
}

bool MixtureModel::valid() const {
    if (!(weights[0] >= 0.0) || !(weights[1] >= 0.0)) return false;
    if (std::abs(weights[0] + weights[1] - 1.0) > 1e-9) return false;
    if (family == MixtureFamily::Beta) {
        for (const auto& p : beta) {
            if (!(p.alpha > 0.0) || !(p.beta > 0.0)) return false;
        }
    } else {
        for (const auto& p : gauss) {
            if (!(p.variance > 0.0)) return false;
        }
    }
    return true;
}

MixtureModel uniform_prior_model(MixtureFamily family) {
    MixtureModel m;
    m.family = family;
    m.beta = {BetaParams{1.0, 1.0}, BetaParams{1.0, 1.0}};
    m.gauss = {GaussParams{0.5, 1.0}, GaussParams{0.5, 1.0}};
    m.weights = {0.5, 0.5};
    return m;
}

Responsibilities e_step(const std::vector<double>& scores, const MixtureModel& model) {
    if (scores.empty()) throw std::invalid_argument("e_step: scores must be nonempty");
    if (!model.valid()) throw std::invalid_argument("e_step: invalid model");

    Responsibilities out;
    out.rows.resize(scores.size());
    for (size_t i = 0; i < scores.size(); ++i) {
        const double p0 = model.weights[0] * model.component_pdf(scores[i], 0);
        const double p1 = model.weights[1] * model.component_pdf(scores[i], 1);
        const double denom = p0 + p1;
        if (denom <= 0.0 || !std::isfinite(denom)) {
            out.rows[i] = model.weights;  // both densities vanished; fall back to priors
            ++out.degenerate_rows;
        } else {
            out.rows[i] = {p0 / denom, p1 / denom};
        }
    }
    return out;
}

BetaParams beta_from_moments(double mean, double variance, int* clamp_events) {
    const double bound = mean * (1.0 - mean);
    double ratio;
    if (variance <= 0.0) {
        // point mass: shapes diverge, clamp below
        if (clamp_events) ++*clamp_events;
        ratio = std::numeric_limits<double>::infinity();
    } else {
        if (variance >= bound) {
            // inadmissible for a Beta; pull just inside the boundary
            if (clamp_events) ++*clamp_events;
            variance = 0.999 * bound;
        }
        ratio = bound / variance - 1.0;
    }
    BetaParams p;
    p.alpha = clamp_shape(mean * ratio, clamp_events);
    p.beta = clamp_shape((1.0 - mean) * ratio, clamp_events);
    return p;
}

MStepResult m_step(const std::vector<double>& scores, const Responsibilities& resp,
                   MixtureFamily family) {
    if (scores.size() != resp.rows.size()) {
        throw std::invalid_argument("m_step: scores and responsibilities disagree");
    }
    if (scores.size() < 2) {
        throw std::invalid_argument("m_step: need at least 2 scores");
    }

    MStepResult out;
    out.model.family = family;
    const double n = static_cast<double>(scores.size());
    for (int j = 0; j < 2; ++j) {
        Moments m = weighted_moments(scores, resp.rows, j);
        out.model.weights[j] = m.mass / n;
        if (m.mass <= 0.0) {
            // dead component: keep a vague default, let the weight floor revive it
            ++out.clamp_events;
            m.mean = 0.5;
            m.variance = 1.0 / 12.0;
        }
        if (family == MixtureFamily::Beta) {
            out.model.beta[j] = beta_from_moments(m.mean, m.variance, &out.clamp_events);
        } else {
            if (m.variance < kMinGaussVariance) {
                m.variance = kMinGaussVariance;
                ++out.clamp_events;
            }
            out.model.gauss[j] = GaussParams{m.mean, m.variance};
        }
    }
    floor_and_normalize_weights(out.model.weights);
    return out;
}

MixtureModel median_split_init(std::vector<double> clipped_scores, MixtureFamily family) {
    if (clipped_scores.empty()) {
        throw std::invalid_argument("median_split_init: scores must be nonempty");
    }
    std::sort(clipped_scores.begin(), clipped_scores.end());
    const size_t n = clipped_scores.size();
    const size_t half = std::max<size_t>(n / 2, 1);  // n==1: both halves see the point
    const Moments lo = plain_moments(clipped_scores.data(), clipped_scores.data() + half);
    const Moments hi = plain_moments(clipped_scores.data() + std::min(half, n - 1),
                                     clipped_scores.data() + n);

    MixtureModel m;
    m.family = family;
    m.weights = {0.5, 0.5};
    if (family == MixtureFamily::Beta) {
        m.beta[0] = beta_from_moments(lo.mean, lo.variance);
        m.beta[1] = beta_from_moments(hi.mean, hi.variance);
    } else {
        m.gauss[0] = GaussParams{lo.mean, std::max(lo.variance, kMinGaussVariance)};
        m.gauss[1] = GaussParams{hi.mean, std::max(hi.variance, kMinGaussVariance)};
    }
    return m;
}

double log_likelihood(const std::vector<double>& scores, const MixtureModel& model) {
    double ll = 0.0;
    for (double s : scores) ll += std::log(std::max(model.pdf(s), kTinyDensity));
    return ll;
}

FitResult fit_em(const std::vector<double>& scores, MixtureFamily family,
                 const FitOptions& opts) {
    std::vector<double> clipped(scores.size());
    std::transform(scores.begin(), scores.end(), clipped.begin(), clip_score);

    FitResult out;
    if (static_cast<int>(clipped.size()) < opts.min_fit_size) {
        out.model = opts.init.value_or(uniform_prior_model(family));
        out.skipped = true;
        return out;
    }

    out.model = opts.init.value_or(median_split_init(clipped, family));
    out.log_likelihood.push_back(log_likelihood(clipped, out.model));
    for (int it = 0; it < opts.iterations; ++it) {
        Responsibilities resp = e_step(clipped, out.model);
        out.degeneracies += resp.degenerate_rows;
        MStepResult m = m_step(clipped, resp, family);
        out.degeneracies += m.clamp_events;
        out.model = m.model;
        out.log_likelihood.push_back(log_likelihood(clipped, out.model));
    }
    return out;
}

double posterior_correct(const MixtureModel& model, double confidence) {
    if (!model.valid()) throw std::invalid_argument("posterior_correct: invalid model");
    const int j = model.correct_component();
    const double pj = model.weights[j] * model.component_pdf(confidence, j);
    const double denom = model.weights[0] * model.component_pdf(confidence, 0) +
                         model.weights[1] * model.component_pdf(confidence, 1);
    if (denom <= 0.0 || !std::isfinite(denom)) return model.weights[j];
    return pj / denom;
}

}  // namespace spf::mixture
