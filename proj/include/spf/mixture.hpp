#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace spf::mixture {

enum class MixtureFamily { Beta, Gauss };

std::string family_name(MixtureFamily family);
MixtureFamily family_from_name(const std::string& name);

/// Shape parameters of a Beta distribution on (0,1).
struct BetaParams {
    double alpha = 1.0;
    double beta = 1.0;

    double mean() const { return alpha / (alpha + beta); }
    double variance() const {
        const double s = alpha + beta;
        return alpha * beta / (s * s * (s + 1.0));
    }
};

struct GaussParams {
    double mean = 0.0;
    double variance = 1.0;
};

// Numeric guards used by fitting and evaluation.
inline constexpr double kScoreClip = 1e-4;     // scores live in [kScoreClip, 1-kScoreClip]
inline constexpr double kMinShape = 0.05;
inline constexpr double kMaxShape = 100.0;
inline constexpr double kWeightFloor = 1e-6;
inline constexpr double kMinGaussVariance = 1e-12;
inline constexpr int kDefaultEmIterations = 10;
inline constexpr int kDefaultMinFitSize = 20;

double clip_score(double z);

/// Two-component mixture over scalar scores. Both components share one family;
/// only the matching parameter array is meaningful.
struct MixtureModel {
    MixtureFamily family = MixtureFamily::Beta;
    std::array<BetaParams, 2> beta{};
    std::array<GaussParams, 2> gauss{};
    std::array<double, 2> weights{0.5, 0.5};

    double component_mean(int j) const;
    /// Component density with Beta inputs clipped into [kScoreClip, 1-kScoreClip].
    double component_pdf(double z, int j) const;
    /// Weighted mixture density.
    double pdf(double z) const;
    /// Index of the component that models correct pseudo-labels: the one with
    /// the larger mean; ties go to the larger weight, then to index 1.
    int correct_component() const;
    bool valid() const;
};

MixtureModel uniform_prior_model(MixtureFamily family);

/// Beta density. Strict domain: throws std::domain_error unless 0 < z < 1,
/// std::invalid_argument on nonpositive shapes.
double beta_pdf(double z, const BetaParams& p);

/// Normal density. Throws std::invalid_argument on nonpositive variance.
double gauss_pdf(double z, const GaussParams& p);

/// Per-sample component responsibilities; every row sums to 1.
struct Responsibilities {
    std::vector<std::array<double, 2>> rows;
    int degenerate_rows = 0;  // samples where all component densities vanished
};

Responsibilities e_step(const std::vector<double>& scores, const MixtureModel& model);

struct MStepResult {
    MixtureModel model;
    int clamp_events = 0;
};

MStepResult m_step(const std::vector<double>& scores, const Responsibilities& resp,
                   MixtureFamily family);

/// Method-of-moments inversion for Beta shapes. Inadmissible variances
/// (var <= 0 or var >= mean(1-mean)) and out-of-range shapes are clamped;
/// each clamp increments *clamp_events when provided.
BetaParams beta_from_moments(double mean, double variance, int* clamp_events = nullptr);

struct FitOptions {
    int iterations = kDefaultEmIterations;
    int min_fit_size = kDefaultMinFitSize;
    /// Starting model. Defaults to a deterministic median-split initialization.
    std::optional<MixtureModel> init;
};

struct FitResult {
    MixtureModel model;
    bool skipped = false;    // sample too small, model is init (or uniform prior)
    int degeneracies = 0;    // clamp events plus degenerate E-step rows
    /// Data log-likelihood after initialization and after each EM iteration.
    std::vector<double> log_likelihood;
};

/// Fits a two-component mixture by expectation-maximization. Scores are
/// clipped into [kScoreClip, 1-kScoreClip] before fitting.
FitResult fit_em(const std::vector<double>& scores, MixtureFamily family,
                 const FitOptions& opts = {});

/// Deterministic initialization: component 0 from the lower half of the sorted
/// scores, component 1 from the upper half, weights (0.5, 0.5).
MixtureModel median_split_init(std::vector<double> clipped_scores, MixtureFamily family);

double log_likelihood(const std::vector<double>& scores, const MixtureModel& model);

/// Posterior that a pseudo-label with the given confidence is correct:
/// weights[j]*pdf(z|j) / sum_c weights[c]*pdf(z|c) for j = correct_component().
double posterior_correct(const MixtureModel& model, double confidence);

}  // namespace spf::mixture
