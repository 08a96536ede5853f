#pragma once

#include <string>

#include "spf/mixture.hpp"

namespace spf::filters {

enum class FilterKind {
    ConstantThreshold,  // "cct"
    RampUp,             // "rampup-linear" / "rampup-sigmoid"
    ConfidenceWeight,   // "cw"
    Ctr,                // "ctr-linear" / "ctr-sigmoid"
    Spf,                // "spf"
    SpfHardMask,        // "spf-hard"
};

enum class RampShape { Linear, Sigmoid };

/// One of the six pseudo-label weighting rules plus its parameters. Fields are
/// meaningful only for the kinds that use them (enforced at config parse time).
struct FilterStrategy {
    FilterKind kind = FilterKind::Spf;
    double tau = 0.95;            // ConstantThreshold, Ctr (ramp endpoint)
    RampShape ramp_shape = RampShape::Linear;  // RampUp, Ctr
    double ramp_fraction = 0.4;   // RampUp, Ctr: fraction of total epochs
    double mask_threshold = 0.2;  // SpfHardMask
};

std::string strategy_name(const FilterStrategy& s);
/// Accepts: cct, rampup-linear, rampup-sigmoid, cw, ctr-linear, ctr-sigmoid,
/// spf, spf-hard. Parameters take their defaults.
FilterStrategy strategy_from_name(const std::string& name);

bool strategy_uses_meta_model(FilterKind kind);
bool strategy_uses_tau(FilterKind kind);
bool strategy_uses_ramp(FilterKind kind);

/// Per-epoch view the weighting rules see. `epoch` is the 0-based index of the
/// running epoch; `model` is the current meta model, null before the first fit.
struct FilterContext {
    int epoch = 0;
    int total_epochs = 1;
    const mixture::MixtureModel* model = nullptr;
};

double weight_constant_threshold(double confidence, double tau);

/// min(t/ramp_len, 1) for Linear; exp(-5(1-p)^2) of that progress for Sigmoid.
double ramp_value(double t, double ramp_len, RampShape shape);

double weight_ramp_up(const FilterContext& ctx, RampShape shape, double ramp_fraction);

double weight_confidence(double confidence);

/// Indicator(confidence >= tau_end * ramp(t)).
double weight_ctr(double confidence, const FilterContext& ctx, RampShape shape,
                  double ramp_fraction, double tau_end);

/// Posterior of the pseudo-label being correct; 1.0 before the first meta fit.
double weight_spf(double confidence, const FilterContext& ctx);

double hard_mask(double weight, double mask_threshold);

/// Dispatch through a strategy. Pure in (confidence, ctx, strategy).
double filter_weight(double confidence, const FilterContext& ctx,
                     const FilterStrategy& strategy);

}  // namespace spf::filters
