#include "spf/filters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spf::filters {

namespace {

double ramp_length(const FilterContext& ctx, double ramp_fraction) {
    const double len = ramp_fraction * static_cast<double>(ctx.total_epochs);
    if (len < 1.0) {
        throw std::invalid_argument("ramp length must cover at least one epoch");
    }
    return len;
}

}  // namespace

std::string strategy_name(const FilterStrategy& s) {
    switch (s.kind) {
        case FilterKind::ConstantThreshold: return "cct";
        case FilterKind::RampUp:
            return s.ramp_shape == RampShape::Linear ? "rampup-linear" : "rampup-sigmoid";
        case FilterKind::ConfidenceWeight: return "cw";
        case FilterKind::Ctr:
            return s.ramp_shape == RampShape::Linear ? "ctr-linear" : "ctr-sigmoid";
        case FilterKind::Spf: return "spf";
        case FilterKind::SpfHardMask: return "spf-hard";
    }
    throw std::logic_error("unreachable");
}

FilterStrategy strategy_from_name(const std::string& name) {
    FilterStrategy s;
    if (name == "cct") {
        s.kind = FilterKind::ConstantThreshold;
    } else if (name == "rampup-linear") {
        s.kind = FilterKind::RampUp;
        s.ramp_shape = RampShape::Linear;
    } else if (name == "rampup-sigmoid") {
        s.kind = FilterKind::RampUp;
        s.ramp_shape = RampShape::Sigmoid;
    } else if (name == "cw") {
        s.kind = FilterKind::ConfidenceWeight;
    } else if (name == "ctr-linear") {
        s.kind = FilterKind::Ctr;
        s.ramp_shape = RampShape::Linear;
    } else if (name == "ctr-sigmoid") {
        s.kind = FilterKind::Ctr;
        s.ramp_shape = RampShape::Sigmoid;
    } else if (name == "spf") {
        s.kind = FilterKind::Spf;
    } else if (name == "spf-hard") {
        s.kind = FilterKind::SpfHardMask;
    } else {
        throw std::invalid_argument("unknown filter strategy: " + name);
    }
    return s;
}

bool strategy_uses_meta_model(FilterKind kind) {
    return kind == FilterKind::Spf || kind == FilterKind::SpfHardMask;
}

bool strategy_uses_tau(FilterKind kind) {
    return kind == FilterKind::ConstantThreshold || kind == FilterKind::Ctr;
}

bool strategy_uses_ramp(FilterKind kind) {
    return kind == FilterKind::RampUp || kind == FilterKind::Ctr;
}

double weight_constant_threshold(double confidence, double tau) {
    return confidence >= tau ? 1.0 : 0.0;
}

double ramp_value(double t, double ramp_len, RampShape shape) {
    const double p = std::min(t / ramp_len, 1.0);
    if (shape == RampShape::Linear) return p;
    const double d = 1.0 - p;
    return std::exp(-5.0 * d * d);
}

double weight_ramp_up(const FilterContext& ctx, RampShape shape, double ramp_fraction) {
    return ramp_value(static_cast<double>(ctx.epoch), ramp_length(ctx, ramp_fraction),
                      shape);
}

double weight_confidence(double confidence) { return confidence; }

double weight_ctr(double confidence, const FilterContext& ctx, RampShape shape,
                  double ramp_fraction, double tau_end) {
    const double tau =
        tau_end * ramp_value(static_cast<double>(ctx.epoch),
                             ramp_length(ctx, ramp_fraction), shape);
    return confidence >= tau ? 1.0 : 0.0;
}

double weight_spf(double confidence, const FilterContext& ctx) {
    if (ctx.model == nullptr) return 1.0;  // no fit yet: keep every pseudo-label
    return mixture::posterior_correct(*ctx.model, confidence);
}

double hard_mask(double weight, double mask_threshold) {
    return weight >= mask_threshold ? 1.0 : 0.0;
}

double filter_weight(double confidence, const FilterContext& ctx,
                     const FilterStrategy& strategy) {
    switch (strategy.kind) {
        case FilterKind::ConstantThreshold:
            return weight_constant_threshold(confidence, strategy.tau);
        case FilterKind::RampUp:
            return weight_ramp_up(ctx, strategy.ramp_shape, strategy.ramp_fraction);
        case FilterKind::ConfidenceWeight:
            return weight_confidence(confidence);
        case FilterKind::Ctr:
            return weight_ctr(confidence, ctx, strategy.ramp_shape,
                              strategy.ramp_fraction, strategy.tau);
        case FilterKind::Spf:
            return weight_spf(confidence, ctx);
        case FilterKind::SpfHardMask:
            return hard_mask(weight_spf(confidence, ctx), strategy.mask_threshold);
    }
    throw std::logic_error("unreachable");
}

}  // namespace spf::filters
