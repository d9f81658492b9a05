#include "ssnn/stdp.hpp"

#include <algorithm>
#include <cmath>

#include "ssnn/errors.hpp"

namespace ssnn {

void StdpParams::validate() const {
    if (!std::isfinite(a_plus) || a_plus < 0.0) throw ConfigError("stdp.a_plus", "must be finite and >= 0");
    if (!std::isfinite(a_minus) || a_minus > 0.0) throw ConfigError("stdp.a_minus", "must be finite and <= 0");
    if (!(tau_plus > 0.0) || !std::isfinite(tau_plus)) throw ConfigError("stdp.tau_plus", "must be > 0");
    if (!(tau_minus > 0.0) || !std::isfinite(tau_minus)) throw ConfigError("stdp.tau_minus", "must be > 0");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("stdp.sigma", "must be > 0");
    if (!std::isfinite(w_min)) throw ConfigError("stdp.w_min", "must be finite");
    if (!std::isfinite(w_max) || !(w_min < w_max)) throw ConfigError("stdp.w_max", "must be finite and > stdp.w_min");
    if (window_lo < 1) throw ConfigError("stdp.window_lo", "must be >= 1");
    if (window_hi < window_lo) throw ConfigError("stdp.window_hi", "must be >= stdp.window_lo");
}

double stdp_curve(const StdpParams& params, std::int64_t dt) {
    const std::int64_t mag = dt < 0 ? -dt : dt;
    if (mag < params.window_lo || mag > params.window_hi) return 0.0;
    if (dt > 0) return params.a_plus * std::exp(-static_cast<double>(dt) / params.tau_plus);
    return params.a_minus * std::exp(static_cast<double>(dt) / params.tau_minus);
}

StdpTable::StdpTable(const StdpParams& params) : lo_(params.window_lo), hi_(params.window_hi) {
    params.validate();
    const auto n = static_cast<std::size_t>(hi_ - lo_ + 1);
    pot_.reserve(n);
    dep_.reserve(n);
    for (std::int32_t d = lo_; d <= hi_; ++d) {
        pot_.push_back(stdp_curve(params, d));
        dep_.push_back(stdp_curve(params, -d));
    }
}

double StdpTable::delta_w(std::int64_t dt) const noexcept {
    const std::int64_t mag = dt < 0 ? -dt : dt;
    if (mag < lo_ || mag > hi_) return 0.0;
    const auto k = static_cast<std::size_t>(mag - lo_);
    return dt > 0 ? pot_[k] : dep_[k];
}

StdpTable build_table(const StdpParams& params) { return StdpTable(params); }

double apply_weight_update(double w_old, double dw, const StdpParams& params) {
    if (!(w_old >= params.w_min && w_old <= params.w_max))
        throw InvariantError("apply_weight_update: weight outside [w_min, w_max]");
    const double w_new = dw > 0.0 ? w_old + params.sigma * dw * (params.w_max - w_old)
                                   : w_old + params.sigma * dw * (w_old - params.w_min);
    // Rounding (or sigma * |dw| > 1) must not let a weight escape its bounds.
    return std::clamp(w_new, params.w_min, params.w_max);
}

}  // namespace ssnn
