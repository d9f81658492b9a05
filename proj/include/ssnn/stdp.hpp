#pragma once

#include <cstdint>
#include <vector>

namespace ssnn {

struct StdpParams {
    double a_plus = 0.8;
    double a_minus = -1.0;
    double tau_plus = 5.0;
    double tau_minus = 5.0;
    double sigma = 0.5;
    double w_min = 0.0;
    double w_max = 1.0;
    std::int32_t window_lo = 2;
    std::int32_t window_hi = 20;

    void validate() const;
};

/// Closed-form plasticity curve, dt = t_post - t_pre.
///   dt >=  lo : a_plus  * exp(-dt / tau_plus)
///   dt <= -lo : a_minus * exp( dt / tau_minus)
/// Zero in the dead zone |dt| < lo and outside |dt| > hi.
double stdp_curve(const StdpParams& params, std::int64_t dt);

/// Precomputed curve, one entry per in-window offset on each side.
/// With the default window [2, 20] each side holds 19 entries.
class StdpTable {
  public:
    explicit StdpTable(const StdpParams& params);

    /// Table lookup of the curve for an integer offset dt = t_post - t_pre.
    double delta_w(std::int64_t dt) const noexcept;

    /// pot()[k] is the entry for dt = window_lo + k.
    const std::vector<double>& pot() const noexcept { return pot_; }
    /// dep()[k] is the entry for dt = -(window_lo + k).
    const std::vector<double>& dep() const noexcept { return dep_; }

    std::int32_t window_lo() const noexcept { return lo_; }
    std::int32_t window_hi() const noexcept { return hi_; }

  private:
    std::int32_t lo_;
    std::int32_t hi_;
    std::vector<double> pot_;
    std::vector<double> dep_;
};

StdpTable build_table(const StdpParams& params);

/// Soft-bounded update: potentiation scales with the headroom to w_max,
/// depression with the distance to w_min.
/// Throws InvariantError if w_old lies outside [w_min, w_max].
double apply_weight_update(double w_old, double dw, const StdpParams& params);

}  // namespace ssnn
