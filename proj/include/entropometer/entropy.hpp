#pragma once

#include <cstdint>

#include "entropometer/interconnect.hpp"
#include "entropometer/numerics.hpp"
#include "entropometer/process.hpp"
#include "entropometer/random.hpp"

namespace entropometer {

struct QuadratureConfig {
    double abs_tol = 1e-10;
    std::size_t max_subintervals = 100000;
    /// Allowed gap between the operational result and the von Neumann
    /// difference expressed in the scale's entropy unit.
    double consistency_tol = 1e-8;
};

/// Entropy difference measured along a reversible standard process.
struct EntropyMeasurement {
    double delta_s = 0.0;
    double e_b_initial = 0.0;
    double e_b_final = 0.0;  // reversible end energy of the auxiliary system
    double quadrature_error_estimate = 0.0;
};

struct EntropyBracket {
    double lower = 0.0;
    double upper = 0.0;
};

namespace entropy {

/// Integral of dE / T^B(E) from e_from to e_to along B's stable-equilibrium
/// states, temperatures taken on `scale`. Same sign as e_to - e_from.
numerics::QuadratureResult reciprocal_temperature_integral(const EnergySpectrum& b,
                                                           double e_from, double e_to,
                                                           const TemperatureScale& scale,
                                                           const QuadratureConfig& quad = {});

/// S(a2) - S(a1) = -integral of dE/T^B over the reversible standard process
/// from a1 to a2 with auxiliary B starting at `b`.
///
/// The result is cross-checked against the von Neumann difference in the
/// scale's unit; a gap above `quad.consistency_tol` throws ConvergenceError.
EntropyMeasurement entropy_difference(const ModelState& a1, const ModelState& a2, const SePoint& b,
                                      const TemperatureScale& scale,
                                      const QuadratureConfig& quad = {});

/// S(a1) = s0 + entropy_difference(a0, a1).
double entropy_value(const ModelState& a1, const ModelState& a0, double s0, const SePoint& b,
                     const TemperatureScale& scale, const QuadratureConfig& quad = {});

/// Bounds on S(a2) - S(a1) from two irreversible standard processes: a1->a2
/// with auxiliary `b_forward` producing sigma_f, and a2->a1 with `b_backward`
/// producing sigma_b. Both bounds are tight when both sigmas vanish.
EntropyBracket irreversible_bound(const ModelState& a1, const ModelState& a2,
                                  const SePoint& b_forward, double sigma_f,
                                  const SePoint& b_backward, double sigma_b,
                                  const TemperatureScale& scale,
                                  const QuadratureConfig& quad = {});

/// Random state on `spectrum` with mean energy exactly `energy`.
///
/// Draws a state from normalized uniform weights, then a second one from
/// uniform weights restricted to microstates on the other side of `energy`,
/// and mixes the two so the mean energy matches. Requires
/// E_min < energy < E_max.
ModelState sample_same_energy_state(const EnergySpectrum& spectrum, double energy, Rng& rng);

}  // namespace entropy
}  // namespace entropometer
