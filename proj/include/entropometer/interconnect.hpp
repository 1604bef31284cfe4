#pragma once

#include <variant>

#include "entropometer/spectrum.hpp"

namespace entropometer {

/// Stable-equilibrium state identified by its energy on a fixed spectrum.
class SePoint {
public:
    /// Throws DomainError unless E_min < energy < E(beta -> 0+).
    SePoint(EnergySpectrum spectrum, double energy);

    static SePoint at_beta(EnergySpectrum spectrum, double beta);

    const EnergySpectrum& spectrum() const noexcept { return spectrum_; }
    double energy() const noexcept { return energy_; }
    double beta() const noexcept { return beta_; }
    /// Canonical entropy at this energy, units of k.
    double entropy() const noexcept { return entropy_; }

private:
    EnergySpectrum spectrum_;
    double energy_;
    double beta_;
    double entropy_;
};

inline constexpr double kTriplePointTemperature = 273.16;

/// Reference system R in state R_se1 with its assigned temperature T_ref.
class TemperatureScale {
public:
    /// Throws DomainError unless t_ref > 0.
    TemperatureScale(SePoint reference, double t_ref);

    /// Scale whose T_ref equals 1/beta of its reference (k = 1), so that
    /// temperatures coincide with 1/(k beta) and entropies come out in units
    /// of k.
    static TemperatureScale calibrated(SePoint reference);

    /// Synthetic reference ladder held at 1/beta = 273.16 with T_ref = 273.16.
    static TemperatureScale triple_point();

    const SePoint& reference() const noexcept { return reference_; }
    double t_ref() const noexcept { return t_ref_; }

    /// 1 / (T_ref * beta_ref): the factor that converts k-unit entropies to
    /// entropies in this scale's units. Exactly 1 for calibrated scales up to
    /// rounding.
    double entropy_unit() const noexcept { return 1.0 / (t_ref_ * reference_.beta()); }

private:
    SePoint reference_;
    double t_ref_;
};

struct Analytic {};
struct FiniteDifference {
    /// Step as a fraction of the width of the f11 domain, which is the source
    /// system's admissible window unless the target narrows it.
    double relative_step = 1e-4;
};
using DerivativeMethod = std::variant<Analytic, FiniteDifference>;

/// Open interval of source energies for which f11 is defined.
struct EnergyInterval {
    double lo;
    double hi;
};

namespace interconnect {

/// Interconnection function f11^{B->C}: the C energy whose canonical entropy
/// increment from c matches the increment of B from b at energy `energy_b`.
/// Throws DomainError for inadmissible `energy_b` and RangeError (carrying
/// the attainable entropy-increment interval) when C cannot absorb it.
double f11(const SePoint& b, const SePoint& c, double energy_b);

/// Source energies of B mapped by f11 into C's admissible window.
EnergyInterval f11_domain(const SePoint& b, const SePoint& c);

/// d f11 / d E_B. Analytic: beta_B(E_B) / beta_C(f11(E_B)). Finite
/// difference: central difference at steps h and h/2 combined by Richardson
/// extrapolation, with h = relative_step * f11 domain width, narrowed near the
/// domain edges.
double df11(const SePoint& b, const SePoint& c, double energy_b,
            const DerivativeMethod& method = Analytic{});

/// Temperature of `point` on `scale`: T_ref * d f11^{R->point} / dE_R at the
/// reference energy.
double temperature(const SePoint& point, const TemperatureScale& scale,
                   const DerivativeMethod& method = Analytic{});

/// T_c / T_b measured directly as d f11^{b->c} / dE_b at b's energy.
double temperature_ratio(const SePoint& b, const SePoint& c,
                         const DerivativeMethod& method = Analytic{});

}  // namespace interconnect
}  // namespace entropometer
