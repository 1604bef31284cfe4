#include "entropometer/interconnect.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "entropometer/error.hpp"
#include "entropometer/thermo.hpp"

namespace entropometer {

SePoint::SePoint(EnergySpectrum spectrum, double energy)
    : spectrum_(std::move(spectrum)), energy_(energy) {
    thermo::require_admissible(spectrum_, energy_);
    beta_ = thermo::beta_from_energy(spectrum_, energy_);
    entropy_ = thermo::entropy_from_energy(spectrum_, energy_);
}

SePoint SePoint::at_beta(EnergySpectrum spectrum, double beta) {
    const double energy = thermo::mean_energy(spectrum, beta);
    return SePoint(std::move(spectrum), energy);
}

TemperatureScale::TemperatureScale(SePoint reference, double t_ref)
    : reference_(std::move(reference)), t_ref_(t_ref) {
    if (!(t_ref_ > 0.0) || !std::isfinite(t_ref_)) {
        throw DomainError("reference temperature must be positive and finite",
                          DomainError::Bound::lower);
    }
}

TemperatureScale TemperatureScale::calibrated(SePoint reference) {
    const double t_ref = 1.0 / reference.beta();
    return TemperatureScale(std::move(reference), t_ref);
}

TemperatureScale TemperatureScale::triple_point() {
    // 256-rung ladder with quantum 100: at 1/beta = 273.16 the occupation of
    // the top rung is ~e^-93, so truncation is invisible.
    auto ladder = builtin::harmonic(100.0, 256).renamed("triple_point_ladder");
    return TemperatureScale(SePoint::at_beta(std::move(ladder), 1.0 / kTriplePointTemperature),
                            kTriplePointTemperature);
}

namespace interconnect {

namespace {

void throw_unattainable(const SePoint& c, double delta_s) {
    const auto window = thermo::entropy_window(c.spectrum());
    const double lo = window.lo - c.entropy();
    const double hi = window.hi - c.entropy();
    std::ostringstream msg;
    msg.precision(17);
    msg << "entropy increment " << delta_s << " outside attainable interval (" << lo << ", " << hi
        << ") of system '" << c.spectrum().name() << "'";
    throw RangeError(msg.str(), lo, hi);
}

}  // namespace

double f11(const SePoint& b, const SePoint& c, double energy_b) {
    thermo::require_admissible(b.spectrum(), energy_b);
    if (energy_b == b.energy()) return c.energy();
    const double delta_s = thermo::entropy_from_energy(b.spectrum(), energy_b) - b.entropy();
    const double target = c.entropy() + delta_s;
    const auto window = thermo::entropy_window(c.spectrum());
    if (!(target > window.lo && target < window.hi)) throw_unattainable(c, delta_s);
    return thermo::energy_from_entropy(c.spectrum(), target);
}

EnergyInterval f11_domain(const SePoint& b, const SePoint& c) {
    const auto wb = thermo::entropy_window(b.spectrum());
    const auto wc = thermo::entropy_window(c.spectrum());
    const double b_lo = wb.lo - b.entropy();
    const double b_hi = wb.hi - b.entropy();
    const double c_lo = wc.lo - c.entropy();
    const double c_hi = wc.hi - c.entropy();
    EnergyInterval out{b.spectrum().ground_energy(), b.spectrum().infinite_temperature_energy()};
    if (c_lo > b_lo) out.lo = thermo::energy_from_entropy(b.spectrum(), b.entropy() + c_lo);
    if (c_hi < b_hi) out.hi = thermo::energy_from_entropy(b.spectrum(), b.entropy() + c_hi);
    return out;
}

double df11(const SePoint& b, const SePoint& c, double energy_b, const DerivativeMethod& method) {
    if (std::holds_alternative<Analytic>(method)) {
        if (energy_b == b.energy()) return b.beta() / c.beta();
        const double energy_c = f11(b, c, energy_b);
        return thermo::beta_from_energy(b.spectrum(), energy_b) /
               thermo::beta_from_energy(c.spectrum(), energy_c);
    }
    const auto& fd = std::get<FiniteDifference>(method);
    const auto& source = b.spectrum();
    thermo::require_admissible(source, energy_b);
    const auto domain = f11_domain(b, c);
    // Near the domain edge the stencil is narrowed to half the clearance.
    const double clearance = std::min(energy_b - domain.lo, domain.hi - energy_b);
    const double h = std::min(fd.relative_step * (domain.hi - domain.lo), 0.5 * clearance);
    if (!(clearance > 0.0)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "energy " << energy_b << " lies outside the f11 domain (" << domain.lo << ", "
            << domain.hi << ")";
        throw DomainError(msg.str(), energy_b <= domain.lo ? DomainError::Bound::lower
                                                           : DomainError::Bound::upper);
    }
    if (!(h > 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(energy_b)))) {
        throw ConvergenceError("finite-difference step underflow");
    }
    auto central = [&](double step) {
        return (f11(b, c, energy_b + step) - f11(b, c, energy_b - step)) / (2.0 * step);
    };
    const double coarse = central(h);
    const double fine = central(0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

double temperature(const SePoint& point, const TemperatureScale& scale,
                   const DerivativeMethod& method) {
    if (std::holds_alternative<Analytic>(method)) {
        return scale.t_ref() * (scale.reference().beta() / point.beta());
    }
    return scale.t_ref() * df11(scale.reference(), point, scale.reference().energy(), method);
}

double temperature_ratio(const SePoint& b, const SePoint& c, const DerivativeMethod& method) {
    return df11(b, c, b.energy(), method);
}

}  // namespace interconnect
}  // namespace entropometer
