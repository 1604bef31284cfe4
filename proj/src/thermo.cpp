#include "entropometer/thermo.hpp"

#include <cmath>
#include <sstream>

#include "entropometer/error.hpp"
#include "entropometer/numerics.hpp"

namespace entropometer::thermo {

namespace {

// Boltzmann sums shifted to the ground level: weights g*exp(-beta*(e - e0))
// are at most g, so nothing overflows for beta > 0.
struct Moments {
    double log_weight_sum;  // ln Z + beta * e0
    double excitation;      // E - e0
    double variance;
};

Moments moments(const EnergySpectrum& s, double beta) {
    const double e0 = s.ground_energy();
    double sum = 0.0;
    double first = 0.0;
    for (const auto& level : s.levels()) {
        const double de = level.energy - e0;
        const double w = static_cast<double>(level.degeneracy) * std::exp(-beta * de);
        sum += w;
        first += w * de;
    }
    const double excitation = first / sum;
    double second = 0.0;
    for (const auto& level : s.levels()) {
        const double de = level.energy - e0;
        const double w = static_cast<double>(level.degeneracy) * std::exp(-beta * de);
        second += w * (de - excitation) * (de - excitation);
    }
    return {std::log(sum), excitation, second / sum};
}

void require_beta(double beta) {
    if (!(beta > 0.0)) {
        std::ostringstream msg;
        msg << "beta must be > 0 (got " << beta << ")";
        throw DomainError(msg.str(), DomainError::Bound::lower);
    }
    if (!std::isfinite(beta)) {
        throw DomainError("beta must be finite", DomainError::Bound::upper);
    }
}

}  // namespace

CanonicalState::CanonicalState(EnergySpectrum spectrum, double beta)
    : spectrum_(std::move(spectrum)), beta_(beta) {
    require_beta(beta_);
}

std::vector<double> CanonicalState::probabilities() const {
    return canonical_probabilities(spectrum_, beta_);
}

ThermoPoint CanonicalState::point() const { return evaluate(spectrum_, beta_); }

double ln_partition(const EnergySpectrum& s, double beta) {
    require_beta(beta);
    return moments(s, beta).log_weight_sum - beta * s.ground_energy();
}

double excitation_energy(const EnergySpectrum& s, double beta) {
    require_beta(beta);
    return moments(s, beta).excitation;
}

double mean_energy(const EnergySpectrum& s, double beta) {
    return s.ground_energy() + excitation_energy(s, beta);
}

double entropy_se(const EnergySpectrum& s, double beta) {
    require_beta(beta);
    const Moments m = moments(s, beta);
    return beta * m.excitation + m.log_weight_sum;
}

double heat_capacity(const EnergySpectrum& s, double beta) {
    require_beta(beta);
    return beta * beta * moments(s, beta).variance;
}

ThermoPoint evaluate(const EnergySpectrum& s, double beta) {
    require_beta(beta);
    const Moments m = moments(s, beta);
    return {beta, m.log_weight_sum - beta * s.ground_energy(), s.ground_energy() + m.excitation,
            beta * m.excitation + m.log_weight_sum, beta * beta * m.variance};
}

std::vector<double> canonical_probabilities(const EnergySpectrum& s, double beta) {
    require_beta(beta);
    const double log_sum = moments(s, beta).log_weight_sum;
    std::vector<double> p;
    p.reserve(static_cast<std::size_t>(s.microstate_count()));
    for (const auto& level : s.levels()) {
        const double pj = std::exp(-beta * (level.energy - s.ground_energy()) - log_sum);
        p.insert(p.end(), static_cast<std::size_t>(level.degeneracy), pj);
    }
    return p;
}

bool is_admissible(const EnergySpectrum& s, double energy) noexcept {
    return std::isfinite(energy) && energy > s.ground_energy() &&
           energy < s.infinite_temperature_energy();
}

void require_admissible(const EnergySpectrum& s, double energy) {
    if (is_admissible(s, energy)) return;
    std::ostringstream msg;
    msg.precision(17);
    if (std::isnan(energy)) {
        msg << "energy is NaN";
        throw DomainError(msg.str(), DomainError::Bound::other);
    }
    if (energy <= s.ground_energy()) {
        msg << "energy " << energy << " at or below lower bound E_min = " << s.ground_energy()
            << " of spectrum '" << s.name() << "'";
        throw DomainError(msg.str(), DomainError::Bound::lower);
    }
    msg << "energy " << energy << " at or above upper bound E(beta->0+) = "
        << s.infinite_temperature_energy() << " of spectrum '" << s.name() << "'";
    throw DomainError(msg.str(), DomainError::Bound::upper);
}

double beta_from_energy(const EnergySpectrum& s, double energy) {
    require_admissible(s, energy);
    const double target = energy - s.ground_energy();
    auto residual = [&](double beta) { return moments(s, beta).excitation - target; };
    const auto bracket = numerics::bracket_decreasing_positive(residual, 1.0);
    const double beta = numerics::solve_bracketed_newton(
        [&](double b) {
            const Moments m = moments(s, b);
            return numerics::ValueSlope{m.excitation - target, -m.variance};
        },
        bracket);
    const double tol = 1e-12 * std::max(1.0, std::abs(energy));
    if (!(std::abs(moments(s, beta).excitation - target) <= tol)) {
        throw ConvergenceError("beta inversion missed the energy tolerance");
    }
    return beta;
}

double entropy_from_energy(const EnergySpectrum& s, double energy) {
    const double beta = beta_from_energy(s, energy);
    // S(E) = min over beta of beta*(E - e0) + ln Z'(beta): stationary in beta,
    // so solver error in beta enters only at second order.
    return beta * (energy - s.ground_energy()) + moments(s, beta).log_weight_sum;
}

double h1(const EnergySpectrum& s, double energy, double reference_energy) {
    return entropy_from_energy(s, energy) - entropy_from_energy(s, reference_energy);
}

EntropyWindow entropy_window(const EnergySpectrum& s) {
    return {std::log(static_cast<double>(s.ground_degeneracy())),
            std::log(static_cast<double>(s.microstate_count()))};
}

double beta_from_entropy(const EnergySpectrum& s, double entropy) {
    const auto window = entropy_window(s);
    if (!(entropy > window.lo && entropy < window.hi)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "entropy " << entropy << " outside attainable interval (" << window.lo << ", "
            << window.hi << ") of spectrum '" << s.name() << "'";
        throw RangeError(msg.str(), window.lo, window.hi);
    }
    auto residual = [&](double beta) {
        const Moments m = moments(s, beta);
        return beta * m.excitation + m.log_weight_sum - entropy;
    };
    const auto bracket = numerics::bracket_decreasing_positive(residual, 1.0);
    return numerics::solve_bracketed_newton(
        [&](double b) {
            const Moments m = moments(s, b);
            return numerics::ValueSlope{b * m.excitation + m.log_weight_sum - entropy,
                                        -b * m.variance};
        },
        bracket);
}

double energy_from_entropy(const EnergySpectrum& s, double entropy) {
    return s.ground_energy() + moments(s, beta_from_entropy(s, entropy)).excitation;
}

}  // namespace entropometer::thermo
