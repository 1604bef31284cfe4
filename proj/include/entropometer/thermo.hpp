#pragma once

#include "entropometer/spectrum.hpp"

namespace entropometer::thermo {

/// Canonical-state summary at one inverse temperature. Entropy and heat
/// capacity are in units of k.
struct ThermoPoint {
    double beta = 0.0;
    double ln_z = 0.0;
    double energy = 0.0;
    double entropy = 0.0;
    double heat_capacity = 0.0;
};

/// Stable-equilibrium (canonical) state: spectrum plus beta > 0.
class CanonicalState {
public:
    /// Throws DomainError for beta <= 0 or non-finite beta.
    CanonicalState(EnergySpectrum spectrum, double beta);

    const EnergySpectrum& spectrum() const noexcept { return spectrum_; }
    double beta() const noexcept { return beta_; }

    /// Occupation probability of every microstate, ascending energy.
    std::vector<double> probabilities() const;
    ThermoPoint point() const;

private:
    EnergySpectrum spectrum_;
    double beta_;
};

double ln_partition(const EnergySpectrum& s, double beta);
double mean_energy(const EnergySpectrum& s, double beta);
double entropy_se(const EnergySpectrum& s, double beta);
double heat_capacity(const EnergySpectrum& s, double beta);
ThermoPoint evaluate(const EnergySpectrum& s, double beta);

/// Canonical microstate probabilities at beta, ascending energy order.
std::vector<double> canonical_probabilities(const EnergySpectrum& s, double beta);

/// Mean energy minus ground energy, computed without cancellation.
double excitation_energy(const EnergySpectrum& s, double beta);

/// Throws DomainError unless E_min < energy < E(beta -> 0+).
void require_admissible(const EnergySpectrum& s, double energy);
bool is_admissible(const EnergySpectrum& s, double energy) noexcept;

/// Inverse of mean_energy on the open window (E_min, E(beta -> 0+)).
double beta_from_energy(const EnergySpectrum& s, double energy);

/// Canonical entropy as a function of energy.
double entropy_from_energy(const EnergySpectrum& s, double energy);

/// Entropy increment h1(E) = S(E) - S(E1) along the stable-equilibrium curve.
double h1(const EnergySpectrum& s, double energy, double reference_energy);

/// Attainable canonical entropies: the open interval (ln g0, ln N).
struct EntropyWindow {
    double lo;
    double hi;
};
EntropyWindow entropy_window(const EnergySpectrum& s);

/// Inverse temperature at which the canonical entropy equals `entropy`.
/// Throws RangeError outside the open entropy window.
double beta_from_entropy(const EnergySpectrum& s, double entropy);

/// Stable-equilibrium energy with canonical entropy `entropy`.
double energy_from_entropy(const EnergySpectrum& s, double entropy);

}  // namespace entropometer::thermo
