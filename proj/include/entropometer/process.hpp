#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "entropometer/interconnect.hpp"
#include "entropometer/spectrum.hpp"

namespace entropometer {

/// Diagonal (possibly nonequilibrium) state: one probability per
/// degeneracy-expanded microstate of the spectrum, ascending energy.
class ModelState {
public:
    /// Throws DimensionError on length mismatch and InvalidModel on negative
    /// or non-finite entries or a sum off 1 by more than 1e-12.
    ModelState(EnergySpectrum spectrum, std::vector<double> probs);

    static ModelState canonical(EnergySpectrum spectrum, double beta);

    const EnergySpectrum& spectrum() const noexcept { return spectrum_; }
    std::span<const double> probs() const noexcept { return probs_; }
    double energy() const;

private:
    EnergySpectrum spectrum_;
    std::vector<double> probs_;
};

/// Uncorrelated product state on compose(p.spectrum(), q.spectrum()). The
/// microstate pairs are ordered by energy so that every pair lands on the
/// composite level of energy e_i + e_j.
ModelState product_state(const ModelState& p, const ModelState& q);

/// -sum p ln p with 0 ln 0 = 0, units of k.
double vn_entropy(const ModelState& state);
double vn_entropy(std::span<const double> probs);

struct StandardProcessOutcome {
    double e_b_initial = 0.0;
    double e_b_final = 0.0;
    double sigma = 0.0;
    bool reversible = true;
};

/// Weight process for AB, standard with respect to B, taking A from a1 to a2
/// with entropy production `sigma` >= 0. B ends in the stable-equilibrium
/// state whose entropy is S_B(E_B1) - (S(a2) - S(a1)) + sigma.
/// Throws DomainError for sigma < 0 and RangeError when B cannot reach the
/// required entropy.
StandardProcessOutcome simulate_standard_process(const ModelState& a1, const ModelState& a2,
                                                 const SePoint& b, double sigma);

/// Whether A1 x B1 can be turned into A2 x B2 by a unitary evolution: the
/// sorted multisets of product probabilities agree elementwise within tol.
bool unitary_feasible(const ModelState& a1, const ModelState& b1, const ModelState& a2,
                      const ModelState& b2, double tol = 1e-10);

/// State on `a` carrying B's canonical probabilities at beta, largest
/// probability on the lowest microstate of `a`.
ModelState mirror_nonequilibrium(const EnergySpectrum& a, const EnergySpectrum& b, double beta);

enum class LegDirection { forward, backward };

/// One weight process of a polygonal; `work` is the work done by the system
/// in that process, in the process's own direction.
struct WeightLeg {
    double work = 0.0;
    LegDirection direction = LegDirection::forward;
};

class WeightPolygonal {
public:
    WeightPolygonal() = default;
    explicit WeightPolygonal(std::vector<WeightLeg> legs) : legs_(std::move(legs)) {}

    std::span<const WeightLeg> legs() const noexcept { return legs_; }

    /// The same chain traversed from its last state to its first.
    WeightPolygonal reversed() const;

private:
    std::vector<WeightLeg> legs_;
};

/// Work done by the system along the polygonal from its first to last state.
double polygonal_work(const WeightPolygonal& polygonal);

/// E_last - E_first = -polygonal_work.
double energy_difference(const WeightPolygonal& polygonal);

/// State file: {"spectrum": <path or @builtin>, "probs": [...]} or
/// {"spectrum": ..., "beta": x} for a canonical state. Relative spectrum paths
/// resolve against the state file's directory.
ModelState load_state(const std::filesystem::path& path);

}  // namespace entropometer
