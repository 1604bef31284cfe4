#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "entropometer/entropy.hpp"
#include "entropometer/extension.hpp"
#include "entropometer/interconnect.hpp"
#include "entropometer/random.hpp"

namespace entropometer::harness {

struct Tolerances {
    double composition = 1e-10;     // energy units
    double shift_invariance = 1e-10;
    double derivative_rel = 1e-6;
    double reference_rel = 1e-8;
    double auxiliary = 1e-8;        // units of k
    double von_neumann = 1e-8;
    double nondecrease = 1e-10;
    double additivity = 1e-8;
    double bracket = 1e-8;
};

struct SuiteConfig {
    std::uint64_t seed = 1;
    /// Overrides every check's default instance count when set.
    std::optional<int> instances;
    Tolerances tol;
    QuadratureConfig quad;
    /// Additive error injected into every f11 evaluation the suite makes.
    /// Zero in normal runs; a sensitivity canary otherwise.
    double f11_skew = 0.0;
    bool parallel = false;
};

struct CheckReport {
    std::string name;
    int instances = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::uint64_t seed = 0;
    std::string detail;
};

using CheckFn = CheckReport (*)(const SuiteConfig&, int instances);

struct CheckEntry {
    const char* name;
    CheckFn run;
    int default_instances;
};

/// The twelve certification checks in fixed report order.
const std::vector<CheckEntry>& checks();

CheckReport check_f11_monotonicity(const SuiteConfig& config, int instances);
CheckReport check_composition_identity(const SuiteConfig& config, int instances);
CheckReport check_shift_invariance(const SuiteConfig& config, int instances);
CheckReport check_derivative_consistency(const SuiteConfig& config, int instances);
CheckReport check_reference_independence(const SuiteConfig& config, int instances);
CheckReport check_auxiliary_independence(const SuiteConfig& config, int instances);
CheckReport check_von_neumann_compatibility(const SuiteConfig& config, int instances);
CheckReport check_entropy_nondecrease(const SuiteConfig& config, int instances);
CheckReport check_entropy_additivity(const SuiteConfig& config, int instances);
CheckReport check_maximum_entropy(const SuiteConfig& config, int instances);
CheckReport check_irreversible_bracketing(const SuiteConfig& config, int instances);
CheckReport check_extension_ranges(const SuiteConfig& config, int instances);

/// Runs every check; deterministic for a fixed config. Each check draws from
/// its own stream derived from (seed, check index), so results do not depend
/// on execution order.
std::vector<CheckReport> run_suite(const SuiteConfig& config);

bool all_pass(const std::vector<CheckReport>& reports);

/// One JSON document with the config seed and one entry per check.
std::string report_json(const SuiteConfig& config, const std::vector<CheckReport>& reports);

// Instance generators shared with the tests.

/// 4-32 levels (or [min_levels, max_levels]), energies uniform in [0, 10],
/// degeneracies 1-3.
EnergySpectrum random_spectrum(Rng& rng, int min_levels = 4, int max_levels = 32);

/// Stable-equilibrium point with beta log-uniform in [1e-2, 1e2], redrawn
/// until its energy sits in the central 98% of the admissible window.
SePoint random_point(Rng& rng, const EnergySpectrum& s);

/// Energy at fraction u of the admissible window (E_min + u * width).
double window_energy(const EnergySpectrum& s, double u);

/// Random probability vector over the spectrum's microstates.
ModelState random_state(Rng& rng, const EnergySpectrum& s);

/// Random acyclic accessibility graph satisfying the Sigma invariants.
AccessibilityGraph random_graph(Rng& rng, int max_nodes);

}  // namespace entropometer::harness
