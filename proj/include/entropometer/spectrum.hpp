#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace entropometer {

inline constexpr std::int64_t kDefaultMicrostateCap = 1'000'000;

struct Level {
    double energy = 0.0;
    std::int64_t degeneracy = 1;

    friend bool operator==(const Level&, const Level&) = default;
};

/// Discrete eigenvalue/degeneracy model of a closed system's Hamiltonian.
///
/// Levels are kept sorted by strictly increasing energy; energies that agree
/// within 1e-12 * max(1, |e|) are merged and their degeneracies summed.
/// Immutable after construction.
class EnergySpectrum {
public:
    /// Sorts, merges and validates. Throws InvalidModel on fewer than two
    /// distinct levels, non-finite energies, degeneracy < 1 or a microstate
    /// count above `microstate_cap`.
    EnergySpectrum(std::string name, std::vector<Level> levels,
                   std::int64_t microstate_cap = kDefaultMicrostateCap);

    const std::string& name() const noexcept { return name_; }
    std::span<const Level> levels() const noexcept { return levels_; }
    std::size_t level_count() const noexcept { return levels_.size(); }
    std::int64_t microstate_count() const noexcept { return microstates_; }

    double ground_energy() const noexcept { return levels_.front().energy; }
    double top_energy() const noexcept { return levels_.back().energy; }
    std::int64_t ground_degeneracy() const noexcept { return levels_.front().degeneracy; }

    /// Degeneracy-weighted mean energy, the beta -> 0+ limit of the canonical
    /// mean energy.
    double infinite_temperature_energy() const noexcept { return mean_energy_; }

    /// One energy per microstate, ascending (each level repeated g times).
    std::vector<double> microstate_energies() const;

    /// Same levels with every energy moved by `offset`.
    EnergySpectrum shifted(double offset) const;

    EnergySpectrum renamed(std::string name) const;

    friend bool operator==(const EnergySpectrum& a, const EnergySpectrum& b) {
        return a.levels_ == b.levels_;
    }

private:
    std::string name_;
    std::vector<Level> levels_;
    std::int64_t microstates_ = 0;
    double mean_energy_ = 0.0;
};

/// True when two energies are equal within the merge tolerance.
bool energies_merge(double a, double b) noexcept;

/// Composite spectrum: all pairwise sums with product degeneracies.
EnergySpectrum compose(const EnergySpectrum& a, const EnergySpectrum& b,
                       std::int64_t microstate_cap = kDefaultMicrostateCap);

namespace builtin {

EnergySpectrum two_level(double gap);

/// Levels n * quantum for n = 0 .. count-1, all non-degenerate.
EnergySpectrum harmonic(double quantum, int count);

/// `count` energies drawn uniformly from [lo, hi], non-degenerate.
/// Deterministic in `seed` on every platform.
EnergySpectrum random(std::uint64_t seed, int count, double lo, double hi);

}  // namespace builtin

// JSON file format: {"name": ..., "levels": [{"energy": x, "degeneracy": g}, ...]}
EnergySpectrum spectrum_from_json(const nlohmann::json& j);
nlohmann::json spectrum_to_json(const EnergySpectrum& s);
EnergySpectrum load_spectrum(const std::filesystem::path& path);
void save_spectrum(const EnergySpectrum& s, const std::filesystem::path& path);

/// Named spectra: builtins addressed as "@two_level(gap)", "@harmonic(q,n)",
/// "@random(seed,n,lo,hi)"; anything else is read as a file path. Loaded
/// files are cached under their path.
class SpectrumLibrary {
public:
    const EnergySpectrum& resolve(const std::string& ref);

    /// Throws ConfigError when the name is already taken.
    void add(const std::string& name, EnergySpectrum spectrum);

    bool contains(const std::string& name) const { return entries_.count(name) != 0; }

private:
    std::map<std::string, EnergySpectrum> entries_;
};

EnergySpectrum parse_builtin(const std::string& ref);

}  // namespace entropometer
