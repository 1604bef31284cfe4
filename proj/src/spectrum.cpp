#include "entropometer/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "entropometer/error.hpp"
#include "entropometer/random.hpp"

namespace entropometer {

namespace {

constexpr double kMergeTolerance = 1e-12;

std::int64_t checked_product(std::int64_t a, std::int64_t b, std::int64_t cap) {
    if (a > cap / b) {
        throw InvalidModel("microstate count exceeds cap of " + std::to_string(cap));
    }
    return a * b;
}

}  // namespace

bool energies_merge(double a, double b) noexcept {
    return std::abs(a - b) <= kMergeTolerance * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

EnergySpectrum::EnergySpectrum(std::string name, std::vector<Level> levels,
                               std::int64_t microstate_cap)
    : name_(std::move(name)) {
    for (const auto& level : levels) {
        if (!std::isfinite(level.energy)) {
            throw InvalidModel("spectrum '" + name_ + "': non-finite energy");
        }
        if (level.degeneracy < 1) {
            throw InvalidModel("spectrum '" + name_ + "': degeneracy < 1");
        }
    }
    std::stable_sort(levels.begin(), levels.end(),
                     [](const Level& a, const Level& b) { return a.energy < b.energy; });

    for (const auto& level : levels) {
        if (!levels_.empty() && energies_merge(levels_.back().energy, level.energy)) {
            levels_.back().degeneracy += level.degeneracy;
        } else {
            levels_.push_back(level);
        }
        if (levels_.back().degeneracy > microstate_cap) {
            throw InvalidModel("spectrum '" + name_ + "': microstate count exceeds cap of " +
                               std::to_string(microstate_cap));
        }
    }
    if (levels_.size() < 2) {
        throw InvalidModel("spectrum '" + name_ + "': needs at least 2 distinct levels");
    }

    double weighted = 0.0;
    for (const auto& level : levels_) {
        microstates_ += level.degeneracy;
        if (microstates_ > microstate_cap) {
            throw InvalidModel("spectrum '" + name_ + "': microstate count exceeds cap of " +
                               std::to_string(microstate_cap));
        }
        weighted += static_cast<double>(level.degeneracy) * (level.energy - levels_.front().energy);
    }
    mean_energy_ = levels_.front().energy + weighted / static_cast<double>(microstates_);
}

std::vector<double> EnergySpectrum::microstate_energies() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(microstates_));
    for (const auto& level : levels_) {
        out.insert(out.end(), static_cast<std::size_t>(level.degeneracy), level.energy);
    }
    return out;
}

EnergySpectrum EnergySpectrum::shifted(double offset) const {
    std::vector<Level> moved(levels_.begin(), levels_.end());
    for (auto& level : moved) level.energy += offset;
    return EnergySpectrum(name_, std::move(moved), std::numeric_limits<std::int64_t>::max());
}

EnergySpectrum EnergySpectrum::renamed(std::string name) const {
    EnergySpectrum copy = *this;
    copy.name_ = std::move(name);
    return copy;
}

EnergySpectrum compose(const EnergySpectrum& a, const EnergySpectrum& b,
                       std::int64_t microstate_cap) {
    checked_product(a.microstate_count(), b.microstate_count(), microstate_cap);
    std::vector<Level> sums;
    sums.reserve(a.level_count() * b.level_count());
    for (const auto& la : a.levels()) {
        for (const auto& lb : b.levels()) {
            sums.push_back({la.energy + lb.energy, la.degeneracy * lb.degeneracy});
        }
    }
    return EnergySpectrum(a.name() + "*" + b.name(), std::move(sums), microstate_cap);
}

namespace builtin {

EnergySpectrum two_level(double gap) {
    if (!(gap > 0.0) || !std::isfinite(gap)) {
        throw InvalidModel("two_level: gap must be positive");
    }
    std::ostringstream name;
    name << "two_level(" << gap << ")";
    return EnergySpectrum(name.str(), {{0.0, 1}, {gap, 1}});
}

EnergySpectrum harmonic(double quantum, int count) {
    if (!(quantum > 0.0) || !std::isfinite(quantum)) {
        throw InvalidModel("harmonic: quantum must be positive");
    }
    if (count < 2) throw InvalidModel("harmonic: need at least 2 levels");
    std::vector<Level> levels;
    levels.reserve(static_cast<std::size_t>(count));
    for (int n = 0; n < count; ++n) levels.push_back({n * quantum, 1});
    std::ostringstream name;
    name << "harmonic(" << quantum << "," << count << ")";
    return EnergySpectrum(name.str(), std::move(levels));
}

EnergySpectrum random(std::uint64_t seed, int count, double lo, double hi) {
    if (count < 2) throw InvalidModel("random: need at least 2 levels");
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw InvalidModel("random: need a finite range with lo < hi");
    }
    Rng rng(seed);
    std::vector<Level> levels;
    levels.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) levels.push_back({rng.uniform(lo, hi), 1});
    std::ostringstream name;
    name << "random(" << seed << "," << count << "," << lo << "," << hi << ")";
    return EnergySpectrum(name.str(), std::move(levels));
}

}  // namespace builtin

EnergySpectrum spectrum_from_json(const nlohmann::json& j) {
    try {
        const auto& jl = j.at("levels");
        if (!jl.is_array()) throw ParseError("spectrum: 'levels' must be an array");
        std::vector<Level> levels;
        for (const auto& item : jl) {
            const auto& e = item.at("energy");
            const auto& g = item.at("degeneracy");
            if (!e.is_number()) throw ParseError("spectrum: energy must be a number");
            if (!g.is_number_integer()) throw ParseError("spectrum: degeneracy must be an integer");
            levels.push_back({e.get<double>(), g.get<std::int64_t>()});
        }
        std::string name = j.value("name", std::string("unnamed"));
        return EnergySpectrum(std::move(name), std::move(levels));
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("spectrum: ") + ex.what());
    }
}

nlohmann::json spectrum_to_json(const EnergySpectrum& s) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& level : s.levels()) {
        levels.push_back({{"energy", level.energy}, {"degeneracy", level.degeneracy}});
    }
    return {{"name", s.name()}, {"levels", std::move(levels)}};
}

EnergySpectrum load_spectrum(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open spectrum file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(path.string() + ": " + ex.what());
    }
    return spectrum_from_json(j);
}

void save_spectrum(const EnergySpectrum& s, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << spectrum_to_json(s).dump(2) << '\n';
}

namespace {

std::vector<double> parse_arguments(const std::string& ref, std::size_t open) {
    const auto close = ref.rfind(')');
    if (close == std::string::npos || close < open || close + 1 != ref.size()) {
        throw ParseError("malformed builtin spectrum '" + ref + "'");
    }
    std::vector<double> args;
    std::stringstream ss(ref.substr(open + 1, close - open - 1));
    ss.imbue(std::locale::classic());
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            args.push_back(std::stod(item, &used));
            if (item.find_first_not_of(' ', used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParseError("bad argument '" + item + "' in '" + ref + "'");
        }
    }
    return args;
}

}  // namespace

EnergySpectrum parse_builtin(const std::string& ref) {
    if (ref.empty() || ref.front() != '@') throw ParseError("not a builtin spectrum: " + ref);
    const auto open = ref.find('(');
    if (open == std::string::npos) throw ParseError("malformed builtin spectrum '" + ref + "'");
    const std::string kind = ref.substr(1, open - 1);
    const auto args = parse_arguments(ref, open);
    auto want = [&](std::size_t n) {
        if (args.size() != n) {
            throw ParseError(kind + " expects " + std::to_string(n) + " arguments");
        }
    };
    if (kind == "two_level" || kind == "tl") {
        want(1);
        return builtin::two_level(args[0]);
    }
    if (kind == "harmonic") {
        want(2);
        return builtin::harmonic(args[0], static_cast<int>(args[1]));
    }
    if (kind == "random") {
        want(4);
        return builtin::random(static_cast<std::uint64_t>(args[0]), static_cast<int>(args[1]),
                               args[2], args[3]);
    }
    throw ParseError("unknown builtin spectrum kind '" + kind + "'");
}

const EnergySpectrum& SpectrumLibrary::resolve(const std::string& ref) {
    if (auto it = entries_.find(ref); it != entries_.end()) return it->second;
    EnergySpectrum s = (!ref.empty() && ref.front() == '@') ? parse_builtin(ref) : load_spectrum(ref);
    return entries_.emplace(ref, std::move(s)).first->second;
}

void SpectrumLibrary::add(const std::string& name, EnergySpectrum spectrum) {
    if (!entries_.emplace(name, std::move(spectrum)).second) {
        throw ConfigError("spectrum name '" + name + "' already registered");
    }
}

}  // namespace entropometer
