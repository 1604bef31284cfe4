#include "entropometer/process.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "entropometer/error.hpp"
#include "entropometer/thermo.hpp"

namespace entropometer {

ModelState::ModelState(EnergySpectrum spectrum, std::vector<double> probs)
    : spectrum_(std::move(spectrum)), probs_(std::move(probs)) {
    if (static_cast<std::int64_t>(probs_.size()) != spectrum_.microstate_count()) {
        throw DimensionError("state has " + std::to_string(probs_.size()) +
                             " probabilities but spectrum '" + spectrum_.name() + "' has " +
                             std::to_string(spectrum_.microstate_count()) + " microstates");
    }
    double sum = 0.0;
    for (double p : probs_) {
        if (!std::isfinite(p) || p < 0.0) {
            throw InvalidModel("state probabilities must be finite and non-negative");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "state probabilities sum to " << sum << ", not 1";
        throw InvalidModel(msg.str());
    }
}

ModelState ModelState::canonical(EnergySpectrum spectrum, double beta) {
    auto p = thermo::canonical_probabilities(spectrum, beta);
    return ModelState(std::move(spectrum), std::move(p));
}

double ModelState::energy() const {
    const double e0 = spectrum_.ground_energy();
    double excitation = 0.0;
    std::size_t k = 0;
    for (const auto& level : spectrum_.levels()) {
        for (std::int64_t g = 0; g < level.degeneracy; ++g) {
            excitation += probs_[k++] * (level.energy - e0);
        }
    }
    return e0 + excitation;
}

ModelState product_state(const ModelState& p, const ModelState& q) {
    EnergySpectrum joint = compose(p.spectrum(), q.spectrum());
    const auto ep = p.spectrum().microstate_energies();
    const auto eq = q.spectrum().microstate_energies();
    struct Pair {
        double energy;
        double prob;
    };
    std::vector<Pair> pairs;
    pairs.reserve(ep.size() * eq.size());
    for (std::size_t i = 0; i < ep.size(); ++i) {
        for (std::size_t j = 0; j < eq.size(); ++j) {
            pairs.push_back({ep[i] + eq[j], p.probs()[i] * q.probs()[j]});
        }
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const Pair& a, const Pair& b) { return a.energy < b.energy; });
    std::vector<double> probs;
    probs.reserve(pairs.size());
    for (const auto& pair : pairs) probs.push_back(pair.prob);
    // Products of normalized vectors can drift off 1 by a few ulps per term.
    const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
    for (auto& x : probs) x /= sum;
    return ModelState(std::move(joint), std::move(probs));
}

double vn_entropy(std::span<const double> probs) {
    double s = 0.0;
    for (double p : probs) {
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

double vn_entropy(const ModelState& state) { return vn_entropy(state.probs()); }

StandardProcessOutcome simulate_standard_process(const ModelState& a1, const ModelState& a2,
                                                 const SePoint& b, double sigma) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw DomainError("entropy production sigma must be finite and >= 0",
                          DomainError::Bound::lower);
    }
    if (!(a1.spectrum() == a2.spectrum())) {
        throw DimensionError("end states of A live on different spectra");
    }
    const double delta_a = vn_entropy(a2) - vn_entropy(a1);
    const double delta_b = sigma - delta_a;
    StandardProcessOutcome out;
    out.e_b_initial = b.energy();
    out.sigma = sigma;
    out.reversible = sigma == 0.0;
    if (delta_b == 0.0) {
        out.e_b_final = b.energy();
        return out;
    }
    const double target = b.entropy() + delta_b;
    const auto window = thermo::entropy_window(b.spectrum());
    if (!(target > window.lo && target < window.hi)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "auxiliary system '" << b.spectrum().name() << "' cannot change its entropy by "
            << delta_b << "; attainable interval is (" << window.lo - b.entropy() << ", "
            << window.hi - b.entropy() << ")";
        throw RangeError(msg.str(), window.lo - b.entropy(), window.hi - b.entropy());
    }
    out.e_b_final = thermo::energy_from_entropy(b.spectrum(), target);
    return out;
}

bool unitary_feasible(const ModelState& a1, const ModelState& b1, const ModelState& a2,
                      const ModelState& b2, double tol) {
    const auto n1 = a1.probs().size() * b1.probs().size();
    const auto n2 = a2.probs().size() * b2.probs().size();
    if (n1 != n2) {
        throw DimensionError("product dimensions differ: " + std::to_string(n1) + " vs " +
                             std::to_string(n2));
    }
    auto sorted_products = [](const ModelState& x, const ModelState& y) {
        std::vector<double> out;
        out.reserve(x.probs().size() * y.probs().size());
        for (double px : x.probs()) {
            for (double py : y.probs()) out.push_back(px * py);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    const auto first = sorted_products(a1, b1);
    const auto second = sorted_products(a2, b2);
    for (std::size_t i = 0; i < first.size(); ++i) {
        if (!(std::abs(first[i] - second[i]) <= tol)) return false;
    }
    return true;
}

ModelState mirror_nonequilibrium(const EnergySpectrum& a, const EnergySpectrum& b, double beta) {
    if (a.microstate_count() != b.microstate_count()) {
        throw DimensionError("mirror needs equal microstate counts (" +
                             std::to_string(a.microstate_count()) + " vs " +
                             std::to_string(b.microstate_count()) + ")");
    }
    auto p = thermo::canonical_probabilities(b, beta);
    std::sort(p.begin(), p.end(), std::greater<>());
    return ModelState(a, std::move(p));
}

WeightPolygonal WeightPolygonal::reversed() const {
    std::vector<WeightLeg> legs(legs_.rbegin(), legs_.rend());
    for (auto& leg : legs) {
        leg.direction = leg.direction == LegDirection::forward ? LegDirection::backward
                                                               : LegDirection::forward;
    }
    return WeightPolygonal(std::move(legs));
}

double polygonal_work(const WeightPolygonal& polygonal) {
    double work = 0.0;
    for (const auto& leg : polygonal.legs()) {
        work += leg.direction == LegDirection::forward ? leg.work : -leg.work;
    }
    return work;
}

double energy_difference(const WeightPolygonal& polygonal) { return -polygonal_work(polygonal); }

ModelState load_state(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open state file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
        const std::string ref = j.at("spectrum").get<std::string>();
        EnergySpectrum spectrum = [&] {
            if (!ref.empty() && ref.front() == '@') return parse_builtin(ref);
            std::filesystem::path sp(ref);
            if (sp.is_relative()) sp = path.parent_path() / sp;
            return load_spectrum(sp);
        }();
        if (j.contains("probs")) {
            return ModelState(std::move(spectrum), j.at("probs").get<std::vector<double>>());
        }
        if (j.contains("beta")) {
            return ModelState::canonical(std::move(spectrum), j.at("beta").get<double>());
        }
        throw ParseError(path.string() + ": state needs 'probs' or 'beta'");
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(path.string() + ": " + ex.what());
    }
}

}  // namespace entropometer
