#include "entropometer/harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <sstream>

#include "entropometer/error.hpp"
#include "entropometer/format.hpp"
#include "entropometer/thermo.hpp"

namespace entropometer::harness {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBandLo = 0.01;
constexpr double kBandHi = 0.99;
constexpr int kMaxRedraws = 200;

// Worst residual over a check's instances; NaN counts as a failure.
class Tally {
public:
    void add(double residual) {
        if (std::isnan(residual)) residual = kInf;
        worst_ = std::max(worst_, residual);
    }
    void fail(const std::string& why) {
        worst_ = kInf;
        if (first_error_.empty()) first_error_ = why;
    }
    double worst() const { return worst_; }
    const std::string& first_error() const { return first_error_; }

private:
    double worst_ = 0.0;
    std::string first_error_;
};

CheckReport finish(const char* name, const SuiteConfig& config, int instances, const Tally& tally,
                   double tolerance, std::string detail = {}) {
    CheckReport r;
    r.name = name;
    r.instances = instances;
    r.max_residual = tally.worst();
    r.tolerance = tolerance;
    r.pass = tally.worst() <= tolerance;
    r.seed = config.seed;
    r.detail = tally.first_error().empty() ? std::move(detail) : tally.first_error();
    return r;
}

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double f11_eval(const SuiteConfig& config, const SePoint& b, const SePoint& c, double e) {
    return interconnect::f11(b, c, e) + config.f11_skew;
}

// Entropy increments (relative to the anchor) reachable while staying in the
// central band of the admissible window.
struct Band {
    double lo;
    double hi;
};

Band entropy_band(const SePoint& p) {
    const auto& s = p.spectrum();
    return {thermo::entropy_from_energy(s, window_energy(s, kBandLo)) - p.entropy(),
            thermo::entropy_from_energy(s, window_energy(s, kBandHi)) - p.entropy()};
}

Band intersect(Band a, Band b) { return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; }

bool in_band(const SePoint& p, double delta_s) {
    const Band band = entropy_band(p);
    return delta_s > band.lo && delta_s < band.hi;
}

// Source energies whose increments stay inside `band`.
std::pair<double, double> energy_span(const SePoint& b, Band band) {
    return {thermo::energy_from_entropy(b.spectrum(), b.entropy() + band.lo),
            thermo::energy_from_entropy(b.spectrum(), b.entropy() + band.hi)};
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    }
    return out;
}

// Shrinks a span by a relative margin so grid end points stay interior.
std::pair<double, double> shrink(std::pair<double, double> span, double margin = 1e-3) {
    const double w = span.second - span.first;
    return {span.first + margin * w, span.second - margin * w};
}

EnergySpectrum auxiliary_spectrum(Rng& rng) { return random_spectrum(rng, 16, 32); }
EnergySpectrum small_spectrum(Rng& rng) { return random_spectrum(rng, 4, 8); }

TemperatureScale random_calibrated_scale(Rng& rng) {
    auto s = random_spectrum(rng);
    return TemperatureScale::calibrated(random_point(rng, s));
}

// Mixes p toward the uniform state until its entropy has grown by `increase`.
ModelState raise_entropy(const ModelState& p, double increase) {
    const auto n = p.probs().size();
    const double target = vn_entropy(p) + increase;
    if (!(target < std::log(static_cast<double>(n)))) {
        throw RangeError("entropy increase not attainable", 0.0, std::log(static_cast<double>(n)));
    }
    auto mix = [&](double t) {
        std::vector<double> q(n);
        for (std::size_t i = 0; i < n; ++i) q[i] = (1.0 - t) * p.probs()[i] + t / static_cast<double>(n);
        return q;
    };
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-17; ++i) {
        const double mid = 0.5 * (lo + hi);
        (vn_entropy(mix(mid)) < target ? lo : hi) = mid;
    }
    auto q = mix(hi);
    const double sum = std::accumulate(q.begin(), q.end(), 0.0);
    for (auto& x : q) x /= sum;
    return ModelState(p.spectrum(), std::move(q));
}

ModelState permuted(Rng& rng, const ModelState& p) {
    std::vector<double> q(p.probs().begin(), p.probs().end());
    for (std::size_t i = q.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
        std::swap(q[i - 1], q[j]);
    }
    return ModelState(p.spectrum(), std::move(q));
}

// Pair of states whose entropy change the auxiliary point can absorb while
// staying in its central band.
bool absorbable(const ModelState& a1, const ModelState& a2, const SePoint& b, double sigma = 0.0) {
    return in_band(b, sigma - (vn_entropy(a2) - vn_entropy(a1)));
}

}  // namespace

double window_energy(const EnergySpectrum& s, double u) {
    return s.ground_energy() + u * (s.infinite_temperature_energy() - s.ground_energy());
}

EnergySpectrum random_spectrum(Rng& rng, int min_levels, int max_levels) {
    const auto n = static_cast<int>(rng.uniform_int(min_levels, max_levels));
    std::vector<Level> levels;
    levels.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        levels.push_back({rng.uniform(0.0, 10.0), rng.uniform_int(1, 3)});
    }
    return EnergySpectrum("random", std::move(levels));
}

SePoint random_point(Rng& rng, const EnergySpectrum& s) {
    const double width = s.infinite_temperature_energy() - s.ground_energy();
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
        const double beta = rng.log_uniform(1e-2, 1e2);
        const double excitation = thermo::excitation_energy(s, beta);
        const double u = excitation / width;
        if (u >= kBandLo && u <= kBandHi) return SePoint(s, s.ground_energy() + excitation);
    }
    return SePoint(s, window_energy(s, rng.uniform(0.1, 0.9)));
}

ModelState random_state(Rng& rng, const EnergySpectrum& s) {
    std::vector<double> p(static_cast<std::size_t>(s.microstate_count()));
    double sum = 0.0;
    for (auto& x : p) {
        x = 1e-3 + rng.uniform();
        sum += x;
    }
    for (auto& x : p) x /= sum;
    return ModelState(s, std::move(p));
}

AccessibilityGraph random_graph(Rng& rng, int max_nodes) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(3, max_nodes));
    std::vector<double> latent(n);
    std::vector<bool> sigma(n);
    for (std::size_t i = 0; i < n; ++i) {
        latent[i] = rng.uniform(0.0, 10.0);
        sigma[i] = rng.bernoulli(0.6);
    }
    // Edges only climb the latent order, so the graph is acyclic and
    // entropy never decreases along a path between Sigma nodes.
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            if (latent[u] < latent[v] && rng.bernoulli(0.3)) adj[u][v] = true;
        }
    }
    auto reach = [&](std::size_t from) {
        std::vector<bool> seen(n, false);
        std::vector<std::size_t> stack{from};
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v) {
                if (adj[u][v] && !seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
            }
        }
        return seen;
    };
    auto pick = [&](auto pred) -> std::optional<std::size_t> {
        std::vector<std::size_t> options;
        for (std::size_t v = 0; v < n; ++v) {
            if (sigma[v] && pred(v)) options.push_back(v);
        }
        if (options.empty()) return std::nullopt;
        return options[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(options.size()) - 1))];
    };
    for (std::size_t x = 0; x < n; ++x) {
        if (sigma[x]) continue;
        bool has_pred = false;
        for (std::size_t v = 0; v < n && !has_pred; ++v) has_pred = sigma[v] && reach(v)[x];
        if (!has_pred) {
            if (auto u = pick([&](std::size_t v) { return latent[v] < latent[x]; })) {
                adj[*u][x] = true;
            } else {
                sigma[x] = true;
                continue;
            }
        }
        const auto from_x = reach(x);
        bool has_succ = false;
        for (std::size_t v = 0; v < n && !has_succ; ++v) has_succ = sigma[v] && from_x[v];
        if (!has_succ) {
            if (auto w = pick([&](std::size_t v) { return latent[v] > latent[x]; })) {
                adj[x][*w] = true;
            } else {
                sigma[x] = true;
            }
        }
    }
    // Nodes promoted to Sigma above can leave earlier non-Sigma nodes valid
    // only through them, which is fine: promotion never removes paths.
    std::vector<AccessibilityGraph::Node> nodes;
    for (std::size_t i = 0; i < n; ++i) {
        AccessibilityGraph::Node node{"n" + std::to_string(i), std::nullopt};
        if (sigma[i]) node.entropy = latent[i];
        nodes.push_back(std::move(node));
    }
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            if (adj[u][v]) edges.emplace_back(nodes[u].id, nodes[v].id);
        }
    }
    return AccessibilityGraph(std::move(nodes), std::move(edges));
}

CheckReport check_f11_monotonicity(const SuiteConfig& config, int instances) {
    Rng rng(mix_seed(config.seed, 1));
    Tally tally;
    double min_step = kInf;
    for (int i = 0; i < instances; ++i) {
        try {
            for (int attempt = 0;; ++attempt) {
                auto b = random_point(rng, random_spectrum(rng));
                auto c = random_point(rng, random_spectrum(rng));
                const Band band = intersect(entropy_band(b), entropy_band(c));
                if (!(band.hi > band.lo)) {
                    if (attempt > kMaxRedraws) throw ConvergenceError("no overlapping band");
                    continue;
                }
                const auto span = shrink(energy_span(b, band));
                double previous = -kInf;
                double violations = 0.0;
                for (double e : linspace(span.first, span.second, 100)) {
                    const double ec = f11_eval(config, b, c, e);
                    if (previous != -kInf) {
                        min_step = std::min(min_step, ec - previous);
                        if (!(ec > previous)) violations += 1.0;
                    }
                    previous = ec;
                }
                tally.add(violations);
                break;
            }
        } catch (const Error& ex) {
            tally.fail(ex.what());
        }
    }
    return finish("f11_monotonicity", config, instances, tally, 0.0,
                  "non-increasing steps counted; min forward difference " + format_number(min_step));
}

CheckReport check_composition_identity(const SuiteConfig& config, int instances) {
    Rng rng(mix_seed(config.seed, 2));
    Tally tally;
    for (int i = 0; i < instances; ++i) {
        try {
            for (int attempt = 0;; ++attempt) {
                auto b = random_point(rng, random_spectrum(rng));
                auto r = random_point(rng, random_spectrum(rng));
                auto c = random_point(rng, random_spectrum(rng));
                const Band band = intersect(entropy_band(b), intersect(entropy_band(r), entropy_band(c)));
                if (!(band.hi > band.lo)) {
                    if (attempt > kMaxRedraws) throw ConvergenceError("no overlapping band");
                    continue;
                }
                const auto span = shrink(energy_span(b, band));
                for (double e : linspace(span.first, span.second, 20)) {
                    const double direct = f11_eval(config, b, c, e);
                    const double via = f11_eval(config, r, c, f11_eval(config, b, r, e));
                    tally.add(std::abs(direct - via));
                }
                break;
            }
        } catch (const Error& ex) {
            tally.fail(ex.what());
        }
    }
    return finish("composition_identity", config, instances, tally, config.tol.composition,
                  "max |f_BC - f_RC(f_BR)| over 20-point grids");
}

CheckReport check_shift_invariance(const SuiteConfig& config, int instances) {
    Rng rng(mix_seed(config.seed, 3));
    Tally tally;
    for (int i = 0; i < instances; ++i) {
        try {
            for (int attempt = 0;; ++attempt) {
                auto b1 = random_point(rng, random_spectrum(rng));
                auto c1 = random_point(rng, random_spectrum(rng));
                const Band band = intersect(entropy_band(b1), entropy_band(c1));
                if (!(band.hi > band.lo)) {
                    if (attempt > kMaxRedraws) throw ConvergenceError("no overlapping band");
                    continue;
                }
                const auto span = shrink(energy_span(b1, band));
                const double e_b2 = rng.uniform(span.first, span.second);
                const SePoint b2(b1.spectrum(), e_b2);
                const SePoint c2(c1.spectrum(), f11_eval(config, b1, c1, e_b2));
                for (double e : linspace(span.first, span.second, 20)) {
                    tally.add(std::abs(f11_eval(config, b2, c2, e) - f11_eval(config, b1, c1, e)));
                }
                break;
            }
        } catch (const Error& ex) {
            tally.fail(ex.what());
        }
    }
    return finish("shift_invariance", config, instances, tally, config.tol.shift_invariance,
                  "max |f(se2 anchors) - f(se1 anchors)| over 20-point grids");
}

CheckReport check_derivative_consistency(const SuiteConfig& config, int instances) {
    Rng rng(mix_seed(config.seed, 4));
    Tally tally;
    for (int i = 0; i < instances; ++i) {
        try {
            for (int attempt = 0;; ++attempt) {
                auto b = random_point(rng, random_spectrum(rng));
                auto c = random_point(rng, random_spectrum(rng));
                const Band band = intersect(entropy_band(b), entropy_band(c));
                if (!(band.hi > band.lo)) {
                    if (attempt > kMaxRedraws) throw ConvergenceError("no overlapping band");
                    continue;
                }
                const auto span = shrink(energy_span(b, band), 0.01);
                const double e = rng.uniform(span.first, span.second);
                const double analytic = interconnect::df11(b, c, e, Analytic{});
                const double fd = interconnect::df11(b, c, e, FiniteDifference{});
                tally.add(relative(fd, analytic));
                break;
            }
        } catch (const Error& ex) {
            tally.fail(ex.what());
        }
    }
    return finish("derivative_consistency", config, instances, tally, config.tol.derivative_rel,
                  "relative gap between beta ratio and Richardson difference");
}

CheckReport check_reference_independence(const SuiteConfig& config, int instances) {
    Rng rng(mix_seed(config.seed, 5));
    Tally tally;
    for (int i = 0; i < instances; ++i) {
        try {
            for (int attempt = 0;; ++attempt) {
                auto b = random_point(rng, random_spectrum(rng));
                auto c = random_point(rng, random_spectrum(rng));
                const Band band = intersect(entropy_band(b), entropy_band(c));
                if (!(band.hi > band.lo)) {
                    if (attempt > kMaxRedraws) throw ConvergenceError("no overlapping band");
                    continue;
                }
                // Move both systems along the interconnection so the direct
                // measurement runs through f11 rather than the anchor shortcut.
                const auto span = shrink(energy_span(b, band), 0.01);
                const SePoint b2(b.spectrum(), rng.uniform(span.first, span.second));
                const SePoint c2(c.spectrum(), f11_eval(config, b, c, b2.energy()));
                const TemperatureScale s1(random_point(rng, random_spectrum(rng)), rng.log_uniform(1.0, 1e3));
                const TemperatureScale s2(random_point(rng, random_spectrum(rng)), rng.log_uniform(1.0, 1e3));
                const double r1 = interconnect::temperature(c2, s1) / interconnect::temperature(b2, s1);
                const double r2 = interconnect::temperature(c2, s2) / interconnect::temperature(b2, s2);
                const double direct = interconnect::df11(b, c, b2.energy());
                tally.add(std::max(relative(r1, r2), relative(r1, direct)));
                break;
            }
        } catch (const Error& ex) {
            tally.fail(ex.what());
        }
    }
    return finish("reference_independence", config, instances, tally, config.tol.reference_rel,
                  "temperature ratios on two scales against d f11 / dE_B");
}

CheckReport check_auxiliary_independence(const SuiteConfig& config, int instances) {
    Rng rng(mix_seed(config.seed, 6));
    Tally tally;
    for (int i = 0; i < instances; ++i) {
        try {
            const auto scale = random_calibrated_scale(rng);
            for (int attempt = 0;; ++attempt) {
                const auto a = small_spectrum(rng);
                const auto a1 = random_state(rng, a);
                const auto a2 = random_state(rng, a);
                auto b = random_point(rng, auxiliary_spectrum(rng));
                auto b_alt = random_point(rng, auxiliary_spectrum(rng));
                if (!absorbable(a1, a2, b) || !absorbable(a1, a2, b_alt)) {
                    if (attempt > kMaxRedraws) throw ConvergenceError("no absorbable instance");
                    continue;
                }
                const auto m = entropy::entropy_difference(a1, a2, b, scale, config.quad);
                const auto m_alt = entropy::entropy_difference(a1, a2, b_alt, scale, config.quad);
                tally.add(std::abs(m.delta_s - m_alt.delta_s));
                break;
            }
        } catch (const Error& ex) {
            tally.fail(ex.what());
        }
    }
    return finish("auxiliary_independence", config, instances, tally, config.tol.auxiliary,
                  "|dS via B - dS via B'| in units of k");
}

CheckReport check_von_neumann_compatibility(const SuiteConfig& config, int instances) {
    Rng rng(mix_seed(config.seed, 7));
    Tally tally;
    int sign_violations = 0;
    for (int i = 0; i < instances; ++i) {
        try {
            const auto scale = i % 4 == 3 ? TemperatureScale::triple_point() : random_calibrated_scale(rng);
            for (int attempt = 0;; ++attempt) {
                const auto a = small_spectrum(rng);
                // Cycle through nonequilibrium, canonical and mirrored end states.
                auto make = [&](int kind) {
                    switch (kind) {
                        case 0:
                            return random_state(rng, a);
                        case 1:
                            return ModelState::canonical(a, rng.log_uniform(1e-2, 1e1));
                        default: {
                            std::vector<Level> levels(a.levels().begin(), a.levels().end());
                            for (auto& level : levels) level.energy = rng.uniform(0.0, 10.0);
                            const EnergySpectrum other("mirror", std::move(levels));
                            if (other.microstate_count() != a.microstate_count()) return random_state(rng, a);
                            return mirror_nonequilibrium(a, other, rng.log_uniform(1e-2, 1e1));
                        }
                    }
                };
                const auto a1 = make(i % 3);
                const auto a2 = make((i + 1) % 3 == 1 ? 0 : (i + 1) % 3);
                auto b = random_point(rng, auxiliary_spectrum(rng));
                if (!absorbable(a1, a2, b)) {
                    if (attempt > kMaxRedraws) throw ConvergenceError("no absorbable instance");
                    continue;
                }
                const auto m = entropy::entropy_difference(a1, a2, b, scale, config.quad);
                const double analytic = vn_entropy(a2) - vn_entropy(a1);
                tally.add(std::abs(m.delta_s - analytic));
                // The temperature integral carries the sign of the B energy change.
                const double integral = -m.delta_s;
                const double de = m.e_b_final - m.e_b_initial;
                if (de != 0.0 && (integral > 0.0) != (de > 0.0)) ++sign_violations;
                break;
            }
        } catch (const Error& ex) {
            tally.fail(ex.what());
        }
    }
    if (sign_violations > 0) tally.fail(std::to_string(sign_violations) + " sign violations");
    return finish("von_neumann_compatibility", config, instances, tally, config.tol.von_neumann,
                  "|operational dS - von Neumann dS| in units of k");
}

CheckReport check_entropy_nondecrease(const SuiteConfig& config, int instances) {
    Rng rng(mix_seed(config.seed, 8));
    Tally tally;
    for (int i = 0; i < instances; ++i) {
        try {
            const auto scale = random_calibrated_scale(rng);
            const int kind = i % 3;
            for (int attempt = 0;; ++attempt) {
                if (attempt > kMaxRedraws) throw ConvergenceError("no representable instance");
                const auto a = small_spectrum(rng);
                const auto a1 = random_state(rng, a);
                auto b = random_point(rng, auxiliary_spectrum(rng));
                if (kind == 0) {
                    // Reversible weight process for A alone: a unitary
                    // relabeling of microstates.
                    const auto a2 = permuted(rng, a1);
                    const auto m = entropy::entropy_difference(a1, a2, b, scale, config.quad);
                    tally.add(std::abs(m.delta_s));
                    break;
                }
                const double sigma = 0.1 * (1.0 - rng.uniform());  // (0, 0.1]
                if (kind == 1) {
                    // Irreversible weight process for A alone: B is left
                    // unchanged and A absorbs all the produced entropy.
                    if (vn_entropy(a1) + sigma >= std::log(static_cast<double>(a.microstate_count())) - 1e-3) continue;
                    const auto a2 = raise_entropy(a1, sigma);
                    if (!absorbable(a1, a2, b)) continue;
                    const auto outcome = simulate_standard_process(a1, a2, b, sigma);
                    const auto m = entropy::entropy_difference(a1, a2, b, scale, config.quad);
                    tally.add(std::max(0.0, sigma - m.delta_s));
                    tally.add(std::abs(outcome.e_b_final - outcome.e_b_initial) > 1e-12 ? kInf : 0.0);
                    break;
                }
                // Irreversible standard process: entropy of A measured on a
                // separate auxiliary, entropy of B from its own temperature.
                const auto a2 = random_state(rng, a);
                auto meter = random_point(rng, auxiliary_spectrum(rng));
                if (!absorbable(a1, a2, b, sigma) || !absorbable(a1, a2, meter)) continue;
                const auto outcome = simulate_standard_process(a1, a2, b, sigma);
                const double ds_a = entropy::entropy_difference(a1, a2, meter, scale, config.quad).delta_s;
                const double ds_b = entropy::reciprocal_temperature_integral(
                                        b.spectrum(), outcome.e_b_initial, outcome.e_b_final, scale, config.quad)
                                        .value;
                tally.add(std::max(0.0, sigma - (ds_a + ds_b)));
                break;
            }
        } catch (const Error& ex) {
            tally.fail(ex.what());
        }
    }
    return finish("entropy_nondecrease", config, instances, tally, config.tol.nondecrease,
                  "|dS| for reversible, max(0, sigma - dS_total) for irreversible processes");
}

CheckReport check_entropy_additivity(const SuiteConfig& config, int instances) {
    Rng rng(mix_seed(config.seed, 9));
    Tally tally;
    for (int i = 0; i < instances; ++i) {
        try {
            const auto scale = random_calibrated_scale(rng);
            for (int attempt = 0;; ++attempt) {
                if (attempt > kMaxRedraws) throw ConvergenceError("no representable instance");
                const auto sa = random_spectrum(rng, 4, 6);
                const auto sg = random_spectrum(rng, 4, 6);
                const auto a1 = random_state(rng, sa);
                const auto a2 = random_state(rng, sa);
                const auto g1 = random_state(rng, sg);
                const auto g2 = random_state(rng, sg);
                auto d1 = random_point(rng, auxiliary_spectrum(rng));
                if (!absorbable(a1, a2, d1)) continue;
                const auto step_a = entropy::entropy_difference(a1, a2, d1, scale, config.quad);
                const SePoint d3(d1.spectrum(), step_a.e_b_final);
                if (!absorbable(g1, g2, d3)) continue;
                const auto step_g = entropy::entropy_difference(g1, g2, d3, scale, config.quad);
                const auto joint = entropy::entropy_difference(product_state(a1, g1), product_state(a2, g2), d1,
                                                               scale, config.quad);
                tally.add(std::abs(joint.delta_s - (step_a.delta_s + step_g.delta_s)));
                break;
            }
        } catch (const Error& ex) {
            tally.fail(ex.what());
        }
    }
    return finish("entropy_additivity", config, instances, tally, config.tol.additivity,
                  "|dS_AB - (dS_A + dS_B)| through a shared auxiliary");
}

CheckReport check_maximum_entropy(const SuiteConfig& config, int instances) {
    Rng rng(mix_seed(config.seed, 10));
    Tally tally;
    double min_margin = kInf;
    for (int i = 0; i < instances; ++i) {
        try {
            const auto s = random_spectrum(rng);
            const double e = window_energy(s, rng.uniform(0.05, 0.95));
            const double s_max = thermo::entropy_from_energy(s, e);
            double violations = 0.0;
            for (int k = 0; k < 1000; ++k) {
                const auto sample = entropy::sample_same_energy_state(s, e, rng);
                const double margin = s_max - vn_entropy(sample);
                min_margin = std::min(min_margin, margin);
                if (!(margin > 0.0)) violations += 1.0;
            }
            tally.add(violations);
        } catch (const Error& ex) {
            tally.fail(ex.what());
        }
    }
    return finish("maximum_entropy", config, instances, tally, 0.0,
                  "samples at or above canonical entropy counted; min margin " + format_number(min_margin));
}

CheckReport check_irreversible_bracketing(const SuiteConfig& config, int instances) {
    Rng rng(mix_seed(config.seed, 11));
    Tally tally;
    for (int i = 0; i < instances; ++i) {
        try {
            if (i == 0) {
                // Two-level system heated from beta = 1 to 0.5, harmonic
                // auxiliary, sigma = 0.01 both ways.
                const auto tl = builtin::two_level(1.0);
                const auto a1 = ModelState::canonical(tl, 1.0);
                const auto a2 = ModelState::canonical(tl, 0.5);
                const auto b = SePoint::at_beta(builtin::harmonic(1.0, 64), 1.0);
                const auto scale = TemperatureScale::calibrated(b);
                const auto bracket = entropy::irreversible_bound(a1, a2, b, 0.01, b, 0.01, scale, config.quad);
                const double ds = vn_entropy(a2) - vn_entropy(a1);
                tally.add(std::max(std::abs(bracket.lower - (ds - 0.01)), std::abs(bracket.upper - (ds + 0.01))));
                continue;
            }
            const auto scale = random_calibrated_scale(rng);
            for (int attempt = 0;; ++attempt) {
                if (attempt > kMaxRedraws) throw ConvergenceError("no representable instance");
                const auto a = small_spectrum(rng);
                const auto a1 = random_state(rng, a);
                const auto a2 = random_state(rng, a);
                const double sigma_f = 0.1 * (1.0 - rng.uniform());
                const double sigma_b = 0.1 * (1.0 - rng.uniform());
                auto bf = random_point(rng, auxiliary_spectrum(rng));
                auto bb = random_point(rng, auxiliary_spectrum(rng));
                if (!absorbable(a1, a2, bf, sigma_f) || !absorbable(a2, a1, bb, sigma_b) || !absorbable(a1, a2, bf)) {
                    continue;
                }
                const double ds = entropy::entropy_difference(a1, a2, bf, scale, config.quad).delta_s;
                const auto bracket = entropy::irreversible_bound(a1, a2, bf, sigma_f, bb, sigma_b, scale, config.quad);
                if (!(bracket.lower < ds && ds < bracket.upper)) {
                    tally.add(kInf);
                } else {
                    tally.add(std::max(std::abs((ds - bracket.lower) - sigma_f),
                                       std::abs((bracket.upper - ds) - sigma_b)));
                }
                break;
            }
        } catch (const Error& ex) {
            tally.fail(ex.what());
        }
    }
    return finish("irreversible_bracketing", config, instances, tally, config.tol.bracket,
                  "bracket widths against produced entropies");
}

namespace {

// Transitive closure by Floyd-Warshall, independent of the graph's own BFS.
std::vector<std::vector<bool>> closure(const AccessibilityGraph& g) {
    const auto n = g.size();
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (std::size_t u = 0; u < n; ++u) {
        for (auto v : g.successors()[u]) r[u][v] = true;
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!r[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (r[k][j]) r[i][j] = true;
            }
        }
    }
    return r;
}

std::optional<EntropyRangeResult> brute_range(const AccessibilityGraph& g,
                                              const std::vector<std::vector<bool>>& r, std::size_t x) {
    if (g.in_sigma(x)) return EntropyRangeResult{*g.node(x).entropy, *g.node(x).entropy};
    std::optional<double> low;
    std::optional<double> high;
    for (std::size_t v = 0; v < g.size(); ++v) {
        if (!g.in_sigma(v)) continue;
        const double s = *g.node(v).entropy;
        if (r[v][x]) low = low ? std::max(*low, s) : s;
        if (r[x][v]) high = high ? std::min(*high, s) : s;
    }
    if (!low || !high) return std::nullopt;
    return EntropyRangeResult{*low, *high};
}

}  // namespace

CheckReport check_extension_ranges(const SuiteConfig& config, int instances) {
    Rng rng(mix_seed(config.seed, 12));
    Tally tally;
    int mismatches = 0;
    int contradictions = 0;
    int uncontained = 0;
    int forbidden = 0;
    for (int i = 0; i < instances; ++i) {
        try {
            const auto g = random_graph(rng, 12);
            const auto r = closure(g);
            for (std::size_t x = 0; x < g.size(); ++x) {
                const auto expected = brute_range(g, r, x);
                const auto got = extension::entropy_range(g, x);
                if (!expected || expected->low != got.low || expected->high != got.high) ++mismatches;
            }
            for (std::size_t x = 0; x < g.size(); ++x) {
                for (std::size_t y = 0; y < g.size(); ++y) {
                    if (x == y) continue;
                    try {
                        if (extension::assert_nondecrease(g, g.node(x).id, g.node(y).id) ==
                            NondecreaseVerdict::forbidden) {
                            ++forbidden;
                            if (r[y][x]) ++contradictions;
                        }
                    } catch (const InconsistentGraph&) {
                        ++contradictions;
                    }
                }
            }
            const auto ga = random_graph(rng, 8);
            const auto gb = random_graph(rng, 8);
            const auto product = extension::product_graph(ga, gb);
            for (const auto& na : ga.nodes()) {
                for (const auto& nb : gb.nodes()) {
                    if (!extension::check_range_additivity(ga, gb, product, na.id, nb.id).contained) ++uncontained;
                }
            }
        } catch (const Error& ex) {
            tally.fail(ex.what());
        }
    }
    tally.add(static_cast<double>(mismatches + contradictions + uncontained));
    std::ostringstream detail;
    detail << "range mismatches " << mismatches << ", verdict contradictions " << contradictions
           << " (of " << forbidden << " forbidden verdicts), containment failures " << uncontained;
    return finish("extension_ranges", config, instances, tally, 0.0, detail.str());
}

const std::vector<CheckEntry>& checks() {
    static const std::vector<CheckEntry> all{
        {"f11_monotonicity", &check_f11_monotonicity, 50},
        {"composition_identity", &check_composition_identity, 50},
        {"shift_invariance", &check_shift_invariance, 50},
        {"derivative_consistency", &check_derivative_consistency, 100},
        {"reference_independence", &check_reference_independence, 50},
        {"auxiliary_independence", &check_auxiliary_independence, 50},
        {"von_neumann_compatibility", &check_von_neumann_compatibility, 100},
        {"entropy_nondecrease", &check_entropy_nondecrease, 100},
        {"entropy_additivity", &check_entropy_additivity, 50},
        {"maximum_entropy", &check_maximum_entropy, 20},
        {"irreversible_bracketing", &check_irreversible_bracketing, 50},
        {"extension_ranges", &check_extension_ranges, 500},
    };
    return all;
}

std::vector<CheckReport> run_suite(const SuiteConfig& config) {
    if (config.instances && *config.instances < 1) throw ConfigError("instances must be >= 1");
    const auto& entries = checks();
    std::vector<CheckReport> reports;
    reports.reserve(entries.size());
    if (config.parallel) {
        std::vector<std::future<CheckReport>> pending;
        for (const auto& entry : entries) {
            pending.push_back(std::async(std::launch::async, entry.run, std::cref(config),
                                         config.instances.value_or(entry.default_instances)));
        }
        for (auto& f : pending) reports.push_back(f.get());
    } else {
        for (const auto& entry : entries) {
            reports.push_back(entry.run(config, config.instances.value_or(entry.default_instances)));
        }
    }
    return reports;
}

bool all_pass(const std::vector<CheckReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.pass; });
}

std::string report_json(const SuiteConfig& config, const std::vector<CheckReport>& reports) {
    std::string items = "[";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        if (i > 0) items += ",\n  ";
        items += JsonLine()
                     .add("name", r.name)
                     .add("instances", r.instances)
                     .add("max_residual", r.max_residual)
                     .add("tolerance", r.tolerance)
                     .add("pass", r.pass)
                     .add("seed", static_cast<std::int64_t>(r.seed))
                     .add("detail", r.detail)
                     .str();
    }
    items += "]";
    return JsonLine()
               .add("seed", static_cast<std::int64_t>(config.seed))
               .add("all_pass", all_pass(reports))
               .add_raw("checks", items)
               .str();
}

}  // namespace entropometer::harness
