#include "entropometer/entropy.hpp"

#include <cmath>
#include <sstream>

#include "entropometer/error.hpp"
#include "entropometer/thermo.hpp"

namespace entropometer::entropy {

numerics::QuadratureResult reciprocal_temperature_integral(const EnergySpectrum& b,
                                                           double e_from, double e_to,
                                                           const TemperatureScale& scale,
                                                           const QuadratureConfig& quad) {
    thermo::require_admissible(b, e_from);
    thermo::require_admissible(b, e_to);
    const double unit = scale.entropy_unit();
    // 1/T^B = beta_B(E) / (T_ref * beta_ref), the analytic temperature route.
    auto reciprocal_t = [&](double e) { return unit * thermo::beta_from_energy(b, e); };
    return numerics::adaptive_simpson(reciprocal_t, e_from, e_to, quad.abs_tol,
                                      quad.max_subintervals);
}

EntropyMeasurement entropy_difference(const ModelState& a1, const ModelState& a2, const SePoint& b,
                                      const TemperatureScale& scale,
                                      const QuadratureConfig& quad) {
    const auto process = simulate_standard_process(a1, a2, b, 0.0);
    const auto integral = reciprocal_temperature_integral(b.spectrum(), process.e_b_initial,
                                                          process.e_b_final, scale, quad);
    EntropyMeasurement m;
    m.delta_s = -integral.value;
    m.e_b_initial = process.e_b_initial;
    m.e_b_final = process.e_b_final;
    m.quadrature_error_estimate = integral.error_estimate;

    const double analytic = scale.entropy_unit() * (vn_entropy(a2) - vn_entropy(a1));
    if (!(std::abs(m.delta_s - analytic) <= quad.consistency_tol)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "operational entropy difference " << m.delta_s
            << " disagrees with von Neumann difference " << analytic;
        throw ConvergenceError(msg.str());
    }
    return m;
}

double entropy_value(const ModelState& a1, const ModelState& a0, double s0, const SePoint& b,
                     const TemperatureScale& scale, const QuadratureConfig& quad) {
    return s0 + entropy_difference(a0, a1, b, scale, quad).delta_s;
}

EntropyBracket irreversible_bound(const ModelState& a1, const ModelState& a2,
                                  const SePoint& b_forward, double sigma_f,
                                  const SePoint& b_backward, double sigma_b,
                                  const TemperatureScale& scale, const QuadratureConfig& quad) {
    const auto forward = simulate_standard_process(a1, a2, b_forward, sigma_f);
    const auto backward = simulate_standard_process(a2, a1, b_backward, sigma_b);
    const auto lower = reciprocal_temperature_integral(
        b_forward.spectrum(), forward.e_b_initial, forward.e_b_final, scale, quad);
    const auto upper = reciprocal_temperature_integral(
        b_backward.spectrum(), backward.e_b_initial, backward.e_b_final, scale, quad);
    return {-lower.value, upper.value};
}

namespace {

std::vector<double> uniform_weights(std::size_t n, Rng& rng,
                                    const std::vector<bool>* mask = nullptr) {
    std::vector<double> w(n, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (mask != nullptr && !(*mask)[i]) continue;
        // Shifted away from zero so every allowed microstate gets weight.
        w[i] = 1e-3 + rng.uniform();
        sum += w[i];
    }
    for (auto& x : w) x /= sum;
    return w;
}

double mean(const std::vector<double>& p, const std::vector<double>& e) {
    double out = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) out += p[i] * e[i];
    return out;
}

}  // namespace

ModelState sample_same_energy_state(const EnergySpectrum& spectrum, double energy, Rng& rng) {
    if (!(energy > spectrum.ground_energy() && energy < spectrum.top_energy())) {
        throw DomainError("target energy must lie strictly inside the spectrum",
                          energy <= spectrum.ground_energy() ? DomainError::Bound::lower
                                                             : DomainError::Bound::upper);
    }
    const auto e = spectrum.microstate_energies();
    const auto n = e.size();
    auto first = uniform_weights(n, rng);
    const double e_first = mean(first, e);
    if (e_first == energy) return ModelState(spectrum, std::move(first));

    std::vector<bool> other_side(n);
    for (std::size_t i = 0; i < n; ++i) {
        other_side[i] = e_first > energy ? e[i] < energy : e[i] > energy;
    }
    const auto second = uniform_weights(n, rng, &other_side);
    const double e_second = mean(second, e);
    // Mix lambda*first + (1-lambda)*second to hit the target energy.
    const double lambda = (energy - e_second) / (e_first - e_second);
    std::vector<double> p(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = lambda * first[i] + (1.0 - lambda) * second[i];
        sum += p[i];
    }
    for (auto& x : p) x /= sum;
    return ModelState(spectrum, std::move(p));
}

}  // namespace entropometer::entropy
