#include <gtest/gtest.h>

#include <cmath>

#include "entropometer/error.hpp"
#include "entropometer/harness.hpp"
#include "entropometer/thermo.hpp"
#include "oracle_values.hpp"

using namespace entropometer;
using namespace entropometer::thermo;

namespace {

const EnergySpectrum& tl() {
    static const auto s = builtin::two_level(1.0);
    return s;
}

const EnergySpectrum& h64() {
    static const auto s = builtin::harmonic(1.0, 64);
    return s;
}

double relative(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Thermo, TwoLevelValues) {
    EXPECT_NEAR(ln_partition(tl(), 1.0), oracle::kLnZ_TL_1, 1e-15);
    EXPECT_NEAR(mean_energy(tl(), 1.0), oracle::kE_TL_1, 1e-15);
    EXPECT_NEAR(entropy_se(tl(), 1.0), oracle::kS_TL_1, 1e-15);
    EXPECT_NEAR(entropy_se(tl(), 0.5), oracle::kS_TL_05, 1e-15);
    EXPECT_NEAR(heat_capacity(tl(), 1.0), oracle::kC_TL_1, 1e-15);
}

TEST(Thermo, HarmonicLadderPartition) {
    EXPECT_NEAR(ln_partition(h64(), 1.0), oracle::kLnZ_H64_1, 1e-12);
    EXPECT_NEAR(ln_partition(h64(), 1.0), std::log(1.0 / (1.0 - std::exp(-1.0))), 1e-12);
}

TEST(Thermo, ShiftIdentity) {
    for (double c : {-50.0, -1.0, 3.0, 700.0}) {
        const auto shifted = tl().shifted(c);
        for (double beta : {0.01, 1.0, 30.0}) {
            EXPECT_NEAR(ln_partition(shifted, beta), ln_partition(tl(), beta) - beta * c,
                        1e-12 * std::max(1.0, std::abs(beta * c)));
            EXPECT_NEAR(mean_energy(shifted, beta), mean_energy(tl(), beta) + c, 1e-12 * std::max(1.0, std::abs(c)));
            EXPECT_NEAR(entropy_se(shifted, beta), entropy_se(tl(), beta), 1e-13);
            EXPECT_NEAR(heat_capacity(shifted, beta), heat_capacity(tl(), beta), 1e-13);
        }
    }
}

TEST(Thermo, SymmetricSpectrumCentersAtHighTemperature) {
    const EnergySpectrum sym("sym", {{-1, 1}, {1, 1}});
    EXPECT_NEAR(mean_energy(sym, 1e-12), 0.0, 1e-11);
    EXPECT_DOUBLE_EQ(sym.infinite_temperature_energy(), 0.0);
}

TEST(Thermo, LowTemperatureLimit) {
    EXPECT_LT(mean_energy(tl(), 50.0), 1e-20);
    EXPECT_GT(mean_energy(tl(), 50.0), 0.0);
    EXPECT_EQ(mean_energy(tl(), 1e6), 0.0);
    EXPECT_NEAR(entropy_se(tl(), 1e-12), std::log(2.0), 1e-12);
}

TEST(Thermo, DegenerateTwoEnergyHeatCapacity) {
    // Mass at energies 0 and delta only: C = (beta delta)^2 p (1 - p) with
    // p = g1 e^{-beta delta} / (g0 + g1 e^{-beta delta}).
    const double delta = 1.7;
    const EnergySpectrum s("deg", {{0, 3}, {delta, 5}});
    for (double beta : {0.1, 0.8, 4.0}) {
        const double w = 5.0 * std::exp(-beta * delta);
        const double p = w / (3.0 + w);
        EXPECT_NEAR(heat_capacity(s, beta), beta * beta * delta * delta * p * (1.0 - p), 1e-14);
        EXPECT_NEAR(mean_energy(s, beta), delta * p, 1e-14);
    }
}

TEST(Thermo, HeatCapacityMatchesFiniteDifference) {
    Rng rng(17);
    for (int i = 0; i < 50; ++i) {
        const auto s = harness::random_spectrum(rng);
        const double beta = rng.log_uniform(1e-2, 1e1);
        const double h = 1e-4 * beta;
        const double de_dbeta = (mean_energy(s, beta + h) - mean_energy(s, beta - h)) / (2.0 * h);
        EXPECT_LT(relative(-beta * beta * de_dbeta, heat_capacity(s, beta)), 1e-6);
    }
}

TEST(Thermo, ProbabilitiesMatchEntropy) {
    const auto p = canonical_probabilities(tl(), 1.0);
    ASSERT_EQ(p.size(), 2u);
    double s = 0.0;
    for (double x : p) s -= x * std::log(x);
    EXPECT_NEAR(s, oracle::kS_TL_1, 1e-15);
    const CanonicalState state(builtin::harmonic(1.0, 3), 2.0);
    EXPECT_EQ(state.probabilities().size(), 3u);
    EXPECT_DOUBLE_EQ(state.point().beta, 2.0);
}

TEST(Thermo, RejectsNonPositiveBeta) {
    EXPECT_THROW(ln_partition(tl(), 0.0), DomainError);
    EXPECT_THROW(mean_energy(tl(), -1.0), DomainError);
    EXPECT_THROW(entropy_se(tl(), std::nan("")), DomainError);
    EXPECT_THROW(heat_capacity(tl(), INFINITY), DomainError);
    EXPECT_THROW(CanonicalState(tl(), 0.0), DomainError);
}

TEST(BetaFromEnergy, TwoLevelRoundTrip) {
    EXPECT_NEAR(beta_from_energy(tl(), oracle::kE_TL_1), 1.0, 1e-9);
    EXPECT_NEAR(beta_from_energy(tl(), 0.268941), 1.0, 1e-5);
}

TEST(BetaFromEnergy, NamesViolatedBound) {
    try {
        beta_from_energy(tl(), 0.5);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_EQ(e.bound(), DomainError::Bound::upper);
        EXPECT_NE(std::string(e.what()).find("upper bound"), std::string::npos);
    }
    try {
        beta_from_energy(tl(), -0.1);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_EQ(e.bound(), DomainError::Bound::lower);
        EXPECT_NE(std::string(e.what()).find("lower bound"), std::string::npos);
    }
    EXPECT_THROW(beta_from_energy(tl(), 0.0), DomainError);
    EXPECT_THROW(beta_from_energy(tl(), 0.7), DomainError);
}

TEST(BetaFromEnergy, RoundTripAcrossBetaRange) {
    // Ground-anchored spectra keep the excitation representable; beta stops
    // where the excitation itself underflows.
    Rng rng(23);
    int tested = 0;
    for (int i = 0; i < 200; ++i) {
        const auto raw = harness::random_spectrum(rng);
        const auto s = raw.shifted(-raw.ground_energy());
        const double gap = s.levels()[1].energy;
        const double beta = rng.log_uniform(1e-3, 1e3);
        if (beta * gap > 600.0) continue;
        const double e = mean_energy(s, beta);
        if (!is_admissible(s, e)) continue;
        EXPECT_LT(relative(beta_from_energy(s, e), beta), 1e-9) << "beta " << beta << " gap " << gap;
        ++tested;
    }
    EXPECT_GT(tested, 100);
}

TEST(Entropy, H1ExamplesAndIdentity) {
    EXPECT_NEAR(h1(tl(), oracle::kE_TL_05, oracle::kE_TL_1), oracle::kDeltaS_TL, 1e-14);
    EXPECT_EQ(h1(h64(), 3.0, 3.0), 0.0);
    EXPECT_THROW(h1(tl(), 0.6, 0.3), DomainError);
}

TEST(Entropy, H1StrictlyIncreasingOnGrid) {
    const auto s = builtin::random(5, 12, 0.0, 4.0);
    const double lo = s.ground_energy();
    const double hi = s.infinite_temperature_energy();
    const double e1 = 0.5 * (lo + hi);
    double previous = -INFINITY;
    for (int i = 1; i <= 100; ++i) {
        const double e = lo + (hi - lo) * i / 101.0;
        const double v = h1(s, e, e1);
        EXPECT_GT(v, previous);
        previous = v;
    }
}

TEST(Entropy, SlopeIsBeta) {
    Rng rng(31);
    for (int i = 0; i < 100; ++i) {
        const auto s = harness::random_spectrum(rng);
        const double e = harness::random_point(rng, s).energy();
        const double width = s.infinite_temperature_energy() - s.ground_energy();
        const double h = 1e-5 * width;
        const double slope = (entropy_from_energy(s, e + h) - entropy_from_energy(s, e - h)) / (2.0 * h);
        EXPECT_LT(relative(slope, beta_from_energy(s, e)), 1e-6);
    }
}

TEST(Entropy, HeatCapacityPositive) {
    Rng rng(37);
    for (int i = 0; i < 100; ++i) {
        const auto s = harness::random_spectrum(rng);
        EXPECT_GT(heat_capacity(s, rng.log_uniform(1e-2, 1e2)), 0.0);
    }
    EXPECT_GT(heat_capacity(tl(), 1e-3), 0.0);
    EXPECT_GT(heat_capacity(tl(), 300.0), 0.0);
}

TEST(Entropy, WindowInversion) {
    const auto s = builtin::harmonic(1.0, 8);
    const auto w = entropy_window(s);
    EXPECT_DOUBLE_EQ(w.lo, 0.0);
    EXPECT_DOUBLE_EQ(w.hi, std::log(8.0));
    for (double target : {0.1, 1.0, 2.0}) {
        EXPECT_NEAR(entropy_from_energy(s, energy_from_entropy(s, target)), target, 1e-12);
    }
    EXPECT_THROW(beta_from_entropy(s, 0.0), RangeError);
    try {
        beta_from_entropy(s, 3.0);
        FAIL();
    } catch (const RangeError& e) {
        EXPECT_DOUBLE_EQ(e.attainable_lo(), 0.0);
        EXPECT_DOUBLE_EQ(e.attainable_hi(), std::log(8.0));
    }
}
