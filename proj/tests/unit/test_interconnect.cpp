#include <gtest/gtest.h>

#include <cmath>

#include "entropometer/error.hpp"
#include "entropometer/harness.hpp"
#include "entropometer/interconnect.hpp"
#include "entropometer/thermo.hpp"
#include "oracle_values.hpp"

using namespace entropometer;
using namespace entropometer::interconnect;

namespace {

SePoint tl_at(double beta) { return SePoint::at_beta(builtin::two_level(1.0), beta); }
SePoint h64_at(double beta) { return SePoint::at_beta(builtin::harmonic(1.0, 64), beta); }

double relative(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Random pair with a nonempty interconnection domain, and an interior energy.
struct Instance {
    SePoint b;
    SePoint c;
    double energy;
};

Instance random_instance(Rng& rng) {
    for (;;) {
        auto b = harness::random_point(rng, harness::random_spectrum(rng));
        auto c = harness::random_point(rng, harness::random_spectrum(rng));
        const auto d = f11_domain(b, c);
        const double w = d.hi - d.lo;
        if (!(w > 1e-3 * (b.spectrum().infinite_temperature_energy() - b.spectrum().ground_energy()))) continue;
        return {b, c, rng.uniform(d.lo + 0.05 * w, d.hi - 0.05 * w)};
    }
}

}  // namespace

TEST(SePoint, ValidatesEnergy) {
    EXPECT_THROW(SePoint(builtin::two_level(1.0), 0.5), DomainError);
    EXPECT_THROW(SePoint(builtin::two_level(1.0), 0.0), DomainError);
    const auto p = tl_at(1.0);
    EXPECT_NEAR(p.energy(), oracle::kE_TL_1, 1e-15);
    EXPECT_NEAR(p.entropy(), oracle::kS_TL_1, 1e-15);
    EXPECT_DOUBLE_EQ(p.beta(), 1.0);
}

TEST(F11, IdentityForEqualAnchors) {
    const auto b = tl_at(1.0);
    for (double e : {0.01, 0.2, oracle::kE_TL_1, 0.45, 0.4999}) {
        EXPECT_NEAR(f11(b, b, e), e, 1e-13);
    }
}

TEST(F11, TwoLevelIntoHarmonicLadder) {
    const double ec = f11(tl_at(1.0), h64_at(1.0), oracle::kE_TL_05);
    EXPECT_NEAR(ec, oracle::kF11_EC, 1e-12);
    const auto& h = builtin::harmonic(1.0, 64);
    EXPECT_NEAR(thermo::entropy_from_energy(h, ec) - h64_at(1.0).entropy(), oracle::kDeltaS_TL, 1e-12);
    EXPECT_NEAR(thermo::beta_from_energy(h, ec), oracle::kF11_BetaC, 1e-10);
}

TEST(F11, AnchorMapsExactly) {
    const auto b = tl_at(1.0);
    const auto c = h64_at(2.0);
    EXPECT_EQ(f11(b, c, b.energy()), c.energy());
}

TEST(F11, RangeErrorCarriesAttainableInterval) {
    // A ladder far above its ground cannot shed enough entropy for a two-level
    // system cooled from high temperature.
    const auto b = tl_at(0.01);
    const auto c = SePoint::at_beta(builtin::harmonic(1.0, 3), 5.0);
    try {
        f11(b, c, 0.01);
        FAIL();
    } catch (const RangeError& e) {
        const auto w = thermo::entropy_window(c.spectrum());
        EXPECT_NEAR(e.attainable_lo(), w.lo - c.entropy(), 1e-15);
        EXPECT_NEAR(e.attainable_hi(), w.hi - c.entropy(), 1e-15);
    }
    EXPECT_THROW(f11(b, c, 0.6), DomainError);
}

TEST(F11, DomainBoundsAreTight) {
    const auto b = tl_at(0.01);
    const auto c = SePoint::at_beta(builtin::harmonic(1.0, 3), 5.0);
    const auto d = f11_domain(b, c);
    EXPECT_GT(d.lo, b.spectrum().ground_energy());
    EXPECT_LT(d.lo, b.energy());
    const double w = d.hi - d.lo;
    EXPECT_NO_THROW(f11(b, c, d.lo + 1e-6 * w));
    EXPECT_THROW(f11(b, c, d.lo - 1e-6 * w), RangeError);
}

TEST(Df11, AnalyticAtAnchor) {
    EXPECT_EQ(df11(tl_at(1.0), tl_at(1.0), tl_at(1.0).energy()), 1.0);
    const auto b = tl_at(1.0);
    const auto c = h64_at(2.0);
    EXPECT_DOUBLE_EQ(df11(b, c, b.energy()), 0.5);
    EXPECT_LT(relative(df11(b, c, b.energy(), FiniteDifference{}), 0.5), 1e-6);
}

TEST(Df11, FiniteDifferenceAgreesWithAnalytic) {
    Rng rng(101);
    for (int i = 0; i < 200; ++i) {
        const auto [b, c, e] = random_instance(rng);
        const double a = df11(b, c, e, Analytic{});
        const double fd = df11(b, c, e, FiniteDifference{});
        EXPECT_GT(a, 0.0);
        EXPECT_GT(fd, 0.0);
        EXPECT_LT(relative(fd, a), 1e-6);
    }
}

TEST(Df11, StepUnderflowThrows) {
    const auto b = tl_at(1.0);
    EXPECT_THROW(df11(b, h64_at(1.0), b.energy(), FiniteDifference{1e-20}), ConvergenceError);
}

TEST(Df11, InverseDerivativeProduct) {
    Rng rng(103);
    for (int i = 0; i < 100; ++i) {
        const auto [b, c, e] = random_instance(rng);
        const double ec = f11(b, c, e);
        EXPECT_NEAR(df11(b, c, e) * df11(c, b, ec), 1.0, 1e-8);
        EXPECT_NEAR(f11(c, b, ec), e, 1e-10 * std::max(1.0, std::abs(e)));
    }
}

TEST(F11Property, StrictlyIncreasingAndSameSign) {
    Rng rng(107);
    for (int i = 0; i < 50; ++i) {
        const auto [b, c, e0] = random_instance(rng);
        const auto d = f11_domain(b, c);
        const double w = d.hi - d.lo;
        double previous = -INFINITY;
        for (int k = 1; k < 50; ++k) {
            const double e = d.lo + w * k / 50.0;
            const double ec = f11(b, c, e);
            EXPECT_GT(ec, previous);
            previous = ec;
            const double de = e - b.energy();
            const double dc = ec - c.energy();
            if (std::abs(de) > 1e-9) EXPECT_EQ(de > 0, dc > 0);
        }
    }
}

TEST(F11Property, DerivativeEqualsRatioAtMovedPair) {
    Rng rng(109);
    for (int i = 0; i < 100; ++i) {
        const auto [b, c, e] = random_instance(rng);
        const SePoint b2(b.spectrum(), e);
        const SePoint c2(c.spectrum(), f11(b, c, e));
        EXPECT_LT(relative(df11(b, c, e), temperature_ratio(b2, c2)), 1e-8);
    }
}

TEST(F11Property, RatioComposition) {
    Rng rng(113);
    for (int i = 0; i < 100; ++i) {
        const auto b = harness::random_point(rng, harness::random_spectrum(rng));
        const auto r = harness::random_point(rng, harness::random_spectrum(rng));
        const auto c = harness::random_point(rng, harness::random_spectrum(rng));
        EXPECT_LT(relative(temperature_ratio(b, r) * temperature_ratio(r, c), temperature_ratio(b, c)), 1e-8);
    }
}

TEST(Temperature, SelfReferenceGivesTref) {
    const TemperatureScale scale(h64_at(0.7), 42.0);
    EXPECT_DOUBLE_EQ(temperature(scale.reference(), scale), 42.0);
}

TEST(Temperature, BetaRatio) {
    const TemperatureScale scale(tl_at(1.0), 1.0);
    EXPECT_DOUBLE_EQ(temperature(tl_at(2.0), scale), 0.5);
    EXPECT_LT(relative(temperature(tl_at(2.0), scale, FiniteDifference{}), 0.5), 1e-6);
}

TEST(Temperature, TriplePointScale) {
    const auto scale = TemperatureScale::triple_point();
    EXPECT_EQ(scale.t_ref(), 273.16);
    EXPECT_EQ(scale.t_ref(), kTriplePointTemperature);
    EXPECT_EQ(scale.reference().spectrum(), builtin::harmonic(100.0, 256));
    EXPECT_NEAR(scale.reference().beta(), 1.0 / 273.16, 1e-15);
    EXPECT_NEAR(scale.entropy_unit(), 1.0, 1e-12);
    EXPECT_NEAR(temperature(SePoint::at_beta(builtin::two_level(1.0), 1.0 / 300.0), scale), 300.0, 1e-9);
}

TEST(Temperature, CalibratedScaleIsInverseBeta) {
    const auto scale = TemperatureScale::calibrated(h64_at(0.25));
    EXPECT_DOUBLE_EQ(scale.t_ref(), 4.0);
    EXPECT_NEAR(temperature(tl_at(2.0), scale), 0.5, 1e-15);
    EXPECT_THROW(TemperatureScale(tl_at(1.0), 0.0), DomainError);
    EXPECT_THROW(TemperatureScale(tl_at(1.0), -3.0), DomainError);
}
