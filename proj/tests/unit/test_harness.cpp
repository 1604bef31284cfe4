#include <gtest/gtest.h>

#include "entropometer/error.hpp"
#include "entropometer/harness.hpp"
#include "entropometer/thermo.hpp"

using namespace entropometer;
using namespace entropometer::harness;

namespace {

SuiteConfig seeded(std::uint64_t seed, int instances) {
    SuiteConfig c;
    c.seed = seed;
    c.instances = instances;
    return c;
}

const CheckReport& find(const std::vector<CheckReport>& reports, const std::string& name) {
    for (const auto& r : reports) {
        if (r.name == name) return r;
    }
    throw std::runtime_error("missing check " + name);
}

}  // namespace

TEST(Suite, AllChecksPassWithSeedOne) {
    const auto config = seeded(1, 50);
    const auto reports = run_suite(config);
    ASSERT_EQ(reports.size(), 12u);
    for (const auto& r : reports) {
        EXPECT_TRUE(r.pass) << r.name << " residual " << r.max_residual << " tol " << r.tolerance << " " << r.detail;
        EXPECT_EQ(r.pass, r.max_residual <= r.tolerance);
        EXPECT_EQ(r.instances, 50);
        EXPECT_EQ(r.seed, 1u);
    }
    EXPECT_TRUE(all_pass(reports));
}

TEST(Suite, DefaultInstanceCounts) {
    SuiteConfig config;
    const auto reports = run_suite(config);
    EXPECT_TRUE(all_pass(reports));
    EXPECT_EQ(find(reports, "maximum_entropy").instances, 20);
    EXPECT_EQ(find(reports, "extension_ranges").instances, 500);
    EXPECT_EQ(find(reports, "von_neumann_compatibility").instances, 100);
}

TEST(Suite, SkewedInterconnectionFailsComposition) {
    auto config = seeded(1, 20);
    config.f11_skew = 1e-3;
    const auto reports = run_suite(config);
    EXPECT_FALSE(find(reports, "composition_identity").pass);
    EXPECT_FALSE(all_pass(reports));
}

TEST(Suite, ReportsAreByteIdentical) {
    const auto config = seeded(7, 10);
    EXPECT_EQ(report_json(config, run_suite(config)), report_json(config, run_suite(config)));
}

TEST(Suite, ParallelMatchesSerial) {
    auto config = seeded(3, 10);
    const auto serial = report_json(config, run_suite(config));
    config.parallel = true;
    EXPECT_EQ(report_json(config, run_suite(config)), serial);
}

TEST(Suite, CheckOrderDoesNotMatter) {
    // A check run alone gives the same report as inside the suite.
    const auto config = seeded(5, 10);
    const auto reports = run_suite(config);
    const auto& entries = checks();
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
        const auto alone = it->run(config, 10);
        const auto& in_suite = find(reports, it->name);
        EXPECT_EQ(alone.max_residual, in_suite.max_residual) << it->name;
        EXPECT_EQ(alone.detail, in_suite.detail) << it->name;
    }
}

TEST(Suite, OtherSeedsPass) {
    for (std::uint64_t seed : {2u, 99u, 12345u}) {
        const auto reports = run_suite(seeded(seed, 30));
        for (const auto& r : reports) EXPECT_TRUE(r.pass) << "seed " << seed << " " << r.name << " " << r.detail;
    }
}

TEST(Suite, RejectsBadInstanceCount) {
    EXPECT_THROW(run_suite(seeded(1, 0)), ConfigError);
}

TEST(Suite, TightToleranceFailsAsReportEntry) {
    auto config = seeded(1, 10);
    config.tol.composition = 1e-20;
    const auto reports = run_suite(config);
    EXPECT_FALSE(find(reports, "composition_identity").pass);
    EXPECT_TRUE(find(reports, "shift_invariance").pass);
}

TEST(ReportJson, ParsesAndCarriesFields) {
    const auto config = seeded(1, 5);
    const auto j = nlohmann::json::parse(report_json(config, run_suite(config)));
    EXPECT_EQ(j.at("seed"), 1);
    EXPECT_TRUE(j.at("all_pass").get<bool>());
    ASSERT_EQ(j.at("checks").size(), 12u);
    EXPECT_EQ(j.at("checks")[0].at("name"), "f11_monotonicity");
    EXPECT_EQ(j.at("checks")[11].at("instances"), 5);
}

TEST(Generators, RespectRanges) {
    Rng rng(61);
    for (int i = 0; i < 200; ++i) {
        const auto s = random_spectrum(rng);
        EXPECT_GE(s.microstate_count(), 4);
        EXPECT_LE(s.level_count(), 32u);
        for (const auto& l : s.levels()) {
            EXPECT_GE(l.energy, 0.0);
            EXPECT_LE(l.energy, 10.0);
        }
        const auto p = random_point(rng, s);
        const double u = (p.energy() - s.ground_energy()) / (s.infinite_temperature_energy() - s.ground_energy());
        EXPECT_GE(u, 0.01);
        EXPECT_LE(u, 0.99);
    }
}

TEST(Generators, GraphsSatisfyInvariants) {
    Rng rng(67);
    for (int i = 0; i < 300; ++i) {
        const auto g = random_graph(rng, 12);
        EXPECT_LE(g.size(), 12u);
        EXPECT_TRUE(validate(g).empty());
    }
}
