#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "entropometer/error.hpp"
#include "entropometer/random.hpp"
#include "entropometer/spectrum.hpp"

using namespace entropometer;

namespace {

std::vector<Level> levels_of(const EnergySpectrum& s) { return {s.levels().begin(), s.levels().end()}; }

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / ("entropometer_" + name);
    std::ofstream(path) << text;
    return path;
}

EnergySpectrum random_small(Rng& rng) {
    const auto n = rng.uniform_int(2, 6);
    std::vector<Level> levels;
    for (int i = 0; i < n; ++i) levels.push_back({rng.uniform(0.0, 5.0), rng.uniform_int(1, 3)});
    return EnergySpectrum("r", levels);
}

}  // namespace

TEST(Spectrum, LoadsTwoLevelFile) {
    const auto s = load_spectrum(std::filesystem::path(ENTROPOMETER_TEST_DATA) / "tl.json");
    EXPECT_EQ(s.name(), "two_level");
    EXPECT_EQ(levels_of(s), (std::vector<Level>{{0, 1}, {1, 1}}));
    EXPECT_EQ(s.microstate_count(), 2);
    EXPECT_DOUBLE_EQ(s.infinite_temperature_energy(), 0.5);
}

TEST(Spectrum, SortsUnorderedLevels) {
    const auto path = write_temp("unsorted.json", R"({"name":"u","levels":[{"energy":1,"degeneracy":1},{"energy":0,"degeneracy":1}]})");
    EXPECT_EQ(levels_of(load_spectrum(path)), (std::vector<Level>{{0, 1}, {1, 1}}));
}

TEST(Spectrum, MergesEqualEnergies) {
    const auto path = write_temp(
        "dup.json",
        R"({"name":"d","levels":[{"energy":0,"degeneracy":1},{"energy":0,"degeneracy":2},{"energy":1,"degeneracy":1}]})");
    EXPECT_EQ(levels_of(load_spectrum(path)), (std::vector<Level>{{0, 3}, {1, 1}}));
}

TEST(Spectrum, MergeToleranceIsRelative) {
    const EnergySpectrum s("m", {{1e6, 1}, {1e6 + 1e-7, 1}, {0, 1}});
    EXPECT_EQ(s.level_count(), 2u);
    EXPECT_EQ(s.levels()[1].degeneracy, 2);
    const EnergySpectrum t("t", {{0, 1}, {1e-11, 1}});
    EXPECT_EQ(t.level_count(), 2u);
}

TEST(Spectrum, RejectsInvalidLevels) {
    EXPECT_THROW(EnergySpectrum("one", {{0, 1}}), InvalidModel);
    EXPECT_THROW(EnergySpectrum("merged", {{0, 1}, {0, 4}}), InvalidModel);
    EXPECT_THROW(EnergySpectrum("nan", {{0, 1}, {std::nan(""), 1}}), InvalidModel);
    EXPECT_THROW(EnergySpectrum("inf", {{0, 1}, {INFINITY, 1}}), InvalidModel);
    EXPECT_THROW(EnergySpectrum("g0", {{0, 1}, {1, 0}}), InvalidModel);
    EXPECT_THROW(EnergySpectrum("cap", {{0, 600000}, {1, 600000}}), InvalidModel);
}

TEST(Spectrum, ParseErrors) {
    EXPECT_THROW(load_spectrum("/nonexistent/file.json"), ParseError);
    EXPECT_THROW(load_spectrum(write_temp("garbage.json", "{not json")), ParseError);
    EXPECT_THROW(load_spectrum(write_temp("nolevels.json", R"({"name":"x"})")), ParseError);
}

TEST(Spectrum, JsonRoundTrip) {
    const auto s = builtin::random(11, 7, 0.0, 3.0);
    const auto path = std::filesystem::temp_directory_path() / "entropometer_roundtrip.json";
    save_spectrum(s, path);
    const auto back = load_spectrum(path);
    EXPECT_EQ(back, s);
    EXPECT_EQ(back.name(), s.name());
}

TEST(Compose, TwoLevelSquared) {
    const auto tl = builtin::two_level(1.0);
    EXPECT_EQ(levels_of(compose(tl, tl)), (std::vector<Level>{{0, 1}, {1, 2}, {2, 1}}));
}

TEST(Compose, TwoLevelWithWideGap) {
    const auto tl = builtin::two_level(1.0);
    const auto wide = builtin::two_level(2.0);
    EXPECT_EQ(levels_of(compose(tl, wide)), (std::vector<Level>{{0, 1}, {1, 1}, {2, 1}, {3, 1}}));
}

TEST(Compose, SingleLevelPartnerCannotExist) {
    EXPECT_THROW(EnergySpectrum("shift", {{2.5, 1}}), InvalidModel);
}

TEST(Compose, CapIsEnforced) {
    const auto big = builtin::harmonic(1.0, 2000);
    EXPECT_THROW(compose(big, big), InvalidModel);
    EXPECT_NO_THROW(compose(big, big, 4'000'000));
}

TEST(ComposeProperty, CommutativeAssociativeMultiplicative) {
    Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        const auto a = random_small(rng);
        const auto b = random_small(rng);
        const auto c = random_small(rng);
        EXPECT_EQ(compose(a, b), compose(b, a));
        EXPECT_EQ(compose(a, b).microstate_count(), a.microstate_count() * b.microstate_count());
        const auto left = compose(compose(a, b), c);
        const auto right = compose(a, compose(b, c));
        ASSERT_EQ(left.level_count(), right.level_count());
        for (std::size_t k = 0; k < left.level_count(); ++k) {
            EXPECT_NEAR(left.levels()[k].energy, right.levels()[k].energy, 1e-12 * std::max(1.0, left.levels()[k].energy));
            EXPECT_EQ(left.levels()[k].degeneracy, right.levels()[k].degeneracy);
        }
    }
}

TEST(Builtin, TwoLevelAndHarmonic) {
    EXPECT_EQ(levels_of(builtin::two_level(1.0)), (std::vector<Level>{{0, 1}, {1, 1}}));
    EXPECT_EQ(levels_of(builtin::harmonic(1.0, 3)), (std::vector<Level>{{0, 1}, {1, 1}, {2, 1}}));
    EXPECT_THROW(builtin::two_level(0.0), InvalidModel);
    EXPECT_THROW(builtin::harmonic(1.0, 1), InvalidModel);
    EXPECT_THROW(builtin::harmonic(-1.0, 4), InvalidModel);
}

TEST(Builtin, RandomIsDeterministic) {
    const auto a = builtin::random(7, 5, 0.0, 10.0);
    const auto b = builtin::random(7, 5, 0.0, 10.0);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.level_count(), 5u);
    EXPECT_GE(a.ground_energy(), 0.0);
    EXPECT_LE(a.top_energy(), 10.0);
    EXPECT_NE(a, builtin::random(8, 5, 0.0, 10.0));
}

TEST(Builtin, ParsedReferences) {
    EXPECT_EQ(parse_builtin("@two_level(1)"), builtin::two_level(1.0));
    EXPECT_EQ(parse_builtin("@tl(2)"), builtin::two_level(2.0));
    EXPECT_EQ(parse_builtin("@harmonic(0.5, 4)"), builtin::harmonic(0.5, 4));
    EXPECT_EQ(parse_builtin("@random(7,5,0,10)"), builtin::random(7, 5, 0.0, 10.0));
    EXPECT_THROW(parse_builtin("@nope(1)"), ParseError);
    EXPECT_THROW(parse_builtin("@harmonic(1)"), ParseError);
}

TEST(Library, ResolvesAndRejectsDuplicates) {
    SpectrumLibrary lib;
    lib.add("tl", builtin::two_level(1.0));
    EXPECT_TRUE(lib.contains("tl"));
    EXPECT_THROW(lib.add("tl", builtin::two_level(2.0)), ConfigError);
    EXPECT_EQ(lib.resolve("@harmonic(1,3)"), builtin::harmonic(1.0, 3));
    const auto path = (std::filesystem::path(ENTROPOMETER_TEST_DATA) / "tl.json").string();
    const auto* first = &lib.resolve(path);
    EXPECT_EQ(first, &lib.resolve(path));
}

TEST(Spectrum, ShiftMovesEveryLevel) {
    const auto s = builtin::harmonic(1.0, 4).shifted(-2.5);
    EXPECT_DOUBLE_EQ(s.ground_energy(), -2.5);
    EXPECT_DOUBLE_EQ(s.top_energy(), 0.5);
    EXPECT_DOUBLE_EQ(s.infinite_temperature_energy(), -1.0);
}
