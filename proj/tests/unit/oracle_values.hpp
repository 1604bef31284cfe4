#pragma once

// Frozen outputs of tests/oracles/canonical_oracle.py (mpmath, 40 digits,
// direct summation and bisection). TL is two_level(1), H64 is harmonic(1, 64).
namespace oracle {

inline constexpr double kLnZ_TL_1 = 0.3132616875182228;
inline constexpr double kLnZ_H64_1 = 0.4586751453870819;
inline constexpr double kE_TL_1 = 0.2689414213699951;
inline constexpr double kE_TL_05 = 0.3775406687981454;
inline constexpr double kS_TL_1 = 0.5822031088882180;
inline constexpr double kS_TL_05 = 0.6628473185791794;
inline constexpr double kC_TL_1 = 0.1966119332414819;
inline constexpr double kDeltaS_TL = 0.08064420969096144;
inline constexpr double kE_H64_1 = 0.5819767068693264;

// f11 from (TL, E(1)) to (H64, E(1)) evaluated at E_TL(0.5).
inline constexpr double kF11_EC = 0.6662410722694939;
inline constexpr double kF11_BetaC = 0.9166739380812333;

// Final H64 energy when TL goes from beta 1 to 0.5, H64 starting at beta 1.
inline constexpr double kProcessEB_Reversible = 0.5047801751045330;
inline constexpr double kProcessEB_Sigma001 = 0.5139860065405386;

// TL state carrying the canonical probabilities of {0, 2} at beta 1.
inline constexpr double kMirrorP0 = 0.8807970779778824;
inline constexpr double kMirrorP1 = 0.1192029220221176;

inline constexpr double kBracketLower = 0.07064420969096144;
inline constexpr double kBracketUpper = 0.09064420969096144;

}  // namespace oracle
