#pragma once

#include <vector>

#include "qhr/linalg.hpp"
#include "qhr/morris_shore.hpp"

namespace qhr {

/// Field amplitudes by polarization: σ⁺ (plus), π (zero), σ⁻ (minus),
/// units 1/T.
struct PolarizationAmplitudes {
    cplx plus{};
    cplx zero{};
    cplx minus{};
};

struct LinkageSpec {
    enum class Kind { TwoLevel, Ladder010, Explicit };

    Kind kind = Kind::Explicit;
    double jLower = 0.0;
    double jUpper = 0.0;
    PolarizationAmplitudes pol;        ///< two_level, and first field of the ladder
    PolarizationAmplitudes polSecond;  ///< second field of the ladder
    Matrix explicitV;

    static LinkageSpec twoLevel(double jLower, double jUpper, PolarizationAmplitudes pol);
    static LinkageSpec ladder010(PolarizationAmplitudes first, PolarizationAmplitudes second);
    static LinkageSpec explicitMatrix(Matrix v);
};

/// Condon-Shortley Clebsch-Gordan coefficient ⟨j1 m1; j2 m2 | J M⟩ by the
/// Racah closed form. Returns 0 (not an error) when M ≠ m1+m2 or the
/// triangle condition fails.
double clebschGordan(double j1, double m1, double j2, double m2, double bigJ, double bigM);

struct LinkageResult {
    InteractionMatrix interaction;
    /// Connected components of the coupling graph; indices 0..N-1 are
    /// lower states, N..N+M-1 upper states. A J=2↔1 linkage under pure
    /// circular polarization splits into Λ and M blocks, for example.
    std::vector<std::vector<int>> components;
    std::vector<double> lowerM;  ///< magnetic quantum numbers, ascending
    std::vector<double> upperM;
};

LinkageResult buildLinkage(const LinkageSpec& spec);

}  // namespace qhr
