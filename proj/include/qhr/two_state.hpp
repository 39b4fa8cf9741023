#pragma once

#include <vector>

#include "qhr/linalg.hpp"

namespace qhr {

enum class PulseShape { Sech, Gaussian, Constant };

/// Shared envelope f(t), 0 <= f <= 1, with time scale T and a truncation
/// window in units of T.
struct PulseSpec {
    PulseShape shape = PulseShape::Sech;
    double timeScale = 1.0;
    double windowStart = -40.0;
    double windowEnd = 40.0;

    double envelope(double t) const;
    /// ∫ f²(t) dt over the infinite line (2T for sech, √(π/2)·T for
    /// gaussian); for the constant shape, the window length.
    double envelopeSquaredIntegral() const;
    void validate() const;
};

struct DetuningSpec {
    double value = 0.0;  ///< constant Δ, units 1/T
};

/// Two-state propagator parameters, |a|² + |b|² = 1. delta is the
/// accumulated detuning phase ∫Δ dt over the window.
struct CayleyKlein {
    cplx a{1.0, 0.0};
    cplx b{0.0, 0.0};
    double delta = 0.0;
};

/// A = 2λ ∫ f(t) dt over the window, adaptive quadrature.
double pulseArea(const PulseSpec& pulse, double lambda);

/// Resonant pulse: a = cos(A/2), b = -i sin(A/2).
CayleyKlein resonantCk(const PulseSpec& pulse, double lambda);

/// Sech pulse at constant detuning (Rosen-Zener):
///   a = Γ²(½+½iΔT) / [Γ(½+λT+½iΔT) Γ(½−λT+½iΔT)]
///   b = -i sin(πλT) / cosh(πΔT/2)
/// The b phase is the Δ→0 limit convention; a symmetric finite window
/// multiplies b by e^{-iδ/2} (see withWindowPhase).
CayleyKlein rosenZenerCk(double lambdaT, double deltaT);

/// Attaches the accumulated detuning phase δ of a symmetric window:
/// b picks up e^{-iδ/2}, matching the block-Hamiltonian representation.
CayleyKlein withWindowPhase(CayleyKlein ck, double delta);

/// QHR phase at integer coupling λT = l: φ = 2 arg Π_{k<l} [ΔT + i(2k+1)],
/// reduced to (−π, π].
double rzPhase(int l, double deltaT);

/// Adiabatic-elimination phase φ = (λ²/Δ) ∫ f². Sets *warning when
/// |Δ| < 5λ (heuristic validity flag; never blocks).
double farOffPhase(const PulseSpec& pulse, double lambda, double delta,
                   bool* warning = nullptr);

enum class DesignMode { RosenZener, FarOff };

struct DesignResult {
    DesignMode mode;
    int pulseOrder = 0;             ///< l (rosen_zener)
    double deltaT = 0.0;            ///< solved ΔT (rosen_zener)
    std::vector<double> lambdaT;    ///< per-channel λT
    std::vector<double> lambdaSq;   ///< per-channel λ², units 1/T² (far_off)
};

/// Inverse problem: find pulse parameters producing the target QHR phases.
/// rosen_zener requires all targets equal and solves φ(ΔT) = target on the
/// monotone branch for the given l; far_off returns λ_n² = φ_n·Δ/∫f².
DesignResult designRealization(const std::vector<double>& targets, DesignMode mode,
                               const PulseSpec& pulse, double delta = 0.0, int l = 1);

}  // namespace qhr
