#pragma once

#include <cstddef>
#include <vector>

#include "qhr/linalg.hpp"
#include "qhr/morris_shore.hpp"
#include "qhr/two_state.hpp"

namespace qhr {

/// The four blocks of the full (N+M)-dimensional propagator.
struct BlockPropagator {
    Matrix lowerBlock;   ///< U_N  (N x N)
    Matrix mixingUpper;  ///< U_NM (N x M)
    Matrix mixingLower;  ///< U_MN (M x N)
    Matrix upperBlock;   ///< U_M  (M x M)
    double delta = 0.0;

    Matrix full() const;
};

struct HouseholderOp {
    Vec axis;     ///< unit vector ν
    double phase; ///< φ
};

/// Generalized reflection M(ν;φ) = I + (e^{iφ} − 1)|ν⟩⟨ν|. ν is
/// normalized internally; the zero vector is rejected.
Matrix householder(const Vec& nu, double phi);
Matrix householder(const HouseholderOp& op);

/// Block propagator from an MS decomposition and per-channel Cayley-Klein
/// parameters (one per upper MS state, ordered as ms.upper). Setting
/// includeDeltaPhase = false gives the interaction-representation variant
/// without the e^{-iδ} prefactor.
BlockPropagator assembleFull(const MSDecomposition& ms, const std::vector<CayleyKlein>& cks,
                             double delta, bool includeDeltaPhase = true);

/// true iff max_n |b_n| <= tol.
bool reflectionCondition(const std::vector<CayleyKlein>& cks, double tol);

struct CoupledMirrors {
    Matrix lower;                      ///< U_N = Π M(α_n, φ_n)
    Matrix upper;                      ///< U_M = e^{-iδ} Π M(β_n, −φ_n)
    std::vector<HouseholderOp> factors;
};

/// Reflection-condition propagator as a product of commuting Householder
/// factors over the bright states. phis ordered as ms.lambdas (descending).
CoupledMirrors coupledMirrors(const MSDecomposition& ms, const std::vector<double>& phis,
                              double delta, bool includeDeltaPhase = true);

struct EigenstructureReport {
    double maxBrightResidual = 0.0;  ///< max ‖U_N α_n − e^{iφ_n} α_n‖
    double maxFixedResidual = 0.0;   ///< max ‖U_N v − v‖ over the dark basis
    std::size_t fixedDim = 0;
    bool crossProductChecked = false;
    double crossProductResidual = 0.0;  ///< N=3, M=2: fixed vector vs α₁×α₂
};

EigenstructureReport eigenstructureCheck(const Matrix& lower, const MSDecomposition& ms,
                                         const std::vector<double>& phis);

}  // namespace qhr
