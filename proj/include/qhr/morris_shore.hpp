#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qhr/linalg.hpp"

namespace qhr {

/// N×M coupling constants (units 1/T), columns are the interaction
/// vectors. Inputs with fewer rows than columns are transposed on
/// ingestion and flagged, so the two sets keep the N >= M convention.
struct InteractionMatrix {
    Matrix coupling;       ///< N x M, N >= M
    bool swapped = false;  ///< input arrived as M x N and was transposed

    std::size_t lowerCount() const { return coupling.rows(); }
    std::size_t upperCount() const { return coupling.cols(); }
};

InteractionMatrix makeInteractionMatrix(Matrix v);

struct MSDecomposition {
    std::vector<double> lambdas;  ///< descending, size M; null channels are 0
    std::vector<Vec> bright;      ///< dim-N states, one per nonzero lambda
    std::vector<Vec> upper;       ///< dim-M states, size M
    std::vector<Vec> dark;        ///< dim-N states, size N - rank
    Matrix lowerTransform;        ///< A: N x N unitary, rows = dark then bright
    Matrix upperTransform;        ///< B: M x M unitary, rows = upper

    std::size_t rank() const { return bright.size(); }
};

/// (V V†, V† V); the second is the Gram matrix of the interaction vectors.
std::pair<Matrix, Matrix> gramMatrices(const InteractionMatrix& v);

/// Full decomposition. Eigenvalues below (rankTol·‖V‖)² are treated as
/// exact zeros; their lower-space directions go to the dark set.
MSDecomposition decompose(const InteractionMatrix& v, double rankTol = 1e-10);

struct ThetaSigma {
    double theta = 0.0;
    double sigma = 0.0;
    bool degenerate = false;  ///< zero overlap and equal norms: any basis works
};

/// Mixing angle and overlap phase for the two-column case,
/// tan 2θ = 2|⟨V'|V''⟩| / (|V''|² − |V'|²), σ = arg⟨V'|V''⟩.
ThetaSigma m2ThetaSigma(const Vec& vp, const Vec& vpp);

/// Closed-form two-column decomposition; same contract as decompose().
MSDecomposition m2Decompose(const Vec& vp, const Vec& vpp, double rankTol = 1e-10);

}  // namespace qhr
