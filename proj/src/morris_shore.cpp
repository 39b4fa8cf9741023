#include "qhr/morris_shore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qhr {

namespace {

// Orthonormal complement of the bright set, seeded from canonical unit
// vectors by modified Gram-Schmidt.
std::vector<Vec> darkComplement(std::size_t n, const std::vector<Vec>& bright) {
    std::vector<Vec> basis = bright;
    std::vector<Vec> dark;
    for (std::size_t seed = 0; seed < n && basis.size() < n; ++seed) {
        Vec v(n, cplx{});
        v[seed] = 1.0;
        for (const Vec& u : basis) {
            const cplx c = dot(u, v);
            for (std::size_t k = 0; k < n; ++k) v[k] -= c * u[k];
        }
        const double nv = norm(v);
        if (nv < 0.5) continue;  // seed (nearly) inside the span already
        for (cplx& z : v) z /= nv;
        dark.push_back(v);
        basis.push_back(std::move(v));
    }
    if (basis.size() != n)
        throw std::runtime_error("decompose: failed to complete the dark basis");
    return dark;
}

// Common back end: couplings (descending) and upper states are known,
// bright states come from |alpha_n> = V|beta_n>/lambda_n.
MSDecomposition assembleDecomposition(const Matrix& v, std::vector<double> lambda2,
                                      std::vector<Vec> betas, double rankTol) {
    const std::size_t n = v.rows();
    const std::size_t m = v.cols();
    const double scale2 = v.frobeniusNorm() * v.frobeniusNorm();
    const double cut = rankTol * rankTol * scale2;

    MSDecomposition ms;
    ms.upper = std::move(betas);
    ms.lambdas.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        if (lambda2[k] < -1e-10 * scale2)
            throw std::runtime_error("decompose: negative Gram eigenvalue beyond tolerance");
        const double l2 = std::max(lambda2[k], 0.0);
        if (l2 <= cut) {
            ms.lambdas[k] = 0.0;
            continue;
        }
        const double lambda = std::sqrt(l2);
        ms.lambdas[k] = lambda;
        ms.bright.push_back(scaled(v * ms.upper[k], 1.0 / lambda));
    }
    ms.dark = darkComplement(n, ms.bright);

    ms.lowerTransform = Matrix(n, n);
    std::size_t row = 0;
    for (const Vec& g : ms.dark) {
        Vec conj(n);
        for (std::size_t k = 0; k < n; ++k) conj[k] = std::conj(g[k]);
        ms.lowerTransform.setRow(row++, conj);
    }
    for (const Vec& a : ms.bright) {
        Vec conj(n);
        for (std::size_t k = 0; k < n; ++k) conj[k] = std::conj(a[k]);
        ms.lowerTransform.setRow(row++, conj);
    }
    ms.upperTransform = Matrix(m, m);
    for (std::size_t k = 0; k < m; ++k) {
        Vec conj(m);
        for (std::size_t j = 0; j < m; ++j) conj[j] = std::conj(ms.upper[k][j]);
        ms.upperTransform.setRow(k, conj);
    }
    return ms;
}

}  // namespace

InteractionMatrix makeInteractionMatrix(Matrix v) {
    if (v.rows() == 0 || v.cols() == 0)
        throw std::invalid_argument("InteractionMatrix: empty matrix");
    for (std::size_t i = 0; i < v.rows(); ++i) checkFinite(v.row(i), "InteractionMatrix");
    InteractionMatrix im;
    if (v.rows() < v.cols()) {
        im.coupling = v.transpose();
        im.swapped = true;
    } else {
        im.coupling = std::move(v);
    }
    return im;
}

std::pair<Matrix, Matrix> gramMatrices(const InteractionMatrix& v) {
    const Matrix& c = v.coupling;
    return {c * c.adjoint(), c.adjoint() * c};
}

MSDecomposition decompose(const InteractionMatrix& v, double rankTol) {
    if (rankTol <= 0.0) throw std::invalid_argument("decompose: rankTol must be positive");
    const Matrix& c = v.coupling;
    const Matrix gram = c.adjoint() * c;
    EigResult eig = hermitianEig(gram);

    const std::size_t m = c.cols();
    std::vector<double> lambda2(m);
    std::vector<Vec> betas(m);
    for (std::size_t k = 0; k < m; ++k) {  // descending
        lambda2[k] = eig.values[m - 1 - k];
        betas[k] = eig.vectors.column(m - 1 - k);
    }
    return assembleDecomposition(c, std::move(lambda2), std::move(betas), rankTol);
}

ThetaSigma m2ThetaSigma(const Vec& vp, const Vec& vpp) {
    if (vp.size() != vpp.size()) throw std::invalid_argument("m2ThetaSigma: dimension mismatch");
    const double a2 = norm(vp) * norm(vp);
    const double b2 = norm(vpp) * norm(vpp);
    if (a2 == 0.0 && b2 == 0.0) throw std::invalid_argument("m2ThetaSigma: both vectors zero");
    const cplx overlap = dot(vp, vpp);
    const double scale = std::max(a2, b2);

    ThetaSigma ts;
    if (std::abs(overlap) <= 1e-13 * scale) {
        ts.degenerate = std::abs(a2 - b2) <= 1e-13 * scale;
        return ts;  // theta = 0, sigma = 0
    }
    ts.theta = 0.5 * std::atan2(2.0 * std::abs(overlap), b2 - a2);  // 2θ in (0, π)
    ts.sigma = std::arg(overlap);
    return ts;
}

MSDecomposition m2Decompose(const Vec& vp, const Vec& vpp, double rankTol) {
    if (vp.size() != vpp.size() || vp.size() < 2)
        throw std::invalid_argument("m2Decompose: need two columns of dimension >= 2");
    const std::size_t n = vp.size();
    Matrix v(n, 2);
    v.setColumn(0, vp);
    v.setColumn(1, vpp);

    const double a2 = norm(vp) * norm(vp);
    const double b2 = norm(vpp) * norm(vpp);
    const cplx overlap = dot(vp, vpp);
    const ThetaSigma ts = m2ThetaSigma(vp, vpp);

    std::vector<double> lambda2(2);
    std::vector<Vec> betas(2);
    if (ts.theta == 0.0 && ts.sigma == 0.0 && std::abs(overlap) <= 1e-13 * std::max(a2, b2)) {
        // Orthogonal columns: the original upper states are the MS states.
        const bool firstLarger = a2 >= b2;
        lambda2[0] = firstLarger ? a2 : b2;
        lambda2[1] = firstLarger ? b2 : a2;
        betas[0] = firstLarger ? Vec{1.0, 0.0} : Vec{0.0, 1.0};
        betas[1] = firstLarger ? Vec{0.0, 1.0} : Vec{1.0, 0.0};
    } else {
        // Numerically stable split; finite at θ = π/4 where the
        // 1/cos 2θ form blows up.
        const double mid = 0.5 * (a2 + b2);
        const double rad = std::hypot(0.5 * (a2 - b2), std::abs(overlap));
        const double st = std::sin(ts.theta);
        const double ct = std::cos(ts.theta);
        const cplx eis = std::exp(cplx(0.0, ts.sigma));
        lambda2[0] = mid + rad;
        betas[0] = Vec{eis * st, ct};
        lambda2[1] = mid - rad;
        betas[1] = Vec{ct, -std::conj(eis) * st};
    }
    return assembleDecomposition(v, std::move(lambda2), std::move(betas), rankTol);
}

}  // namespace qhr
