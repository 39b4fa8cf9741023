#include "qhr/mirrors.hpp"

#include <cmath>
#include <stdexcept>

namespace qhr {

Matrix BlockPropagator::full() const {
    const std::size_t n = lowerBlock.rows();
    const std::size_t m = upperBlock.rows();
    Matrix u(n + m, n + m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) u(i, j) = lowerBlock(i, j);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) u(i, n + j) = mixingUpper(i, j);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) u(n + i, j) = mixingLower(i, j);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) u(n + i, n + j) = upperBlock(i, j);
    return u;
}

Matrix householder(const Vec& nu, double phi) {
    const double nn = norm(nu);
    if (nn == 0.0) throw std::invalid_argument("householder: zero vector");
    const Vec unit = scaled(nu, 1.0 / nn);
    Matrix m = Matrix::identity(nu.size());
    const cplx w = std::exp(cplx(0.0, phi)) - 1.0;
    m += w * outer(unit, unit);
    return m;
}

Matrix householder(const HouseholderOp& op) { return householder(op.axis, op.phase); }

BlockPropagator assembleFull(const MSDecomposition& ms, const std::vector<CayleyKlein>& cks,
                             double delta, bool includeDeltaPhase) {
    const std::size_t m = ms.upper.size();
    if (cks.size() != m)
        throw std::invalid_argument("assembleFull: need one Cayley-Klein set per upper MS state");
    const std::size_t n = ms.bright.empty() ? ms.dark.size() : ms.bright.front().size();
    const cplx phase = includeDeltaPhase ? std::exp(cplx(0.0, -delta)) : cplx(1.0);

    BlockPropagator u;
    u.delta = delta;
    u.lowerBlock = Matrix(n, n);
    u.mixingUpper = Matrix(n, m);
    u.mixingLower = Matrix(m, n);
    u.upperBlock = Matrix(m, m);

    // Null channels (lambda = 0) have no lower partner and evolve as a = 1.
    std::size_t bright = 0;
    for (std::size_t ch = 0; ch < m; ++ch) {
        const bool coupled = ms.lambdas[ch] > 0.0;
        const cplx a = coupled ? cks[ch].a : cplx(1.0);
        const cplx b = coupled ? cks[ch].b : cplx(0.0);
        u.upperBlock += (phase * std::conj(a)) * outer(ms.upper[ch], ms.upper[ch]);
        if (!coupled) continue;
        const Vec& alpha = ms.bright[bright++];
        u.lowerBlock += a * outer(alpha, alpha);
        u.mixingUpper += b * outer(alpha, ms.upper[ch]);
        u.mixingLower += (-phase * std::conj(b)) * outer(ms.upper[ch], alpha);
    }
    for (const Vec& gamma : ms.dark) u.lowerBlock += outer(gamma, gamma);
    return u;
}

bool reflectionCondition(const std::vector<CayleyKlein>& cks, double tol) {
    for (const CayleyKlein& ck : cks)
        if (std::abs(ck.b) > tol) return false;
    return true;
}

CoupledMirrors coupledMirrors(const MSDecomposition& ms, const std::vector<double>& phis,
                              double delta, bool includeDeltaPhase) {
    if (phis.size() != ms.upper.size())
        throw std::invalid_argument("coupledMirrors: need one phase per upper MS state");
    const std::size_t n = ms.bright.empty() ? ms.dark.size() : ms.bright.front().size();
    const std::size_t m = ms.upper.size();

    CoupledMirrors cm;
    cm.lower = Matrix::identity(n);
    cm.upper = Matrix::identity(m);
    std::size_t bright = 0;
    for (std::size_t ch = 0; ch < m; ++ch) {
        cm.upper = cm.upper * householder(ms.upper[ch], -phis[ch]);
        if (ms.lambdas[ch] <= 0.0) continue;
        const Vec& alpha = ms.bright[bright++];
        cm.lower = cm.lower * householder(alpha, phis[ch]);
        cm.factors.push_back({alpha, phis[ch]});
    }
    if (includeDeltaPhase) cm.upper *= std::exp(cplx(0.0, -delta));
    return cm;
}

EigenstructureReport eigenstructureCheck(const Matrix& lower, const MSDecomposition& ms,
                                         const std::vector<double>& phis) {
    EigenstructureReport rep;
    std::size_t bright = 0;
    for (std::size_t ch = 0; ch < ms.upper.size(); ++ch) {
        if (ms.lambdas[ch] <= 0.0) continue;
        const Vec& alpha = ms.bright[bright++];
        Vec r = lower * alpha;
        const cplx ev = std::exp(cplx(0.0, phis[ch]));
        for (std::size_t k = 0; k < r.size(); ++k) r[k] -= ev * alpha[k];
        rep.maxBrightResidual = std::max(rep.maxBrightResidual, norm(r));
    }
    rep.fixedDim = ms.dark.size();
    for (const Vec& gamma : ms.dark) {
        Vec r = lower * gamma;
        for (std::size_t k = 0; k < r.size(); ++k) r[k] -= gamma[k];
        rep.maxFixedResidual = std::max(rep.maxFixedResidual, norm(r));
    }

    // Qutrit with two bright states: the unit-eigenvalue direction is the
    // (conjugated) cross product of the bright states.
    if (ms.bright.size() == 2 && !ms.dark.empty() && ms.dark.front().size() == 3) {
        const Vec& a1 = ms.bright[0];
        const Vec& a2 = ms.bright[1];
        Vec cross(3);
        cross[0] = std::conj(a1[1] * a2[2] - a1[2] * a2[1]);
        cross[1] = std::conj(a1[2] * a2[0] - a1[0] * a2[2]);
        cross[2] = std::conj(a1[0] * a2[1] - a1[1] * a2[0]);
        const double nc = norm(cross);
        if (nc > 0.0) {
            rep.crossProductChecked = true;
            const Vec& gamma = ms.dark.front();
            // residual of |γ⟩ against the cross-product direction
            const cplx overlap = dot(cross, gamma) / nc;
            rep.crossProductResidual = std::abs(1.0 - std::abs(overlap));
        }
    }
    return rep;
}

}  // namespace qhr
