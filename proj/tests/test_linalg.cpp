#include <doctest.h>

#include <cmath>
#include <random>

#include "qhr/linalg.hpp"
#include "qhr/mirrors.hpp"

using namespace qhr;

namespace {

Matrix randomHermitian(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = u(rng);
        for (std::size_t j = i + 1; j < n; ++j) {
            h(i, j) = cplx(u(rng), u(rng));
            h(j, i) = std::conj(h(i, j));
        }
    }
    return h;
}

// det(H - x I) by Gaussian elimination; real for Hermitian H and real x.
double charPoly(const Matrix& h, double x) {
    const std::size_t n = h.rows();
    Matrix a = h;
    for (std::size_t i = 0; i < n; ++i) a(i, i) -= x;
    cplx det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) == 0.0) return 0.0;
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
            det = -det;
        }
        det *= a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const cplx f = a(r, col) / a(col, col);
            for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
        }
    }
    return det.real();
}

// Independent spectrum oracle: sign-change scan plus bisection on the
// characteristic polynomial over the Gershgorin interval.
std::vector<double> charPolyRoots(const Matrix& h) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        double r = 0.0;
        for (std::size_t j = 0; j < h.cols(); ++j)
            if (i != j) r += std::abs(h(i, j));
        lo = std::min(lo, h(i, i).real() - r);
        hi = std::max(hi, h(i, i).real() + r);
    }
    std::vector<double> roots;
    const int grid = 20000;
    double xPrev = lo;
    double fPrev = charPoly(h, xPrev);
    for (int k = 1; k <= grid; ++k) {
        const double x = lo + (hi - lo) * k / grid;
        const double f = charPoly(h, x);
        if (fPrev == 0.0) roots.push_back(xPrev);
        if (fPrev * f < 0.0) {
            double a = xPrev, b = x;
            for (int it = 0; it < 100; ++it) {
                const double m = 0.5 * (a + b);
                (charPoly(h, m) * charPoly(h, a) <= 0.0 ? b : a) = m;
            }
            roots.push_back(0.5 * (a + b));
        }
        xPrev = x;
        fPrev = f;
    }
    return roots;
}

}  // namespace

TEST_CASE("hermitian_eig identity") {
    EigResult r = hermitianEig(Matrix::identity(3));
    for (double v : r.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(isUnitary(r.vectors, 1e-10));
}

TEST_CASE("hermitian_eig pauli-x spectrum") {
    Matrix h(2, 2);
    h(0, 1) = 1.0;
    h(1, 0) = 1.0;
    EigResult r = hermitianEig(h);
    CHECK(r.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(r.values[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("hermitian_eig random 4x4 vs characteristic-polynomial oracle") {
    std::mt19937_64 rng(1234);
    Matrix h = randomHermitian(4, rng);
    EigResult r = hermitianEig(h);

    const std::vector<double> roots = charPolyRoots(h);
    REQUIRE(roots.size() == 4);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(r.values[k] == doctest::Approx(roots[k]).epsilon(1e-9));

    // residual ||H X - X diag|| and unitarity
    const double scale = h.frobeniusNorm();
    Matrix lambda(4, 4);
    for (std::size_t k = 0; k < 4; ++k) lambda(k, k) = r.values[k];
    const Matrix resid = h * r.vectors - r.vectors * lambda;
    CHECK(resid.maxAbs() <= 1e-10 * scale);
    CHECK(isUnitary(r.vectors, 1e-10));
}

TEST_CASE("hermitian_eig invariants on random matrices") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + trial % 7;
        Matrix h = randomHermitian(n, rng);
        const double scale = h.frobeniusNorm();
        EigResult r = hermitianEig(h);
        CHECK(isUnitary(r.vectors, 1e-10));
        Matrix lambda(n, n);
        double traceSum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            lambda(k, k) = r.values[k];
            traceSum += r.values[k];
        }
        CHECK((h * r.vectors - r.vectors * lambda).maxAbs() <= 1e-10 * scale);
        cplx trace = 0.0;
        for (std::size_t i = 0; i < n; ++i) trace += h(i, i);
        CHECK(std::abs(trace.real() - traceSum) <= 1e-10 * scale);
    }
}

TEST_CASE("hermitian_eig rejects non-hermitian input") {
    Matrix h(2, 2);
    h(0, 1) = 1.0;
    h(1, 0) = 2.0;
    CHECK_THROWS_WITH_AS(hermitianEig(h), doctest::Contains("(0,1)"), std::invalid_argument);
}

TEST_CASE("hermitian_eig degenerate cluster stays orthonormal") {
    // spectrum {1, 1, 2} with mixing
    Matrix d(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 1.0;
    d(2, 2) = 2.0;
    std::mt19937_64 rng(7);
    Matrix q = hermitianEig(randomHermitian(3, rng)).vectors;  // some unitary
    Matrix h = q * d * q.adjoint();
    // symmetrize round-off
    h = 0.5 * (h + h.adjoint());
    EigResult r = hermitianEig(h);
    CHECK(isUnitary(r.vectors, 1e-10));
    CHECK(r.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.values[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.values[2] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("is_unitary") {
    CHECK(isUnitary(Matrix::identity(4), 1e-12));
    Matrix d(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    CHECK_FALSE(isUnitary(d, 1e-12));
    Matrix rect(2, 3);
    CHECK_THROWS_AS(isUnitary(rect, 1e-12), std::invalid_argument);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec nu(4);
    for (cplx& z : nu) z = cplx(u(rng), u(rng));
    CHECK(isUnitary(householder(nu, 1.234), 1e-12));
}

TEST_CASE("matrix constructor rejects non-finite entries") {
    std::vector<cplx> e{1.0, cplx(0.0, std::nan(""))};
    CHECK_THROWS_AS(Matrix(1, 2, std::move(e)), std::invalid_argument);
}

TEST_CASE("complex_gamma known values") {
    CHECK(std::abs(complexGamma(cplx(1.0)) - 1.0) <= 1e-13);
    CHECK(std::abs(complexGamma(cplx(0.5)) - std::sqrt(M_PI)) <= 1e-12);
    CHECK(std::abs(complexGamma(cplx(5.0)) - 24.0) <= 24.0 * 1e-13);
}

TEST_CASE("complex_gamma reflection identity on the critical line") {
    for (double y : {0.5, 2.0, 10.0}) {
        const cplx g = complexGamma(cplx(0.5, y));
        const double lhs = std::norm(g);
        const double rhs = M_PI / std::cosh(M_PI * y);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("complex_gamma recurrence on the working strip") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> re(-10.0, 10.0);
    std::uniform_real_distribution<double> im(-200.0, 200.0);
    for (int k = 0; k < 1000; ++k) {
        cplx z(re(rng), im(rng));
        if (std::abs(z.imag()) < 1e-3) z += cplx(0.0, 0.1);  // stay clear of the poles
        const cplx lhs = logGamma(z + 1.0);
        const cplx rhs = std::log(z) + logGamma(z);
        // compare Γ(z+1) and zΓ(z) through their logs, modulo 2πi
        cplx diff = lhs - rhs;
        const double twoPi = 2.0 * M_PI;
        const double imDiff = diff.imag() - twoPi * std::round(diff.imag() / twoPi);
        CHECK(std::abs(diff.real()) <= 1e-11 * (1.0 + std::abs(lhs.real())));
        CHECK(std::abs(imDiff) <= 1e-11 * (1.0 + std::abs(lhs.imag())));
    }
}

TEST_CASE("complex_gamma pole detection") {
    CHECK_THROWS_AS(complexGamma(cplx(0.0)), std::domain_error);
    CHECK_THROWS_AS(complexGamma(cplx(-3.0)), std::domain_error);
}
