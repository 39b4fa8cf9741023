#include "qhr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qhr {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
        throw std::invalid_argument("Matrix: entry count does not match dimensions");
    for (std::size_t k = 0; k < data_.size(); ++k)
        if (!finite(data_[k]))
            throw std::invalid_argument("Matrix: non-finite entry at flat index " + std::to_string(k));
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

Matrix Matrix::transpose() const {
    Matrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

double Matrix::frobeniusNorm() const {
    double s = 0.0;
    for (const cplx& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

double Matrix::maxAbs() const {
    double m = 0.0;
    for (const cplx& z : data_) m = std::max(m, std::abs(z));
    return m;
}

Vec Matrix::column(std::size_t j) const {
    Vec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

Vec Matrix::row(std::size_t i) const {
    Vec v(cols_);
    for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
    return v;
}

void Matrix::setColumn(std::size_t j, const Vec& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

void Matrix::setRow(std::size_t i, const Vec& v) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
}

Matrix& Matrix::operator+=(const Matrix& other) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

Matrix& Matrix::operator*=(cplx s) {
    for (cplx& z : data_) z *= s;
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("Matrix multiply: dimension mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(cplx s, Matrix a) { return a *= s; }

Vec operator*(const Matrix& a, const Vec& v) {
    if (a.cols() != v.size()) throw std::invalid_argument("Matrix*Vec: dimension mismatch");
    Vec w(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
        w[i] = s;
    }
    return w;
}

cplx dot(const Vec& u, const Vec& v) {
    if (u.size() != v.size()) throw std::invalid_argument("dot: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
    return s;
}

double norm(const Vec& v) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

Matrix outer(const Vec& u, const Vec& v) {
    Matrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
    return m;
}

Vec scaled(const Vec& v, cplx s) {
    Vec w(v);
    for (cplx& z : w) z *= s;
    return w;
}

void checkFinite(const Vec& v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!finite(v[i]))
            throw std::invalid_argument(std::string(what) + ": non-finite entry at index " +
                                        std::to_string(i));
}

namespace {

// One complex Jacobi rotation zeroing h(p,q): a diagonal phase making the
// pivot real, followed by a real rotation. Updates h in place and
// accumulates the rotation into v (columns).
void jacobiRotate(Matrix& h, Matrix& v, std::size_t p, std::size_t q) {
    const cplx hpq = h(p, q);
    const double apq = std::abs(hpq);
    if (apq == 0.0) return;
    const cplx phase = hpq / apq;  // e^{i phi}

    const double app = h(p, p).real();
    const double aqq = h(q, q).real();
    const double theta = (aqq - app) / (2.0 * apq);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    // Column operations with J(p,p)=c, J(p,q)=s, J(q,p)=-conj(phase) s,
    // J(q,q)=conj(phase) c, then the matching row operations with J†.
    const std::size_t n = h.rows();
    for (std::size_t i = 0; i < n; ++i) {
        const cplx hip = h(i, p);
        const cplx hiq = h(i, q);
        h(i, p) = c * hip - std::conj(phase) * s * hiq;
        h(i, q) = s * hip + std::conj(phase) * c * hiq;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const cplx hpj = h(p, j);
        const cplx hqj = h(q, j);
        h(p, j) = c * hpj - phase * s * hqj;
        h(q, j) = s * hpj + phase * c * hqj;
    }
    for (std::size_t i = 0; i < v.rows(); ++i) {
        const cplx vip = v(i, p);
        const cplx viq = v(i, q);
        v(i, p) = c * vip - std::conj(phase) * s * viq;
        v(i, q) = s * vip + std::conj(phase) * c * viq;
    }
}

double offDiagonalNorm(const Matrix& h) {
    double s = 0.0;
    const std::size_t n = h.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) s += std::norm(h(i, j));
    return std::sqrt(s);
}

// Largest-magnitude component made real positive.
void fixPhase(Vec& v) {
    std::size_t imax = 0;
    double amax = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > amax) {
            amax = a;
            imax = i;
        }
    }
    if (amax == 0.0) return;
    const cplx ph = std::conj(v[imax]) / amax;
    for (cplx& z : v) z *= ph;
    v[imax] = cplx(std::abs(v[imax]), 0.0);
}

void orthonormalize(std::vector<Vec>& vs) {
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const cplx c = dot(vs[j], vs[i]);
            for (std::size_t k = 0; k < vs[i].size(); ++k) vs[i][k] -= c * vs[j][k];
        }
        const double nv = norm(vs[i]);
        for (cplx& z : vs[i]) z /= nv;
    }
}

}  // namespace

EigResult hermitianEig(const Matrix& hin) {
    if (hin.rows() != hin.cols()) throw std::invalid_argument("hermitianEig: matrix not square");
    const std::size_t n = hin.rows();
    const double scale = std::max(hin.frobeniusNorm(), 1e-300);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            if (std::abs(hin(i, j) - std::conj(hin(j, i))) > 1e-12 * scale)
                throw std::invalid_argument("hermitianEig: matrix not hermitian at entries (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")/(" +
                                            std::to_string(j) + "," + std::to_string(i) + ")");
        }

    Matrix h = hin;
    Matrix v = Matrix::identity(n);
    const double target = 1e-14 * scale;
    const int maxSweeps = 64;
    for (int sweep = 0; sweep < maxSweeps && offDiagonalNorm(h) > target; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) jacobiRotate(h, v, p, q);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = h(i, i).real();
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return diag[a] < diag[b]; });

    EigResult res;
    res.values.resize(n);
    std::vector<Vec> cols(n);
    for (std::size_t k = 0; k < n; ++k) {
        res.values[k] = diag[order[k]];
        cols[k] = v.column(order[k]);
    }

    // Re-orthonormalize within degenerate clusters; any cluster basis works.
    const double gap = 1e-9 * scale;
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && res.values[end] - res.values[end - 1] < gap) ++end;
        if (end - start > 1) {
            std::vector<Vec> cluster(cols.begin() + start, cols.begin() + end);
            orthonormalize(cluster);
            for (std::size_t k = start; k < end; ++k) cols[k] = cluster[k - start];
        }
        start = end;
    }

    res.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        fixPhase(cols[k]);
        res.vectors.setColumn(k, cols[k]);
    }
    return res;
}

bool isUnitary(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("isUnitary: matrix not square");
    const Matrix r = m.adjoint() * m - Matrix::identity(m.rows());
    return r.maxAbs() <= tol;
}

namespace {

// Lanczos approximation, g = 607/128, 15 coefficients (Godfrey).
constexpr double kLanczosG = 4.7421875;
constexpr double kLanczosC[15] = {
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

constexpr double kPi = 3.14159265358979323846;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// log Γ for Re z >= 1/2.
cplx lanczosLogGamma(cplx z) {
    const cplx zm1 = z - 1.0;
    cplx series = kLanczosC[0];
    for (int k = 1; k < 15; ++k) series += kLanczosC[k] / (zm1 + static_cast<double>(k));
    const cplx t = zm1 + kLanczosG + 0.5;
    return kLogSqrt2Pi + (zm1 + 0.5) * std::log(t) - t + std::log(series);
}

// log sin(πz), stable for large |Im z|; branch is irrelevant downstream
// because results are only exponentiated.
cplx logSinPi(cplx z) {
    if (z.imag() < 0.0) return std::conj(logSinPi(std::conj(z)));
    if (z.imag() < 10.0) return std::log(std::sin(kPi * z));
    // sin(πz) = -e^{-iπz}(1 - e^{2iπz})/(2i)
    const cplx i(0.0, 1.0);
    return -i * kPi * z + std::log(1.0 - std::exp(2.0 * i * kPi * z)) - std::log(2.0 * i) +
           cplx(0.0, kPi);
}

bool atPole(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

}  // namespace

cplx logGamma(cplx z) {
    if (atPole(z)) throw std::domain_error("logGamma: pole at non-positive integer");
    if (z.real() >= 0.5) return lanczosLogGamma(z);
    // Reflection: Γ(z)Γ(1-z) = π / sin(πz)
    return std::log(cplx(kPi)) - logSinPi(z) - lanczosLogGamma(1.0 - z);
}

cplx complexGamma(cplx z) { return std::exp(logGamma(z)); }

}  // namespace qhr
