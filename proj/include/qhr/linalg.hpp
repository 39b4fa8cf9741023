#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qhr {

using cplx = std::complex<double>;
using Vec = std::vector<cplx>;

/// Dense complex matrix, row-major storage.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}
    /// Constructs from flat row-major entries; rejects NaN/Inf.
    Matrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix adjoint() const;
    Matrix transpose() const;

    double frobeniusNorm() const;
    double maxAbs() const;

    Vec column(std::size_t j) const;
    Vec row(std::size_t i) const;
    void setColumn(std::size_t j, const Vec& v);
    void setRow(std::size_t i, const Vec& v);

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(cplx s);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(cplx s, Matrix a);
Vec operator*(const Matrix& a, const Vec& v);

/// ⟨u|v⟩, conjugate-linear in the first argument.
cplx dot(const Vec& u, const Vec& v);
double norm(const Vec& v);
/// |u⟩⟨v|
Matrix outer(const Vec& u, const Vec& v);
Vec scaled(const Vec& v, cplx s);

void checkFinite(const Vec& v, const char* what);

struct EigResult {
    std::vector<double> values;  ///< ascending
    Matrix vectors;              ///< columns are the eigenvectors, unitary
};

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
/// Eigenvalues ascending; each eigenvector's largest component made real
/// positive; degenerate clusters re-orthonormalized.
EigResult hermitianEig(const Matrix& h);

/// ‖M†M − I‖_max ≤ tol. Throws on non-square input.
bool isUnitary(const Matrix& m, double tol);

/// Euler Γ(z) for complex z, Lanczos approximation with reflection for
/// Re z < 1/2. Throws std::domain_error at the poles.
cplx complexGamma(cplx z);

/// log Γ(z) on the principal-like branch used by complexGamma. Needed
/// directly where Γ ratios would under/overflow.
cplx logGamma(cplx z);

}  // namespace qhr
