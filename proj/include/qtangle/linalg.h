#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qtangle {

using Complex = std::complex<double>;

bool is_finite(Complex z);

/// Dense complex column vector.
class CVector {
   public:
    CVector() = default;
    explicit CVector(std::size_t dim);
    CVector(std::initializer_list<Complex> entries);
    explicit CVector(std::vector<Complex> entries);

    static CVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return data_.size(); }
    Complex &operator[](std::size_t i) { return data_[i]; }
    const Complex &operator[](std::size_t i) const { return data_[i]; }
    std::span<const Complex> entries() const { return data_; }

    double norm() const;
    double norm_squared() const;
    /// <this|other>, conjugate-linear in this.
    Complex dot(const CVector &other) const;
    CVector normalized() const;

    CVector &operator+=(const CVector &other);
    CVector &operator-=(const CVector &other);
    CVector &operator*=(Complex s);

   private:
    std::vector<Complex> data_;
};

CVector operator+(CVector a, const CVector &b);
CVector operator-(CVector a, const CVector &b);
CVector operator*(Complex s, CVector v);

/// Dense complex matrix, row-major.
class CMatrix {
   public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols);
    /// Row-major nested initializer; every row must have the same length.
    CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(std::span<const double> values);
    static CMatrix outer(const CVector &ket, const CVector &bra);
    static CMatrix projector(const CVector &v) { return outer(v, v); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    CMatrix adjoint() const;
    CMatrix transpose() const;
    CMatrix conj() const;
    Complex trace() const;
    double max_abs() const;
    /// max |M - M^dagger| over all entries.
    double hermiticity_residual() const;

    CVector column(std::size_t c) const;

    CMatrix &operator+=(const CMatrix &other);
    CMatrix &operator-=(const CMatrix &other);
    CMatrix &operator*=(Complex s);

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

CMatrix operator+(CMatrix a, const CMatrix &b);
CMatrix operator-(CMatrix a, const CMatrix &b);
CMatrix operator*(Complex s, CMatrix m);
CMatrix operator*(const CMatrix &a, const CMatrix &b);
CVector operator*(const CMatrix &m, const CVector &v);

double max_abs_diff(const CMatrix &a, const CMatrix &b);
double max_abs_diff(const CVector &a, const CVector &b);

/// Pauli Y.
const CMatrix &sigma_y();

/// Kronecker product. The left factor is the most significant index.
CMatrix kron(const CMatrix &a, const CMatrix &b);
CVector kron(const CVector &a, const CVector &b);

/// Reduced operator over the subsystems listed in `keep`, in their original order.
/// Throws std::invalid_argument on dimension mismatch or an out-of-range index.
CMatrix partial_trace(const CMatrix &rho, std::span<const std::size_t> dims, std::span<const std::size_t> keep);
CMatrix partial_trace(const CMatrix &rho, std::initializer_list<std::size_t> dims, std::initializer_list<std::size_t> keep);

struct HermitianSpectrum {
    /// Sorted descending.
    std::vector<double> eigenvalues;
    /// Column k is the eigenvector for eigenvalues[k].
    CMatrix eigenvectors;
};

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Throws std::invalid_argument if the input is not Hermitian within 1e-10.
HermitianSpectrum herm_eig(const CMatrix &h);

/// V diag(values) V^dagger.
CMatrix reconstruct(const HermitianSpectrum &spectrum);
CMatrix reconstruct(const CMatrix &eigenvectors, std::span<const double> values);

/// Principal square root of a Hermitian PSD matrix. Eigenvalues in [-1e-10, 0) are clamped to zero;
/// anything more negative throws std::domain_error.
CMatrix psd_sqrt(const CMatrix &rho);

/// Singular values of an arbitrary matrix, descending. Computed from the Hermitian dilation
/// [[0, M], [M^dagger, 0]] so that small singular values keep absolute (not square-root) accuracy.
std::vector<double> singular_values(const CMatrix &m);

/// Reorders the qubits of a 2^n vector. Qubit `perm[k]` of the input becomes qubit k of the output
/// (qubit 0 is the most significant bit).
CVector permute_qubits(const CVector &v, std::span<const std::size_t> perm);

/// Applies `op` to one tensor factor of `v`, where `dims` gives the factor dimensions.
CVector apply_to_factor(const CVector &v, std::span<const std::size_t> dims, std::size_t factor, const CMatrix &op);

}  // namespace qtangle
