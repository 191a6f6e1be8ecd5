#include "qtangle/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qtangle {

bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// ---------------------------------------------------------------------------
// CVector

CVector::CVector(std::size_t dim) : data_(dim) {
}

CVector::CVector(std::initializer_list<Complex> entries) : data_(entries) {
}

CVector::CVector(std::vector<Complex> entries) : data_(std::move(entries)) {
}

CVector CVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw std::invalid_argument("basis index " + std::to_string(index) + " out of range for dim " + std::to_string(dim));
    }
    CVector v(dim);
    v[index] = 1.0;
    return v;
}

double CVector::norm_squared() const {
    double s = 0;
    for (const auto &z : data_) {
        s += std::norm(z);
    }
    return s;
}

double CVector::norm() const {
    return std::sqrt(norm_squared());
}

Complex CVector::dot(const CVector &other) const {
    if (dim() != other.dim()) {
        throw std::invalid_argument("dot: dimension mismatch");
    }
    Complex s = 0;
    for (std::size_t i = 0; i < dim(); i++) {
        s += std::conj(data_[i]) * other.data_[i];
    }
    return s;
}

CVector CVector::normalized() const {
    double n = norm();
    if (n == 0) {
        throw std::invalid_argument("cannot normalize a zero vector");
    }
    CVector out = *this;
    out *= 1.0 / n;
    return out;
}

CVector &CVector::operator+=(const CVector &other) {
    if (dim() != other.dim()) {
        throw std::invalid_argument("vector add: dimension mismatch");
    }
    for (std::size_t i = 0; i < dim(); i++) {
        data_[i] += other.data_[i];
    }
    return *this;
}

CVector &CVector::operator-=(const CVector &other) {
    if (dim() != other.dim()) {
        throw std::invalid_argument("vector subtract: dimension mismatch");
    }
    for (std::size_t i = 0; i < dim(); i++) {
        data_[i] -= other.data_[i];
    }
    return *this;
}

CVector &CVector::operator*=(Complex s) {
    for (auto &z : data_) {
        z *= s;
    }
    return *this;
}

CVector operator+(CVector a, const CVector &b) {
    return a += b;
}

CVector operator-(CVector a, const CVector &b) {
    return a -= b;
}

CVector operator*(Complex s, CVector v) {
    return v *= s;
}

// ---------------------------------------------------------------------------
// CMatrix

CMatrix::CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto &row : rows) {
        if (row.size() != cols_) {
            throw std::invalid_argument("ragged matrix initializer");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; i++) {
        m(i, i) = 1.0;
    }
    return m;
}

CMatrix CMatrix::diagonal(std::span<const double> values) {
    CMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); i++) {
        m(i, i) = values[i];
    }
    return m;
}

CMatrix CMatrix::outer(const CVector &ket, const CVector &bra) {
    CMatrix m(ket.dim(), bra.dim());
    for (std::size_t r = 0; r < ket.dim(); r++) {
        for (std::size_t c = 0; c < bra.dim(); c++) {
            m(r, c) = ket[r] * std::conj(bra[c]);
        }
    }
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; r++) {
        for (std::size_t c = 0; c < cols_; c++) {
            m(c, r) = std::conj((*this)(r, c));
        }
    }
    return m;
}

CMatrix CMatrix::transpose() const {
    CMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; r++) {
        for (std::size_t c = 0; c < cols_; c++) {
            m(c, r) = (*this)(r, c);
        }
    }
    return m;
}

CMatrix CMatrix::conj() const {
    CMatrix m = *this;
    for (auto &z : m.data_) {
        z = std::conj(z);
    }
    return m;
}

Complex CMatrix::trace() const {
    if (!is_square()) {
        throw std::invalid_argument("trace of a non-square matrix");
    }
    Complex s = 0;
    for (std::size_t i = 0; i < rows_; i++) {
        s += (*this)(i, i);
    }
    return s;
}

double CMatrix::max_abs() const {
    double m = 0;
    for (const auto &z : data_) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

double CMatrix::hermiticity_residual() const {
    if (!is_square()) {
        throw std::invalid_argument("hermiticity residual of a non-square matrix");
    }
    double m = 0;
    for (std::size_t r = 0; r < rows_; r++) {
        for (std::size_t c = r; c < cols_; c++) {
            m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        }
    }
    return m;
}

CVector CMatrix::column(std::size_t c) const {
    CVector v(rows_);
    for (std::size_t r = 0; r < rows_; r++) {
        v[r] = (*this)(r, c);
    }
    return v;
}

CMatrix &CMatrix::operator+=(const CMatrix &other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("matrix add: shape mismatch");
    }
    for (std::size_t i = 0; i < data_.size(); i++) {
        data_[i] += other.data_[i];
    }
    return *this;
}

CMatrix &CMatrix::operator-=(const CMatrix &other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("matrix subtract: shape mismatch");
    }
    for (std::size_t i = 0; i < data_.size(); i++) {
        data_[i] -= other.data_[i];
    }
    return *this;
}

CMatrix &CMatrix::operator*=(Complex s) {
    for (auto &z : data_) {
        z *= s;
    }
    return *this;
}

CMatrix operator+(CMatrix a, const CMatrix &b) {
    return a += b;
}

CMatrix operator-(CMatrix a, const CMatrix &b) {
    return a -= b;
}

CMatrix operator*(Complex s, CMatrix m) {
    return m *= s;
}

CMatrix operator*(const CMatrix &a, const CMatrix &b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matrix multiply: inner dimension mismatch");
    }
    CMatrix m(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); r++) {
        for (std::size_t k = 0; k < a.cols(); k++) {
            Complex x = a(r, k);
            if (x == Complex{}) {
                continue;
            }
            for (std::size_t c = 0; c < b.cols(); c++) {
                m(r, c) += x * b(k, c);
            }
        }
    }
    return m;
}

CVector operator*(const CMatrix &m, const CVector &v) {
    if (m.cols() != v.dim()) {
        throw std::invalid_argument("matrix-vector multiply: dimension mismatch");
    }
    CVector out(m.rows());
    for (std::size_t r = 0; r < m.rows(); r++) {
        Complex s = 0;
        for (std::size_t c = 0; c < m.cols(); c++) {
            s += m(r, c) * v[c];
        }
        out[r] = s;
    }
    return out;
}

double max_abs_diff(const CMatrix &a, const CMatrix &b) {
    return (a - b).max_abs();
}

double max_abs_diff(const CVector &a, const CVector &b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    }
    double m = 0;
    for (std::size_t i = 0; i < a.dim(); i++) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

const CMatrix &sigma_y() {
    static const CMatrix y{{0.0, Complex{0, -1}}, {Complex{0, 1}, 0.0}};
    return y;
}

// ---------------------------------------------------------------------------
// Tensor structure

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ar++) {
        for (std::size_t ac = 0; ac < a.cols(); ac++) {
            Complex x = a(ar, ac);
            for (std::size_t br = 0; br < b.rows(); br++) {
                for (std::size_t bc = 0; bc < b.cols(); bc++) {
                    m(ar * b.rows() + br, ac * b.cols() + bc) = x * b(br, bc);
                }
            }
        }
    }
    return m;
}

CVector kron(const CVector &a, const CVector &b) {
    CVector v(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); i++) {
        for (std::size_t j = 0; j < b.dim(); j++) {
            v[i * b.dim() + j] = a[i] * b[j];
        }
    }
    return v;
}

CMatrix partial_trace(const CMatrix &rho, std::span<const std::size_t> dims, std::span<const std::size_t> keep) {
    std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    if (dims.empty() || !rho.is_square() || rho.rows() != total) {
        throw std::invalid_argument(
            "partial_trace: matrix is " + std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()) +
            " but subsystem dimensions multiply to " + std::to_string(total));
    }
    std::vector<bool> kept(dims.size(), false);
    for (auto k : keep) {
        if (k >= dims.size()) {
            throw std::invalid_argument("partial_trace: subsystem index " + std::to_string(k) + " out of range");
        }
        if (kept[k]) {
            throw std::invalid_argument("partial_trace: subsystem index " + std::to_string(k) + " repeated");
        }
        kept[k] = true;
    }

    // Split every composite index into its kept and traced parts.
    std::vector<std::size_t> kept_index(total);
    std::vector<std::size_t> traced_index(total);
    std::size_t kept_dim = 1;
    for (std::size_t s = 0; s < dims.size(); s++) {
        if (kept[s]) {
            kept_dim *= dims[s];
        }
    }
    for (std::size_t i = 0; i < total; i++) {
        std::size_t rem = i;
        std::size_t stride = total;
        std::size_t ki = 0;
        std::size_t ti = 0;
        for (std::size_t s = 0; s < dims.size(); s++) {
            stride /= dims[s];
            std::size_t digit = rem / stride;
            rem %= stride;
            if (kept[s]) {
                ki = ki * dims[s] + digit;
            } else {
                ti = ti * dims[s] + digit;
            }
        }
        kept_index[i] = ki;
        traced_index[i] = ti;
    }

    CMatrix out(kept_dim, kept_dim);
    for (std::size_t i = 0; i < total; i++) {
        for (std::size_t j = 0; j < total; j++) {
            if (traced_index[i] == traced_index[j]) {
                out(kept_index[i], kept_index[j]) += rho(i, j);
            }
        }
    }
    return out;
}

CMatrix partial_trace(const CMatrix &rho, std::initializer_list<std::size_t> dims, std::initializer_list<std::size_t> keep) {
    return partial_trace(rho, std::span<const std::size_t>(dims.begin(), dims.size()),
                         std::span<const std::size_t>(keep.begin(), keep.size()));
}

// ---------------------------------------------------------------------------
// Eigenproblems

namespace {

constexpr double kHermitianTolerance = 1e-10;
constexpr double kJacobiThreshold = 1e-14;
constexpr int kJacobiMaxSweeps = 100;

double off_diagonal_norm(const CMatrix &a) {
    double s = 0;
    for (std::size_t r = 0; r < a.rows(); r++) {
        for (std::size_t c = 0; c < a.cols(); c++) {
            if (r != c) {
                s += std::norm(a(r, c));
            }
        }
    }
    return std::sqrt(s);
}

double frobenius_norm(const CMatrix &a) {
    double s = 0;
    for (std::size_t r = 0; r < a.rows(); r++) {
        for (std::size_t c = 0; c < a.cols(); c++) {
            s += std::norm(a(r, c));
        }
    }
    return std::sqrt(s);
}

// Zeroes a(p, q) with the unitary U = diag(1, e^{-i phi}) * G(theta) acting on rows/columns p, q.
void jacobi_rotate(CMatrix &a, CMatrix &v, std::size_t p, std::size_t q) {
    Complex apq = a(p, q);
    double mag = std::abs(apq);
    if (mag == 0) {
        return;
    }
    Complex phase = apq / mag;  // e^{i phi}
    double app = a(p, p).real();
    double aqq = a(q, q).real();
    double zeta = (aqq - app) / (2 * mag);
    double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
    double cs = 1 / std::sqrt(1 + t * t);
    double sn = t * cs;

    Complex u_pp = cs;
    Complex u_pq = sn;
    Complex u_qp = -sn * std::conj(phase);
    Complex u_qq = cs * std::conj(phase);

    std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; k++) {
        Complex akp = a(k, p);
        Complex akq = a(k, q);
        a(k, p) = akp * u_pp + akq * u_qp;
        a(k, q) = akp * u_pq + akq * u_qq;
    }
    for (std::size_t k = 0; k < n; k++) {
        Complex apk = a(p, k);
        Complex aqk = a(q, k);
        a(p, k) = std::conj(u_pp) * apk + std::conj(u_qp) * aqk;
        a(q, k) = std::conj(u_pq) * apk + std::conj(u_qq) * aqk;
    }
    a(p, q) = 0;
    a(q, p) = 0;
    a(p, p) = app - t * mag;
    a(q, q) = aqq + t * mag;

    for (std::size_t k = 0; k < n; k++) {
        Complex vkp = v(k, p);
        Complex vkq = v(k, q);
        v(k, p) = vkp * u_pp + vkq * u_qp;
        v(k, q) = vkp * u_pq + vkq * u_qq;
    }
}

}  // namespace

HermitianSpectrum herm_eig(const CMatrix &h) {
    if (!h.is_square() || h.rows() == 0) {
        throw std::invalid_argument("herm_eig: matrix must be square and non-empty");
    }
    double residual = h.hermiticity_residual();
    if (!(residual < kHermitianTolerance)) {
        throw std::invalid_argument("herm_eig: matrix is not Hermitian (residual " + std::to_string(residual) + ")");
    }
    std::size_t n = h.rows();

    // Symmetrize so that rounding in the input does not leak into the rotations.
    CMatrix a = 0.5 * (h + h.adjoint());
    CMatrix v = CMatrix::identity(n);

    double scale = std::max(1.0, frobenius_norm(a));
    int sweep = 0;
    while (off_diagonal_norm(a) > kJacobiThreshold * scale) {
        if (sweep++ >= kJacobiMaxSweeps) {
            throw std::runtime_error("herm_eig: Jacobi iteration did not converge");
        }
        for (std::size_t p = 0; p + 1 < n; p++) {
            for (std::size_t q = p + 1; q < n; q++) {
                jacobi_rotate(a, v, p, q);
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() > a(y, y).real();
    });

    HermitianSpectrum out;
    out.eigenvalues.resize(n);
    out.eigenvectors = CMatrix(n, n);
    for (std::size_t k = 0; k < n; k++) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; r++) {
            out.eigenvectors(r, k) = v(r, order[k]);
        }
    }
    return out;
}

CMatrix reconstruct(const CMatrix &eigenvectors, std::span<const double> values) {
    std::size_t n = eigenvectors.rows();
    CMatrix m(n, n);
    for (std::size_t k = 0; k < values.size(); k++) {
        if (values[k] == 0) {
            continue;
        }
        for (std::size_t r = 0; r < n; r++) {
            Complex x = values[k] * eigenvectors(r, k);
            for (std::size_t c = 0; c < n; c++) {
                m(r, c) += x * std::conj(eigenvectors(c, k));
            }
        }
    }
    return m;
}

CMatrix reconstruct(const HermitianSpectrum &spectrum) {
    return reconstruct(spectrum.eigenvectors, spectrum.eigenvalues);
}

CMatrix psd_sqrt(const CMatrix &rho) {
    auto spectrum = herm_eig(rho);
    std::vector<double> roots;
    roots.reserve(spectrum.eigenvalues.size());
    // Eigenvalues at rounding level are zero; their square roots would be ~1e-8.
    double cutoff = 1e-14 * std::max(spectrum.eigenvalues.empty() ? 0.0 : spectrum.eigenvalues.front(), 0.0);
    for (double ev : spectrum.eigenvalues) {
        if (ev < -kHermitianTolerance) {
            throw std::domain_error("psd_sqrt: matrix is not positive semidefinite (eigenvalue " + std::to_string(ev) + ")");
        }
        roots.push_back(ev <= cutoff ? 0.0 : std::sqrt(ev));
    }
    return reconstruct(spectrum.eigenvectors, roots);
}

std::vector<double> singular_values(const CMatrix &m) {
    std::size_t r = m.rows();
    std::size_t c = m.cols();
    CMatrix dilation(r + c, r + c);
    for (std::size_t i = 0; i < r; i++) {
        for (std::size_t j = 0; j < c; j++) {
            dilation(i, r + j) = m(i, j);
            dilation(r + j, i) = std::conj(m(i, j));
        }
    }
    auto spectrum = herm_eig(dilation);
    std::size_t k = std::min(r, c);
    std::vector<double> out(k);
    for (std::size_t i = 0; i < k; i++) {
        out[i] = std::max(spectrum.eigenvalues[i], 0.0);
    }
    return out;
}

CVector permute_qubits(const CVector &v, std::span<const std::size_t> perm) {
    std::size_t n = perm.size();
    if (v.dim() != (std::size_t{1} << n)) {
        throw std::invalid_argument("permute_qubits: vector dimension is not 2^" + std::to_string(n));
    }
    std::vector<bool> seen(n, false);
    for (auto p : perm) {
        if (p >= n || seen[p]) {
            throw std::invalid_argument("permute_qubits: not a permutation");
        }
        seen[p] = true;
    }
    CVector out(v.dim());
    for (std::size_t o = 0; o < v.dim(); o++) {
        std::size_t i = 0;
        for (std::size_t k = 0; k < n; k++) {
            std::size_t bit = (o >> (n - 1 - k)) & 1;
            i |= bit << (n - 1 - perm[k]);
        }
        out[o] = v[i];
    }
    return out;
}

CVector apply_to_factor(const CVector &v, std::span<const std::size_t> dims, std::size_t factor, const CMatrix &op) {
    std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    if (v.dim() != total || factor >= dims.size()) {
        throw std::invalid_argument("apply_to_factor: dimension mismatch");
    }
    std::size_t d = dims[factor];
    if (op.rows() != d || op.cols() != d) {
        throw std::invalid_argument("apply_to_factor: operator does not match factor dimension");
    }
    std::size_t inner = 1;
    for (std::size_t s = factor + 1; s < dims.size(); s++) {
        inner *= dims[s];
    }
    std::size_t outer = total / (inner * d);
    CVector out(total);
    for (std::size_t o = 0; o < outer; o++) {
        for (std::size_t i = 0; i < inner; i++) {
            std::size_t base = o * d * inner + i;
            for (std::size_t r = 0; r < d; r++) {
                Complex s = 0;
                for (std::size_t c = 0; c < d; c++) {
                    s += op(r, c) * v[base + c * inner];
                }
                out[base + r * inner] = s;
            }
        }
    }
    return out;
}

}  // namespace qtangle
