#include "qtangle/linalg.h"

#include <gtest/gtest.h>

#include "test_util.h"

using namespace qtangle;
using qtangle::testing::RandomMatrices;

TEST(linalg, kron_identities) {
    EXPECT_EQ(max_abs_diff(kron(CMatrix::identity(2), CMatrix::identity(2)), CMatrix::identity(4)), 0);

    auto yy = kron(sigma_y(), sigma_y());
    CMatrix expected(4, 4);
    expected(0, 3) = -1;
    expected(1, 2) = 1;
    expected(2, 1) = 1;
    expected(3, 0) = -1;
    EXPECT_EQ(max_abs_diff(yy, expected), 0);

    auto v = kron(CVector::basis(2, 0), CVector::basis(2, 1));
    EXPECT_EQ(max_abs_diff(v, CVector{0.0, 1.0, 0.0, 0.0}), 0);
}

TEST(linalg, kron_associative) {
    RandomMatrices rm(11);
    for (int trial = 0; trial < 20; trial++) {
        auto a = rm.ginibre(2, 3);
        auto b = rm.ginibre(3, 2);
        auto c = rm.ginibre(2, 2);
        EXPECT_LT(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))), 1e-12);
    }
}

TEST(linalg, partial_trace_examples) {
    double h = 1 / std::sqrt(2.0);
    CVector bell{h, 0.0, 0.0, h};
    auto half = 0.5 * CMatrix::identity(2);
    EXPECT_LT(max_abs_diff(partial_trace(CMatrix::projector(bell), {2, 2}, {0}), half), 1e-15);

    CVector ghz(8);
    ghz[0] = h;
    ghz[7] = h;
    EXPECT_LT(max_abs_diff(partial_trace(CMatrix::projector(ghz), {2, 2, 2}, {0}), half), 1e-15);

    RandomMatrices rm(3);
    auto rho = rm.density(3, 3);
    auto sigma = rm.density(2, 2);
    EXPECT_LT(max_abs_diff(partial_trace(kron(rho, sigma), {3, 2}, {1}), sigma), 1e-14);
    EXPECT_LT(max_abs_diff(partial_trace(kron(rho, sigma), {3, 2}, {0}), rho), 1e-14);
}

TEST(linalg, partial_trace_keeps_original_order) {
    RandomMatrices rm(5);
    auto a = rm.density(2, 2);
    auto b = rm.density(2, 2);
    auto c = rm.density(2, 2);
    auto abc = kron(kron(a, b), c);
    // keep order {2, 0} must still give A (x) C, not C (x) A
    EXPECT_LT(max_abs_diff(partial_trace(abc, {2, 2, 2}, {2, 0}), kron(a, c)), 1e-14);
}

TEST(linalg, partial_trace_properties) {
    RandomMatrices rm(7);
    for (int trial = 0; trial < 20; trial++) {
        auto rho = rm.density(8, 8);
        EXPECT_LT(max_abs_diff(partial_trace(rho, {2, 2, 2}, {0, 1, 2}), rho), 1e-15);
        for (auto keep : std::vector<std::vector<std::size_t>>{{0}, {1}, {2}, {0, 1}, {1, 2}, {0, 2}, {}}) {
            const std::size_t dims[] = {2, 2, 2};
            auto r = partial_trace(rho, dims, keep);
            EXPECT_LT(std::abs(r.trace() - rho.trace()), 1e-12);
        }
    }
}

TEST(linalg, partial_trace_rejects_mismatch) {
    EXPECT_THROW(partial_trace(CMatrix::identity(6), {2, 2}, {0}), std::invalid_argument);
    EXPECT_THROW(partial_trace(CMatrix::identity(4), {2, 2}, {2}), std::invalid_argument);
    EXPECT_THROW(partial_trace(CMatrix::identity(4), {2, 2}, {0, 0}), std::invalid_argument);
}

TEST(linalg, herm_eig_examples) {
    auto y = herm_eig(sigma_y());
    EXPECT_NEAR(y.eigenvalues[0], 1, 1e-15);
    EXPECT_NEAR(y.eigenvalues[1], -1, 1e-15);

    const double diag[] = {3, 1, 2, 0};
    auto d = herm_eig(CMatrix::diagonal(diag));
    EXPECT_EQ(d.eigenvalues, (std::vector<double>{3, 2, 1, 0}));

    RandomMatrices rm(17);
    for (int trial = 0; trial < 10; trial++) {
        auto v = rm.unitary(2);
        const double values[] = {5, 1};
        auto h = v * CMatrix::diagonal(values) * v.adjoint();
        auto s = herm_eig(h);
        EXPECT_NEAR(s.eigenvalues[0], 5, 1e-10);
        EXPECT_NEAR(s.eigenvalues[1], 1, 1e-10);
    }
}

TEST(linalg, herm_eig_reconstructs_random_hermitian) {
    RandomMatrices rm(23);
    for (int trial = 0; trial < 100; trial++) {
        auto h = rm.hermitian(4);
        auto s = herm_eig(h);
        EXPECT_LT(max_abs_diff(reconstruct(s), h), 1e-10);
        EXPECT_LT(max_abs_diff(s.eigenvectors.adjoint() * s.eigenvectors, CMatrix::identity(4)), 1e-10);
        EXPECT_TRUE(std::is_sorted(s.eigenvalues.rbegin(), s.eigenvalues.rend()));
    }
}

TEST(linalg, herm_eig_handles_degenerate_and_larger) {
    RandomMatrices rm(29);
    auto v = rm.unitary(12);
    std::vector<double> values{2, 2, 2, 1, 1, 0, 0, 0, -1, -1, -3, 5};
    auto h = reconstruct(v, values);
    auto s = herm_eig(h);
    std::sort(values.rbegin(), values.rend());
    for (std::size_t k = 0; k < values.size(); k++) {
        EXPECT_NEAR(s.eigenvalues[k], values[k], 1e-10);
    }
    EXPECT_LT(max_abs_diff(reconstruct(s), h), 1e-10);
}

TEST(linalg, herm_eig_rejects_non_hermitian) {
    CMatrix m{{1.0, 2.0}, {0.0, 1.0}};
    EXPECT_THROW(herm_eig(m), std::invalid_argument);
}

TEST(linalg, psd_sqrt_examples) {
    const double diag[] = {4, 9};
    const double roots[] = {2, 3};
    EXPECT_LT(max_abs_diff(psd_sqrt(CMatrix::diagonal(diag)), CMatrix::diagonal(roots)), 1e-14);

    RandomMatrices rm(31);
    auto u = rm.unitary(4);
    auto p = CMatrix::projector(u.column(0)) + CMatrix::projector(u.column(2));
    EXPECT_LT(max_abs_diff(psd_sqrt(p), p), 1e-12);

    // GHZ AB marginal: diag(1/2, 0, 0, 1/2) has root diag(1/sqrt2, 0, 0, 1/sqrt2).
    const double ghz_ab[] = {0.5, 0, 0, 0.5};
    const double ghz_root[] = {1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0)};
    EXPECT_LT(max_abs_diff(psd_sqrt(CMatrix::diagonal(ghz_ab)), CMatrix::diagonal(ghz_root)), 1e-14);
}

TEST(linalg, psd_sqrt_squares_back) {
    RandomMatrices rm(37);
    for (int trial = 0; trial < 100; trial++) {
        auto rho = rm.density(4, 1 + trial % 4);
        auto r = psd_sqrt(rho);
        EXPECT_LT(max_abs_diff(r * r, rho), 1e-9);
        EXPECT_LT(r.hermiticity_residual(), 1e-12);
    }
}

TEST(linalg, psd_sqrt_rejects_negative) {
    const double diag[] = {1, -1e-3};
    EXPECT_THROW(psd_sqrt(CMatrix::diagonal(diag)), std::domain_error);
    const double tiny[] = {1, -1e-12};
    EXPECT_NO_THROW(psd_sqrt(CMatrix::diagonal(tiny)));
}

TEST(linalg, singular_values_match_gram_eigenvalues) {
    RandomMatrices rm(41);
    for (int trial = 0; trial < 20; trial++) {
        auto m = rm.ginibre(3, 2);
        auto sv = singular_values(m);
        auto gram = herm_eig(m.adjoint() * m);
        ASSERT_EQ(sv.size(), 2u);
        for (std::size_t k = 0; k < 2; k++) {
            EXPECT_NEAR(sv[k] * sv[k], gram.eigenvalues[k], 1e-10);
        }
    }
    // Rank one: the small singular value stays at rounding level, not its square root.
    CMatrix r1 = CMatrix::outer(CVector{1.0, 2.0}, CVector{3.0, Complex{0, 1}});
    EXPECT_LT(singular_values(r1)[1], 1e-14);
}

TEST(linalg, permute_and_apply_to_factor) {
    RandomMatrices rm(43);
    CVector a{rm.gaussian(), rm.gaussian()};
    CVector b{rm.gaussian(), rm.gaussian()};
    CVector c{rm.gaussian(), rm.gaussian()};
    auto abc = kron(kron(a, b), c);
    const std::size_t perm[] = {2, 0, 1};
    EXPECT_LT(max_abs_diff(permute_qubits(abc, perm), kron(kron(c, a), b)), 1e-15);

    auto op = rm.ginibre(2, 2);
    const std::size_t dims[] = {2, 2, 2};
    EXPECT_LT(max_abs_diff(apply_to_factor(abc, dims, 1, op), kron(kron(a, op * b), c)), 1e-14);
}
