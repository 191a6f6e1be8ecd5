#include "qtangle/measures.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace qtangle {

namespace {

constexpr double kTolerance = 1e-10;
constexpr double kRangeGuard = 1e-7;
// Eigenvalues of rho below this are numerical zeros: left in, their square roots (~1e-8)
// would dominate the small Wootters lambdas.
constexpr double kRankCutoff = 1e-14;

const CMatrix &sigma_yy() {
    static const CMatrix m = kron(sigma_y(), sigma_y());
    return m;
}

// Amplitudes as a 2 x 4 matrix with rows indexed by `focus` and columns by the remaining pair.
CMatrix cut_matrix(const PureTripartiteState &psi, Party focus) {
    auto rest = complement(focus);
    CMatrix m(2, 4);
    for (int f = 0; f < 2; f++) {
        for (int x = 0; x < 2; x++) {
            for (int y = 0; y < 2; y++) {
                int bits[3];
                bits[static_cast<int>(focus)] = f;
                bits[static_cast<int>(rest[0])] = x;
                bits[static_cast<int>(rest[1])] = y;
                m(f, 2 * x + y) = psi[4 * bits[0] + 2 * bits[1] + bits[2]];
            }
        }
    }
    return m;
}

}  // namespace

double checked_unit_interval(double value, const char *what) {
    if (!(value >= -kRangeGuard && value <= 1 + kRangeGuard)) {
        throw std::domain_error(fmt::format("{} = {:.17g} lies outside [0, 1]", what, value));
    }
    return std::clamp(value, 0.0, 1.0);
}

std::array<Party, 2> parties_of(Pair pair) {
    switch (pair) {
        case Pair::AB:
            return {Party::A, Party::B};
        case Pair::AC:
            return {Party::A, Party::C};
        case Pair::BC:
            return {Party::B, Party::C};
    }
    throw std::invalid_argument("unknown pair");
}

Party third_party(Pair pair) {
    switch (pair) {
        case Pair::AB:
            return Party::C;
        case Pair::AC:
            return Party::B;
        case Pair::BC:
            return Party::A;
    }
    throw std::invalid_argument("unknown pair");
}

std::string pair_name(Pair pair) {
    auto p = parties_of(pair);
    return {party_name(p[0]), party_name(p[1])};
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(CMatrix m) : m_(std::move(m)) {
    if (!m_.is_square() || (m_.rows() != 2 && m_.rows() != 4)) {
        throw std::invalid_argument(fmt::format("density matrix must be 2x2 or 4x4, got {}x{}", m_.rows(), m_.cols()));
    }
    for (std::size_t r = 0; r < m_.rows(); r++) {
        for (std::size_t c = 0; c < m_.cols(); c++) {
            if (!is_finite(m_(r, c))) {
                throw std::invalid_argument("density matrix has non-finite entries");
            }
        }
    }
    double herm = m_.hermiticity_residual();
    if (herm >= kTolerance) {
        throw std::invalid_argument(fmt::format("density matrix is not Hermitian (residual {:.3g})", herm));
    }
    Complex tr = m_.trace();
    if (std::abs(tr - 1.0) > kTolerance) {
        throw std::invalid_argument(fmt::format("density matrix trace is {:.17g}, expected 1", tr.real()));
    }
    spectrum_ = herm_eig(m_);
    if (spectrum_.eigenvalues.back() < -kTolerance) {
        throw std::invalid_argument(
            fmt::format("density matrix has negative eigenvalue {:.3g}", spectrum_.eigenvalues.back()));
    }
}

double DensityMatrix::purity() const {
    double s = 0;
    for (std::size_t r = 0; r < dim(); r++) {
        for (std::size_t c = 0; c < dim(); c++) {
            s += std::norm(m_(r, c));
        }
    }
    return s;
}

DensityMatrix reduced(const PureTripartiteState &psi, Party party) {
    std::size_t keep = static_cast<std::size_t>(party);
    return DensityMatrix(partial_trace(psi.density(), {2, 2, 2}, {keep}));
}

DensityMatrix reduced(const PureTripartiteState &psi, Pair pair) {
    auto p = parties_of(pair);
    return DensityMatrix(
        partial_trace(psi.density(), {2, 2, 2}, {static_cast<std::size_t>(p[0]), static_cast<std::size_t>(p[1])}));
}

CMatrix spin_flip(const CMatrix &rho) {
    if (rho.rows() != 4 || rho.cols() != 4) {
        throw std::invalid_argument(fmt::format("spin_flip needs a 4x4 matrix, got {}x{}", rho.rows(), rho.cols()));
    }
    if (rho.hermiticity_residual() >= kTolerance) {
        throw std::invalid_argument("spin_flip needs a Hermitian matrix");
    }
    return sigma_yy() * rho.conj() * sigma_yy();
}

double pure_cut_concurrence(const PureTripartiteState &psi, Party focus) {
    // 2 (1 - Tr rho^2) = 4 det rho_focus, and det rho_focus = sum of |2x2 minors|^2 of the 2x4
    // amplitude matrix (Cauchy-Binet). Summing squared minors avoids the cancellation in 1 - Tr rho^2.
    auto m = cut_matrix(psi, focus);
    double det = 0;
    for (std::size_t a = 0; a < 4; a++) {
        for (std::size_t b = a + 1; b < 4; b++) {
            det += std::norm(m(0, a) * m(1, b) - m(0, b) * m(1, a));
        }
    }
    return checked_unit_interval(2 * std::sqrt(det), "cut concurrence");
}

WoottersSpectrum wootters_spectrum(const DensityMatrix &rho) {
    if (rho.dim() != 4) {
        throw std::invalid_argument("wootters_spectrum needs a two-qubit density matrix");
    }
    // With rho = X X^dagger, the eigenvalues of rho rho~ are the squared singular values of the
    // symmetric matrix X^T (sigma_y (x) sigma_y) X.
    const auto &spec = rho.spectrum();
    std::vector<std::size_t> support;
    for (std::size_t k = 0; k < 4; k++) {
        if (spec.eigenvalues[k] > kRankCutoff) {
            support.push_back(k);
        }
    }
    WoottersSpectrum out;
    if (support.empty()) {
        return out;
    }
    CMatrix x(4, support.size());
    for (std::size_t j = 0; j < support.size(); j++) {
        double s = std::sqrt(spec.eigenvalues[support[j]]);
        for (std::size_t r = 0; r < 4; r++) {
            x(r, j) = s * spec.eigenvectors(r, support[j]);
        }
    }
    auto sv = singular_values(x.transpose() * sigma_yy() * x);
    for (std::size_t k = 0; k < sv.size(); k++) {
        out.lambdas[k] = sv[k];
    }
    return out;
}

double wootters_concurrence(const DensityMatrix &rho) {
    auto l = wootters_spectrum(rho).lambdas;
    return checked_unit_interval(std::max(0.0, l[0] - l[1] - l[2] - l[3]), "concurrence");
}

double coa(const DensityMatrix &rho) {
    auto l = wootters_spectrum(rho).lambdas;
    return checked_unit_interval(l[0] + l[1] + l[2] + l[3], "concurrence of assistance");
}

double tr_rho_rhotilde(const DensityMatrix &rho) {
    if (rho.dim() != 4) {
        throw std::invalid_argument("tr_rho_rhotilde needs a two-qubit density matrix");
    }
    Complex t = (rho.matrix() * spin_flip(rho.matrix())).trace();
    if (std::abs(t.imag()) > kTolerance) {
        throw std::domain_error(fmt::format("Tr(rho rho~) has imaginary part {:.3g}", t.imag()));
    }
    return checked_unit_interval(t.real(), "Tr(rho rho~)");
}

TangleMatrix tangle_matrix(const PureTripartiteState &psi) {
    const auto &y = sigma_y();
    TangleMatrix t;
    for (int k = 0; k < 2; k++) {
        for (int l = 0; l < 2; l++) {
            Complex s = 0;
            for (int i = 0; i < 2; i++) {
                for (int j = 0; j < 2; j++) {
                    for (int i2 = 0; i2 < 2; i2++) {
                        for (int j2 = 0; j2 < 2; j2++) {
                            s += psi.amp(i, j, k) * y(i, i2) * y(j, j2) * psi.amp(i2, j2, l);
                        }
                    }
                }
            }
            t.r[k][l] = s;
        }
    }
    return t;
}

double three_tangle(const PureTripartiteState &psi) {
    return checked_unit_interval(4 * std::abs(tangle_matrix(psi).det()), "three-tangle");
}

double three_tangle_ckw(const PureTripartiteState &psi) {
    double ca = pure_cut_concurrence(psi, Party::A);
    double cab = wootters_concurrence(reduced(psi, Pair::AB));
    double cac = wootters_concurrence(reduced(psi, Pair::AC));
    double tau = ca * ca - cab * cab - cac * cac;
    return checked_unit_interval(std::max(tau, 0.0), "monogamy three-tangle");
}

EntanglementVector entanglement_vector(const PureTripartiteState &psi) {
    return {
        pure_cut_concurrence(psi, Party::A),
        pure_cut_concurrence(psi, Party::B),
        pure_cut_concurrence(psi, Party::C),
        three_tangle(psi),
    };
}

AltEntanglementVector alt_entanglement_vector(const PureTripartiteState &psi) {
    return {
        tr_rho_rhotilde(reduced(psi, Pair::AB)),
        tr_rho_rhotilde(reduced(psi, Pair::AC)),
        tr_rho_rhotilde(reduced(psi, Pair::BC)),
        three_tangle(psi),
    };
}

// ---------------------------------------------------------------------------

double IdentityReport::max_residual() const {
    double m = 0;
    for (const auto &r : residuals) {
        m = std::max(m, r.residual);
    }
    return m;
}

std::vector<IdentityResidual> IdentityReport::flagged() const {
    std::vector<IdentityResidual> out;
    for (const auto &r : residuals) {
        if (!(r.residual < tolerance)) {
            out.push_back(r);
        }
    }
    return out;
}

IdentityReport verify_identities(const PureTripartiteState &psi, double tol) {
    IdentityReport report;
    report.tolerance = tol;
    auto add = [&](std::string name, double residual) {
        report.residuals.push_back({std::move(name), residual});
    };

    double tau = three_tangle(psi);

    struct PairData {
        double c;
        double ca;
        double tr;
        WoottersSpectrum spec;
    };
    std::array<PairData, 3> pairs;
    for (std::size_t i = 0; i < 3; i++) {
        auto rho = reduced(psi, kAllPairs[i]);
        pairs[i] = {wootters_concurrence(rho), coa(rho), tr_rho_rhotilde(rho), wootters_spectrum(rho)};
    }
    auto pair_index = [](Party x, Party y) {
        int m = static_cast<int>(x) + static_cast<int>(y);
        return m == 1 ? 0 : m == 2 ? 1 : 2;  // AB, AC, BC
    };

    for (Party focus : kAllParties) {
        auto rest = complement(focus);
        double cut = pure_cut_concurrence(psi, focus);
        double c1 = pairs[pair_index(focus, rest[0])].c;
        double c2 = pairs[pair_index(focus, rest[1])].c;
        add(fmt::format("monogamy[{}]", party_name(focus)), std::abs(cut * cut - c1 * c1 - c2 * c2 - tau));
    }
    for (std::size_t i = 0; i < 3; i++) {
        const auto &p = pairs[i];
        auto name = pair_name(kAllPairs[i]);
        const auto &l = p.spec.lambdas;
        add(fmt::format("coa_minus_concurrence[{}]", name), std::abs(p.ca * p.ca - p.c * p.c - tau));
        add(fmt::format("lambda_product[{}]", name), std::abs(4 * l[0] * l[1] - tau));
        add(fmt::format("coa_decomposition[{}]", name), std::abs(p.ca * p.ca - p.tr - tau / 2));
        add(fmt::format("concurrence_decomposition[{}]", name), std::abs(p.c * p.c - p.tr + tau / 2));
        add(fmt::format("rank_two_concurrence[{}]", name), std::abs(p.c - std::abs(l[0] - l[1])));
    }
    add("tangle_det_vs_monogamy", std::abs(tau - three_tangle_ckw(psi)));
    return report;
}

}  // namespace qtangle
