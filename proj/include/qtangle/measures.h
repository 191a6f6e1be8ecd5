#pragma once

#include <array>
#include <string>
#include <vector>

#include "qtangle/linalg.h"
#include "qtangle/states.h"

namespace qtangle {

enum class Pair { AB, AC, BC };

std::array<Party, 2> parties_of(Pair pair);
/// The party not in `pair`.
Party third_party(Pair pair);
std::string pair_name(Pair pair);
inline constexpr std::array<Pair, 3> kAllPairs{Pair::AB, Pair::AC, Pair::BC};
inline constexpr std::array<Party, 3> kAllParties{Party::A, Party::B, Party::C};

/// Validated density matrix of one or two qubits: Hermitian within 1e-10, eigenvalues >= -1e-10,
/// unit trace within 1e-10.
class DensityMatrix {
   public:
    /// Throws std::invalid_argument when any of the invariants fail.
    explicit DensityMatrix(CMatrix m);

    std::size_t dim() const { return m_.rows(); }
    const CMatrix &matrix() const { return m_; }
    /// Eigenvalues (descending) computed at construction.
    const std::vector<double> &eigenvalues() const { return spectrum_.eigenvalues; }
    const HermitianSpectrum &spectrum() const { return spectrum_; }
    double purity() const;

   private:
    CMatrix m_;
    HermitianSpectrum spectrum_;
};

DensityMatrix reduced(const PureTripartiteState &psi, Party party);
DensityMatrix reduced(const PureTripartiteState &psi, Pair pair);

/// (sigma_y (x) sigma_y) rho^* (sigma_y (x) sigma_y) for a 4x4 Hermitian rho.
CMatrix spin_flip(const CMatrix &rho);

/// Concurrence of the pure bipartite cut focus|rest, sqrt(2 (1 - Tr rho_focus^2)).
double pure_cut_concurrence(const PureTripartiteState &psi, Party focus);

struct WoottersSpectrum {
    /// Square roots of the eigenvalues of rho * rho~, descending.
    std::array<double, 4> lambdas{};
};

WoottersSpectrum wootters_spectrum(const DensityMatrix &rho);
/// max(0, l1 - l2 - l3 - l4).
double wootters_concurrence(const DensityMatrix &rho);
/// Concurrence of assistance, Tr sqrt(sqrt(rho) rho~ sqrt(rho)) = l1 + l2 + l3 + l4.
double coa(const DensityMatrix &rho);
double tr_rho_rhotilde(const DensityMatrix &rho);

/// R_kl = <psi^*| sigma_y (x) sigma_y (x) |k><l| |psi>, with {|k>} the computational basis of C.
struct TangleMatrix {
    std::array<std::array<Complex, 2>, 2> r{};
    Complex det() const { return r[0][0] * r[1][1] - r[0][1] * r[1][0]; }
};

TangleMatrix tangle_matrix(const PureTripartiteState &psi);
/// 4 |det R|.
double three_tangle(const PureTripartiteState &psi);
/// C^2_{A(BC)} - C^2(rho_AB) - C^2(rho_AC), clamped at zero.
double three_tangle_ckw(const PureTripartiteState &psi);

struct EntanglementVector {
    double e_ii = 0;   ///< A|BC cut concurrence
    double e_iii = 0;  ///< B|AC cut concurrence
    double e_iv = 0;   ///< C|AB cut concurrence
    double e_v = 0;    ///< three-tangle

    double cut(Party p) const { return p == Party::A ? e_ii : p == Party::B ? e_iii : e_iv; }
    std::array<double, 4> values() const { return {e_ii, e_iii, e_iv, e_v}; }
};

EntanglementVector entanglement_vector(const PureTripartiteState &psi);

/// Alternative vector with Tr(rho_x rho~_x) for the three pairs in place of the cut concurrences.
struct AltEntanglementVector {
    double tr_ab = 0;
    double tr_ac = 0;
    double tr_bc = 0;
    double tau = 0;

    std::array<double, 4> values() const { return {tr_ab, tr_ac, tr_bc, tau}; }
};

AltEntanglementVector alt_entanglement_vector(const PureTripartiteState &psi);

struct IdentityResidual {
    std::string name;
    double residual = 0;
};

struct IdentityReport {
    double tolerance = 0;
    std::vector<IdentityResidual> residuals;

    double max_residual() const;
    /// Residuals that are not below the tolerance.
    std::vector<IdentityResidual> flagged() const;
    bool ok() const { return flagged().empty(); }
};

/// Residuals of the monogamy relation at each focus, the COA / three-tangle relation for each
/// pair (in both the C_a^2 - C^2 and 4 l1 l2 forms), the Tr(rho rho~) decompositions of C_a^2 and C^2,
/// the rank-two shortcut |l1 - l2| for C, and det-R against the monogamy three-tangle.
IdentityReport verify_identities(const PureTripartiteState &psi, double tol);

/// Clamp a quantity with range [0, 1] after checking it lies in [-1e-7, 1 + 1e-7].
/// Throws std::domain_error otherwise.
double checked_unit_interval(double value, const char *what);

}  // namespace qtangle
