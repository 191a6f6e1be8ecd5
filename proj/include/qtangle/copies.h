#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "qtangle/linalg.h"
#include "qtangle/measures.h"
#include "qtangle/states.h"

namespace qtangle {

/// (|01> - |10>) / sqrt(2).
CVector singlet();

/// Projector (I - SWAP) / 2 onto the antisymmetric subspace of C^d (x) C^d.
class AntisymProjector {
   public:
    explicit AntisymProjector(std::size_t d);

    std::size_t d() const { return d_; }
    const CMatrix &matrix() const { return p_; }
    std::size_t rank() const { return d_ * (d_ - 1) / 2; }
    /// Orthonormal basis of the range: (|ij> - |ji>) / sqrt(2) for i < j.
    std::vector<CVector> range_basis() const;

   private:
    std::size_t d_;
    CMatrix p_;
};

/// One qubit of the fourfold copy. `copy` is 0-based.
struct CopySlot {
    Party party;
    int copy;

    bool operator==(const CopySlot &) const = default;
};

/// Six singlet projectors covering the 12 qubits of psi^(x)4.
struct PairingLayout {
    std::array<std::array<CopySlot, 2>, 6> pairs;

    /// A1A2, B1B2, A3A4, B3B4, C1C3, C2C4.
    static PairingLayout standard();
    /// Throws std::invalid_argument unless the pairs partition all 12 slots.
    void validate() const;
    /// Qubit position of a slot in psi^(x)4 (copy-major, then A, B, C).
    static std::size_t qubit_index(const CopySlot &slot) { return 3 * slot.copy + static_cast<std::size_t>(slot.party); }
};

/// <S|psi^(x)4>, where |S> is the product of the layout's six singlets.
Complex singlet_overlap(const PureTripartiteState &psi, const PairingLayout &layout = PairingLayout::standard());

/// <psi^(x)4| A |psi^(x)4> with A the product of the six singlet projectors (rank one, so this is
/// |<S|psi^(x)4>|^2).
double observable_a_expectation(const PureTripartiteState &psi, const PairingLayout &layout = PairingLayout::standard());

/// sqrt(256 <A>).
double tau_via_copies(const PureTripartiteState &psi);

/// <psi (x) psi| P-(focus copies) (x) P-(rest-pair copies) |psi (x) psi>, the d = 2 and d = 4
/// antisymmetric projectors across the two copies.
double cut_pair_expectation(const PureTripartiteState &psi, Party focus);
/// sqrt(4 <P- (x) P->).
double cut_concurrence_via_copies(const PureTripartiteState &psi, Party focus);

/// 16x16 operator 4 P-(A1A2) (x) P-(B1B2), expressed on the (A1 B1)(A2 B2) ordering of rho (x) rho.
const CMatrix &observable_b();
/// Tr[(rho (x) rho) B].
double observable_b_expectation(const DensityMatrix &rho);

enum class BIdentityVerdict {
    /// Tr(rho rho~) = Tr[(rho (x) rho) B]
    no_root,
    /// Tr(rho rho~) = sqrt(Tr[(rho (x) rho) B])
    printed_root,
    unresolved,
};

std::string_view to_string(BIdentityVerdict v);

struct BIdentityResolution {
    BIdentityVerdict verdict = BIdentityVerdict::unresolved;
    double max_residual_no_root = 0;
    double max_residual_printed_root = 0;
    /// Members with Tr[(rho (x) rho) B] away from 0 and 1, where the two candidates differ.
    std::size_t non_extremal = 0;
    /// Why the verdict is unresolved, when it is.
    std::string reason;
};

/// Decides which form of the twofold-copy identity for Tr(rho rho~) holds uniformly over `corpus`.
BIdentityResolution resolve_b_identity(const std::vector<DensityMatrix> &corpus, double tol);

/// Resolution over the three two-qubit marginals of haar_random(0) .. haar_random(99) at tolerance 1e-9.
/// Computed once.
const BIdentityResolution &reference_b_identity();

}  // namespace qtangle
