#include "qtangle/copies.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace qtangle {

namespace {

constexpr double kSqrtHalf = 0.70710678118654752440;
constexpr double kNegativeGuard = 1e-9;

// Exchanges the qubits of the parties in `mask` between the two copies of a 64-entry two-copy vector.
CVector swap_between_copies(const CVector &v, unsigned mask) {
    CVector out(64);
    for (std::size_t x1 = 0; x1 < 8; x1++) {
        for (std::size_t x2 = 0; x2 < 8; x2++) {
            std::size_t y1 = (x1 & ~mask) | (x2 & mask);
            std::size_t y2 = (x2 & ~mask) | (x1 & mask);
            out[8 * y1 + y2] = v[8 * x1 + x2];
        }
    }
    return out;
}

unsigned party_mask(Party p) {
    return 1u << (2 - static_cast<int>(p));
}

double sqrt_of_expectation(double scale, double expectation, const char *what) {
    double x = scale * expectation;
    if (x < -kNegativeGuard) {
        throw std::domain_error(fmt::format("{}: negative expectation {:.3g}", what, expectation));
    }
    return std::sqrt(std::max(x, 0.0));
}

}  // namespace

CVector singlet() {
    return CVector{0.0, kSqrtHalf, -kSqrtHalf, 0.0};
}

AntisymProjector::AntisymProjector(std::size_t d) : d_(d), p_(d * d, d * d) {
    if (d < 2) {
        throw std::invalid_argument("antisymmetric projector needs d >= 2");
    }
    for (std::size_t i = 0; i < d; i++) {
        for (std::size_t j = 0; j < d; j++) {
            p_(i * d + j, i * d + j) += 0.5;
            p_(i * d + j, j * d + i) -= 0.5;
        }
    }
}

std::vector<CVector> AntisymProjector::range_basis() const {
    std::vector<CVector> out;
    for (std::size_t i = 0; i < d_; i++) {
        for (std::size_t j = i + 1; j < d_; j++) {
            CVector v(d_ * d_);
            v[i * d_ + j] = kSqrtHalf;
            v[j * d_ + i] = -kSqrtHalf;
            out.push_back(std::move(v));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

PairingLayout PairingLayout::standard() {
    using P = Party;
    return PairingLayout{{{
        {CopySlot{P::A, 0}, CopySlot{P::A, 1}},
        {CopySlot{P::B, 0}, CopySlot{P::B, 1}},
        {CopySlot{P::A, 2}, CopySlot{P::A, 3}},
        {CopySlot{P::B, 2}, CopySlot{P::B, 3}},
        {CopySlot{P::C, 0}, CopySlot{P::C, 2}},
        {CopySlot{P::C, 1}, CopySlot{P::C, 3}},
    }}};
}

void PairingLayout::validate() const {
    std::array<int, 12> hits{};
    for (const auto &pair : pairs) {
        for (const auto &slot : pair) {
            if (slot.copy < 0 || slot.copy > 3) {
                throw std::invalid_argument(fmt::format("pairing layout: copy index {} out of range", slot.copy + 1));
            }
            hits[qubit_index(slot)]++;
        }
    }
    for (std::size_t q = 0; q < 12; q++) {
        if (hits[q] != 1) {
            throw std::invalid_argument(fmt::format(
                "pairing layout: slot {}{} is covered {} times; the six pairs must partition all 12 slots",
                "ABC"[q % 3], q / 3 + 1, hits[q]));
        }
    }
}

Complex singlet_overlap(const PureTripartiteState &psi, const PairingLayout &layout) {
    layout.validate();
    // Each singlet contributes +1 for |01> and -1 for |10>; the 2^6 sign patterns are the only
    // computational-basis strings with nonzero overlap with |S>.
    Complex total = 0;
    for (unsigned pattern = 0; pattern < 64; pattern++) {
        std::array<int, 12> bits{};
        double sign = 1;
        for (std::size_t k = 0; k < 6; k++) {
            int flip = (pattern >> k) & 1;
            bits[PairingLayout::qubit_index(layout.pairs[k][0])] = flip;
            bits[PairingLayout::qubit_index(layout.pairs[k][1])] = 1 - flip;
            if (flip) {
                sign = -sign;
            }
        }
        Complex term = sign;
        for (int copy = 0; copy < 4; copy++) {
            term *= psi.amp(bits[3 * copy], bits[3 * copy + 1], bits[3 * copy + 2]);
        }
        total += term;
    }
    return total / 8.0;
}

double observable_a_expectation(const PureTripartiteState &psi, const PairingLayout &layout) {
    return std::norm(singlet_overlap(psi, layout));
}

double tau_via_copies(const PureTripartiteState &psi) {
    return checked_unit_interval(sqrt_of_expectation(256, observable_a_expectation(psi), "tau_via_copies"),
                                 "three-tangle from copies");
}

double cut_pair_expectation(const PureTripartiteState &psi, Party focus) {
    auto v = psi.vector();
    auto two = kron(v, v);
    unsigned f = party_mask(focus);
    unsigned rest = 7u & ~f;
    auto projected = two - swap_between_copies(two, f) - swap_between_copies(two, rest) + swap_between_copies(two, 7u);
    projected *= 0.25;
    return projected.norm_squared();
}

double cut_concurrence_via_copies(const PureTripartiteState &psi, Party focus) {
    return checked_unit_interval(sqrt_of_expectation(4, cut_pair_expectation(psi, focus), "cut_concurrence_via_copies"),
                                 "cut concurrence from copies");
}

const CMatrix &observable_b() {
    static const CMatrix b = [] {
        AntisymProjector p(2);
        CMatrix grouped = 4.0 * kron(p.matrix(), p.matrix());  // ordering A1 A2 B1 B2
        auto regroup = [](std::size_t i) {
            // (a1 b1 a2 b2) -> (a1 a2 b1 b2)
            std::size_t a1 = (i >> 3) & 1, b1 = (i >> 2) & 1, a2 = (i >> 1) & 1, b2 = i & 1;
            return (a1 << 3) | (a2 << 2) | (b1 << 1) | b2;
        };
        CMatrix out(16, 16);
        for (std::size_t i = 0; i < 16; i++) {
            for (std::size_t j = 0; j < 16; j++) {
                out(i, j) = grouped(regroup(i), regroup(j));
            }
        }
        return out;
    }();
    return b;
}

double observable_b_expectation(const DensityMatrix &rho) {
    if (rho.dim() != 4) {
        throw std::invalid_argument("observable_b_expectation needs a two-qubit density matrix");
    }
    auto rr = kron(rho.matrix(), rho.matrix());
    const auto &b = observable_b();
    Complex t = 0;
    for (std::size_t i = 0; i < 16; i++) {
        for (std::size_t j = 0; j < 16; j++) {
            t += rr(i, j) * b(j, i);
        }
    }
    if (std::abs(t.imag()) > 1e-10) {
        throw std::domain_error(fmt::format("Tr[(rho x rho) B] has imaginary part {:.3g}", t.imag()));
    }
    return checked_unit_interval(t.real(), "Tr[(rho x rho) B]");
}

std::string_view to_string(BIdentityVerdict v) {
    switch (v) {
        case BIdentityVerdict::no_root:
            return "no_root";
        case BIdentityVerdict::printed_root:
            return "printed_root";
        case BIdentityVerdict::unresolved:
            return "unresolved";
    }
    return "unresolved";
}

BIdentityResolution resolve_b_identity(const std::vector<DensityMatrix> &corpus, double tol) {
    BIdentityResolution out;
    for (const auto &rho : corpus) {
        double t = tr_rho_rhotilde(rho);
        double b = observable_b_expectation(rho);
        double root = std::sqrt(b);
        out.max_residual_no_root = std::max(out.max_residual_no_root, std::abs(t - b));
        out.max_residual_printed_root = std::max(out.max_residual_printed_root, std::abs(t - root));
        if (std::abs(b - root) > 10 * tol) {
            out.non_extremal++;
        }
    }
    bool no_root = out.max_residual_no_root <= tol;
    bool printed = out.max_residual_printed_root <= tol;
    if (out.non_extremal == 0) {
        out.reason = "every member has Tr[(rho x rho) B] at 0 or 1, where both forms agree";
    } else if (no_root && !printed) {
        out.verdict = BIdentityVerdict::no_root;
    } else if (printed && !no_root) {
        out.verdict = BIdentityVerdict::printed_root;
    } else if (no_root && printed) {
        out.reason = "both forms hold within tolerance";
    } else {
        out.reason = "neither form holds within tolerance";
    }
    return out;
}

const BIdentityResolution &reference_b_identity() {
    static const BIdentityResolution resolution = [] {
        std::vector<DensityMatrix> corpus;
        for (std::uint64_t seed = 0; seed < 100; seed++) {
            auto psi = haar_random(seed);
            for (Pair pair : kAllPairs) {
                corpus.push_back(reduced(psi, pair));
            }
        }
        return resolve_b_identity(corpus, 1e-9);
    }();
    return resolution;
}

}  // namespace qtangle
