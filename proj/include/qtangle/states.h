#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qtangle/linalg.h"

namespace qtangle {

enum class Party { A = 0, B = 1, C = 2 };

/// The two parties other than `p`, in A < B < C order.
std::array<Party, 2> complement(Party p);
char party_name(Party p);

/// The six SLOCC classes of three-qubit pure states:
/// I fully separable, II A|BC, III B|AC, IV C|AB, V GHZ-type, VI W-type.
enum class SloccClass { I, II, III, IV, V, VI };

std::string_view to_string(SloccClass c);
/// Accepts roman numerals in either case ("v", "VI", ...).
std::optional<SloccClass> parse_slocc_class(std::string_view text);

/// Three-qubit pure state sum_{ijk} a_ijk |i>_A |j>_B |k>_C, amplitude of |ijk> stored at 4i + 2j + k.
class PureTripartiteState {
   public:
    /// Throws std::invalid_argument unless the amplitudes are finite with unit norm within 1e-9.
    explicit PureTripartiteState(const std::array<Complex, 8> &amplitudes);

    /// Normalizes first. Throws if the norm is below 1e-12 or any amplitude is not finite.
    static PureTripartiteState normalized(const std::array<Complex, 8> &amplitudes);
    static PureTripartiteState from_vector(const CVector &v);

    const std::array<Complex, 8> &amplitudes() const { return amplitudes_; }
    Complex operator[](std::size_t index) const { return amplitudes_[index]; }
    Complex amp(int i, int j, int k) const { return amplitudes_[4 * i + 2 * j + k]; }

    CVector vector() const;
    CMatrix density() const;
    double norm() const;

   private:
    std::array<Complex, 8> amplitudes_;
};

/// |<a|b>|^2.
double fidelity(const PureTripartiteState &a, const PureTripartiteState &b);

PureTripartiteState ghz();
PureTripartiteState w();
/// a|000> + b|111>; requires a^2 + b^2 = 1 within 1e-9.
PureTripartiteState generalized_ghz(double a, double b);
PureTripartiteState product_state(const CVector &phi_a, const CVector &chi_b, const CVector &eta_c);
/// `single` sits on the `separated` party, `pair` on the other two in A < B < C order.
PureTripartiteState bipartite_product(Party separated, const CVector &single, const CVector &pair);

/// Applies U_A (x) U_B (x) U_C.
PureTripartiteState apply_local(const PureTripartiteState &psi, const CMatrix &ua, const CMatrix &ub, const CMatrix &uc);

/// Normalized i.i.d. standard complex Gaussian amplitudes; deterministic per seed.
PureTripartiteState haar_random(std::uint64_t seed);
PureTripartiteState random_in_class(SloccClass cls, std::uint64_t seed);

/// Random-variate helpers shared with the generators above. All draw from a caller-owned engine.
class StateSampler {
   public:
    explicit StateSampler(std::uint64_t seed);
    Complex gaussian();
    /// Haar-random unit vector of the given dimension.
    CVector unit_vector(std::size_t dim);
    /// Haar-random 2x2 unitary (Gram-Schmidt on two complex Gaussian columns).
    CMatrix qubit_unitary();

   private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

/// Parsed state file. Warnings are non-fatal notes (currently: input was not normalized).
struct ParsedState {
    PureTripartiteState state;
    std::optional<std::string> name;
    std::vector<std::string> warnings;
};

/// Parses the JSON state-file format:
///   {"name": "...", "amplitudes": [[re, im], ... 8 entries in |000>..|111> order]}
/// Throws std::invalid_argument with line / field information on malformed input.
ParsedState parse_state(std::string_view text);
std::string serialize_state(const PureTripartiteState &state, const std::optional<std::string> &name = std::nullopt);

}  // namespace qtangle
