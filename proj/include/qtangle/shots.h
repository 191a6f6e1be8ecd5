#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "qtangle/copies.h"
#include "qtangle/measures.h"
#include "qtangle/states.h"

namespace qtangle {

/// Projective measurements that can be simulated. Each is a product of antisymmetric projectors;
/// a shot succeeds when every projector in the product fires.
enum class Observable { tau4copy, cutA, cutB, cutC, trBpair };

std::string_view to_string(Observable o);
std::optional<Observable> parse_observable(std::string_view text);
/// Number of state copies the observable acts on.
int copies_needed(Observable o);

struct ShotPlan {
    Observable observable = Observable::tau4copy;
    std::uint64_t n_shots = 1;
    std::uint64_t seed = 0;
    /// Two-qubit marginal used by trBpair.
    Pair pair = Pair::AB;

    void validate() const;
};

struct ShotResult {
    Observable observable = Observable::tau4copy;
    std::uint64_t n_shots = 0;
    std::uint64_t seed = 0;
    std::uint64_t successes = 0;
    double p_hat = 0;
    double estimate = 0;
    /// Delta-method standard error. Zero when `one_sided` is set.
    double std_error = 0;
    /// No successes: the square-root estimators are singular at zero, so only a one-sided
    /// 95% upper bound on the estimate is reported.
    bool one_sided = false;
    double upper_bound = 0;

    bool operator==(const ShotResult &) const = default;
};

/// Depolarized preparation (1 - q)|psi><psi| + q I/8.
struct NoiseSpec {
    double q = 0;

    void validate() const;
    CMatrix apply(const PureTripartiteState &psi) const;
};

/// Probability that one shot of `o` succeeds on the pure state, from the copies module.
double success_probability(const PureTripartiteState &psi, Observable o, Pair pair = Pair::AB);
/// Same probability for an arbitrary three-qubit density matrix, by contracting rho on each copy
/// against the range vectors of the projector.
double success_probability(const CMatrix &rho, Observable o, Pair pair = Pair::AB);
double noisy_expectation(const PureTripartiteState &psi, const NoiseSpec &noise, Observable o, Pair pair = Pair::AB);

/// Maps a success probability to the entanglement quantity it measures.
double estimate_from_probability(Observable o, double p);
/// Delta-method standard error of that estimate for `n` shots at success rate `p`.
double delta_std_error(Observable o, double p, std::uint64_t n);

/// Number of successes among `n` Bernoulli(p) shots. Shot i draws from a counter-based generator
/// keyed by (seed, i), so the count does not depend on `threads`.
std::uint64_t count_successes(std::uint64_t n, double p, std::uint64_t seed, unsigned threads = 1);

ShotResult sample_probability(const ShotPlan &plan, double p_true, unsigned threads = 1);
ShotResult sample(const ShotPlan &plan, const PureTripartiteState &psi, unsigned threads = 1);
ShotResult sample(const ShotPlan &plan, const PureTripartiteState &psi, const NoiseSpec &noise, unsigned threads = 1);

struct PrecisionPlan {
    bool degenerate = false;
    std::uint64_t n_shots = 0;
    std::string reason;
};

/// Smallest shot count whose delta-method standard error is at most `target_se`.
PrecisionPlan precision_plan(double target_se, const PureTripartiteState &psi, Observable o, Pair pair = Pair::AB);

}  // namespace qtangle
