#include "qtangle/shots.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include <fmt/format.h>

namespace qtangle {

namespace {

constexpr std::uint64_t kChunk = std::uint64_t{1} << 16;
constexpr double kDegenerateP = 1e-14;
constexpr double kOneSidedConfidence = 0.95;

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

// Uniform in [0, 1) for shot `index` of stream `key`.
double counter_uniform(std::uint64_t key, std::uint64_t index) {
    std::uint64_t bits = mix64(key + (index + 1) * 0x9E3779B97F4A7C15ULL);
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::uint64_t count_range(std::uint64_t key, std::uint64_t begin, std::uint64_t end, double p) {
    std::uint64_t hits = 0;
    for (std::uint64_t i = begin; i < end; i++) {
        hits += counter_uniform(key, i) < p;
    }
    return hits;
}

bool uses_b_identity(Observable o) {
    return o == Observable::trBpair;
}

BIdentityVerdict b_form() {
    const auto &ref = reference_b_identity();
    if (ref.verdict == BIdentityVerdict::unresolved) {
        throw std::runtime_error("trBpair estimator needs a resolved B identity: " + ref.reason);
    }
    return ref.verdict;
}

// d estimate / d p.
double estimator_slope(Observable o, double p) {
    switch (o) {
        case Observable::tau4copy:
            return 8 / std::sqrt(p);
        case Observable::cutA:
        case Observable::cutB:
        case Observable::cutC:
            return 1 / std::sqrt(p);
        case Observable::trBpair:
            return b_form() == BIdentityVerdict::no_root ? 4.0 : 1 / std::sqrt(p);
    }
    throw std::invalid_argument("unknown observable");
}

bool singular_at_zero(Observable o) {
    return !(uses_b_identity(o) && b_form() == BIdentityVerdict::no_root);
}

Party focus_of(Observable o) {
    return o == Observable::cutA ? Party::A : o == Observable::cutB ? Party::B : Party::C;
}

double expectation_on_copies(const CVector &v, std::span<const std::size_t> dims, const CMatrix &rho) {
    CVector t = v;
    for (std::size_t f = 0; f < dims.size(); f++) {
        t = apply_to_factor(t, dims, f, rho);
    }
    return v.dot(t).real();
}

}  // namespace

std::string_view to_string(Observable o) {
    switch (o) {
        case Observable::tau4copy:
            return "tau4copy";
        case Observable::cutA:
            return "cutA";
        case Observable::cutB:
            return "cutB";
        case Observable::cutC:
            return "cutC";
        case Observable::trBpair:
            return "trBpair";
    }
    return "?";
}

std::optional<Observable> parse_observable(std::string_view text) {
    for (auto o : {Observable::tau4copy, Observable::cutA, Observable::cutB, Observable::cutC, Observable::trBpair}) {
        if (text == to_string(o)) {
            return o;
        }
    }
    return std::nullopt;
}

int copies_needed(Observable o) {
    return o == Observable::tau4copy ? 4 : 2;
}

void ShotPlan::validate() const {
    if (n_shots < 1) {
        throw std::invalid_argument("shot plan needs at least one shot");
    }
}

void NoiseSpec::validate() const {
    if (!(q >= 0 && q <= 1)) {
        throw std::invalid_argument(fmt::format("noise weight q = {} must lie in [0, 1]", q));
    }
}

CMatrix NoiseSpec::apply(const PureTripartiteState &psi) const {
    validate();
    CMatrix rho = (1 - q) * psi.density();
    for (std::size_t i = 0; i < 8; i++) {
        rho(i, i) += q / 8;
    }
    return rho;
}

// ---------------------------------------------------------------------------

double success_probability(const PureTripartiteState &psi, Observable o, Pair pair) {
    switch (o) {
        case Observable::tau4copy:
            return observable_a_expectation(psi);
        case Observable::cutA:
        case Observable::cutB:
        case Observable::cutC:
            return cut_pair_expectation(psi, focus_of(o));
        case Observable::trBpair:
            return observable_b_expectation(reduced(psi, pair)) / 4;
    }
    throw std::invalid_argument("unknown observable");
}

double success_probability(const CMatrix &rho, Observable o, Pair pair) {
    if (rho.rows() != 8 || rho.cols() != 8) {
        throw std::invalid_argument("success_probability needs a three-qubit density matrix");
    }
    auto s = singlet();
    switch (o) {
        case Observable::tau4copy: {
            auto layout = PairingLayout::standard();
            CVector v(4096);
            for (unsigned pattern = 0; pattern < 64; pattern++) {
                std::size_t index = 0;
                double sign = 1;
                for (std::size_t k = 0; k < 6; k++) {
                    std::size_t flip = (pattern >> k) & 1;
                    index |= flip << (11 - PairingLayout::qubit_index(layout.pairs[k][0]));
                    index |= (1 - flip) << (11 - PairingLayout::qubit_index(layout.pairs[k][1]));
                    if (flip) {
                        sign = -sign;
                    }
                }
                v[index] = sign / 8;
            }
            const std::size_t dims[] = {8, 8, 8, 8};
            return expectation_on_copies(v, dims, rho);
        }
        case Observable::cutA:
        case Observable::cutB:
        case Observable::cutC: {
            Party focus = focus_of(o);
            auto rest = complement(focus);
            auto bit = [](std::size_t x, Party p) { return (x >> (2 - static_cast<int>(p))) & 1; };
            const std::size_t dims[] = {8, 8};
            double total = 0;
            for (const auto &a : AntisymProjector(4).range_basis()) {
                CVector v(64);
                for (std::size_t x1 = 0; x1 < 8; x1++) {
                    for (std::size_t x2 = 0; x2 < 8; x2++) {
                        std::size_t r1 = 2 * bit(x1, rest[0]) + bit(x1, rest[1]);
                        std::size_t r2 = 2 * bit(x2, rest[0]) + bit(x2, rest[1]);
                        v[8 * x1 + x2] = s[2 * bit(x1, focus) + bit(x2, focus)] * a[4 * r1 + r2];
                    }
                }
                total += expectation_on_copies(v, dims, rho);
            }
            return total;
        }
        case Observable::trBpair: {
            auto p = parties_of(pair);
            auto rho_pair = partial_trace(rho, {2, 2, 2}, {static_cast<std::size_t>(p[0]), static_cast<std::size_t>(p[1])});
            CVector v(16);
            for (std::size_t x1 = 0; x1 < 4; x1++) {
                for (std::size_t x2 = 0; x2 < 4; x2++) {
                    v[4 * x1 + x2] = s[2 * (x1 >> 1) + (x2 >> 1)] * s[2 * (x1 & 1) + (x2 & 1)];
                }
            }
            const std::size_t dims[] = {4, 4};
            return expectation_on_copies(v, dims, rho_pair);
        }
    }
    throw std::invalid_argument("unknown observable");
}

double noisy_expectation(const PureTripartiteState &psi, const NoiseSpec &noise, Observable o, Pair pair) {
    return success_probability(noise.apply(psi), o, pair);
}

double estimate_from_probability(Observable o, double p) {
    p = std::max(p, 0.0);
    switch (o) {
        case Observable::tau4copy:
            return std::sqrt(256 * p);
        case Observable::cutA:
        case Observable::cutB:
        case Observable::cutC:
            return std::sqrt(4 * p);
        case Observable::trBpair:
            return b_form() == BIdentityVerdict::no_root ? 4 * p : std::sqrt(4 * p);
    }
    throw std::invalid_argument("unknown observable");
}

double delta_std_error(Observable o, double p, std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("delta_std_error needs n >= 1");
    }
    if (p <= 0) {
        return singular_at_zero(o) ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return estimator_slope(o, p) * std::sqrt(p * (1 - p) / static_cast<double>(n));
}

std::uint64_t count_successes(std::uint64_t n, double p, std::uint64_t seed, unsigned threads) {
    std::uint64_t key = mix64(seed ^ 0x5851F42D4C957F2DULL);
    std::uint64_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<std::uint64_t> partial(chunks, 0);
    auto work = [&](unsigned worker, unsigned stride) {
        for (std::uint64_t c = worker; c < chunks; c += stride) {
            partial[c] = count_range(key, c * kChunk, std::min(n, (c + 1) * kChunk), p);
        }
    };
    threads = std::max(1u, threads);
    if (threads == 1 || chunks <= 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; t++) {
            pool.emplace_back(work, t, threads);
        }
    }
    std::uint64_t total = 0;
    for (auto h : partial) {
        total += h;
    }
    return total;
}

ShotResult sample_probability(const ShotPlan &plan, double p_true, unsigned threads) {
    plan.validate();
    if (!(p_true >= -1e-12 && p_true <= 1 + 1e-12)) {
        throw std::domain_error(fmt::format("success probability {} outside [0, 1]", p_true));
    }
    p_true = std::clamp(p_true, 0.0, 1.0);

    ShotResult r;
    r.observable = plan.observable;
    r.n_shots = plan.n_shots;
    r.seed = plan.seed;
    r.successes = count_successes(plan.n_shots, p_true, plan.seed, threads);
    r.p_hat = static_cast<double>(r.successes) / static_cast<double>(plan.n_shots);
    r.estimate = estimate_from_probability(plan.observable, r.p_hat);
    if (r.successes == 0) {
        // Exact one-sided bound for zero successes: (1 - p)^n = 1 - confidence.
        double p_up = -std::expm1(std::log(1 - kOneSidedConfidence) / static_cast<double>(plan.n_shots));
        r.one_sided = true;
        r.upper_bound = estimate_from_probability(plan.observable, p_up);
        r.std_error = 0;
    } else {
        r.std_error = delta_std_error(plan.observable, r.p_hat, plan.n_shots);
    }
    return r;
}

ShotResult sample(const ShotPlan &plan, const PureTripartiteState &psi, unsigned threads) {
    return sample_probability(plan, success_probability(psi, plan.observable, plan.pair), threads);
}

ShotResult sample(const ShotPlan &plan, const PureTripartiteState &psi, const NoiseSpec &noise, unsigned threads) {
    return sample_probability(plan, noisy_expectation(psi, noise, plan.observable, plan.pair), threads);
}

PrecisionPlan precision_plan(double target_se, const PureTripartiteState &psi, Observable o, Pair pair) {
    if (!(target_se > 0)) {
        throw std::invalid_argument("target standard error must be positive");
    }
    double p = success_probability(psi, o, pair);
    PrecisionPlan plan;
    if (p < kDegenerateP || p > 1 - kDegenerateP) {
        plan.degenerate = true;
        plan.reason = fmt::format("success probability {:.3g} is degenerate; the delta-method error does not shrink with n", p);
        return plan;
    }
    if (std::isinf(target_se)) {
        plan.n_shots = 1;
        return plan;
    }
    // Rounding slack so that the algebraic inverse is not pushed up by one ulp.
    double slack = target_se * (1 + 1e-12);
    double exact = std::pow(estimator_slope(o, p) / target_se, 2) * p * (1 - p);
    auto n = static_cast<std::uint64_t>(std::max(1.0, std::ceil(exact)));
    while (n > 1 && delta_std_error(o, p, n - 1) <= slack) {
        n--;
    }
    while (delta_std_error(o, p, n) > slack) {
        n++;
    }
    plan.n_shots = n;
    return plan;
}

}  // namespace qtangle
