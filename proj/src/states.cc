#include "qtangle/states.h"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "json.hpp"

namespace qtangle {

namespace {

constexpr double kNormTolerance = 1e-9;
constexpr double kMinNorm = 1e-12;
constexpr double kMinPairConcurrence = 0.1;

double norm_of(const std::array<Complex, 8> &amps) {
    double s = 0;
    for (const auto &z : amps) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

void require_unit(const CVector &v, std::size_t dim, const char *what) {
    if (v.dim() != dim) {
        throw std::invalid_argument(fmt::format("{} must have dimension {}, got {}", what, dim, v.dim()));
    }
    double n = v.norm();
    if (n < kMinNorm) {
        throw std::invalid_argument(fmt::format("{} has zero norm", what));
    }
    if (std::abs(n - 1) > kNormTolerance) {
        throw std::invalid_argument(fmt::format("{} is not normalized (norm {:.17g})", what, n));
    }
}

std::array<Complex, 8> to_amplitudes(const CVector &v) {
    std::array<Complex, 8> a;
    for (std::size_t i = 0; i < 8; i++) {
        a[i] = v[i];
    }
    return a;
}

// Concurrence of a pure two-qubit state.
double pure_pair_concurrence(const CVector &v) {
    return 2 * std::abs(v[0] * v[3] - v[1] * v[2]);
}

}  // namespace

std::array<Party, 2> complement(Party p) {
    switch (p) {
        case Party::A:
            return {Party::B, Party::C};
        case Party::B:
            return {Party::A, Party::C};
        case Party::C:
            return {Party::A, Party::B};
    }
    throw std::invalid_argument("unknown party");
}

char party_name(Party p) {
    return "ABC"[static_cast<int>(p)];
}

std::string_view to_string(SloccClass c) {
    switch (c) {
        case SloccClass::I:
            return "I";
        case SloccClass::II:
            return "II";
        case SloccClass::III:
            return "III";
        case SloccClass::IV:
            return "IV";
        case SloccClass::V:
            return "V";
        case SloccClass::VI:
            return "VI";
    }
    return "?";
}

std::optional<SloccClass> parse_slocc_class(std::string_view text) {
    std::string upper;
    for (char ch : text) {
        upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    }
    for (auto c : {SloccClass::I, SloccClass::II, SloccClass::III, SloccClass::IV, SloccClass::V, SloccClass::VI}) {
        if (upper == to_string(c)) {
            return c;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

PureTripartiteState::PureTripartiteState(const std::array<Complex, 8> &amplitudes) : amplitudes_(amplitudes) {
    for (std::size_t i = 0; i < 8; i++) {
        if (!is_finite(amplitudes_[i])) {
            throw std::invalid_argument(fmt::format("amplitude {} is not finite", i));
        }
    }
    double n = norm_of(amplitudes_);
    if (std::abs(n - 1) > kNormTolerance) {
        throw std::invalid_argument(fmt::format("state is not normalized (norm {:.17g})", n));
    }
}

PureTripartiteState PureTripartiteState::normalized(const std::array<Complex, 8> &amplitudes) {
    for (std::size_t i = 0; i < 8; i++) {
        if (!is_finite(amplitudes[i])) {
            throw std::invalid_argument(fmt::format("amplitude {} is not finite", i));
        }
    }
    double n = norm_of(amplitudes);
    if (n < kMinNorm) {
        throw std::invalid_argument(fmt::format("state norm {:.3g} is below {:.0e}", n, kMinNorm));
    }
    std::array<Complex, 8> scaled;
    for (std::size_t i = 0; i < 8; i++) {
        scaled[i] = amplitudes[i] / n;
    }
    return PureTripartiteState(scaled);
}

PureTripartiteState PureTripartiteState::from_vector(const CVector &v) {
    if (v.dim() != 8) {
        throw std::invalid_argument(fmt::format("three-qubit state needs 8 amplitudes, got {}", v.dim()));
    }
    return PureTripartiteState(to_amplitudes(v));
}

CVector PureTripartiteState::vector() const {
    return CVector(std::vector<Complex>(amplitudes_.begin(), amplitudes_.end()));
}

CMatrix PureTripartiteState::density() const {
    return CMatrix::projector(vector());
}

double PureTripartiteState::norm() const {
    return norm_of(amplitudes_);
}

double fidelity(const PureTripartiteState &a, const PureTripartiteState &b) {
    return std::norm(a.vector().dot(b.vector()));
}

// ---------------------------------------------------------------------------
// Canonical states

PureTripartiteState ghz() {
    double h = 1 / std::sqrt(2.0);
    return PureTripartiteState({h, 0, 0, 0, 0, 0, 0, h});
}

PureTripartiteState w() {
    double t = 1 / std::sqrt(3.0);
    return PureTripartiteState({0, t, t, 0, t, 0, 0, 0});
}

PureTripartiteState generalized_ghz(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || std::abs(a * a + b * b - 1) > kNormTolerance) {
        throw std::invalid_argument(fmt::format("generalized_ghz: a^2 + b^2 = {:.17g}, expected 1", a * a + b * b));
    }
    return PureTripartiteState({a, 0, 0, 0, 0, 0, 0, b});
}

PureTripartiteState product_state(const CVector &phi_a, const CVector &chi_b, const CVector &eta_c) {
    require_unit(phi_a, 2, "party A factor");
    require_unit(chi_b, 2, "party B factor");
    require_unit(eta_c, 2, "party C factor");
    return PureTripartiteState::normalized(to_amplitudes(kron(kron(phi_a, chi_b), eta_c)));
}

PureTripartiteState bipartite_product(Party separated, const CVector &single, const CVector &pair) {
    require_unit(single, 2, "single-qubit factor");
    require_unit(pair, 4, "two-qubit factor");
    std::array<Complex, 8> a{};
    auto rest = complement(separated);
    for (int s = 0; s < 2; s++) {
        for (int x = 0; x < 2; x++) {
            for (int y = 0; y < 2; y++) {
                int bits[3];
                bits[static_cast<int>(separated)] = s;
                bits[static_cast<int>(rest[0])] = x;
                bits[static_cast<int>(rest[1])] = y;
                a[4 * bits[0] + 2 * bits[1] + bits[2]] = single[s] * pair[2 * x + y];
            }
        }
    }
    return PureTripartiteState::normalized(a);
}

PureTripartiteState apply_local(const PureTripartiteState &psi, const CMatrix &ua, const CMatrix &ub, const CMatrix &uc) {
    auto u = kron(kron(ua, ub), uc);
    return PureTripartiteState::normalized(to_amplitudes(u * psi.vector()));
}

// ---------------------------------------------------------------------------
// Random states

StateSampler::StateSampler(std::uint64_t seed) : engine_(seed), normal_(0.0, 1.0) {
}

Complex StateSampler::gaussian() {
    double re = normal_(engine_);
    double im = normal_(engine_);
    return {re, im};
}

CVector StateSampler::unit_vector(std::size_t dim) {
    while (true) {
        CVector v(dim);
        for (std::size_t i = 0; i < dim; i++) {
            v[i] = gaussian();
        }
        if (v.norm() > kMinNorm) {
            return v.normalized();
        }
    }
}

CMatrix StateSampler::qubit_unitary() {
    while (true) {
        CVector c0{gaussian(), gaussian()};
        CVector c1{gaussian(), gaussian()};
        if (c0.norm() < kMinNorm) {
            continue;
        }
        c0 = c0.normalized();
        c1 -= c0.dot(c1) * c0;
        if (c1.norm() < 1e-8) {
            continue;
        }
        c1 = c1.normalized();
        return CMatrix{{c0[0], c1[0]}, {c0[1], c1[1]}};
    }
}

PureTripartiteState haar_random(std::uint64_t seed) {
    StateSampler sampler(seed);
    return PureTripartiteState::normalized(to_amplitudes(sampler.unit_vector(8)));
}

PureTripartiteState random_in_class(SloccClass cls, std::uint64_t seed) {
    StateSampler sampler(seed);
    switch (cls) {
        case SloccClass::I: {
            auto a = sampler.unit_vector(2);
            auto b = sampler.unit_vector(2);
            auto c = sampler.unit_vector(2);
            return product_state(a, b, c);
        }
        case SloccClass::II:
        case SloccClass::III:
        case SloccClass::IV: {
            Party separated = cls == SloccClass::II ? Party::A : cls == SloccClass::III ? Party::B : Party::C;
            auto single = sampler.unit_vector(2);
            CVector pair;
            do {
                pair = sampler.unit_vector(4);
            } while (pure_pair_concurrence(pair) < kMinPairConcurrence);
            return bipartite_product(separated, single, pair);
        }
        case SloccClass::V:
        case SloccClass::VI: {
            auto ua = sampler.qubit_unitary();
            auto ub = sampler.qubit_unitary();
            auto uc = sampler.qubit_unitary();
            return apply_local(cls == SloccClass::V ? ghz() : w(), ua, ub, uc);
        }
    }
    throw std::invalid_argument("unknown SLOCC class");
}

// ---------------------------------------------------------------------------
// State files

namespace {

std::string line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); i++) {
        if (text[i] == '\n') {
            line++;
            col = 1;
        } else {
            col++;
        }
    }
    return fmt::format("line {}, column {}", line, col);
}

}  // namespace

ParsedState parse_state(std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw std::invalid_argument(fmt::format("state file: malformed JSON at {}: {}", line_col(text, e.byte), e.what()));
    }
    if (!doc.is_object()) {
        throw std::invalid_argument("state file: top level must be an object");
    }

    std::optional<std::string> name;
    if (auto it = doc.find("name"); it != doc.end() && !it->is_null()) {
        if (!it->is_string()) {
            throw std::invalid_argument("state file: field \"name\" must be a string");
        }
        name = it->get<std::string>();
    }

    auto it = doc.find("amplitudes");
    if (it == doc.end()) {
        throw std::invalid_argument("state file: missing required field \"amplitudes\"");
    }
    if (!it->is_array()) {
        throw std::invalid_argument("state file: field \"amplitudes\" must be an array");
    }
    if (it->size() != 8) {
        throw std::invalid_argument(fmt::format("state file: \"amplitudes\" has {} entries, expected 8", it->size()));
    }

    std::array<Complex, 8> amps;
    for (std::size_t i = 0; i < 8; i++) {
        const auto &entry = (*it)[i];
        if (!entry.is_array() || entry.size() != 2) {
            throw std::invalid_argument(fmt::format("state file: amplitudes[{}] must be a [re, im] pair", i));
        }
        double parts[2];
        for (std::size_t k = 0; k < 2; k++) {
            if (!entry[k].is_number()) {
                throw std::invalid_argument(
                    fmt::format("state file: amplitudes[{}][{}] is not a number ({})", i, k, entry[k].dump()));
            }
            parts[k] = entry[k].get<double>();
            if (!std::isfinite(parts[k])) {
                throw std::invalid_argument(fmt::format("state file: amplitudes[{}][{}] is not finite", i, k));
            }
        }
        amps[i] = {parts[0], parts[1]};
    }

    double n = norm_of(amps);
    if (n < kMinNorm) {
        throw std::invalid_argument(fmt::format("state file: amplitude norm {:.3g} is below {:.0e}", n, kMinNorm));
    }
    std::vector<std::string> warnings;
    if (std::abs(n - 1) > kNormTolerance) {
        warnings.push_back(fmt::format("state file: amplitudes had norm {:.17g}; normalized", n));
    }
    return ParsedState{PureTripartiteState::normalized(amps), std::move(name), std::move(warnings)};
}

std::string serialize_state(const PureTripartiteState &state, const std::optional<std::string> &name) {
    nlohmann::ordered_json doc;
    if (name) {
        doc["name"] = *name;
    }
    auto amps = nlohmann::ordered_json::array();
    for (const auto &z : state.amplitudes()) {
        amps.push_back({z.real(), z.imag()});
    }
    doc["amplitudes"] = std::move(amps);
    return doc.dump(2) + "\n";
}

}  // namespace qtangle
