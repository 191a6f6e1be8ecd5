#include "cli.h"

#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "qtangle/classify.h"
#include "qtangle/copies.h"
#include "qtangle/measures.h"
#include "qtangle/shots.h"
#include "qtangle/states.h"

namespace qtangle::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kDefaultIdentityTol = 1e-9;
constexpr double kDefaultClassifyTol = 1e-7;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Report printing. Table rows are "key value..." with nested objects flattened to "key.sub".
void print_table_rows(const Json &node, const std::string &prefix, std::ostream &out) {
    for (const auto &[key, value] : node.items()) {
        std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            print_table_rows(value, name, out);
            continue;
        }
        out << name;
        auto emit = [&](const Json &v) {
            if (v.is_number_float()) {
                out << ' ' << fmt::format("{}", v.get<double>());
            } else if (v.is_string()) {
                out << ' ' << v.get<std::string>();
            } else {
                out << ' ' << v.dump();
            }
        };
        if (value.is_array()) {
            for (const auto &v : value) {
                emit(v);
            }
        } else {
            emit(value);
        }
        out << '\n';
    }
}

void print_report(const Json &report, const std::string &format, std::ostream &out) {
    if (format == "json") {
        out << report.dump(2) << '\n';
    } else {
        print_table_rows(report, "", out);
    }
}

ParsedState load_state(const std::string &path, std::ostream &err) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError(fmt::format("cannot read state file '{}'", path));
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        auto parsed = parse_state(buffer.str());
        for (const auto &w : parsed.warnings) {
            err << path << ": warning: " << w << '\n';
        }
        return parsed;
    } catch (const std::invalid_argument &e) {
        throw UsageError(fmt::format("{}: {}", path, e.what()));
    }
}

Json vector_json(std::span<const double> values) {
    Json a = Json::array();
    for (double v : values) {
        a.push_back(v);
    }
    return a;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t x = seed * 0x9E3779B97F4A7C15ULL + index + 1;
    x ^= x >> 33;
    x *= 0xFF51AFD7ED558CCDULL;
    x ^= x >> 33;
    return x;
}

// ---------------------------------------------------------------------------

struct GenOptions {
    std::string cls;
    std::uint64_t seed = 0;
    std::string output;
};

int cmd_gen(const GenOptions &o, std::ostream &out) {
    auto cls = parse_slocc_class(o.cls);
    if (!cls) {
        throw UsageError(fmt::format("unknown class '{}' (expected one of i, ii, iii, iv, v, vi)", o.cls));
    }
    auto psi = random_in_class(*cls, o.seed);
    auto text = serialize_state(psi, fmt::format("class {} seed {}", to_string(*cls), o.seed));
    if (o.output.empty()) {
        out << text;
        return kSuccess;
    }
    std::ofstream file(o.output);
    if (!file || !(file << text) || !file.flush()) {
        throw UsageError(fmt::format("cannot write '{}'", o.output));
    }
    out << o.output << '\n';
    return kSuccess;
}

// ---------------------------------------------------------------------------

struct AnalyzeOptions {
    std::string input;
    std::string format = "table";
    double tol = kDefaultIdentityTol;
};

int cmd_analyze(const AnalyzeOptions &o, std::ostream &out, std::ostream &err) {
    auto parsed = load_state(o.input, err);
    const auto &psi = parsed.state;

    auto ev = entanglement_vector(psi);
    auto alt = alt_entanglement_vector(psi);
    auto identities = verify_identities(psi, o.tol);

    Json pair_c = Json::object();
    Json pair_coa = Json::object();
    Json residuals = Json::object();
    std::vector<DensityMatrix> marginals;
    for (Pair pair : kAllPairs) {
        auto rho = reduced(psi, pair);
        pair_c[pair_name(pair)] = wootters_concurrence(rho);
        pair_coa[pair_name(pair)] = coa(rho);
        marginals.push_back(rho);
    }

    double tau_det = three_tangle(psi);
    double tau_ckw = three_tangle_ckw(psi);
    double tau_copies = tau_via_copies(psi);

    for (const auto &r : identities.residuals) {
        residuals[r.name] = r.residual;
    }
    residuals["tangle_copies_vs_det"] = std::abs(tau_copies - tau_det);
    for (Party p : kAllParties) {
        residuals[fmt::format("cut_copies[{}]", party_name(p))] =
            std::abs(cut_concurrence_via_copies(psi, p) - pure_cut_concurrence(psi, p));
    }

    // The verdict is a property of the identity, so the state's own marginals are resolved together
    // with the fixed reference corpus; a single state's marginals can be degenerate.
    std::vector<DensityMatrix> corpus = marginals;
    for (std::uint64_t seed = 0; seed < 100; seed++) {
        auto ref = haar_random(seed);
        for (Pair pair : kAllPairs) {
            corpus.push_back(reduced(ref, pair));
        }
    }
    auto resolution = resolve_b_identity(corpus, o.tol);
    for (std::size_t i = 0; i < 3; i++) {
        double t = tr_rho_rhotilde(marginals[i]);
        double b = observable_b_expectation(marginals[i]);
        double predicted = resolution.verdict == BIdentityVerdict::printed_root ? std::sqrt(b) : b;
        residuals[fmt::format("b_identity[{}]", pair_name(kAllPairs[i]))] = std::abs(t - predicted);
    }

    Json report;
    if (parsed.name) {
        report["name"] = *parsed.name;
    }
    report["entanglement_vector"] = vector_json(ev.values());
    report["alt_vector"] = vector_json(alt.values());
    report["cut_concurrences_copies"] = vector_json(std::array<double, 3>{
        cut_concurrence_via_copies(psi, Party::A), cut_concurrence_via_copies(psi, Party::B),
        cut_concurrence_via_copies(psi, Party::C)});
    report["pair_concurrences"] = pair_c;
    report["coa"] = pair_coa;
    report["tau_detR"] = tau_det;
    report["tau_ckw"] = tau_ckw;
    report["tau_copies"] = tau_copies;

    int code = kSuccess;
    try {
        auto c = classify(psi, ClassifierConfig{kDefaultClassifyTol});
        report["slocc_class"] = std::string(to_string(c.cls));
        report["classification_margin"] = c.margin;
    } catch (const ClassificationInconsistency &e) {
        report["slocc_class"] = "inconsistent";
        err << "classification: " << e.what() << '\n';
        code = kInconsistent;
    }
    report["identity_residuals"] = residuals;
    report["tolerance"] = o.tol;
    report["b_identity_verdict"] = std::string(to_string(resolution.verdict));
    if (resolution.verdict == BIdentityVerdict::unresolved) {
        err << "B identity unresolved: " << resolution.reason << '\n';
    }

    double worst = 0;
    for (const auto &[name, value] : residuals.items()) {
        worst = std::max(worst, value.get<double>());
        if (!(value.get<double>() < o.tol)) {
            err << fmt::format("identity {} residual {:.3g} exceeds tolerance {:.3g}\n", name, value.get<double>(), o.tol);
        }
    }
    report["max_residual"] = worst;
    print_report(report, o.format, out);

    if (code != kSuccess) {
        return code;
    }
    if (!(worst < o.tol) || resolution.verdict == BIdentityVerdict::unresolved) {
        return kToleranceFailure;
    }
    return kSuccess;
}

// ---------------------------------------------------------------------------

struct ClassifyOptions {
    std::string input;
    std::string format = "table";
    double tol = kDefaultClassifyTol;
};

int cmd_classify(const ClassifyOptions &o, std::ostream &out, std::ostream &err) {
    auto parsed = load_state(o.input, err);
    ClassifierConfig cfg{o.tol};
    try {
        cfg.validate();
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    try {
        auto c = classify(parsed.state, cfg);
        if (o.format == "json") {
            Json report;
            report["slocc_class"] = std::string(to_string(c.cls));
            report["entanglement_vector"] = vector_json(c.vector.values());
            report["epsilon"] = cfg.epsilon;
            report["margin"] = c.margin;
            out << report.dump(2) << '\n';
        } else {
            out << to_string(c.cls) << '\n';
            out << "entanglement_vector";
            for (double v : c.vector.values()) {
                out << ' ' << fmt::format("{}", v);
            }
            out << '\n' << "epsilon " << fmt::format("{}", cfg.epsilon) << '\n';
            out << "margin " << fmt::format("{}", c.margin) << '\n';
        }
        return kSuccess;
    } catch (const ClassificationInconsistency &e) {
        err << "classification inconsistency: " << e.what() << '\n';
        return kInconsistent;
    }
}

// ---------------------------------------------------------------------------

struct VerifyOptions {
    std::uint64_t states = 1;
    std::uint64_t seed = 0;
    double tol = kDefaultIdentityTol;
    std::string format = "table";
};

int cmd_verify(const VerifyOptions &o, std::ostream &out, std::ostream &err) {
    if (o.states < 1) {
        throw UsageError("--states must be at least 1");
    }
    if (!(o.tol > 0)) {
        throw UsageError("--tol must be positive");
    }
    Json maxima = Json::object();
    auto record = [&](const std::string &name, double r) {
        double prev = maxima.contains(name) ? maxima[name].get<double>() : 0.0;
        maxima[name] = std::max(prev, r);
    };

    std::vector<DensityMatrix> corpus;
    for (std::uint64_t i = 0; i < o.states; i++) {
        auto psi = haar_random(derive_seed(o.seed, i));
        for (const auto &r : verify_identities(psi, o.tol).residuals) {
            record(r.name, r.residual);
        }
        record("tangle_copies_vs_det", std::abs(tau_via_copies(psi) - three_tangle(psi)));
        for (Party p : kAllParties) {
            record(fmt::format("cut_copies[{}]", party_name(p)),
                   std::abs(cut_concurrence_via_copies(psi, p) - pure_cut_concurrence(psi, p)));
        }
        for (Pair pair : kAllPairs) {
            corpus.push_back(reduced(psi, pair));
        }
    }
    auto resolution = resolve_b_identity(corpus, o.tol);

    Json report;
    report["states"] = o.states;
    report["seed"] = o.seed;
    report["tolerance"] = o.tol;
    report["max_residuals"] = maxima;
    report["b_identity_verdict"] = std::string(to_string(resolution.verdict));
    report["b_identity_residual_no_root"] = resolution.max_residual_no_root;
    report["b_identity_residual_printed_root"] = resolution.max_residual_printed_root;
    report["b_identity_non_extremal"] = resolution.non_extremal;

    bool ok = resolution.verdict != BIdentityVerdict::unresolved;
    if (!ok) {
        err << "B identity unresolved: " << resolution.reason << '\n';
    }
    for (const auto &[name, value] : maxima.items()) {
        if (!(value.get<double>() < o.tol)) {
            ok = false;
            err << fmt::format("identity {} max residual {:.3g} exceeds tolerance {:.3g}\n", name, value.get<double>(), o.tol);
        }
    }
    report["pass"] = ok;
    print_report(report, o.format, out);
    return ok ? kSuccess : kToleranceFailure;
}

// ---------------------------------------------------------------------------

struct SampleOptions {
    std::string input;
    std::string observable;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::optional<double> noise;
    std::string format = "table";
};

int cmd_sample(const SampleOptions &o, std::ostream &out, std::ostream &err) {
    auto observable = parse_observable(o.observable);
    if (!observable) {
        throw UsageError(fmt::format("unknown observable '{}' (expected tau4copy, cutA, cutB, cutC or trBpair)", o.observable));
    }
    if (o.shots < 1) {
        throw UsageError("--shots must be at least 1");
    }
    auto parsed = load_state(o.input, err);
    ShotPlan plan{*observable, o.shots, o.seed, Pair::AB};

    double p_pure = success_probability(parsed.state, *observable);
    ShotResult result;
    Json report;
    report["observable"] = std::string(to_string(*observable));
    if (o.noise) {
        NoiseSpec noise{*o.noise};
        try {
            noise.validate();
        } catch (const std::invalid_argument &e) {
            throw UsageError(e.what());
        }
        result = sample(plan, parsed.state, noise);
    } else {
        result = sample(plan, parsed.state);
    }
    report["n_shots"] = result.n_shots;
    report["seed"] = result.seed;
    report["successes"] = result.successes;
    report["p_hat"] = result.p_hat;
    report["estimate"] = result.estimate;
    report["std_error"] = result.std_error;
    report["one_sided"] = result.one_sided;
    if (result.one_sided) {
        report["upper_bound_95"] = result.upper_bound;
    }
    report["p_true"] = p_pure;
    report["true_value"] = estimate_from_probability(*observable, p_pure);
    if (o.noise) {
        double p_noisy = noisy_expectation(parsed.state, NoiseSpec{*o.noise}, *observable);
        double limit = estimate_from_probability(*observable, p_noisy);
        report["noise_q"] = *o.noise;
        report["noisy_expectation"] = p_noisy;
        report["noisy_limit_estimate"] = limit;
        report["bias"] = limit - estimate_from_probability(*observable, p_pure);
    }
    print_report(report, o.format, out);
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Entanglement analysis of three-qubit pure states"};
    app.require_subcommand(1);
    auto check_format = CLI::IsMember({"json", "table"});

    GenOptions gen;
    auto *gen_cmd = app.add_subcommand("gen", "Write a random state of the given SLOCC class");
    gen_cmd->add_option("--class", gen.cls, "SLOCC class: i, ii, iii, iv, v, vi")->required();
    gen_cmd->add_option("--seed", gen.seed, "Random seed")->required();
    gen_cmd->add_option("-o", gen.output, "Output path (default: stdout)");

    AnalyzeOptions analyze;
    auto *analyze_cmd = app.add_subcommand("analyze", "Full entanglement report for a state file");
    analyze_cmd->add_option("input", analyze.input, "State file")->required();
    analyze_cmd->add_option("--format", analyze.format, "json or table")->check(check_format);
    analyze_cmd->add_option("--tol", analyze.tol, "Identity tolerance");

    ClassifyOptions classify_opts;
    auto *classify_cmd = app.add_subcommand("classify", "SLOCC class of a state file");
    classify_cmd->add_option("input", classify_opts.input, "State file")->required();
    classify_cmd->add_option("--format", classify_opts.format, "json or table")->check(check_format);
    classify_cmd->add_option("--tol", classify_opts.tol, "Zero threshold for vector entries");

    VerifyOptions verify;
    auto *verify_cmd = app.add_subcommand("verify", "Randomized identity suite over Haar states");
    verify_cmd->add_option("--states", verify.states, "Number of states");
    verify_cmd->add_option("--seed", verify.seed, "Random seed")->required();
    verify_cmd->add_option("--tol", verify.tol, "Identity tolerance");
    verify_cmd->add_option("--format", verify.format, "json or table")->check(check_format);

    SampleOptions sample_opts;
    auto *sample_cmd = app.add_subcommand("sample", "Simulate the projective-measurement protocol");
    sample_cmd->add_option("input", sample_opts.input, "State file")->required();
    sample_cmd->add_option("--observable", sample_opts.observable, "tau4copy, cutA, cutB, cutC or trBpair")->required();
    sample_cmd->add_option("--shots", sample_opts.shots, "Number of shots")->required();
    sample_cmd->add_option("--seed", sample_opts.seed, "Random seed")->required();
    sample_cmd->add_option("--noise", sample_opts.noise, "Depolarizing weight q in [0, 1]");
    sample_cmd->add_option("--format", sample_opts.format, "json or table")->check(check_format);

    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageOrParse;
    }

    try {
        if (*gen_cmd) {
            return cmd_gen(gen, out);
        }
        if (*analyze_cmd) {
            return cmd_analyze(analyze, out, err);
        }
        if (*classify_cmd) {
            return cmd_classify(classify_opts, out, err);
        }
        if (*verify_cmd) {
            return cmd_verify(verify, out, err);
        }
        if (*sample_cmd) {
            return cmd_sample(sample_opts, out, err);
        }
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return kUsageOrParse;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << '\n';
        return kInconsistent;
    }
    return kUsageOrParse;
}

}  // namespace qtangle::cli
