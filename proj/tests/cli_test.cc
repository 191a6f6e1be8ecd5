#include "cli.h"

#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "qtangle/states.h"

using namespace qtangle;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "qtangle");
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string &name) {
    return std::string(QTANGLE_TEST_TMPDIR) + "/" + name;
}

std::string write_state(const std::string &name, const PureTripartiteState &psi) {
    auto path = temp_path(name);
    std::ofstream(path) << serialize_state(psi, name);
    return path;
}

std::string write_text(const std::string &name, const std::string &text) {
    auto path = temp_path(name);
    std::ofstream(path) << text;
    return path;
}

// "key v1 v2 ..." rows of a table report.
std::map<std::string, std::vector<std::string>> table_rows(const std::string &text) {
    std::map<std::string, std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string key, v;
        fields >> key;
        while (fields >> v) {
            rows[key].push_back(v);
        }
    }
    return rows;
}

}  // namespace

TEST(cli, gen_to_stdout_and_file) {
    auto r = run_cli({"gen", "--class", "v", "--seed", "42"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto parsed = parse_state(r.out);
    EXPECT_EQ(parsed.state.amplitudes(), random_in_class(SloccClass::V, 42).amplitudes());

    auto path = temp_path("gen_iii.json");
    auto f = run_cli({"gen", "--class", "III", "--seed", "3", "-o", path});
    ASSERT_EQ(f.code, 0) << f.err;
    EXPECT_EQ(f.out, path + "\n");
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    EXPECT_EQ(parse_state(text.str()).state.amplitudes(), random_in_class(SloccClass::III, 3).amplitudes());
}

TEST(cli, gen_rejects_unknown_class) {
    auto r = run_cli({"gen", "--class", "x", "--seed", "1"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("unknown class"), std::string::npos);
    EXPECT_EQ(run_cli({"gen", "--class", "v"}).code, 1);
    EXPECT_EQ(run_cli({}).code, 1);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
}

TEST(cli, analyze_ghz_json) {
    auto path = write_state("ghz.json", ghz());
    auto r = run_cli({"analyze", path, "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto report = nlohmann::json::parse(r.out);
    EXPECT_EQ(report["name"], "ghz.json");
    EXPECT_NEAR(report["tau_detR"].get<double>(), 1, 1e-12);
    EXPECT_NEAR(report["tau_ckw"].get<double>(), 1, 1e-12);
    EXPECT_NEAR(report["tau_copies"].get<double>(), 1, 1e-12);
    EXPECT_NEAR(report["coa"]["AB"].get<double>(), 1, 1e-12);
    EXPECT_NEAR(report["pair_concurrences"]["BC"].get<double>(), 0, 1e-12);
    EXPECT_EQ(report["slocc_class"], "V");
    EXPECT_EQ(report["b_identity_verdict"], "no_root");
    EXPECT_LT(report["max_residual"].get<double>(), 1e-9);
    EXPECT_EQ(report["entanglement_vector"].size(), 4u);
    EXPECT_TRUE(report["identity_residuals"].contains("b_identity[AB]"));
}

TEST(cli, analyze_table_matches_json) {
    auto path = write_state("haar.json", haar_random(12));
    auto j = run_cli({"analyze", path, "--format", "json"});
    auto t = run_cli({"analyze", path});
    ASSERT_EQ(j.code, 0) << j.err;
    ASSERT_EQ(t.code, 0) << t.err;
    auto report = nlohmann::json::parse(j.out);
    auto rows = table_rows(t.out);
    EXPECT_EQ(std::stod(rows.at("tau_detR")[0]), report["tau_detR"].get<double>());
    EXPECT_EQ(std::stod(rows.at("coa.AC")[0]), report["coa"]["AC"].get<double>());
    ASSERT_EQ(rows.at("entanglement_vector").size(), 4u);
    for (int k = 0; k < 4; k++) {
        EXPECT_EQ(std::stod(rows.at("entanglement_vector")[k]), report["entanglement_vector"][k].get<double>());
    }
    EXPECT_EQ(rows.at("b_identity_verdict")[0], "no_root");
}

TEST(cli, analyze_w_values) {
    auto path = write_state("w.json", w());
    auto r = run_cli({"analyze", path, "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto report = nlohmann::json::parse(r.out);
    EXPECT_EQ(report["slocc_class"], "VI");
    EXPECT_NEAR(report["alt_vector"][0].get<double>(), 4.0 / 9, 1e-12);
    EXPECT_NEAR(report["cut_concurrences_copies"][2].get<double>(), std::sqrt(8.0) / 3, 1e-12);
}

TEST(cli, analyze_parse_errors) {
    auto bad = write_text("bad.json", R"({"amplitudes": [[1,0],[0,0]]})");
    auto r = run_cli({"analyze", bad});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("2 entries"), std::string::npos);
    EXPECT_EQ(run_cli({"analyze", temp_path("does_not_exist.json")}).code, 1);
    EXPECT_EQ(run_cli({"analyze", bad, "--format", "xml"}).code, 1);
}

TEST(cli, analyze_warns_on_unnormalized_input) {
    auto path = write_text("unnormalized.json", R"({"amplitudes": [[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[1,0]]})");
    auto r = run_cli({"analyze", path, "--format", "json"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("warning"), std::string::npos);
    EXPECT_NEAR(nlohmann::json::parse(r.out)["tau_detR"].get<double>(), 1, 1e-12);
}

TEST(cli, classify_outputs) {
    auto path = write_state("ghz_classify.json", ghz());
    auto t = run_cli({"classify", path});
    ASSERT_EQ(t.code, 0);
    EXPECT_EQ(t.out.substr(0, t.out.find('\n')), "V");

    auto j = run_cli({"classify", write_state("w_classify.json", w()), "--format", "json"});
    ASSERT_EQ(j.code, 0);
    EXPECT_EQ(nlohmann::json::parse(j.out)["slocc_class"], "VI");

    EXPECT_EQ(run_cli({"classify", path, "--tol", "0.5"}).code, 1);

    auto ii = write_state("ii.json", random_in_class(SloccClass::II, 8));
    EXPECT_EQ(run_cli({"classify", ii}).out.substr(0, 3), "II\n");
}

TEST(cli, verify_passes_and_fails_by_tolerance) {
    auto ok = run_cli({"verify", "--states", "50", "--seed", "7", "--format", "json"});
    ASSERT_EQ(ok.code, 0) << ok.err;
    auto report = nlohmann::json::parse(ok.out);
    EXPECT_TRUE(report["pass"].get<bool>());
    EXPECT_EQ(report["b_identity_verdict"], "no_root");
    EXPECT_GT(report["b_identity_residual_printed_root"].get<double>(), 1e-3);

    auto strict = run_cli({"verify", "--states", "5", "--seed", "7", "--tol", "1e-30"});
    EXPECT_NE(strict.code, 0);
    EXPECT_EQ(strict.code, 2);

    EXPECT_EQ(run_cli({"verify", "--states", "5"}).code, 1);
    EXPECT_EQ(run_cli({"verify", "--seed", "1", "--tol", "-1"}).code, 1);
}

TEST(cli, sample_is_deterministic) {
    auto path = write_state("sample_haar.json", haar_random(4));
    auto a = run_cli({"sample", path, "--observable", "cutA", "--shots", "100", "--seed", "5"});
    auto b = run_cli({"sample", path, "--observable", "cutA", "--shots", "100", "--seed", "5"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    auto rows = table_rows(a.out);
    EXPECT_EQ(rows.at("n_shots")[0], "100");
    EXPECT_EQ(rows.at("observable")[0], "cutA");
}

TEST(cli, sample_w_tau_is_one_sided) {
    auto path = write_state("sample_w.json", w());
    auto r = run_cli({"sample", path, "--observable", "tau4copy", "--shots", "100000", "--seed", "1", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto report = nlohmann::json::parse(r.out);
    EXPECT_EQ(report["successes"], 0);
    EXPECT_TRUE(report["one_sided"].get<bool>());
    EXPECT_GT(report["upper_bound_95"].get<double>(), 0);
}

TEST(cli, sample_with_noise_reports_bias) {
    auto path = write_state("sample_ghz.json", ghz());
    auto r = run_cli(
        {"sample", path, "--observable", "tau4copy", "--shots", "1000", "--seed", "1", "--noise", "0.05", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto report = nlohmann::json::parse(r.out);
    EXPECT_NEAR(report["noisy_expectation"].get<double>(), 0.0032699172973632753, 1e-14);
    EXPECT_NEAR(report["bias"].get<double>(), std::sqrt(256 * 0.0032699172973632753) - 1, 1e-12);
    EXPECT_EQ(run_cli({"sample", path, "--observable", "tau4copy", "--shots", "10", "--seed", "1", "--noise", "2"}).code, 1);
}

TEST(cli, sample_rejects_bad_arguments) {
    auto path = write_state("sample_bad.json", ghz());
    EXPECT_EQ(run_cli({"sample", path, "--observable", "tau", "--shots", "10", "--seed", "1"}).code, 1);
    EXPECT_EQ(run_cli({"sample", path, "--observable", "cutA", "--shots", "0", "--seed", "1"}).code, 1);
    EXPECT_EQ(run_cli({"sample", path, "--observable", "cutA", "--shots", "ten", "--seed", "1"}).code, 1);
}
