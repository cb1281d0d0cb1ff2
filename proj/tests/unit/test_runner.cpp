#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tcmfg/config.hpp"
#include "tcmfg/error.hpp"
#include "tcmfg/runner.hpp"

using namespace tcmfg;

namespace {
Scenario small_scenario(const std::string& checks, const std::string& mode = "hjb") {
    return scenario_from_config(Config::parse_string("name = small\n[grid]\npoints = 64\nhorizon = 0.5\nsteps = 20\n"
                                                     "[levy]\nkind = stable\nsigma = 0.25\nepsilon = 0.25\n"
                                                     "[hamiltonian]\nvariant = power\nq = 2\n"
                                                     "[coupling]\nrunning_strength = 1\nterminal_strength = 1\n"
                                                     "[m0]\nspec = gaussian(0, 0.5)\n"
                                                     "[run]\nmode = " + mode + "\n" +
                                                     (checks.empty() ? "" : "checks = " + checks + "\n")));
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
} // namespace

TEST(Runner, LinearScenarioPasses) {
    const Scenario s = scenario_from_config(Config::load(TCMFG_SCENARIO_DIR "/linear_hjb.cfg"));
    std::ostringstream log;
    const RunResult r = run_scenario(s, {}, log);
    EXPECT_EQ(r.exit_code, exit_pass) << log.str();
    EXPECT_FALSE(r.report.rows.empty());
    EXPECT_TRUE(r.report.all_pass());
}

TEST(Runner, MalformedScenarioIsAParseError) {
    EXPECT_THROW(scenario_from_config(Config::load(TCMFG_SCENARIO_DIR "/missing_exponent.cfg")), ParseError);
}

TEST(Runner, NoChecksGiveAHeaderOnlyReport) {
    std::ostringstream csv;
    write_csv(csv, {});
    EXPECT_EQ(csv.str(), "check,slice,bound,measured,violation,pass\n");
    std::ostringstream log;
    const RunResult r = run_scenario(small_scenario(""), {}, log);
    EXPECT_TRUE(r.report.rows.empty());
    EXPECT_EQ(r.exit_code, exit_pass);
}

TEST(Runner, UnknownCheckIsAValidationFailure) {
    std::ostringstream log;
    const RunResult r = run_scenario(small_scenario("mass, sparkle"), {}, log);
    EXPECT_EQ(r.exit_code, exit_validation);
    EXPECT_NE(log.str().find("sparkle"), std::string::npos);
}

TEST(Runner, MfgRunWritesDeterministicFiles) {
    const auto root = std::filesystem::temp_directory_path() / "tcmfg_runner_test";
    std::filesystem::remove_all(root);
    std::ostringstream log;
    RunOptions opts;
    opts.out_dir = (root / "a").string();
    const RunResult a = run_scenario(small_scenario("mass, fixed_point", "mfg"), opts, log);
    opts.out_dir = (root / "b").string();
    const RunResult b = run_scenario(small_scenario("mass, fixed_point", "mfg"), opts, log);
    EXPECT_EQ(a.exit_code, exit_pass) << log.str();
    EXPECT_EQ(b.exit_code, a.exit_code);
    for (const char* file : {"report.csv", "residuals.csv", "m.bin", "u.bin", "b.bin", "manifest.txt"}) {
        ASSERT_TRUE(std::filesystem::exists(root / "a" / file)) << file;
        EXPECT_EQ(slurp(root / "a" / file), slurp(root / "b" / file)) << file;
    }
    bool mass_row = false;
    for (const auto& row : a.report.rows) mass_row = mass_row || (row.check.rfind("mass", 0) == 0 && row.pass);
    EXPECT_TRUE(mass_row);
    std::filesystem::remove_all(root);
}

TEST(Runner, IterationCapIsADivergenceExit) {
    Scenario s = small_scenario("mass", "mfg");
    s.solver.max_iterations = 1;
    s.solver.tolerance = 1e-14;
    std::ostringstream log;
    EXPECT_EQ(run_scenario(s, {}, log).exit_code, exit_divergence);
}
