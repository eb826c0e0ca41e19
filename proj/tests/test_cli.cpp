#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bmac/config.hpp"
#include "bmac/csv.hpp"
#include "bmac/errors.hpp"
#include "bmac/experiments.hpp"

namespace bmac {
namespace {

namespace fs = std::filesystem;

const char* kSmallConfig = R"({
  "experiment": "asv_vs_omega",
  "trials": 200,
  "setup": {
    "theta": 1.0,
    "sensors": 40,
    "noise": {"kind": "gaussian", "variance": 1},
    "transmit": {"kind": "tanh", "omega": 1},
    "channel": {"total_power": 10, "noise_var": 1}
  },
  "sweep": {"parameter": "omega", "values": [0.5, 1.0]}
})";

ConfigError config_error_of(const std::string& text, std::vector<std::string> overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "expected ConfigError";
  return ConfigError("", "");
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  EXPECT_NE(at, std::string::npos) << from;
  return text.replace(at, from.size(), to);
}

TEST(Config, ParsesSmallConfig) {
  const auto c = parse_config(kSmallConfig);
  EXPECT_EQ(c.kind, ExperimentKind::asv_vs_omega);
  EXPECT_EQ(c.trials, 200u);
  EXPECT_EQ(c.sensor_counts, std::vector<std::size_t>{40});
  EXPECT_EQ(c.sweep_parameter, SweepParameter::omega);
  EXPECT_EQ(c.sweep_values, (std::vector<double>{0.5, 1.0}));
  EXPECT_EQ(c.master_seed, kDefaultSeed);
}

TEST(Config, InvalidNoiseKindNamesFieldAndLine) {
  const auto e = config_error_of(replace(kSmallConfig, "\"gaussian\"", "\"student\""));
  EXPECT_EQ(e.field(), "setup.noise.kind");
  EXPECT_EQ(e.line(), 7);
  EXPECT_NE(std::string(e.what()).find("student"), std::string::npos);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_EQ(config_error_of(replace(kSmallConfig, "\"trials\"", "\"trails\"")).field(), "trails");
  EXPECT_EQ(config_error_of(replace(kSmallConfig, "\"omega\": 1}", "\"omega\": -1}")).field(),
            "setup.transmit");
  EXPECT_EQ(config_error_of(replace(kSmallConfig, "\"trials\": 200", "\"trials\": 0")).field(),
            "trials");
  EXPECT_EQ(config_error_of(replace(kSmallConfig, "\"tanh\", \"omega\": 1",
                                                "\"uniform_quantizer\", \"x_max\": 2, \"levels\": 5")).field(),
            "setup.transmit");
  EXPECT_EQ(config_error_of("{\"experiment\": \"asv_vs_omega\",\n  \"trials\": }").line(), 2);
}

TEST(Config, OverridesApplyBeforeValidation) {
  const auto c = parse_config(kSmallConfig, {"trials=17", "setup.noise.kind=laplacian",
                                             "master_seed=5", "sweep.values=[2.0]"});
  EXPECT_EQ(c.trials, 17u);
  EXPECT_EQ(c.noises.at(0).kind(), NoiseKind::laplacian);
  EXPECT_EQ(c.master_seed, 5u);
  EXPECT_EQ(c.sweep_values, std::vector<double>{2.0});
  EXPECT_EQ(config_error_of(kSmallConfig, {"setup.noise.kind=pareto"}).field(),
            "setup.noise.kind");
  EXPECT_THROW(parse_config(kSmallConfig, {"no_equals_sign"}), ConfigError);
}

TEST(Config, DefaultSeedComesFromCaller) {
  EXPECT_EQ(parse_config(kSmallConfig, {}, 777).master_seed, 777u);
  EXPECT_EQ(parse_config(kSmallConfig, {"master_seed=3"}, 777).master_seed, 3u);
}

TEST(Config, ResolvedFormRoundTrips) {
  for (const auto& p : presets()) {
    const auto c = parse_config_document(p.config);
    const auto again = parse_config_document(c.resolved());
    EXPECT_EQ(c.resolved(), again.resolved()) << p.name;
  }
}

TEST(Presets, ExpectedNamesExistAndAllParse) {
  EXPECT_GE(presets().size(), 7u);
  for (const char* name : {"fig2", "fig3", "fig4", "fig5", "fig6", "theorem3", "duality"})
    EXPECT_NE(find_preset(name), nullptr) << name;
  EXPECT_EQ(find_preset("fig99"), nullptr);
  for (const auto& p : presets()) EXPECT_NO_THROW(parse_config_document(p.config)) << p.name;
  EXPECT_NE(list_presets().find("theorem3"), std::string::npos);
}

TEST(Presets, DetectionSweepPresetParameters) {
  const auto c = parse_config_document(find_preset("fig5")->config);
  EXPECT_EQ(c.kind, ExperimentKind::pe_vs_omega);
  EXPECT_NEAR(c.theta * c.theta, 10.0, 1e-12);
  EXPECT_NEAR(c.channel.total_power, std::pow(10.0, 0.3), 1e-12);
  EXPECT_EQ(c.sensor_counts, std::vector<std::size_t>{20});
  EXPECT_EQ(c.sweep_values.size(), 32u);
  EXPECT_EQ(c.trials, 1000000u);
}

TEST(Csv, QuotesWhenNeededAndRoundTrips) {
  Table t;
  t.columns = {"name", "value", "count"};
  t.rows.push_back({Cell{std::string("plain")}, Cell{0.1}, Cell{std::int64_t{3}}});
  t.rows.push_back({Cell{std::string("a,b")}, Cell{-2.5e-7}, Cell{std::int64_t{-1}}});
  t.rows.push_back({Cell{std::string("say \"hi\"")}, Cell{1e300}, Cell{std::int64_t{0}}});
  t.rows.push_back({Cell{std::string("two\nlines")}, Cell{3.0}, Cell{std::int64_t{7}}});
  const auto text = to_csv(t);
  EXPECT_EQ(text.substr(0, 18), "name,value,count\r\n");
  EXPECT_NE(text.find("\"a,b\""), std::string::npos);
  EXPECT_NE(text.find("\"say \"\"hi\"\"\""), std::string::npos);
  const auto back = read_table(text);
  EXPECT_EQ(back.columns, t.columns);
  EXPECT_EQ(to_csv(back), text);
  EXPECT_EQ(std::get<std::string>(back.rows[3][0]), "two\nlines");
  EXPECT_THROW(parse_csv("a,\"b\n"), PreconditionError);
  EXPECT_THROW(parse_csv("a,b\"c\n"), PreconditionError);
}

TEST(Csv, ManifestPathAndDetection) {
  EXPECT_EQ(manifest_path_for("out/fig5.csv"), fs::path("out/fig5.manifest.json"));
  const auto c = parse_config(kSmallConfig);
  const auto m = make_manifest(c, 1.5, "x.csv");
  ASSERT_NE(manifest_config(m), nullptr);
  EXPECT_EQ(*manifest_config(m), c.resolved());
  EXPECT_EQ(m["master_seed"], c.master_seed);
  EXPECT_EQ(manifest_config(c.resolved()), nullptr);
}

TEST(Experiments, SmallRunHasExpectedColumns) {
  const auto table = run_experiment(parse_config(kSmallConfig));
  for (const char* col : {"noise", "transmit", "L", "omega", "asv", "l_var", "trials", "stderr"})
    EXPECT_NO_THROW(table.column(col)) << col;
  EXPECT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(to_csv(table), to_csv(run_experiment(parse_config(kSmallConfig), 4)));
}

// End-to-end checks against the built command-line tool.

struct Command {
  int exit_code;
  std::string output;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("bmac_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Command run(const std::string& args, const std::string& env = "") const {
    const std::string cmd = env + " \"" BMAC_CLI_PATH "\" " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string output;
    char buffer[4096];
    while (std::size_t n = fread(buffer, 1, sizeof buffer, pipe)) output.append(buffer, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
  }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  std::string out(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, ConfigErrorExitsTwo) {
  const auto bad = write("bad.json", replace(kSmallConfig, "\"gaussian\"", "\"student\""));
  const auto r = run("run " + bad.string() + " --out " + out("x.csv"));
  EXPECT_EQ(r.exit_code, 2) << r.output;
  EXPECT_NE(r.output.find("setup.noise.kind"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("line 7"), std::string::npos) << r.output;
  EXPECT_FALSE(fs::exists(dir_ / "x.csv"));
  EXPECT_EQ(run("run no_such_preset_or_file").exit_code, 2);
  EXPECT_EQ(run("frobnicate").exit_code, 2);
}

TEST_F(CliTest, NonConvergenceExitsThreeAndNamesIntegral) {
  const auto cfg = write("nc.json", kSmallConfig);
  const auto r = run("run " + cfg.string() + " --out " + out("nc.csv") +
                     " --set quadrature.max_subdivisions=1 --set quadrature.rel_tol=1e-15"
                     " --set quadrature.abs_tol=1e-300");
  EXPECT_EQ(r.exit_code, 3) << r.output;
  EXPECT_NE(r.output.find("non-convergence"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("E["), std::string::npos) << r.output;
}

TEST_F(CliTest, RerunAndReplayAreByteIdentical) {
  const auto cfg = write("small.json", kSmallConfig);
  ASSERT_EQ(run("run " + cfg.string() + " --out " + out("a.csv")).exit_code, 0);
  ASSERT_EQ(run("run " + cfg.string() + " --out " + out("b.csv") + " --workers 8").exit_code, 0);
  ASSERT_EQ(run("run " + out("a.manifest.json") + " --out " + out("c.csv")).exit_code, 0);
  const auto a = slurp(dir_ / "a.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(dir_ / "b.csv"));
  EXPECT_EQ(a, slurp(dir_ / "c.csv"));
  EXPECT_NE(a.find("omega"), std::string::npos);
}

TEST_F(CliTest, PresetRunWithOverrides) {
  const auto r = run("run fig2 --set trials=50 --set setup.sensors=30 --set "
                     "sweep.linspace=[0.5,1,2] --out " + out("fig2.csv"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto table = read_table(slurp(dir_ / "fig2.csv"));
  for (const char* col : {"noise", "omega", "asv", "l_var", "trials", "stderr"})
    EXPECT_NO_THROW(table.column(col)) << col;
  EXPECT_EQ(table.rows.size(), 6u);
  EXPECT_TRUE(fs::exists(dir_ / "fig2.manifest.json"));
}

TEST_F(CliTest, SeedEnvironmentVariableChangesDefaultSeed) {
  const auto cfg = write("small.json", kSmallConfig);
  ASSERT_EQ(run("run " + cfg.string() + " --out " + out("a.csv"), "BMAC_SEED=1").exit_code, 0);
  ASSERT_EQ(run("run " + cfg.string() + " --out " + out("b.csv"), "BMAC_SEED=2").exit_code, 0);
  ASSERT_EQ(run("run " + cfg.string() + " --out " + out("c.csv"), "BMAC_SEED=1").exit_code, 0);
  EXPECT_NE(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
  EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "c.csv"));
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "b.manifest.json"));
  EXPECT_EQ(manifest["master_seed"], 2);
}

TEST_F(CliTest, ListsPresets) {
  const auto r = run("presets");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("fig5"), std::string::npos);
}

}  // namespace
}  // namespace bmac
