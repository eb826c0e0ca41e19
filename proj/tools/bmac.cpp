#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bmac/config.hpp"
#include "bmac/csv.hpp"
#include "bmac/errors.hpp"
#include "bmac/experiments.hpp"

namespace {

constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;

std::uint64_t default_seed() {
  const char* env = std::getenv(bmac::kSeedEnvVar);
  if (!env || !*env) return bmac::kDefaultSeed;
  char* end = nullptr;
  const auto seed = std::strtoull(env, &end, 10);
  if (*end != '\0')
    throw bmac::ConfigError(bmac::kSeedEnvVar, "expected an unsigned integer, got '" +
                                                   std::string(env) + "'");
  return seed;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bmac::ConfigError("config", "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << contents;
  if (!out) throw bmac::Error("cannot write " + path.string());
}

bmac::ExperimentConfig load(const std::string& source, const std::vector<std::string>& overrides) {
  const auto seed = default_seed();
  if (std::filesystem::is_regular_file(source)) {
    const auto text = read_file(source);
    const auto document = nlohmann::json::parse(text, nullptr, false);
    if (!document.is_discarded()) {
      if (const auto* embedded = bmac::manifest_config(document))
        return bmac::parse_config_document(*embedded, overrides, seed, text);
    }
    return bmac::parse_config(std::string_view(text), overrides, seed);
  }
  if (const auto* preset = bmac::find_preset(source))
    return bmac::parse_config_document(preset->config, overrides, seed);
  throw bmac::ConfigError("config", "'" + source + "' is neither a file nor a preset name");
}

int run(const std::string& source, const std::vector<std::string>& overrides, unsigned workers,
        const std::string& out_path) {
  auto config = load(source, overrides);
  if (!out_path.empty()) config.output = out_path;

  const auto start = std::chrono::steady_clock::now();
  const auto table = bmac::run_experiment(config, workers);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  const std::filesystem::path csv_path = config.output;
  const auto manifest_path = bmac::manifest_path_for(csv_path);
  write_file(csv_path, bmac::to_csv(table));
  write_file(manifest_path,
             bmac::make_manifest(config, elapsed.count(), csv_path.string()).dump(2) + "\n");
  std::cerr << "wrote " << csv_path.string() << " (" << table.rows.size() << " rows) and "
            << manifest_path.string() << " in " << elapsed.count() << " s\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimation and detection over a Gaussian multiple-access channel"};
  app.require_subcommand(1);

  std::string source, out_path;
  std::vector<std::string> overrides;
  unsigned workers = 0;
  auto* run_cmd = app.add_subcommand("run", "run an experiment config, preset or manifest");
  run_cmd->add_option("config", source, "config file, preset name or manifest")->required();
  run_cmd->add_option("--set", overrides, "dotted.path=value override (repeatable)");
  run_cmd->add_option("--workers", workers, "worker threads (default: available cores)");
  run_cmd->add_option("--out", out_path, "CSV output path (default: the config's output)");

  auto* presets_cmd = app.add_subcommand("presets", "list built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (presets_cmd->parsed()) {
      std::cout << bmac::list_presets();
      return 0;
    }
    return run(source, overrides, workers, out_path);
  } catch (const bmac::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const bmac::NonConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
}
