#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bmac/harness.hpp"

namespace bmac {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 20240601;
/// Environment variable that replaces kDefaultSeed when a config has no master_seed.
inline constexpr const char* kSeedEnvVar = "BMAC_SEED";

enum class ExperimentKind {
  asv_vs_omega,
  lvar_vs_L,
  consistency,
  af_compare,
  dc_vs_omega,
  pe_vs_omega,
  pe_vs_L,
  theorem3_degeneration,
  duality_check,
};

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);

struct OmegaSearch {
  double lo = 0.05;
  double hi = 5.0;
  int grid = 64;
};

/// A validated experiment. `resolved()` gives the canonical JSON form, with every default
/// filled in, that reproduces the same experiment when parsed again.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::asv_vs_omega;
  std::string description;
  std::uint64_t master_seed = kDefaultSeed;
  std::uint64_t trials = 10000;
  std::string output;

  double theta = 1.0;
  /// Every listed sensor count is run; a sweep over L replaces the list.
  std::vector<std::size_t> sensor_counts{1};
  SigmaSequence sigmas = SigmaSequence::constant(1.0);
  std::vector<NoiseModel> noises{NoiseModel::gaussian(1.0)};
  std::vector<TransmitFunction> transmits{TransmitFunction::tanh(1.0)};
  /// Per transmit: linear alpha was given as "unit_power" and is recomputed per noise model.
  std::vector<bool> unit_power;
  ChannelModel channel;
  /// When set, P_T = per_sensor_power * L at every point instead of channel.total_power.
  std::optional<double> per_sensor_power;
  double prior_h0 = 0.5;
  double prior_h1 = 0.5;

  std::optional<SweepParameter> sweep_parameter;
  std::vector<double> sweep_values;
  std::optional<OmegaSearch> omega_search;
  EstimatorKind estimator = EstimatorKind::inversion;
  QuadratureSpec quadrature;

  nlohmann::json resolved() const;
};

/// Linear gain giving unit average transmit power under H1 for the given noise:
/// alpha = 1 / sqrt(theta^2 + mean_i sigma_i^2 * var(n)).
double unit_power_alpha(double theta, const SigmaSequence& sigmas, std::size_t sensors,
                        const NoiseModel& noise);

/// Parses JSON text, applies `--set` style overrides ("a.b.c=value") and validates.
/// Throws ConfigError with the offending field and, when known, its line in `text`.
ExperimentConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {},
                              std::uint64_t default_seed = kDefaultSeed);
ExperimentConfig parse_config_document(const nlohmann::json& document,
                              const std::vector<std::string>& overrides = {},
                              std::uint64_t default_seed = kDefaultSeed,
                              std::string_view text = {});

/// Applies one "dotted.path=value" override; the value is read as JSON when it parses,
/// otherwise as a string.
void apply_override(nlohmann::json& document, std::string_view assignment);

struct Preset {
  std::string name;
  std::string summary;
  nlohmann::json config;
};
const std::vector<Preset>& presets();
const Preset* find_preset(std::string_view name);
/// One line per preset: "name  summary".
std::string list_presets();

}  // namespace bmac
