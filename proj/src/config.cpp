#include "bmac/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bmac/errors.hpp"

namespace bmac {

using nlohmann::json;

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::asv_vs_omega: return "asv_vs_omega";
    case ExperimentKind::lvar_vs_L: return "lvar_vs_L";
    case ExperimentKind::consistency: return "consistency";
    case ExperimentKind::af_compare: return "af_compare";
    case ExperimentKind::dc_vs_omega: return "dc_vs_omega";
    case ExperimentKind::pe_vs_omega: return "pe_vs_omega";
    case ExperimentKind::pe_vs_L: return "pe_vs_L";
    case ExperimentKind::theorem3_degeneration: return "theorem3_degeneration";
    case ExperimentKind::duality_check: return "duality_check";
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) {
  for (int k = 0; k <= static_cast<int>(ExperimentKind::duality_check); ++k) {
    const auto kind = static_cast<ExperimentKind>(k);
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

double unit_power_alpha(double theta, const SigmaSequence& sigmas, std::size_t sensors,
                        const NoiseModel& noise) {
  const double noise_var = noise.variance().value_or(noise.scale() * noise.scale());
  double sum = 0.0;
  for (const auto& level : sigmas.levels(sensors))
    sum += static_cast<double>(level.count) * level.sigma * level.sigma;
  return 1.0 / std::sqrt(theta * theta + noise_var * sum / static_cast<double>(sensors));
}

namespace {

/// 1-based line of the first occurrence of "key" in the source text, 0 if absent.
int line_of(std::string_view text, std::string_view key) {
  if (text.empty() || key.empty()) return 0;
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto pos = text.find(quoted);
  if (pos == std::string_view::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
}

std::string last_segment(const std::string& path) {
  auto end = path.size();
  while (end > 0 && path[end - 1] == ']') {
    end = path.rfind('[', end - 1);
    if (end == std::string::npos) return path;
  }
  const auto dot = path.rfind('.', end == 0 ? 0 : end - 1);
  const auto start = dot == std::string::npos ? 0 : dot + 1;
  return path.substr(start, end - start);
}

class Context {
 public:
  explicit Context(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& field, const std::string& message) const {
    throw ConfigError(field, message, line_of(text_, last_segment(field)));
  }

 private:
  std::string_view text_;
};

/// Reads the members of one JSON object and rejects any it was not asked about.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path, const Context& ctx)
      : node_(node), path_(std::move(path)), ctx_(ctx) {
    if (!node_.is_object()) ctx_.fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json* find(std::string_view key) {
    seen_.insert(std::string(key));
    const auto it = node_.find(std::string(key));
    return it == node_.end() ? nullptr : &*it;
  }

  bool has(std::string_view key) const { return node_.contains(std::string(key)); }

  const json& require(std::string_view key) {
    const auto* value = find(key);
    if (!value) ctx_.fail(field(key), "missing required field");
    return *value;
  }

  double number(std::string_view key, std::optional<double> fallback = std::nullopt) {
    const auto* value = find(key);
    if (!value) {
      if (!fallback) ctx_.fail(field(key), "missing required field");
      return *fallback;
    }
    return as_number(*value, field(key));
  }

  double as_number(const json& value, const std::string& name) const {
    if (!value.is_number()) ctx_.fail(name, "expected a number");
    const double x = value.get<double>();
    if (!std::isfinite(x)) ctx_.fail(name, "expected a finite number");
    return x;
  }

  std::uint64_t count(std::string_view key, std::optional<std::uint64_t> fallback = std::nullopt) {
    const auto* value = find(key);
    if (!value) {
      if (!fallback) ctx_.fail(field(key), "missing required field");
      return *fallback;
    }
    return as_count(*value, field(key));
  }

  std::uint64_t as_count(const json& value, const std::string& name) const {
    if (value.is_number_unsigned()) return value.get<std::uint64_t>();
    if (value.is_number_integer() && value.get<std::int64_t>() >= 0)
      return static_cast<std::uint64_t>(value.get<std::int64_t>());
    if (value.is_number_float()) {
      const double x = value.get<double>();
      if (x >= 0.0 && x == std::floor(x) && x < 1.8e19) return static_cast<std::uint64_t>(x);
    }
    ctx_.fail(name, "expected a non-negative integer");
  }

  std::string text(std::string_view key, std::optional<std::string> fallback = std::nullopt) {
    const auto* value = find(key);
    if (!value) {
      if (!fallback) ctx_.fail(field(key), "missing required field");
      return *fallback;
    }
    if (!value->is_string()) ctx_.fail(field(key), "expected a string");
    return value->get<std::string>();
  }

  void finish() const {
    for (const auto& item : node_.items())
      if (!seen_.count(item.key())) ctx_.fail(field(item.key()), "unknown field");
  }

  const Context& context() const { return ctx_; }

 private:
  const json& node_;
  std::string path_;
  const Context& ctx_;
  std::set<std::string> seen_;
};

/// Runs `read(element, path)` on a single object or on each element of an array of them.
template <class Read>
void for_each_entry(const json& node, const std::string& path, const Context& ctx, Read read) {
  if (node.is_array()) {
    if (node.empty()) ctx.fail(path, "expected at least one entry");
    for (std::size_t k = 0; k < node.size(); ++k)
      read(node[k], path + "[" + std::to_string(k) + "]");
  } else {
    read(node, path);
  }
}

template <class Build>
auto guarded(const Context& ctx, const std::string& field, Build build) {
  try {
    return build();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    ctx.fail(field, e.what());
  }
}

NoiseModel read_noise(const json& node, const std::string& path, const Context& ctx) {
  ObjectReader r(node, path, ctx);
  const auto name = r.text("kind");
  const auto kind = parse_noise_kind(name);
  if (!kind) ctx.fail(r.field("kind"), "unknown noise kind '" + name + "'");
  const bool has_scale = r.has("scale"), has_variance = r.has("variance");
  if (has_scale == has_variance) ctx.fail(path, "give exactly one of 'scale' or 'variance'");
  const auto model = guarded(ctx, path, [&] {
    return has_scale ? NoiseModel(*kind, r.number("scale"))
                     : NoiseModel::with_variance(*kind, r.number("variance"));
  });
  r.finish();
  return model;
}

struct TransmitEntry {
  TransmitFunction f;
  bool unit_power;
};

TransmitEntry read_transmit(const json& node, const std::string& path, const Context& ctx) {
  ObjectReader r(node, path, ctx);
  const auto name = r.text("kind");
  const auto kind = parse_transmit_kind(name);
  if (!kind) ctx.fail(r.field("kind"), "unknown transmit kind '" + name + "'");
  TransmitEntry out{TransmitFunction::tanh(1.0), false};
  out.f = guarded(ctx, path, [&] {
    switch (*kind) {
      case TransmitKind::tanh: return TransmitFunction::tanh(r.number("omega"));
      case TransmitKind::gudermannian: return TransmitFunction::gudermannian(r.number("omega"));
      case TransmitKind::rational: return TransmitFunction::rational(r.number("omega"));
      case TransmitKind::signed_power:
        return TransmitFunction::signed_power(r.number("exponent"));
      case TransmitKind::uniform_quantizer: {
        const double x_max = r.number("x_max");
        const auto levels = r.count("levels");
        return TransmitFunction::uniform_quantizer(x_max, static_cast<int>(levels));
      }
      case TransmitKind::linear: {
        const auto& alpha = r.require("alpha");
        if (alpha.is_string()) {
          if (alpha.get<std::string>() != "unit_power")
            ctx.fail(r.field("alpha"), "expected a number or \"unit_power\"");
          out.unit_power = true;
          return TransmitFunction::linear(1.0);
        }
        return TransmitFunction::linear(r.as_number(alpha, r.field("alpha")));
      }
    }
    ctx.fail(r.field("kind"), "unsupported transmit kind");
  });
  r.finish();
  return out;
}

SigmaSequence read_sigma(const json& node, const std::string& path, const Context& ctx) {
  ObjectReader r(node, path, ctx);
  const auto name = r.text("kind");
  const auto kind = parse_sigma_kind(name);
  if (!kind) ctx.fail(r.field("kind"), "unknown sigma kind '" + name + "'");
  const auto sequence = guarded(ctx, path, [&] {
    switch (*kind) {
      case SigmaKind::constant: return SigmaSequence::constant(r.number("value"));
      case SigmaKind::sqrt_growth: return SigmaSequence::sqrt_growth(r.number("value"));
      case SigmaKind::explicit_list: {
        const auto& values = r.require("values");
        if (!values.is_array()) ctx.fail(r.field("values"), "expected an array");
        std::vector<double> list;
        for (std::size_t k = 0; k < values.size(); ++k)
          list.push_back(r.as_number(values[k], r.field("values") + "[" + std::to_string(k) + "]"));
        return SigmaSequence::explicit_list(std::move(list));
      }
    }
    ctx.fail(r.field("kind"), "unsupported sigma kind");
  });
  r.finish();
  return sequence;
}

std::vector<double> read_grid(const json& node, const std::string& path, bool geometric,
                              const ObjectReader& r) {
  if (!node.is_array() || node.size() != 3)
    r.context().fail(path, "expected [start, stop, count]");
  const double start = r.as_number(node[0], path + "[0]");
  const double stop = r.as_number(node[1], path + "[1]");
  const auto count = r.as_count(node[2], path + "[2]");
  if (count < 1) r.context().fail(path, "count must be at least 1");
  if (geometric && !(start > 0.0 && stop > 0.0))
    r.context().fail(path, "logspace endpoints must be positive");
  std::vector<double> values;
  for (std::uint64_t k = 0; k < count; ++k) {
    const double t = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
    values.push_back(geometric ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
                               : start + t * (stop - start));
  }
  return values;
}

void read_sweep(const json& node, ExperimentConfig& config, const Context& ctx) {
  ObjectReader r(node, "sweep", ctx);
  const auto name = r.text("parameter");
  const auto parameter = parse_sweep_parameter(name);
  if (!parameter) ctx.fail("sweep.parameter", "unknown sweep parameter '" + name + "'");
  config.sweep_parameter = parameter;

  const int forms = r.has("values") + r.has("linspace") + r.has("logspace");
  if (forms != 1) ctx.fail("sweep", "give exactly one of 'values', 'linspace' or 'logspace'");
  if (const auto* values = r.find("values")) {
    if (!values->is_array() || values->empty())
      ctx.fail("sweep.values", "expected a non-empty array");
    for (std::size_t k = 0; k < values->size(); ++k)
      config.sweep_values.push_back(
          r.as_number((*values)[k], "sweep.values[" + std::to_string(k) + "]"));
  }
  if (const auto* grid = r.find("linspace"))
    config.sweep_values = read_grid(*grid, "sweep.linspace", false, r);
  if (const auto* grid = r.find("logspace"))
    config.sweep_values = read_grid(*grid, "sweep.logspace", true, r);
  r.finish();

  for (auto& v : config.sweep_values) {
    if (*parameter == SweepParameter::sensors) {
      v = std::round(v);
      if (v < 1.0) ctx.fail("sweep", "sensor counts must be at least 1");
    }
    if (*parameter == SweepParameter::omega && !(v > 0.0))
      ctx.fail("sweep", "omega values must be positive");
    if (*parameter == SweepParameter::sigma_growth && !(v > 0.0))
      ctx.fail("sweep", "sigma_growth values must be positive");
  }
}

void read_setup(const json& node, ExperimentConfig& config, const Context& ctx) {
  ObjectReader r(node, "setup", ctx);
  config.theta = r.number("theta", 1.0);

  if (const auto* sensors = r.find("sensors")) {
    config.sensor_counts.clear();
    for_each_entry(*sensors, "setup.sensors", ctx, [&](const json& n, const std::string& p) {
      const auto count = r.as_count(n, p);
      if (count < 1) ctx.fail(p, "sensor count must be at least 1");
      config.sensor_counts.push_back(count);
    });
  }
  if (const auto* sigma = r.find("sigma")) config.sigmas = read_sigma(*sigma, "setup.sigma", ctx);
  if (const auto* noise = r.find("noise")) {
    config.noises.clear();
    for_each_entry(*noise, "setup.noise", ctx, [&](const json& n, const std::string& p) {
      config.noises.push_back(read_noise(n, p, ctx));
    });
  }
  config.transmits.clear();
  config.unit_power.clear();
  if (const auto* transmit = r.find("transmit")) {
    for_each_entry(*transmit, "setup.transmit", ctx, [&](const json& n, const std::string& p) {
      const auto entry = read_transmit(n, p, ctx);
      config.transmits.push_back(entry.f);
      config.unit_power.push_back(entry.unit_power);
    });
  } else {
    config.transmits.push_back(TransmitFunction::tanh(1.0));
    config.unit_power.push_back(false);
  }

  if (const auto* channel = r.find("channel")) {
    ObjectReader c(*channel, "setup.channel", ctx);
    if (c.has("total_power") == c.has("per_sensor_power"))
      ctx.fail("setup.channel", "give exactly one of 'total_power' or 'per_sensor_power'");
    if (c.has("total_power")) config.channel.total_power = c.number("total_power");
    if (c.has("per_sensor_power")) config.per_sensor_power = c.number("per_sensor_power");
    config.channel.noise_var = c.number("noise_var", 1.0);
    c.finish();
  }
  if (const auto* priors = r.find("priors")) {
    ObjectReader p(*priors, "setup.priors", ctx);
    config.prior_h0 = p.number("h0");
    config.prior_h1 = p.number("h1");
    p.finish();
  }
  r.finish();

  if (config.per_sensor_power && !(*config.per_sensor_power > 0.0))
    ctx.fail("setup.channel.per_sensor_power", "must be positive");
  guarded(ctx, "setup.channel", [&] {
    config.channel.validate();
    return 0;
  });
  if (!(config.prior_h0 >= 0.0 && config.prior_h1 >= 0.0) ||
      std::abs(config.prior_h0 + config.prior_h1 - 1.0) > 1e-12)
    ctx.fail("setup.priors", "priors must be non-negative and sum to one");
  for (auto count : config.sensor_counts)
    guarded(ctx, "setup.sigma", [&] {
      config.sigmas.check_length(count);
      return 0;
    });
}

void read_quadrature(const json& node, QuadratureSpec& spec, const Context& ctx) {
  ObjectReader r(node, "quadrature", ctx);
  spec.rel_tol = r.number("rel_tol", spec.rel_tol);
  spec.abs_tol = r.number("abs_tol", spec.abs_tol);
  spec.tail_mass = r.number("tail_mass", spec.tail_mass);
  spec.max_subdivisions = static_cast<int>(r.count("max_subdivisions", spec.max_subdivisions));
  r.finish();
  guarded(ctx, "quadrature", [&] {
    spec.validate();
    return 0;
  });
}

void check_kind_requirements(const ExperimentConfig& config, const Context& ctx) {
  const bool needs_sweep = config.kind != ExperimentKind::duality_check;
  if (needs_sweep && !config.sweep_parameter) ctx.fail("sweep", "missing required field");
  if (config.trials == 0) ctx.fail("trials", "must be at least 1");

  const bool estimation = config.kind == ExperimentKind::asv_vs_omega ||
                          config.kind == ExperimentKind::lvar_vs_L ||
                          config.kind == ExperimentKind::consistency ||
                          config.kind == ExperimentKind::af_compare;
  if (estimation) {
    for (std::size_t j = 0; j < config.transmits.size(); ++j)
      if (!config.transmits[j].strictly_increasing())
        ctx.fail("setup.transmit", "estimation needs a strictly increasing transmit function");
  }
  if (config.kind == ExperimentKind::duality_check) {
    for (const auto& f : config.transmits)
      if (f.kind() != TransmitKind::tanh)
        ctx.fail("setup.transmit", "duality_check compares against the tanh closed form only");
  }
  if (config.omega_search) {
    const auto& s = *config.omega_search;
    if (!(s.lo > 0.0 && s.hi > s.lo)) ctx.fail("omega_search", "need 0 < lo < hi");
    if (s.grid < 8) ctx.fail("omega_search.grid", "must be at least 8");
  }
}

}  // namespace

void apply_override(json& document, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("--set", "expected key=value, got '" + std::string(assignment) + "'");
  const std::string path(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));

  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* node = &document;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) throw ConfigError(path, "empty path segment in override");
    const bool is_index = std::all_of(key.begin(), key.end(), ::isdigit);
    json* next = nullptr;
    if (node->is_array() && is_index) {
      const auto index = std::stoul(key);
      if (index >= node->size()) throw ConfigError(path, "array index out of range");
      next = &(*node)[index];
    } else if (node->is_object() || node->is_null()) {
      next = &(*node)[key];
    } else {
      throw ConfigError(path, "cannot descend into a non-object value");
    }
    if (dot == std::string::npos) {
      *next = value;
      return;
    }
    node = next;
    start = dot + 1;
  }
}

ExperimentConfig parse_config_document(const json& document, const std::vector<std::string>& overrides,
                              std::uint64_t default_seed, std::string_view text) {
  json doc = document;
  for (const auto& o : overrides) apply_override(doc, o);
  const Context ctx(text);

  ExperimentConfig config;
  ObjectReader root(doc, "", ctx);
  const auto kind_name = root.text("experiment");
  const auto kind = parse_experiment_kind(kind_name);
  if (!kind) ctx.fail("experiment", "unknown experiment kind '" + kind_name + "'");
  config.kind = *kind;
  config.description = root.text("description", "");
  config.master_seed = root.count("master_seed", default_seed);
  config.trials = root.count("trials", config.trials);
  config.output = root.text("output", std::string(to_string(config.kind)) + ".csv");

  if (const auto* setup = root.find("setup"))
    read_setup(*setup, config, ctx);
  else
    config.unit_power.assign(config.transmits.size(), false);
  if (const auto* sweep = root.find("sweep")) read_sweep(*sweep, config, ctx);
  if (const auto* search = root.find("omega_search")) {
    ObjectReader s(*search, "omega_search", ctx);
    OmegaSearch os;
    os.lo = s.number("lo", os.lo);
    os.hi = s.number("hi", os.hi);
    os.grid = static_cast<int>(s.count("grid", os.grid));
    s.finish();
    config.omega_search = os;
  }
  const auto estimator = root.text("estimator", "inversion");
  if (estimator == "inversion")
    config.estimator = EstimatorKind::inversion;
  else if (estimator == "amplify_forward")
    config.estimator = EstimatorKind::amplify_forward;
  else
    ctx.fail("estimator", "expected \"inversion\" or \"amplify_forward\"");
  if (const auto* quadrature = root.find("quadrature"))
    read_quadrature(*quadrature, config.quadrature, ctx);
  root.finish();

  check_kind_requirements(config, ctx);
  return config;
}

ExperimentConfig parse_config(std::string_view text, const std::vector<std::string>& overrides,
                              std::uint64_t default_seed) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + upto, '\n'));
    throw ConfigError("", std::string("malformed JSON: ") + e.what(), line);
  }
  return parse_config_document(document, overrides, default_seed, text);
}

namespace {

json noise_json(const NoiseModel& model) {
  return {{"kind", std::string(to_string(model.kind()))}, {"scale", model.scale()}};
}

json transmit_json(const TransmitFunction& f, bool unit_power) {
  json out = {{"kind", std::string(to_string(f.kind()))}};
  switch (f.kind()) {
    case TransmitKind::tanh:
    case TransmitKind::gudermannian:
    case TransmitKind::rational: out["omega"] = f.omega(); break;
    case TransmitKind::signed_power: out["exponent"] = f.exponent(); break;
    case TransmitKind::uniform_quantizer:
      out["x_max"] = f.x_max();
      out["levels"] = f.levels();
      break;
    case TransmitKind::linear:
      if (unit_power)
        out["alpha"] = "unit_power";
      else
        out["alpha"] = f.alpha();
      break;
  }
  return out;
}

json sigma_json(const SigmaSequence& s) {
  json out = {{"kind", std::string(to_string(s.kind()))}};
  if (s.kind() == SigmaKind::explicit_list)
    out["values"] = s.values();
  else
    out["value"] = s.sigma();
  return out;
}

}  // namespace

json ExperimentConfig::resolved() const {
  json setup;
  setup["theta"] = theta;
  setup["sensors"] = sensor_counts;
  setup["sigma"] = sigma_json(sigmas);
  setup["noise"] = json::array();
  for (const auto& n : noises) setup["noise"].push_back(noise_json(n));
  setup["transmit"] = json::array();
  for (std::size_t j = 0; j < transmits.size(); ++j)
    setup["transmit"].push_back(transmit_json(transmits[j], unit_power.at(j)));
  json channel_json;
  if (per_sensor_power)
    channel_json["per_sensor_power"] = *per_sensor_power;
  else
    channel_json["total_power"] = channel.total_power;
  channel_json["noise_var"] = channel.noise_var;
  setup["channel"] = channel_json;
  setup["priors"] = {{"h0", prior_h0}, {"h1", prior_h1}};

  json out;
  out["experiment"] = std::string(to_string(kind));
  out["description"] = description;
  out["master_seed"] = master_seed;
  out["trials"] = trials;
  out["output"] = output;
  out["setup"] = setup;
  if (sweep_parameter)
    out["sweep"] = {{"parameter", std::string(to_string(*sweep_parameter))},
                    {"values", sweep_values}};
  if (omega_search)
    out["omega_search"] = {
        {"lo", omega_search->lo}, {"hi", omega_search->hi}, {"grid", omega_search->grid}};
  out["estimator"] = estimator == EstimatorKind::inversion ? "inversion" : "amplify_forward";
  out["quadrature"] = {{"rel_tol", quadrature.rel_tol},
                       {"abs_tol", quadrature.abs_tol},
                       {"tail_mass", quadrature.tail_mass},
                       {"max_subdivisions", quadrature.max_subdivisions}};
  return out;
}

}  // namespace bmac
