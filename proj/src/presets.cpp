#include <cmath>
#include <sstream>

#include "bmac/config.hpp"

namespace bmac {

namespace {

using nlohmann::json;

const json kUnitNoises = json::parse(R"([
  {"kind": "gaussian", "variance": 1},
  {"kind": "laplacian", "variance": 1},
  {"kind": "cauchy", "scale": 1}
])");

json estimation_base(const char* experiment, const char* description) {
  return {{"experiment", experiment},
          {"description", description},
          {"trials", 10000},
          {"setup",
           {{"theta", 1.0},
            {"sensors", 500},
            {"sigma", {{"kind", "constant"}, {"value", 1.0}}},
            {"noise", kUnitNoises},
            {"transmit", {{"kind", "tanh"}, {"omega", 1.0}}},
            {"channel", {{"total_power", 10.0}, {"noise_var", 1.0}}}}},
          {"sweep", {{"parameter", "omega"}, {"linspace", {0.3, 3.0, 10}}}}};
}

// rho_s = theta^2 / sigma_n^2 with sigma_n^2 = 1, rho_c = P_T / sigma_v^2 with sigma_v^2 = 1.
json detection_base(const char* experiment, const char* description, double rho_s_db,
                    double rho_c_db) {
  return {{"experiment", experiment},
          {"description", description},
          {"trials", 1000000},
          {"setup",
           {{"theta", std::sqrt(std::pow(10.0, rho_s_db / 10.0))},
            {"sensors", 20},
            {"sigma", {{"kind", "constant"}, {"value", 1.0}}},
            {"noise", kUnitNoises},
            {"transmit", {{"kind", "tanh"}, {"omega", 1.0}}},
            {"channel", {{"total_power", std::pow(10.0, rho_c_db / 10.0)}, {"noise_var", 1.0}}},
            {"priors", {{"h0", 0.5}, {"h1", 0.5}}}}}};
}

std::vector<Preset> build_presets() {
  std::vector<Preset> out;

  out.push_back({"fig2", "AsV vs L*var over omega, tanh, three noises, P_T=10, L=500",
                 estimation_base("asv_vs_omega", "tanh AsV against simulated L var, L = 500")});

  auto fig3 = estimation_base("asv_vs_omega", "finite-sample effect, laplacian, L = 25, 50, 500");
  fig3["setup"]["noise"] = {{"kind", "laplacian"}, {"variance", 1.0}};
  fig3["setup"]["sensors"] = {25, 50, 500};
  out.push_back({"fig3", "finite-sample gap, laplacian, L=25,50,500", fig3});

  auto fig4 = estimation_base("asv_vs_omega", "bounded transmit functions, gaussian, L = 500");
  fig4["setup"]["noise"] = {{"kind", "gaussian"}, {"variance", 1.0}};
  fig4["setup"]["transmit"] = json::parse(R"([
    {"kind": "tanh", "omega": 1},
    {"kind": "gudermannian", "omega": 1},
    {"kind": "rational", "omega": 1}
  ])");
  out.push_back({"fig4", "AsV of tanh, gudermannian and rational, gaussian, L=500", fig4});

  auto asv_l = estimation_base("lvar_vs_L", "L var approaching AsV as L grows, rho = 1");
  asv_l["setup"]["transmit"] = {{"kind", "tanh"}, {"omega", 0.75}};
  asv_l["setup"]["sensors"] = 10;
  asv_l["setup"]["channel"] = {{"per_sensor_power", 1.0}, {"noise_var", 1.0}};
  asv_l["sweep"] = {{"parameter", "L"}, {"values", {10, 25, 50, 100, 250, 500, 1000}}};
  out.push_back({"asv-vs-L", "L*var vs L at omega=0.75, rho=1, three noises", asv_l});

  auto fig5 = detection_base("pe_vs_omega", "deflection and Pe over omega, L = 20", 10.0, 3.0);
  fig5["sweep"] = {{"parameter", "omega"}, {"linspace", {0.05, 1.6, 32}}};
  out.push_back({"fig5", "D(omega) and Pe(omega), rho_s=10 dB, rho_c=3 dB, L=20", fig5});

  auto fig6 = detection_base("pe_vs_L", "Pe over L at the deflection-optimal omega", 10.0, 0.0);
  fig6["setup"]["noise"] = {{"kind", "gaussian"}, {"variance", 1.0}};
  fig6["setup"]["transmit"] = json::parse(R"([
    {"kind": "linear", "alpha": "unit_power"},
    {"kind": "tanh", "omega": 1},
    {"kind": "gudermannian", "omega": 1},
    {"kind": "rational", "omega": 1}
  ])");
  fig6["sweep"] = {{"parameter", "L"}, {"values", {5, 10, 20, 40}}};
  fig6["omega_search"] = {{"lo", 0.05}, {"hi", 5.0}, {"grid", 64}};
  out.push_back({"fig6", "Pe vs L per transmit function, gaussian, rho_s=10 dB, rho_c=0 dB", fig6});

  auto theorem3 = estimation_base("theorem3_degeneration",
                                  "sigma_i = sqrt(i): h_L gap, AF error variance, deflection");
  theorem3["setup"]["noise"] = {{"kind", "gaussian"}, {"variance", 1.0}};
  theorem3["setup"]["sigma"] = {{"kind", "sqrt_growth"}, {"value", 1.0}};
  theorem3["sweep"] = {{"parameter", "L"}, {"logspace", {10, 10000, 4}}};
  theorem3["trials"] = 1;
  out.push_back({"theorem3", "growing sensing noise sigma_i = sqrt(i), L = 10..1e4", theorem3});

  auto cauchy = estimation_base("af_compare", "cauchy sensing noise: tanh inversion vs AF");
  cauchy["setup"]["noise"] = {{"kind", "cauchy"}, {"scale", 1.0}};
  cauchy["setup"]["transmit"] = {{"kind", "tanh"}, {"omega", 0.75}};
  cauchy["sweep"] = {{"parameter", "L"}, {"values", {100, 1000, 10000}}};
  cauchy["trials"] = 1000;
  out.push_back({"cauchy-af", "median |error| of tanh inversion vs AF under cauchy noise", cauchy});

  auto consistency = estimation_base("consistency", "tanh inversion error shrinking with L");
  consistency["sweep"] = {{"parameter", "L"}, {"logspace", {10, 10000, 7}}};
  consistency["trials"] = 2000;
  out.push_back({"consistency", "estimator spread vs L, tanh, three noises", consistency});

  json duality = {{"experiment", "duality_check"},
                  {"description", "matched density and score round trips"},
                  {"setup", {{"noise", kUnitNoises}, {"transmit", {{"kind", "tanh"}, {"omega", 1.0}}}}}};
  out.push_back({"duality", "matched density of tanh and noise score round trips", duality});

  for (auto& p : out) p.config["output"] = p.name + ".csv";
  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build_presets();
  return all;
}

const Preset* find_preset(std::string_view name) {
  for (const auto& p : presets())
    if (p.name == name) return &p;
  return nullptr;
}

std::string list_presets() {
  std::ostringstream os;
  for (const auto& p : presets()) {
    os << p.name;
    for (std::size_t k = p.name.size(); k < 14; ++k) os << ' ';
    os << p.summary << '\n';
  }
  return os.str();
}

}  // namespace bmac
