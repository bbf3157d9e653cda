// crncert: certify and numerically probe global convergence of reaction
// networks. Subcommands: certify, family, simulate, verify.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crncert/certify.hpp"
#include "crncert/cone.hpp"
#include "crncert/kinetics.hpp"
#include "crncert/network.hpp"
#include "crncert/simulate.hpp"

namespace {

using crncert::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

crncert::RatVec parse_rat_list(const std::string& s) {
  crncert::RatVec v;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ','))
    if (!tok.empty()) v.push_back(crncert::parse_rat(tok));
  return v;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> v;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ','))
    if (!tok.empty()) v.push_back(std::stod(tok));
  return v;
}

crncert::KineticModel model_from_spec(const crncert::ReactionNetwork& net, const json& spec) {
  crncert::KineticModel model = crncert::KineticModel::unit_rates(net);
  if (spec.contains("rates")) {
    const json& r = spec.at("rates");
    if (r.contains("kf")) {
      auto kf = r.at("kf");
      for (std::size_t j = 0; j < kf.size() && j < model.kf.size(); ++j)
        model.kf[j] = crncert::Rat(kf[j].get<double>());
    }
    if (r.contains("kr")) {
      auto kr = r.at("kr");
      for (std::size_t j = 0; j < kr.size() && j < model.kr.size(); ++j)
        if (net.reactions[j].reversible) model.kr[j] = crncert::Rat(kr[j].get<double>());
    }
  }
  model.validate();
  return model;
}

int cmd_certify(const std::string& file, const std::string& c_arg, const std::string& out_path) {
  crncert::ReactionNetwork net = crncert::parse_network(slurp(file));
  std::optional<crncert::RatVec> c;
  if (!c_arg.empty()) c = parse_rat_list(c_arg);
  crncert::Certificate cert = crncert::certify(net, c);
  emit(crncert::certificate_to_json(cert).dump(2) + "\n", out_path);
  // 0 certified, 1 refuted or inapplicable, 2 usage/input errors
  return cert.overall == "certified" ? 0 : 1;
}

int cmd_family(int k, const std::string& out_path) {
  emit(crncert::render(crncert::family_network(k)), out_path);
  return 0;
}

int cmd_simulate(const std::string& file, const std::string& x0_arg, double t_end, int samples,
                 bool force, const std::string& out_path) {
  crncert::ReactionNetwork net = crncert::parse_network(slurp(file));
  crncert::Certificate cert = crncert::certify(net);
  if (!cert.certified() && !force) {
    std::cerr << "network is not certified (" << cert.overall
              << (cert.detail.empty() ? "" : ": " + cert.detail)
              << "); pass --force to simulate anyway\n";
    return 1;
  }
  std::vector<double> x0 = parse_double_list(x0_arg);
  if (int(x0.size()) != net.species_count()) {
    std::cerr << "--x0 needs " << net.species_count() << " entries\n";
    return 2;
  }
  crncert::KineticModel model = crncert::KineticModel::unit_rates(net);
  crncert::DVec times(samples);
  for (int s = 0; s < samples; ++s) times[s] = t_end * double(s) / (samples - 1);
  crncert::Integrator integ(model);
  crncert::Trajectory traj = integ.integrate(x0, t_end, times);
  emit(crncert::trajectory_csv(traj, net.species), out_path);

  if (!cert.r.empty()) {
    double h0 = 0, h1 = 0;
    for (int i = 0; i < net.species_count(); ++i) {
      h0 += cert.r[i].get_d() * x0[i];
      h1 += cert.r[i].get_d() * traj.states.back()[i];
    }
    std::cerr << "conservation drift |r.x(T) - r.x(0)| = " << std::abs(h1 - h0) << " (h = " << h0
              << ")\n";
  }
  std::cerr << "steps accepted " << traj.accepted << ", rejected " << traj.rejected << "\n";
  return 0;
}

json run_experiment(const json& spec, const json& exp, std::uint64_t seed,
                    crncert::ExperimentTolerances tol) {
  std::string type = exp.at("type").get<std::string>();
  json rep{{"type", type}};
  if (type == "certificate") {
    crncert::Certificate cert =
        crncert::certificate_from_json(json::parse(slurp(exp.at("file").get<std::string>())));
    rep["passed"] = crncert::verify_certificate(cert);
    rep["overall"] = cert.overall;
    return rep;
  }

  std::string net_text = spec.contains("network") ? spec.at("network").get<std::string>()
                                                  : slurp(spec.at("network_file").get<std::string>());
  crncert::ReactionNetwork net = crncert::parse_network(net_text);
  crncert::KineticModel model = model_from_spec(net, spec);
  crncert::Certificate cert = crncert::certify(net);

  if (type == "class-convergence") {
    if (cert.r.empty()) throw std::runtime_error("class-convergence: no conserved covector");
    std::vector<double> x_ref = exp.at("x_ref").get<std::vector<double>>();
    int count = exp.value("count", 10);
    auto r = crncert::class_convergence_experiment(model, cert.r, x_ref, count,
                                                   exp.value("seed", seed), tol);
    rep["passed"] = r.converged;
    rep["h"] = r.h;
    rep["count"] = r.count;
    rep["max_pairwise_distance"] = r.max_pairwise_distance;
    rep["max_drift"] = r.max_drift;
    rep["all_bounded"] = r.all_bounded;
    rep["equilibrium"] = r.equilibrium;
    return rep;
  }
  if (type == "order-preservation") {
    if (cert.c.empty()) throw std::runtime_error("order-preservation: no cone available");
    crncert::CubicCone cone = crncert::build_cubic_cone(crncert::stoichiometric_matrix(net), cert.c);
    int pairs = exp.value("pairs", 10);
    double horizon = exp.value("horizon", 10.0);
    int samples = exp.value("samples", 8);
    auto r = crncert::order_preservation_experiment(model, cone, pairs, horizon, samples,
                                                    exp.value("seed", seed), tol);
    rep["passed"] = r.passed();
    rep["pairs"] = r.pairs;
    rep["checks"] = r.checks;
    rep["membership_violations"] = r.membership_violations;
    rep["interior_violations"] = r.interior_violations;
    return rep;
  }
  throw std::runtime_error("unknown experiment type: " + type);
}

int cmd_verify(const std::string& file, std::uint64_t seed, double tol_conv, double tol_eq,
               const std::string& out_path) {
  json spec = json::parse(slurp(file));
  crncert::ExperimentTolerances tol;
  tol.tol_conv = tol_conv;
  tol.tol_eq = tol_eq;
  if (spec.contains("tolerances")) {
    const json& t = spec.at("tolerances");
    tol.tol_conv = t.value("tol_conv", tol.tol_conv);
    tol.tol_cons = t.value("tol_cons", tol.tol_cons);
    tol.tau_K = t.value("tau_K", tol.tau_K);
    tol.tol_eq = t.value("tol_eq", tol.tol_eq);
  }
  if (spec.contains("seed")) seed = spec.at("seed").get<std::uint64_t>();

  json reports = json::array();
  bool all_pass = true;
  for (const json& exp : spec.at("experiments")) {
    json rep = run_experiment(spec, exp, seed, tol);
    all_pass = all_pass && rep.at("passed").get<bool>();
    reports.push_back(std::move(rep));
  }
  json out{{"seed", seed}, {"all_passed", all_pass}, {"experiments", reports}};
  emit(out.dump(2) + "\n", out_path);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certifier and test bench for global convergence of reaction networks"};
  app.require_subcommand(1);

  std::string file, out_path, c_arg, x0_arg;
  int k = 2, samples = 101;
  double t_end = 10.0, tol_conv = 1e-6, tol_eq = 1e-10;
  std::uint64_t seed = 1;
  bool force = false;

  auto* certify = app.add_subcommand("certify", "check the convergence conditions, emit a certificate");
  certify->add_option("file", file, "reaction network file")->required();
  certify->add_option("--c", c_arg, "cone translation vector, comma-separated rationals");
  certify->add_option("--out", out_path, "write certificate JSON here instead of stdout");

  auto* family = app.add_subcommand("family", "print the k-th member of the built-in network family");
  family->add_option("k", k, "family index, k >= 2")->required();
  family->add_option("--out", out_path, "output file");

  auto* simulate = app.add_subcommand("simulate", "integrate mass-action dynamics, emit CSV");
  simulate->add_option("file", file, "reaction network file")->required();
  simulate->add_option("--x0", x0_arg, "initial condition, comma-separated")->required();
  simulate->add_option("--t-end,--t", t_end, "time horizon");
  simulate->add_option("--samples", samples, "number of sample rows")->check(CLI::Range(2, 1000000));
  simulate->add_flag("--force", force, "simulate even when the network is not certified");
  simulate->add_option("--out", out_path, "output CSV file");

  auto* verify = app.add_subcommand("verify", "run an experiment spec, emit a report");
  verify->add_option("file", file, "experiment spec JSON")->required();
  verify->add_option("--seed", seed, "default RNG seed");
  verify->add_option("--tol-conv", tol_conv, "pairwise convergence tolerance");
  verify->add_option("--tol-eq", tol_eq, "equilibrium residual tolerance");
  verify->add_option("--out", out_path, "write report JSON here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (certify->parsed()) return cmd_certify(file, c_arg, out_path);
    if (family->parsed()) return cmd_family(k, out_path);
    if (simulate->parsed()) return cmd_simulate(file, x0_arg, t_end, samples, force, out_path);
    if (verify->parsed()) return cmd_verify(file, seed, tol_conv, tol_eq, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
