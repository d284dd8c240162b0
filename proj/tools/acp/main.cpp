// acp: verification campaigns for coupling Poisson structures on model files.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "acp/flow.hpp"
#include "acp/suites.hpp"
#include "acp/version.hpp"

namespace {

using namespace acp;
using Json = nlohmann::ordered_json;

enum Exit { kPass = 0, kFail = 1, kInput = 2, kDomain = 3 };

int emit(const Json& doc) {
  std::cout << doc.dump(2) << "\n";
  return doc.value("verdict", "fail") == "pass" ? kPass : kFail;
}

std::vector<double> split_reals(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used == 0 || used != item.size()) throw InputError("expected a number, got '" + item + "'");
    out.push_back(v);
  }
  return out;
}

struct Campaign {
  ModelFile model;
  SampleSet samples;
  PoissonTriple triple;
  std::vector<std::string> notes;
};

// Samples of the model; a gauged model is restricted to the domain of its family.
Campaign campaign(const ModelFile& m, std::optional<int> n) {
  Campaign c{m, {}, model_triple(m), {}};
  c.samples = sample_box(m.box, m.generator, n.value_or(m.resolution), m.seed);
  if (m.gauge) {
    const GaugeData g = gauge_data(m);
    const std::size_t before = c.samples.points.size();
    c.samples.points = gauge_domain(base_triple(m), g, g.epsilon, c.samples.points, m.tol.identity);
    const std::size_t dropped = before - c.samples.points.size();
    if (dropped)
      c.notes.push_back(std::to_string(dropped) + " samples outside the domain of the gauge family were dropped");
  }
  return c;
}

Json check_report(const Campaign& c, Execution ex) {
  VerificationReport rep = check_suite(c.triple, c.samples.points, c.model.tol, ex);
  for (const std::string& n : c.notes) rep.add_note(n);
  return report_json(c.model.name, c.samples, c.model.tol, rep);
}

Execution execution(bool serial) { return serial ? Execution::Serial : Execution::Parallel; }

int cmd_check(const std::string& name, std::optional<int> n, std::optional<double> tol, bool serial) {
  ModelFile m = resolve_model(name);
  if (tol) m.tol.identity = m.tol.oracle = *tol;
  return emit(check_report(campaign(m, n), execution(serial)));
}

int cmd_strata(const std::string& name, int grid, bool serial) {
  const ModelFile m = resolve_model(name);
  const SampleSet s = sample_box(m.box, Generator::Grid, grid, m.seed);
  const StrataReport r = strata_report(model_triple(m), s, m.tol, execution(serial));
  write_strata_csv(std::cout, r);
  for (const Disagreement& d : r.disagreements) std::cerr << "disagreement at " << d.point.str() << ": " << d.detail << "\n";
  return r.disagreements.empty() ? kPass : kFail;
}

int cmd_modular(const std::string& name, std::optional<int> n, bool certificate, bool serial) {
  const ModelFile m = resolve_model(name);
  const Campaign c = campaign(m, n);
  const Execution ex = execution(serial);
  VerificationReport rep = modular_suite(c.triple, c.samples.points, m.tol, ex);
  if (certificate) {
    const UnimodularityCertificate cert = model_certificate(m);
    rep.merge(cert.K ? unimod_global_check(c.triple, cert, c.samples.points, m.tol, ex)
                     : unimod_coupling_check(c.triple, cert, c.samples.points, m.tol, ex));
  }
  for (const std::string& note : c.notes) rep.add_note(note);
  Json doc = report_json(m.name, c.samples, m.tol, rep);
  const auto fields = map_points(
      c.samples.points, [&](const Point& p) { return modular_direct(c.triple, p); }, ex);
  Json rows = Json::array();
  for (std::size_t k = 0; k < fields.size(); ++k) {
    Json z = Json::array();
    for (int mu = 0; mu < kDim; ++mu) z.push_back(fields[k][bit(mu)]);
    rows.push_back({{"point", point_json(c.samples.points[k])}, {"field", z}});
  }
  doc["modular_field"] = rows;
  return emit(doc);
}

int cmd_gauge(const std::string& name, std::optional<double> eps, const std::string& sweep, const std::string& dir,
              bool serial) {
  const ModelFile m = resolve_model(name);
  if (!m.gauge) throw InputError("model '" + m.name + "' has no [gauge] block");
  std::vector<double> values;
  if (eps) values.push_back(*eps);
  if (!sweep.empty())
    for (double e : split_reals(sweep)) values.push_back(e);
  if (values.empty()) throw InputError("gauge needs --epsilon or --sweep");
  std::filesystem::create_directories(dir);
  Json out = Json::array();
  bool pass = true;
  for (double e : values) {
    ModelFile g = m;
    g.gauge->epsilon = e;
    g.name = m.name + "_eps" + format_real(e);
    const std::string path = (std::filesystem::path(dir) / (g.name + ".model")).string();
    save_model(g, path);
    Json rep = check_report(campaign(g, std::nullopt), execution(serial));
    pass = pass && rep["verdict"] == "pass";
    out.push_back({{"epsilon", e}, {"file", path}, {"report", rep}});
  }
  std::cout << out.dump(2) << "\n";
  return pass ? kPass : kFail;
}

int cmd_flow(const std::string& name, const std::string& hamiltonian, const std::string& p0, double dt, int steps,
             const std::vector<std::string>& casimirs, const std::string& volume, const std::string& csv) {
  const ModelFile m = resolve_model(name);
  const PoissonTriple t = model_triple(m);
  const auto start = split_reals(p0);
  if (start.size() != kDim) throw InputError("--p0 needs five comma-separated numbers");
  const Point p(start[0], start[1], start[2], start[3], start[4]);
  const DifferentiableField f = DifferentiableField::parse(hamiltonian);
  std::vector<DifferentiableField> cs;
  for (const std::string& c : casimirs) cs.push_back(DifferentiableField::parse(c));
  std::optional<DifferentiableField> vol;
  if (!volume.empty()) vol = DifferentiableField::parse(volume);

  const Trajectory tr = integrate(t, f, p, dt, steps);
  if (!csv.empty()) {
    std::ofstream os(csv);
    if (!os) throw InputError("cannot write '" + csv + "'");
    write_trajectory_csv(os, tr, cs);
  }
  const ConservationReport c = conservation_report(t, tr, cs, vol);
  VerificationReport rep = c.verdict(m.tol);
  if (tr.truncated) rep.add_note("trajectory truncated: " + tr.truncation);

  Json doc;
  doc["tool"] = "acp";
  doc["version"] = kVersion;
  doc["model"] = m.name;
  doc["hamiltonian"] = f.describe();
  doc["start"] = point_json(p);
  doc["dt"] = dt;
  doc["steps"] = static_cast<long>(tr.states.size()) - 1;
  doc["method"] = tr.method;
  doc["error_estimate"] = tr.error_estimate;
  doc["truncated"] = tr.truncated;
  doc["energy_drift"] = c.energy_drift;
  doc["casimir_drift"] = c.casimir_drift;
  doc["kappa_crossings"] = c.kappa_crossings;
  doc["divergence_integral"] = c.divergence_integral ? Json(*c.divergence_integral) : Json(nullptr);
  const Json checks = report_json(m.name, SampleSet{}, m.tol, rep);
  doc["checks"] = checks["checks"];
  doc["notes"] = checks["notes"];
  doc["verdict"] = checks["verdict"];
  return emit(doc);
}

// Each built-in must meet its expectation, then the fuzz campaigns run at
// reduced size.
int cmd_selftest(bool serial) {
  const Execution ex = execution(serial);
  bool ok = true;
  auto line = [&](const std::string& what, bool pass) {
    std::cout << (pass ? "ok   " : "FAIL ") << what << "\n";
    ok = ok && pass;
  };
  for (const std::string& name : builtin_names()) {
    const ModelFile m = resolve_model(name);
    const bool expect = name != "broken_ic3";
    const Json rep = check_report(campaign(m, 200), ex);
    line("check " + name + (expect ? "" : " (expected to fail)"), (rep["verdict"] == "pass") == expect);
  }
  {
    const ModelFile m = resolve_model("br3_unimodular");
    const Campaign c = campaign(m, 200);
    line("certificate br3_unimodular",
         unimod_global_check(c.triple, model_certificate(m), c.samples.points, m.tol, ex).passed());
  }
  {
    const ModelFile m = resolve_model("sec5_example");
    const Campaign c = campaign(m, 200);
    line("certificate sec5_example (expected to fail)",
         !unimod_global_check(c.triple, model_certificate(m), c.samples.points, m.tol, ex).passed());
  }
  {
    const ModelFile m = resolve_model("flat_pair_flatness");
    const Campaign c = campaign(m, 200);
    line("modular flat_pair_flatness", modular_suite(c.triple, c.samples.points, m.tol, ex).passed());
  }

  std::mt19937_64 rng(20240517);
  const std::vector<Point> pts = sample_box(uniform_box(-1, 1), Generator::Halton, 50).points;
  int flat_pass = 0, broken_fail = 0, agree = 0;
  const int n = 20;
  for (int k = 0; k < n; ++k) {
    const FlatTripleData d = random_flat_triple(rng, k % 2 == 0);
    const PoissonTriple t{d.gamma, d.kappa0, d.beta};
    const VerificationReport good = equivalence_check(t, pts, 1e-9, ex);
    flat_pass += good.passed();
    const VerificationReport bad = equivalence_check(perturb(t, rng), pts, 1e-9, ex);
    broken_fail += !bad.passed();
    agree += good.disagreements.empty() && bad.disagreements.empty();
  }
  line("fuzz: " + std::to_string(flat_pass) + "/" + std::to_string(n) + " flat triples pass", flat_pass == n);
  line("fuzz: " + std::to_string(broken_fail) + "/" + std::to_string(n) + " perturbed triples fail", broken_fail == n);
  line("fuzz: verdicts agree on " + std::to_string(agree) + "/" + std::to_string(n) + " pairs", agree == n);
  return ok ? kPass : kFail;
}

int cmd_show(const std::string& name) {
  if (name.empty()) {
    for (const std::string& n : builtin_names()) std::cout << n << "\n";
  } else {
    std::cout << format_model(resolve_model(name));
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification campaigns for coupling Poisson structures"};
  app.set_version_flag("--version", std::string(acp::kVersion));
  app.require_subcommand(1);
  std::string model;
  std::optional<int> samples;
  bool serial = false;
  std::function<int()> run;

  auto add_common = [&](CLI::App* c) {
    c->add_option("model", model, "model file or built-in name")->required();
    c->add_flag("--serial", serial, "run the serial reference kernels");
  };

  std::optional<double> tol;
  auto* check = app.add_subcommand("check", "identity suites; JSON report");
  add_common(check);
  check->add_option("--samples", samples, "sample count override")->check(CLI::PositiveNumber);
  check->add_option("--tol", tol, "identity and oracle tolerance")->check(CLI::PositiveNumber);
  check->callback([&] { run = [&] { return cmd_check(model, samples, tol, serial); }; });

  int grid = 5;
  auto* strata = app.add_subcommand("strata", "stratification CSV on a grid");
  add_common(strata);
  strata->add_option("--grid", grid, "nodes per axis")->check(CLI::PositiveNumber);
  strata->callback([&] { run = [&] { return cmd_strata(model, grid, serial); }; });

  bool with_certificate = false;
  auto* modular = app.add_subcommand("modular", "modular field samples; JSON report");
  add_common(modular);
  modular->add_option("--samples", samples, "sample count override")->check(CLI::PositiveNumber);
  modular->add_flag("--certificate", with_certificate, "run the unimodularity checks of the [certificate] block");
  modular->callback([&] { run = [&] { return cmd_modular(model, samples, with_certificate, serial); }; });

  std::optional<double> eps;
  std::string sweep, out_dir = ".";
  auto* gauge = app.add_subcommand("gauge", "gauge family models and their check reports");
  add_common(gauge);
  gauge->add_option("--epsilon", eps, "deformation parameter");
  gauge->add_option("--sweep", sweep, "comma-separated list of parameters");
  gauge->add_option("--out-dir", out_dir, "directory for the transformed models");
  gauge->callback([&] { run = [&] { return cmd_gauge(model, eps, sweep, out_dir, serial); }; });

  std::string hamiltonian, p0, volume, csv;
  double dt = 0.01;
  int steps = 100;
  std::vector<std::string> casimirs;
  auto* flow = app.add_subcommand("flow", "RK4 trajectory and conservation report");
  add_common(flow);
  flow->add_option("--hamiltonian", hamiltonian, "Hamiltonian expression")->required();
  flow->add_option("--p0", p0, "start point x1,x2,y1,y2,y3")->required();
  flow->add_option("--dt", dt, "step size");
  flow->add_option("--steps", steps, "number of steps");
  flow->add_option("--casimir", casimirs, "Casimir expression to monitor (repeatable)");
  flow->add_option("--volume", volume, "volume factor a of a Omega for the divergence integral");
  flow->add_option("--csv", csv, "trajectory CSV output file");
  flow->callback([&] { run = [&] { return cmd_flow(model, hamiltonian, p0, dt, steps, casimirs, volume, csv); }; });

  auto* selftest = app.add_subcommand("selftest", "built-in examples and fuzz campaigns");
  selftest->add_flag("--serial", serial, "run the serial reference kernels");
  selftest->callback([&] { run = [&] { return cmd_selftest(serial); }; });

  std::string name;
  auto* show = app.add_subcommand("show", "list built-in models or print one");
  show->add_option("name", name, "built-in name or model file");
  show->callback([&] { run = [&] { return cmd_show(name); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kInput;
  }

  try {
    return run();
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const OrderBudgetExceeded& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const ResidualError& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kFail;
  } catch (const Error& e) {
    std::cerr << "numeric domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  }
}
