// Desk-scale acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "acp/flow.hpp"
#include "acp/suites.hpp"
#include "random_fields.hpp"

using namespace acp;
using acp::testing::all_vars;
using acp::testing::random_connection;
using acp::testing::random_point;
using acp::testing::random_polynomial;
using acp::testing::random_polynomial_text;

namespace {

DifferentiableField F(const std::string& s) { return DifferentiableField::parse(s); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [" << what << "]";
    }
  }
};

double worst(const CheckResult* c) { return c ? c->max : NAN; }

std::vector<Point> halton(const Box& box, int n, std::uint64_t seed = 0) {
  return sample_box(box, Generator::Halton, n, seed).points;
}

PoissonTriple so3(const std::string& kappa) {
  PoissonTriple t;
  t.kappa = F(kappa);
  t.beta = {F("y1"), F("y2"), F("y3")};
  return t;
}

void equivalence_fuzz(Outcome& o) {
  std::mt19937_64 rng(101);
  const auto pts = halton(uniform_box(-1, 1), 200);
  double ic = 0.0, jac = 0.0;
  long disagreements = 0, not_failing = 0;
  for (int n = 0; n < 200; ++n) {
    const FlatTripleData d = random_flat_triple(rng, n % 2 == 0);
    const PoissonTriple t{d.gamma, d.kappa0, d.beta};
    const VerificationReport good = equivalence_check(t, pts, 1e-9);
    ic = std::max(ic, worst(good.find("ic")));
    jac = std::max(jac, worst(good.find("jacobiator")));
    disagreements += static_cast<long>(good.disagreements.size());
    const VerificationReport bad = equivalence_check(perturb(t, rng), pts, 1e-9);
    disagreements += static_cast<long>(bad.disagreements.size());
    not_failing += 2 * static_cast<long>(pts.size()) - bad.find("ic")->failures - bad.find("jacobiator")->failures;
  }
  o.require(ic <= 1e-9, "flat IC residual " + format_real(ic));
  o.require(jac <= 1e-9, "flat Jacobiator residual " + format_real(jac));
  o.require(disagreements == 0, std::to_string(disagreements) + " verdict disagreements");
  o.require(not_failing == 0, std::to_string(not_failing) + " perturbed point verdicts pass");
  o.detail << " ic=" << format_real(ic) << " jacobiator=" << format_real(jac);
}

void five_dimensional_example(Outcome& o) {
  const ModelFile m = resolve_model("sec5_example");
  const PoissonTriple t = model_triple(m);
  const auto pts = halton(uniform_box(-2, 2), 1000);
  double assembly = 0.0, jac = 0.0;
  bool theta_zero = true;
  const FieldElement pi = assemble_pi(t);
  const FieldElement th = theta(t.gamma);
  for (const Point& p : pts) {
    // k (d1∧d2 + (d1 - d2)∧(dy2 + dy3)) + y1^2 dy2∧dy3
    const double k = p.y(0) * p.y(0) - p.x(0) * p.x(0) - p.x(1) * p.x(1);
    GradedElement shown(Kind::Multivector, Frame::Coordinate);
    shown[bit(0) | bit(1)] = k;
    shown[bit(0) | bit(3)] = k;
    shown[bit(0) | bit(4)] = k;
    shown[bit(1) | bit(3)] = -k;
    shown[bit(1) | bit(4)] = -k;
    shown[bit(3) | bit(4)] = p.y(0) * p.y(0);
    assembly = std::max(assembly, max_norm(values(evaluate(pi, p, 0)) - shown));
    for (double j : jacobiator(t, p)) jac = std::max(jac, std::abs(j));
    theta_zero = theta_zero && values(evaluate(th, p, 0)).is_zero();
  }
  double modular = 0.0;
  const std::array<double, 5> expected{-4, 2, 0, -2, -2};
  for (double y1 : {-1.5, 0.0, 0.7})
    for (double y3 : {-0.4, 1.1}) {
      const GradedElement z = modular_direct(t, Point(1, 2, y1, 0.3, y3));
      for (int k = 0; k < kDim; ++k) modular = std::max(modular, std::abs(z[bit(k)] - expected[k]));
    }
  const std::vector<std::pair<std::string, std::string>> families{
      {"0", "1"}, {"0", "2 + y1^2"}, {"x1", "exp(x2)"}, {"y1", "1 + x1^2"}, {"0", "-1"}, {"x2*y3", "3 + tanh(y2)"}};
  int factorization_failures = 0;
  for (const auto& [h, K] : families) {
    const VerificationReport r = unimod_global_check(t, {F(h), F(K), std::nullopt}, pts);
    factorization_failures += !r.find("kappa_factorization")->passed();
  }
  const VerificationReport own = unimod_global_check(t, model_certificate(m), pts);
  o.require(assembly == 0.0, "assembled bivector differs by " + format_real(assembly));
  o.require(jac <= 1e-9, "Jacobiator " + format_real(jac));
  o.require(theta_zero, "theta is not identically zero");
  o.require(modular <= 1e-9, "modular field off by " + format_real(modular));
  o.require(factorization_failures == static_cast<int>(families.size()),
            "a certificate family passed the factorization");
  o.require(!own.find("kappa_factorization")->passed(), "built-in certificate passed the factorization");
  o.detail << " jacobiator=" << format_real(jac) << " modular_error=" << format_real(modular);
}

void br3_family(Outcome& o) {
  const ModelFile base = resolve_model("br3_unimodular");
  for (double eps : {0.01, 0.05}) {
    ModelFile m = base;
    m.gauge->epsilon = eps;
    const PoissonTriple t = model_triple(m);
    const GaugeData g = gauge_data(m);
    const auto pts = gauge_domain(base_triple(m), g, eps, model_samples(m).points);
    const std::string tag = "eps=" + format_real(eps);
    o.require(pts.size() == static_cast<std::size_t>(m.resolution), tag + " domain dropped points");
    o.require(check_suite(t, pts, m.tol).passed(), tag + " check failed");

    const StrataReport s = strata_report(t, sample_box(m.box, m.generator, m.resolution, m.seed), m.tol);
    // cutoff(r) = exp(-r / (1 - r)) drops below tol once r >= L / (1 + L), L = -ln tol
    const double L = -std::log(10 * s.kappa_tol);
    const double band = L / (1 + L);
    long misplaced = 0;
    for (const StrataRow& row : s.rows) {
      const double r = row.point.y(0) * row.point.y(0) + row.point.y(1) * row.point.y(1) + row.point.y(2) * row.point.y(2);
      const bool inside = row.stratum.label == StratumLabel::Rank4;
      if (r >= 1.0 && inside) ++misplaced;
      if (r < band && !inside) ++misplaced;
    }
    o.require(misplaced == 0, tag + " " + std::to_string(misplaced) + " points classified off the unit ball");
    o.require(s.disagreements.empty(), tag + " strata disagreements");

    const VerificationReport u = unimod_global_check(t, model_certificate(m), pts, m.tol);
    o.require(u.passed(), tag + " global unimodularity failed");
    const double div = worst(u.find("global_volume"));
    o.require(div <= 1e-6, tag + " divergence " + format_real(div));
    o.detail << " " << tag << ":div=" << format_real(div);
  }
}

void calculus_identities(Outcome& o) {
  std::mt19937_64 rng(404);
  double cochain = 0.0, f4 = 0.0, dual = 0.0, curv = 0.0;
  for (int n = 0; n < 100; ++n) {
    const Connection g = random_connection(rng);
    const FieldElement th = theta(g), rh = rho(g);
    FieldElement forms[3] = {FieldElement(Kind::Form), FieldElement(Kind::Form), FieldElement(Kind::Form)};
    forms[0][0] = random_polynomial(rng, all_vars(), 3);
    forms[1][bit(1)] = random_polynomial(rng, all_vars(), 3);
    forms[1][bit(2)] = random_polynomial(rng, all_vars(), 3);
    forms[2][bit(0) | bit(3)] = random_polynomial(rng, all_vars(), 3);
    forms[2][bit(3) | bit(4)] = random_polynomial(rng, all_vars(), 3);
    for (int k = 0; k < 50; ++k) {
      const Point p = random_point(rng);
      const ConnectionJets j2 = g.jets(p, 2);
      for (const FieldElement& w : forms)
        for (double r : cochain_residuals(evaluate(w, p, 2), j2)) cochain = std::max(cochain, r);
      for (double r : volume_residuals(g, p)) f4 = std::max(f4, r);
      const ConnectionJets j1 = g.jets(p, 1);
      dual = std::max(dual, max_norm(theta_from_volume(j1) - values(evaluate(th, p, 0))));
      dual = std::max(dual, max_norm(rho_from_volume(j1) - values(evaluate(rh, p, 0))));
      curv = std::max(curv, curvature_rho_residual(g, p));
    }
  }
  o.require(cochain <= 1e-9, "cochain " + format_real(cochain));
  o.require(f4 <= 1e-9, "volume splitting " + format_real(f4));
  o.require(dual <= 1e-9, "dual formulas " + format_real(dual));
  o.require(curv <= 1e-9, "curvature " + format_real(curv));
  o.detail << " cochain=" << format_real(cochain) << " f4=" << format_real(f4) << " dual=" << format_real(dual)
           << " curvature=" << format_real(curv);
}

void structural_invariants(Outcome& o) {
  std::mt19937_64 rng(505);
  double roundtrip = 0.0;
  for (int n = 0; n < 50; ++n) {
    PoissonTriple t;
    t.gamma = random_connection(rng);
    t.kappa = random_polynomial(rng, all_vars(), 2);
    for (auto& b : t.beta) b = random_polynomial(rng, all_vars(), 2);
    std::vector<Point> pts;
    for (int k = 0; k < 10; ++k) pts.push_back(random_point(rng));
    const FieldElement pi = assemble_pi(t);
    const RecoveredTriple r = recover_triple(pi, t.gamma, pts);
    for (const Point& p : pts) {
      const PointRecovery at = recover_at(values(evaluate(pi, p, 0)), t.gamma.jets(p, 0).values());
      roundtrip = std::max({roundtrip, at.mixed, std::abs(at.kappa - t.kappa.value(p)),
                            std::abs(r.kappa.value(p) - t.kappa.value(p))});
      for (int a = 0; a < kFiberDim; ++a)
        roundtrip = std::max({roundtrip, std::abs(at.beta[a] - t.beta[a].value(p)),
                              std::abs(r.beta[a].value(p) - t.beta[a].value(p))});
    }
  }
  o.require(roundtrip <= 1e-12, "roundtrip " + format_real(roundtrip));

  const PoissonTriple sec5 = model_triple(resolve_model("sec5_example"));
  const auto grid = sample_box(uniform_box(-2, 2), Generator::Grid, 4).points;
  long rank_changes = 0;
  for (int n = 0; n < 20; ++n) {
    ConnectionShift xi;
    for (auto& row : xi.xi)
      for (auto& c : row) c = random_polynomial(rng, all_vars(), 2, 0.5, 4);
    const Connection shifted = shift(sec5.gamma, xi);
    for (const Point& p : grid) {
      const GradedElement pi = values(TripleJets::at(sec5, p, 0).pi());
      rank_changes += horizontal_rank(pi, sec5.gamma.jets(p, 0).values()) !=
                      horizontal_rank(pi, shifted.jets(p, 0).values());
    }
  }
  o.require(rank_changes == 0, std::to_string(rank_changes) + " horizontal rank changes");

  long disagreements = 0, rows = 0;
  for (const std::string& name : builtin_names()) {
    const ModelFile m = resolve_model(name);
    const StrataReport s = strata_report(model_triple(m), model_samples(m), m.tol);
    disagreements += static_cast<long>(s.disagreements.size());
    rows += static_cast<long>(s.rows.size());
  }
  const StrataReport g = strata_report(sec5, sample_box(uniform_box(-2, 2), Generator::Grid, 5), {});
  disagreements += static_cast<long>(g.disagreements.size());
  rows += static_cast<long>(g.rows.size());
  o.require(disagreements == 0, std::to_string(disagreements) + " strata disagreements");
  o.detail << " roundtrip=" << format_real(roundtrip) << " strata_points=" << rows;
}

void gauge_closure(Outcome& o) {
  std::mt19937_64 rng(606);
  struct Base {
    PoissonTriple t;
    std::vector<int> casimir_vars;
    std::string casimir;
  };
  PoissonTriple curved = so3("1/(3 + y3)");
  curved.gamma.gamma[0] = {F("-x2*y2"), F("x2*y1"), F("0")};
  const std::vector<Base> bases{
      {so3("2 + tanh(x1 - x2*(y1^2 + y2^2 + y3^2))"), {0, 1}, "(y1^2 + y2^2 + y3^2)"},
      {curved, {0, 1}, "(y1^2 + y2^2 + y3^2)"},
      {model_triple(resolve_model("sec5_example")), {0, 1, 2}, "y1"},
  };
  long failures = 0, beta_changes = 0, zero_changes = 0, rank_changes = 0, points = 0;
  for (int n = 0; n < 100; ++n) {
    const Base& b = bases[static_cast<std::size_t>(n) % bases.size()];
    GaugeData g;
    for (auto& m : g.mu) m = random_polynomial(rng, all_vars(), 2, 0.5, 4);
    g.c = F(random_polynomial_text(rng, b.casimir_vars, 1, 0.5, 3) + " + 0.3*" + b.casimir);
    g.epsilon = std::uniform_real_distribution<double>(0.0, 0.1)(rng);
    const auto pts = halton(uniform_box(-1, 1), 50, static_cast<std::uint64_t>(n));
    check_gauge_casimir(b.t, g, pts, 1e-9);
    const auto dom = gauge_domain(b.t, g, g.epsilon, pts);
    const PoissonTriple f = family(b.t, g, g.epsilon);
    failures += !equivalence_check(f, dom, 1e-9).passed();
    for (int a = 0; a < kFiberDim; ++a)
      for (const Point& p : dom) beta_changes += f.beta[a].value(p) != b.t.beta[a].value(p);
    for (const Point& p : dom) {
      zero_changes += (b.t.kappa.value(p) == 0.0) != (f.kappa.value(p) == 0.0);
      rank_changes += !characteristic_compare(b.t, g, g.epsilon, p).equal();
      ++points;
    }
  }
  o.require(failures == 0, std::to_string(failures) + " transformed triples fail");
  o.require(beta_changes == 0, "beta changed");
  o.require(zero_changes == 0, "zero set of kappa changed");
  o.require(rank_changes == 0, std::to_string(rank_changes) + " characteristic rank changes");
  o.detail << " domain_points=" << points;
}

void flow_diagnostics(Outcome& o) {
  const PoissonTriple rigid = so3("0");
  const DifferentiableField energy = F("y1^2/2 + y2^2/4 + y3^2/6");
  const DifferentiableField sphere = F("y1^2 + y2^2 + y3^2");
  const Point start(0, 0, 0.6, 0.7, 0.3);
  const Trajectory long_run = integrate(rigid, energy, start, 1e-3, 10000);
  const double casimir = conservation_report(rigid, long_run, {sphere}).casimir_drift.at(0);
  o.require(casimir <= 1e-9, "casimir drift " + format_real(casimir));

  std::array<double, 3> drift{};
  for (int r = 0; r < 3; ++r)
    drift[r] = conservation_report(rigid, integrate(rigid, energy, start, 0.4 / (1 << r), 50 << r), {}).energy_drift;
  for (int r = 0; r < 2; ++r) {
    const double ratio = drift[r] / drift[r + 1];
    o.require(ratio >= 8 && ratio <= 32, "drift ratio " + format_real(ratio));
    o.detail << " ratio" << r + 1 << "=" << format_real(ratio);
  }

  const PoissonTriple sec5 = model_triple(resolve_model("sec5_example"));
  std::mt19937_64 rng(707);
  std::vector<Point> starts;
  while (starts.size() < 20) {
    const Point p = random_point(rng, 1.5);
    if (std::abs(sec5.kappa.value(p)) > 0.05) starts.push_back(p);
  }
  long crossings = 0;
  for (const Trajectory& tr : integrate_all(sec5, F("x1*y2 + y3 - x2"), starts, 0.005, 400))
    crossings += conservation_report(sec5, tr, {}).kappa_crossings;
  o.require(crossings == 0, std::to_string(crossings) + " kappa sign crossings");
  o.detail << " casimir_drift=" << format_real(casimir);
}

void ad_soundness(Outcome& o) {
  std::mt19937_64 rng(808);
  const char* wrappers[] = {"sin(%)", "exp(0.3*(%))", "tanh(%)", "ln(2 + (%)^2)", "sqrt(1 + (%)^2)", "cos(%)*(%)",
                            "1/(3 + (%)^2)"};
  double fd = 0.0;
  long asymmetric = 0;
  for (int n = 0; n < 100; ++n) {
    std::string text = wrappers[n % 7];
    const std::string inner = random_polynomial_text(rng, all_vars(), 3, 0.7, 5);
    for (std::size_t k = text.find('%'); k != std::string::npos; k = text.find('%', k + inner.size()))
      text.replace(k, 1, inner);
    const DifferentiableField f = F(text);
    const Point p = random_point(rng, 1.2);
    fd = std::max(fd, finite_difference_check(f, p));
    const Jet2 j = f.evaluate(p, 2);
    for (int a = 0; a < kDim; ++a)
      for (int b = 0; b < kDim; ++b) asymmetric += j.hess(a, b) != j.hess(b, a);
  }
  o.require(fd <= 1e-5, "finite difference " + format_real(fd));
  o.require(asymmetric == 0, "Hessian asymmetry");
  o.detail << " fd=" << format_real(fd);
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"equivalence fuzz on flat and perturbed triples", equivalence_fuzz},
      {"five-dimensional example regression", five_dimensional_example},
      {"compactly supported gauge family", br3_family},
      {"bigraded calculus identities", calculus_identities},
      {"structural invariants", structural_invariants},
      {"gauge closure", gauge_closure},
      {"flow diagnostics", flow_diagnostics},
      {"automatic differentiation soundness", ad_soundness},
  };
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %d %s (%.2fs)%s\n", o.pass ? "PASS" : "FAIL", ++index, name, secs, o.detail.str().c_str());
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
