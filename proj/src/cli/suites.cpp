#include "acp/suites.hpp"

#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include "acp/version.hpp"

namespace acp {

namespace {

struct CheckRow {
  double cochain = NAN;
  double f4 = NAN;
  double c2 = NAN;
  double c3 = NAN;
  double c5 = NAN;
  double cocycle = NAN;
  double curvature = NAN;
};

void record(CheckResult& c, double r, const Point& p) {
  if (std::isnan(r))
    c.skip();
  else
    c.record(r, p);
}

// A 0-form, a (1,0)+(0,1) form and a (1,1)+(0,2) form built from the cubic
// test Hamiltonians.
std::array<JetElement, 3> cochain_forms(const std::vector<DifferentiableField>& hs, const Point& p) {
  const Jet2 a = hs[5].evaluate(p, 2), b = hs[6].evaluate(p, 2), c = hs[7].evaluate(p, 2);
  JetElement f0(Kind::Form), f1(Kind::Form), f2(Kind::Form);
  f0[0] = a;
  f1[bit(0)] = b;
  f1[bit(3)] = c;
  f2[bit(0) | bit(4)] = a;
  f2[bit(2) | bit(3)] = b;
  return {f0, f1, f2};
}

// 1 + |d(1/kappa)| |beta| at a coupling-domain point.
double inverse_scale(const TripleJets& j) {
  const double k = j.kappa.value();
  double grad = 0.0, beta = 0.0;
  for (int m = 0; m < kDim; ++m) grad = std::max(grad, std::abs(j.kappa.grad(m)));
  for (const auto& b : j.beta) beta = std::max(beta, std::abs(b.value()));
  return 1.0 + grad / (k * k) * beta;
}

}  // namespace

VerificationReport check_suite(const PoissonTriple& t, const std::vector<Point>& samples, const Tolerances& tol,
                               Execution ex) {
  VerificationReport rep = equivalence_check(t, samples, tol.identity, ex);
  const double kappa_tol = kappa_tolerance(t, samples, tol.kappa_relative);
  const bool second = t.gamma.budget() >= 2;
  const auto hs = test_hamiltonians();
  const auto rows = map_points(
      samples,
      [&](const Point& p) {
        CheckRow r;
        const TripleJets j = TripleJets::at(t, p, 1);
        const double s = verdict_scale(j);
        if (second) {
          const ConnectionJets g = t.gamma.jets(p, 2);
          double worst = 0.0;
          for (const JetElement& f : cochain_forms(hs, p))
            for (double v : cochain_residuals(f, g)) worst = std::max(worst, v);
          r.cochain = worst / s;
        }
        const auto v = volume_residuals(t.gamma, p);
        r.f4 = std::max(v[0], v[1]) / s;
        if (std::abs(j.kappa.value()) > kappa_tol) {
          r.c2 = c2_residual(t, p) / s;
          const double inv = inverse_scale(j);
          r.c3 = c3_residual(t, p, kappa_tol) / (s * inv);
          r.cocycle = cocycle_residual(t, p, kappa_tol) / s;
          r.curvature = curvature_identity_residual(t, p, kappa_tol) / (s * inv);
        } else {
          r.c5 = c5_residual(t, p) / s;
        }
        return r;
      },
      ex);
  CheckResult& cochain = rep.check("cochain", tol.identity);
  CheckResult& f4 = rep.check("volume_splitting", tol.identity);
  CheckResult& c2 = rep.check("c2", tol.identity);
  CheckResult& c3 = rep.check("c3", tol.identity);
  CheckResult& c5 = rep.check("c5", tol.identity);
  CheckResult& cocycle = rep.check("cocycle", tol.identity);
  CheckResult& curv = rep.check("curvature_identity", tol.identity);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const CheckRow& r = rows[k];
    const Point& p = samples[k];
    record(cochain, r.cochain, p);
    record(f4, r.f4, p);
    record(c2, r.c2, p);
    record(c3, r.c3, p);
    record(c5, r.c5, p);
    record(cocycle, r.cocycle, p);
    record(curv, r.curvature, p);
  }
  if (!second) cochain.note = "connection has only 1-jets; cochain identities skipped";
  c5.note = "evaluated where |kappa| <= kappa_tol";
  return rep;
}

VerificationReport modular_suite(const PoissonTriple& t, const std::vector<Point>& samples, const Tolerances& tol,
                                 Execution ex) {
  const bool second = t.budget() >= 2;
  const DifferentiableField one = DifferentiableField::constant(1.0);
  struct Row {
    double bigraded = 0.0;
    double lie = NAN;
  };
  const auto rows = map_points(
      samples,
      [&](const Point& p) {
        Row r;
        const BigradedModular z = modular_bigraded(t, p);
        const GradedElement direct = modular_direct(t, p);
        const GradedElement sum = to_coordinate(z.z10 + z.z01, t.gamma.jets(p, 0).values());
        r.bigraded = max_norm(sum - direct) / (1.0 + max_norm(direct));
        if (second) r.lie = modular_lie_residual(t, one, p) / verdict_scale(TripleJets::at(t, p, 1));
        return r;
      },
      ex);
  VerificationReport rep;
  CheckResult& b = rep.check("bigraded_vs_direct", tol.oracle);
  CheckResult& l = rep.check("lie_derivative", tol.identity);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    b.record(rows[k].bigraded, samples[k]);
    record(l, rows[k].lie, samples[k]);
  }
  if (!second) l.note = "triple has only 1-jets; L_Z Pi skipped";
  return rep;
}

nlohmann::ordered_json point_json(const Point& p) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (int k = 0; k < kDim; ++k) a.push_back(p[k]);
  return a;
}

nlohmann::ordered_json report_json(const std::string& model, const SampleSet& s, const Tolerances& tol,
                                   const VerificationReport& rep) {
  using J = nlohmann::ordered_json;
  J doc;
  doc["tool"] = "acp";
  doc["version"] = kVersion;
  doc["model"] = model;
  J box = J::array();
  for (const Interval& iv : s.box) box.push_back({iv.lo, iv.hi});
  doc["samples"] = {{"generator", generator_name(s.generator)},
                    {"resolution", s.count},
                    {"seed", s.seed},
                    {"points", s.points.size()},
                    {"box", box}};
  doc["tolerances"] = {{"identity", tol.identity},
                       {"oracle", tol.oracle},
                       {"conservation", tol.conservation},
                       {"finite_difference", tol.finite_difference},
                       {"kappa_relative", tol.kappa_relative},
                       {"beta_relative", tol.beta_relative}};
  J checks = J::array();
  for (const CheckResult& c : rep.checks) {
    J e;
    e["id"] = c.id;
    e["tol"] = c.tol;
    e["count"] = c.count;
    e["skipped"] = c.skipped;
    e["failures"] = c.failures;
    e["max"] = c.max;
    e["mean"] = c.mean();
    e["worst"] = c.worst ? point_json(*c.worst) : J(nullptr);
    e["verdict"] = c.passed() ? "pass" : "fail";
    if (!c.note.empty()) e["note"] = c.note;
    checks.push_back(e);
  }
  doc["checks"] = checks;
  J dis = J::array();
  for (const Disagreement& d : rep.disagreements) dis.push_back({{"point", point_json(d.point)}, {"detail", d.detail}});
  doc["disagreements"] = dis;
  doc["notes"] = rep.notes;
  doc["verdict"] = rep.passed() ? "pass" : "fail";
  return doc;
}

namespace {

const char* const kSec5 = R"([model]
name = sec5_example

[connection]
gamma1_2 = -1
gamma1_3 = -1
gamma2_2 = -1
gamma2_3 = -1

[kappa]
expr = y1^2 - x1^2 - x2^2

[beta]
beta1 = y1^2
beta2 = 0
beta3 = 0

[certificate]
h = 0
K = 1

[sampling]
box = [-2, 2] [-2, 2] [-2, 2] [-2, 2] [-2, 2]
generator = halton
resolution = 1000
)";

const char* const kBroken = R"([model]
name = broken_ic3

[connection]
gamma1_2 = -1
gamma1_3 = -1
gamma2_2 = -1
gamma2_3 = -1

[kappa]
expr = y1^2 - x1^2 - x2^2 + y2

[beta]
beta1 = y1^2
beta2 = 0
beta3 = 0

[sampling]
box = [-2, 2] [-2, 2] [-2, 2] [-2, 2] [-2, 2]
generator = halton
resolution = 1000
)";

const char* const kBr3 = R"([model]
name = br3_unimodular

[kappa]
expr = cutoff(y1^2 + y2^2 + y3^2)

[beta]
beta1 = y1
beta2 = y2
beta3 = y3

[gauge]
mu1 = y3
mu2 = 0
c = 0
epsilon = 0.05

[certificate]
h = 0
K = auto

[sampling]
box = [-1, 1] [-1, 1] [-1.5, 1.5] [-1.5, 1.5] [-1.5, 1.5]
generator = halton
resolution = 1000
)";

const char* const kFlatSo3 = R"([model]
name = flat_so3

[kappa]
expr = 2 + tanh(x1 - x2*(y1^2 + y2^2 + y3^2))

[beta]
beta1 = y1
beta2 = y2
beta3 = y3

[certificate]
h = 0
K = 2 + tanh(x1 - x2*(y1^2 + y2^2 + y3^2))

[sampling]
box = [-1, 1] [-1, 1] [-1, 1] [-1, 1] [-1, 1]
generator = halton
resolution = 1000
)";

const char* const kFlatPair = R"([model]
name = flat_pair_flatness

[connection]
gamma1_1 = -y2
gamma1_2 = y1

[kappa]
expr = 2 + tanh(x2 - (y1^2 + y2^2 + y3^2))

[beta]
beta1 = y1
beta2 = y2
beta3 = y3

[sampling]
box = [-1, 1] [-1, 1] [-1, 1] [-1, 1] [-1, 1]
generator = halton
resolution = 1000
)";

const std::map<std::string, std::string>& builtins() {
  static const std::map<std::string, std::string> m{{"sec5_example", kSec5},
                                                    {"br3_unimodular", kBr3},
                                                    {"flat_so3", kFlatSo3},
                                                    {"flat_pair_flatness", kFlatPair},
                                                    {"broken_ic3", kBroken}};
  return m;
}

// Sparse polynomial in the chart variables with two-decimal coefficients.
struct Poly {
  std::map<std::array<int, kDim>, double> terms;

  std::string str() const {
    if (terms.empty()) return "0";
    std::string s;
    for (const auto& [e, c] : terms) {
      if (!s.empty()) s += " + ";
      s += "(" + format_real(c) + ")";
      for (int k = 0; k < kDim; ++k) {
        if (e[k] == 0) continue;
        s += "*" + std::string(k < kBaseDim ? "x" : "y") + std::to_string(k < kBaseDim ? k + 1 : k - 1);
        if (e[k] > 1) s += "^" + std::to_string(e[k]);
      }
    }
    return s;
  }

  Poly d(int k) const {
    Poly r;
    for (const auto& [key, c] : terms) {
      if (key[k] == 0) continue;
      auto e = key;
      --e[k];
      r.terms[e] += c * key[k];
    }
    return r;
  }
};

double coefficient(std::mt19937_64& rng, double scale) {
  std::uniform_int_distribution<int> u(-100, 100);
  int v = 0;
  while (v == 0) v = u(rng);
  return scale * v / 100.0;
}

// `n` random monomials of total degree 1..deg in the listed variables.
Poly random_poly(std::mt19937_64& rng, const std::vector<int>& vars, int deg, int n, double scale) {
  Poly p;
  std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
  std::uniform_int_distribution<int> degree(1, deg);
  for (int t = 0; t < n; ++t) {
    std::array<int, kDim> e{};
    const int d = degree(rng);
    for (int k = 0; k < d; ++k) ++e[vars[pick(rng)]];
    p.terms[e] += coefficient(rng, scale);
  }
  return p;
}

DifferentiableField F(const std::string& s) { return DifferentiableField::parse(s); }

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, text] : builtins()) v.push_back(k);
    return v;
  }();
  return names;
}

const std::string& builtin_text(const std::string& name) {
  const auto it = builtins().find(name);
  if (it == builtins().end()) throw InputError("unknown built-in model '" + name + "'");
  return it->second;
}

ModelFile resolve_model(const std::string& path_or_name) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(path_or_name, ec)) return load_model(path_or_name);
  if (builtins().count(path_or_name)) return parse_model(builtin_text(path_or_name));
  throw InputError("'" + path_or_name + "' is neither a readable model file nor a built-in model");
}

FlatTripleData random_flat_triple(std::mt19937_64& rng, bool closed_beta) {
  const std::vector<int> fiber{2, 3, 4};
  // phi must involve two fiber variables, else a coordinate is a Casimir and
  // the kappa perturbation below can stay Poisson
  const auto involved = [](const Poly& q) {
    int n = 0;
    for (int a = 0; a < kFiberDim; ++a) n += !q.d(y_index(a)).terms.empty();
    return n;
  };
  Poly phi = random_poly(rng, fiber, 3, 4, 1.0);
  while (involved(phi) < 2) phi = random_poly(rng, fiber, 3, 4, 1.0);
  std::string factor;
  if (!closed_beta) factor = "exp(" + random_poly(rng, fiber, 2, 2, 0.3).str() + ")*";

  FlatTripleData out;
  std::array<Poly, kFiberDim> grad_phi;
  for (int a = 0; a < kFiberDim; ++a) {
    grad_phi[a] = phi.d(y_index(a));
    out.beta[a] = F(factor + "(" + grad_phi[a].str() + ")");
  }

  // gamma_i = -X_h for h in (x_i, y); the other component vanishes
  const int i = std::uniform_int_distribution<int>(0, 1)(rng);
  const Poly h = random_poly(rng, {i, 2, 3, 4}, 2, 3, 1.0);
  for (int b = 0; b < kFiberDim; ++b) {
    const int a = (b + 1) % 3, c = (b + 2) % 3;
    // eps_abc d_a h beta_c with (a, b, c) = (b+1, b, b+2) odd: sign -1
    const std::string term = "(" + h.d(y_index(c)).str() + ")*(" + factor + "(" + grad_phi[a].str() + ")) - (" +
                             h.d(y_index(a)).str() + ")*(" + factor + "(" + grad_phi[c].str() + "))";
    out.gamma.gamma[i][b] = F(term);
  }

  const Poly base = random_poly(rng, {0, 1}, 2, 3, 1.0);
  const double c1 = coefficient(rng, 1.0), c2 = coefficient(rng, 0.5);
  out.kappa0 = F("1.5 + " + base.str() + " + (" + format_real(c1) + ")*(" + phi.str() + ") + (" + format_real(c2) +
                 ")*(" + phi.str() + ")^2");
  return out;
}

PoissonTriple perturb(const PoissonTriple& t, std::mt19937_64& rng) {
  PoissonTriple out = t;
  const int j = std::uniform_int_distribution<int>(0, 2)(rng);
  if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
    out.kappa = out.kappa + 0.3 * DifferentiableField::variable(y_index(j));
  } else {
    // a fiber-quadratic shift along one fiber axis is not a Poisson vector field
    const DifferentiableField y = DifferentiableField::variable(y_index(j));
    out.gamma.gamma[0][j] = out.gamma.gamma[0][j] + 0.3 * y * y;
  }
  return out;
}

}  // namespace acp
