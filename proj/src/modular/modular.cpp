#include "acp/modular.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "acp/expression.hpp"

namespace acp {

namespace {

constexpr std::array<std::array<int, 3>, 3> kCyclic{{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}};

Jet2 require_volume(const Jet2& a, const Point& p) {
  if (!(std::abs(a.value()) > 0.0) || !std::isfinite(a.value()))
    throw ZeroVolumeFactor("volume factor vanishes at " + p.str());
  return a;
}

// Z^mu = Σ_ν ∂_ν Pi^{μν} + Pi^{μν} ∂_ν a / a, one jet order below the inputs.
JetElement modular_jets(const JetElement& pi, const Jet2& a) {
  const Jet2 inv = reciprocal(a);
  JetElement z(Kind::Multivector, Frame::Coordinate);
  for (int mu = 0; mu < kDim; ++mu) {
    Jet2 s(0.0, 2);
    for (int nu = 0; nu < kDim; ++nu) {
      const Jet2 e = bivector_entry(pi, mu, nu);
      if (e.is_zero()) continue;
      s += e.partial(nu) + e.truncated(e.order() - 1) * a.partial(nu) * inv.truncated(inv.order() - 1);
    }
    z[bit(mu)] = s;
  }
  return z;
}

// theta_i = -Σ_a ∂_{y_a} gamma_i^a, one order below the connection jets.
std::array<Jet2, kBaseDim> theta_jets(const ConnectionJets& g) {
  std::array<Jet2, kBaseDim> th;
  for (int i = 0; i < kBaseDim; ++i) {
    Jet2 s(0.0, 2);
    for (int a = 0; a < kFiberDim; ++a) s -= g.gamma[i][a].partial(y_index(a));
    th[i] = s;
  }
  return th;
}

std::array<double, kFiberDim> rho_values(const ConnectionJets& g) {
  std::array<double, kFiberDim> r{};
  const auto& g1 = g.gamma[0];
  const auto& g2 = g.gamma[1];
  for (int a = 0; a < kFiberDim; ++a) {
    double c = g1[a].grad(x_index(1)) - g2[a].grad(x_index(0));
    for (int b = 0; b < kFiberDim; ++b)
      c += g1[b].value() * g2[a].grad(y_index(b)) - g2[b].value() * g1[a].grad(y_index(b));
    r[a] = c;
  }
  return r;
}

double hor(const Jet2& f, const ConnectionJets& g, int i) {
  double s = f.grad(x_index(i));
  for (int a = 0; a < kFiberDim; ++a) s -= g.gamma[i][a].value() * f.grad(y_index(a));
  return s;
}

// max over (a, b) of |∂_a f beta_b - ∂_b f beta_a|.
double wedge_beta(const Jet2& f, const std::array<Jet2, kFiberDim>& beta) {
  double r = 0.0;
  for (const auto& [a, b, c] : kCyclic) {
    (void)c;
    r = std::max(r, std::abs(f.grad(y_index(a)) * beta[b].value() - f.grad(y_index(b)) * beta[a].value()));
  }
  return r;
}

// max over (a, b) of |∂_a beta_b - ∂_b beta_a|.
double d01_beta(const std::array<Jet2, kFiberDim>& beta) {
  double r = 0.0;
  for (const auto& [a, b, c] : kCyclic) {
    (void)c;
    r = std::max(r, std::abs(beta[b].grad(y_index(a)) - beta[a].grad(y_index(b))));
  }
  return r;
}

// div of X_f for the density a and the sum of the absolute terms; j needs
// 1-jets, f 2-jets.
std::pair<double, double> divergence_terms(const TripleJets& j, const Jet2& f, const Jet2& a) {
  const JetElement x = hamiltonian_field(j, f);
  double div = 0.0, size = 0.0;
  for (int nu = 0; nu < kDim; ++nu) {
    const Jet2& c = x[bit(nu)];
    const double d = c.grad(nu);
    const double w = c.value() * a.grad(nu) / a.value();
    div += d + w;
    size += std::abs(d) + std::abs(w);
  }
  return {div, size};
}

double relative_divergence(const TripleJets& j, const Jet2& f, const Jet2& a) {
  const auto [div, size] = divergence_terms(j, f, a);
  return std::abs(div) / (1.0 + size);
}

double worst_divergence(const TripleJets& j, const std::vector<DifferentiableField>& hs, const Point& p,
                        const Jet2& a) {
  double r = 0.0;
  for (const auto& f : hs) {
    const double d = relative_divergence(j, f.evaluate(p, 2), a);
    if (std::isnan(d)) return d;
    r = std::max(r, d);
  }
  return r;
}

// Residuals of one sample; NaN marks a skipped slot.
struct Row {
  double cl1 = NAN;
  double theta_exact = NAN;
  double h_casimir = NAN;
  double invariant_volume = NAN;
  double factorization = NAN;
  double kappa0_casimir = NAN;
  double k_casimir = NAN;
  double global_volume = NAN;
};

void record(CheckResult& c, double r, const Point& p) {
  if (std::isnan(r))
    c.skip();
  else
    c.record(r, p);
}

Row coupling_row(const PoissonTriple& t, const DifferentiableField& h, const std::vector<DifferentiableField>& hs,
                 const Point& p, double kappa_tol) {
  Row r;
  const TripleJets j = TripleJets::at(t, p, 1);
  if (!(std::abs(j.kappa.value()) > kappa_tol)) return r;
  const Jet2 hj = h.evaluate(p, 1);
  r.cl1 = d01_beta(j.beta);
  const auto th = theta_jets(t.gamma.jets(p, 1));
  r.theta_exact = 0.0;
  for (int i = 0; i < kBaseDim; ++i)
    r.theta_exact = std::max(r.theta_exact, std::abs(th[i].value() + hor(hj, j.gamma, i)));
  r.h_casimir = wedge_beta(hj, j.beta);
  const Jet2 a = apply_builtin(Builtin::Exp, hj) * reciprocal(j.kappa);
  r.invariant_volume = worst_divergence(j, hs, p, a);
  return r;
}

}  // namespace

GradedElement modular_direct(const PoissonTriple& t, const DifferentiableField& a, const Point& p) {
  const TripleJets j = TripleJets::at(t, p, 1);
  return values(modular_jets(j.pi(), require_volume(a.evaluate(p, 1), p)));
}

GradedElement modular_direct(const PoissonTriple& t, const Point& p) {
  return modular_direct(t, DifferentiableField::constant(1.0), p);
}

BigradedModular modular_bigraded(const PoissonTriple& t, const Point& p) {
  const TripleJets j = TripleJets::at(t, p, 1);
  const auto th = theta_jets(j.gamma);
  const auto rho = rho_values(j.gamma);
  const double k = j.kappa.value();

  GradedElement one0(Kind::Form);
  for (int i = 0; i < kBaseDim; ++i) one0[bit(x_index(i))] = k * th[i].value() + hor(j.kappa, j.gamma, i);

  // d01 beta + kappa rho on eta^a ∧ eta^b; rho = -1/2 e_abc rho^a eta^b ∧ eta^c
  GradedElement two(Kind::Form);
  for (const auto& [a, b, c] : kCyclic) {
    const double d = j.beta[b].grad(y_index(a)) - j.beta[a].grad(y_index(b)) - k * rho[c];
    const Mask m = bit(y_index(a)) | bit(y_index(b));
    two[m] = a < b ? d : -d;
  }

  BigradedModular z;
  z.z10 = -interior(one0, chart::lifted_base_bivector());
  z.z01 = interior(two, chart::vertical_dual());
  return z;
}

double renormalization_check(const PoissonTriple& t, const DifferentiableField& a, const Point& p) {
  const Jet2 aj = require_volume(a.evaluate(p, 1), p);
  const GradedElement pi = values(TripleJets::at(t, p, 0).pi());
  GradedElement da(Kind::Form, Frame::Coordinate);
  for (int k = 0; k < kDim; ++k) da[bit(k)] = aj.grad(k);
  const GradedElement rule = modular_direct(t, p) - (1.0 / aj.value()) * interior(da, pi);
  return max_norm(modular_direct(t, a, p) - rule);
}

GradedElement modular_prime_horizontal(const PoissonTriple& t, const Point& p, double kappa_tol) {
  const TripleJets j = TripleJets::at(t, p, 1);
  if (!(std::abs(j.kappa.value()) > kappa_tol)) throw OutsideCouplingDomain(j.kappa.value());
  const auto th = theta_jets(j.gamma);
  GradedElement theta(Kind::Form);
  for (int i = 0; i < kBaseDim; ++i) theta[bit(x_index(i))] = th[i].value();
  return j.kappa.value() * interior(theta, chart::horizontal_dual());
}

Closedness closedness_check(const PoissonTriple& t, const Point& p, double tol, double kappa_tol) {
  const TripleJets j = TripleJets::at(t, p, 1);
  Closedness c;
  c.d_beta = d01_beta(j.beta);
  if (!(c.d_beta <= tol) || !(std::abs(j.kappa.value()) > kappa_tol)) return c;
  const ConnectionJets g = t.gamma.jets(p, 2);
  const auto th = theta_jets(g);
  double cas = 0.0;
  JetElement form(Kind::Form);
  for (int i = 0; i < kBaseDim; ++i) {
    cas = std::max(cas, wedge_beta(th[i], j.beta));
    form[bit(x_index(i))] = th[i];
  }
  c.theta_casimir = cas;
  c.d_theta = max_norm(values(split_d(form, g).d10));
  return c;
}

double modular_lie_residual(const PoissonTriple& t, const DifferentiableField& a, const Point& p) {
  const TripleJets j = TripleJets::at(t, p, 2);
  const JetElement pi = j.pi();
  const JetElement z = modular_jets(pi, require_volume(a.evaluate(p, 2), p));
  return max_norm(lie_derivative_bivector(z, pi));
}

double hamiltonian_divergence(const PoissonTriple& t, const DifferentiableField& f, const DifferentiableField& a,
                              const Point& p) {
  const TripleJets j = TripleJets::at(t, p, 1);
  return relative_divergence(j, f.evaluate(p, 2), require_volume(a.evaluate(p, 1), p));
}

double volume_divergence(const PoissonTriple& t, const DifferentiableField& f, const DifferentiableField& a,
                         const Point& p) {
  const TripleJets j = TripleJets::at(t, p, 1);
  return divergence_terms(j, f.evaluate(p, 2), require_volume(a.evaluate(p, 1), p)).first;
}

std::vector<DifferentiableField> test_hamiltonians() {
  static const char* names[] = {"x1", "x2", "y1", "y2", "y3"};
  std::vector<DifferentiableField> hs;
  for (int k = 0; k < kDim; ++k) hs.push_back(DifferentiableField::variable(k));
  std::mt19937_64 rng(20240517);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_int_distribution<int> var(0, kDim - 1);
  for (int n = 0; n < 3; ++n) {
    std::ostringstream os;
    for (int term = 0; term < 8; ++term) {
      if (term) os << " + ";
      os << "(" << format_real(coeff(rng)) << ")";
      for (int d = 0; d < 1 + term % 3; ++d) os << "*" << names[var(rng)];
    }
    hs.push_back(DifferentiableField::parse(os.str()));
  }
  return hs;
}

VerificationReport unimod_coupling_check(const PoissonTriple& t, const UnimodularityCertificate& cert,
                                         const std::vector<Point>& samples, const Tolerances& tol, Execution ex) {
  if (!cert.h) throw MissingCertificate("certificate needs h");
  const double kappa_tol = kappa_tolerance(t, samples, tol.kappa_relative);
  const auto hs = test_hamiltonians();
  const auto rows = map_points(samples, [&](const Point& p) { return coupling_row(t, *cert.h, hs, p, kappa_tol); }, ex);
  VerificationReport rep;
  CheckResult& cl1 = rep.check("cl1", tol.identity);
  CheckResult& exact = rep.check("theta_exact", tol.identity);
  CheckResult& cas = rep.check("h_casimir", tol.identity);
  CheckResult& vol = rep.check("invariant_volume", tol.identity);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    record(cl1, rows[k].cl1, samples[k]);
    record(exact, rows[k].theta_exact, samples[k]);
    record(cas, rows[k].h_casimir, samples[k]);
    record(vol, rows[k].invariant_volume, samples[k]);
  }
  if (cl1.count == 0) rep.add_note("no sample lies in the coupling domain");
  return rep;
}

VerificationReport unimod_global_check(const PoissonTriple& t, const UnimodularityCertificate& cert,
                                       const std::vector<Point>& samples, const Tolerances& tol, Execution ex) {
  if (!cert.h || !cert.K) throw MissingCertificate("global certificate needs h and K");
  const DifferentiableField& h = *cert.h;
  const DifferentiableField& K = *cert.K;

  int sign = 0;
  for (const Point& p : samples) {
    const double v = K.value(p);
    const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    if (s == 0 || !std::isfinite(v)) throw ZeroVolumeFactor("K vanishes at " + p.str());
    if (sign != 0 && s != sign) throw ZeroVolumeFactor("K changes sign across the samples near " + p.str());
    sign = s;
  }

  const double kappa_tol = kappa_tolerance(t, samples, tol.kappa_relative);
  const auto hs = test_hamiltonians();
  const auto rows = map_points(
      samples,
      [&](const Point& p) {
        Row r = coupling_row(t, h, hs, p, kappa_tol);
        const TripleJets j = TripleJets::at(t, p, 1);
        const Jet2 kj = K.evaluate(p, 1);
        if (std::abs(j.kappa.value()) > kappa_tol) {
          const double k0 = cert.kappa0 ? cert.kappa0->value(p) : 1.0;
          r.factorization = std::abs(j.kappa.value() - std::exp(h.value(p)) * k0 * kj.value());
        } else {
          r.k_casimir = wedge_beta(kj, j.beta);
        }
        if (cert.kappa0) {
          const auto c = casimir_residual(t, *cert.kappa0, p);
          r.kappa0_casimir = std::max(c[0], c[1]);
        }
        r.global_volume = worst_divergence(j, hs, p, reciprocal(kj));
        return r;
      },
      ex);

  VerificationReport rep;
  CheckResult& cl1 = rep.check("cl1", tol.identity);
  CheckResult& exact = rep.check("theta_exact", tol.identity);
  CheckResult& cas = rep.check("h_casimir", tol.identity);
  CheckResult& vol = rep.check("invariant_volume", tol.identity);
  CheckResult& fac = rep.check("kappa_factorization", tol.identity);
  CheckResult* k0 = cert.kappa0 ? &rep.check("kappa0_casimir", tol.identity) : nullptr;
  CheckResult& kc = rep.check("K_casimir", tol.identity);
  CheckResult& gv = rep.check("global_volume", tol.identity);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Row& r = rows[k];
    const Point& p = samples[k];
    record(cl1, r.cl1, p);
    record(exact, r.theta_exact, p);
    record(cas, r.h_casimir, p);
    record(vol, r.invariant_volume, p);
    record(fac, r.factorization, p);
    if (k0) record(*k0, r.kappa0_casimir, p);
    record(kc, r.k_casimir, p);
    record(gv, r.global_volume, p);
  }
  if (cl1.count == 0) rep.add_note("no sample lies in the coupling domain");
  return rep;
}

}  // namespace acp
