#include "acp/triple.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace acp {

namespace {

constexpr Mask kEta23 = bit(3) | bit(4);
constexpr Mask kEta13 = bit(2) | bit(4);
constexpr Mask kEta12 = bit(2) | bit(3);

// (a, b, c) with eps_abc = +1 and a < b or the cyclic wrap (3,1).
constexpr std::array<std::array<int, 3>, 3> kCyclic{{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}};

double dy(const Jet2& f, int a) { return f.grad(y_index(a)); }
double dx(const Jet2& f, int i) { return f.grad(x_index(i)); }

double hor(const Jet2& f, const ConnectionJets& g, int i) {
  double s = dx(f, i);
  for (int a = 0; a < kFiberDim; ++a) s -= g.gamma[i][a].value() * dy(f, a);
  return s;
}

std::array<double, kFiberDim> rho_values(const ConnectionJets& g) {
  std::array<double, kFiberDim> r{};
  const auto& g1 = g.gamma[0];
  const auto& g2 = g.gamma[1];
  for (int a = 0; a < kFiberDim; ++a) {
    double c = dx(g1[a], 1) - dx(g2[a], 0);
    for (int b = 0; b < kFiberDim; ++b) c += g1[b].value() * dy(g2[a], b) - g2[b].value() * dy(g1[a], b);
    r[a] = c;
  }
  return r;
}

template <class T>
void put_vertical_poisson(Graded<T>& pi, const std::array<T, kFiberDim>& beta) {
  pi[kEta23] = beta[0];
  pi[kEta13] = -beta[1];
  pi[kEta12] = beta[2];
}

double max_abs(std::initializer_list<double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Components of d01 f ∧ beta on eta^a ∧ eta^b, (a,b) as in kCyclic.
std::array<double, 3> wedge_with_beta(const Jet2& f, const std::array<Jet2, kFiberDim>& beta) {
  std::array<double, 3> r{};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto [a, b, c] = kCyclic[k];
    (void)c;
    r[k] = dy(f, a) * beta[b].value() - dy(f, b) * beta[a].value();
  }
  return r;
}

void require_coupling(const Jet2& kappa, double kappa_tol) {
  if (!(std::abs(kappa.value()) > kappa_tol)) throw OutsideCouplingDomain(kappa.value());
}

JetElement lifted_base(const TripleJets& j) {
  return to_coordinate(JetElement::monomial(Kind::Multivector, chart::kBaseArea), j.gamma.gamma);
}

}  // namespace

int PoissonTriple::budget() const {
  int b = std::min(gamma.budget(), kappa.budget());
  for (const auto& c : beta) b = std::min(b, c.budget());
  return b;
}

TripleJets TripleJets::at(const PoissonTriple& t, const Point& p, int order) {
  TripleJets j;
  j.gamma = t.gamma.jets(p, order);
  j.kappa = t.kappa.evaluate(p, order);
  for (int a = 0; a < kFiberDim; ++a) j.beta[a] = t.beta[a].evaluate(p, order);
  return j;
}

double TripleJets::magnitude() const {
  double m = kappa.magnitude();
  for (const auto& b : beta) m = std::max(m, b.magnitude());
  for (const auto& row : gamma.gamma)
    for (const auto& c : row) m = std::max(m, c.magnitude());
  return m;
}

JetElement TripleJets::pi_moving() const {
  JetElement pi(Kind::Multivector);
  pi[chart::kBaseArea] = kappa;
  put_vertical_poisson(pi, beta);
  return pi;
}

JetElement TripleJets::pi() const { return to_coordinate(pi_moving(), gamma.gamma); }

JetElement TripleJets::vertical_poisson() const {
  JetElement pi(Kind::Multivector, Frame::Coordinate);
  put_vertical_poisson(pi, beta);
  return pi;
}

FieldElement vertical_poisson(const VerticalOneForm& beta) {
  FieldElement b(Kind::Form);
  for (int a = 0; a < kFiberDim; ++a) b[bit(y_index(a))] = beta[a];
  const FieldElement qv =
      FieldElement::monomial(Kind::Multivector, chart::kFiberVolume, DifferentiableField::constant(-1.0));
  const FieldElement moving = -interior(b, qv);
  // vertical multivectors have the same components in both frames
  FieldElement out(Kind::Multivector, Frame::Coordinate);
  for (Mask m : {kEta23, kEta13, kEta12}) out[m] = moving[m];
  return out;
}

FieldElement assemble_pi_moving(const PoissonTriple& t) {
  FieldElement pi(Kind::Multivector);
  pi[chart::kBaseArea] = t.kappa;
  put_vertical_poisson(pi, t.beta);
  return pi;
}

FieldElement assemble_pi(const PoissonTriple& t) { return to_coordinate(assemble_pi_moving(t), t.gamma.gamma); }

PointRecovery recover_at(const GradedElement& pi, const std::array<std::array<double, kFiberDim>, kBaseDim>& gamma) {
  const GradedElement m = to_moving(pi, gamma);
  PointRecovery r;
  r.mixed = max_norm(bigrade_project(m, 1, 1));
  r.kappa = -interior(bigrade_project(m, 2, 0), chart::horizontal_volume())[0];
  const GradedElement b = -interior(bigrade_project(m, 0, 2), chart::vertical_volume());
  for (int a = 0; a < kFiberDim; ++a) r.beta[a] = b[bit(y_index(a))];
  return r;
}

RecoveredTriple recover_triple(const FieldElement& pi, const Connection& gamma, const std::vector<Point>& samples,
                               double tol) {
  const FieldElement m = to_moving(pi, gamma.gamma);
  const FieldElement mixed = bigrade_project(m, 1, 1);
  double worst = 0.0;
  for (const Point& p : samples) worst = std::max(worst, max_norm(values(evaluate(mixed, p, 0))));
  if (worst > tol) throw NotAlmostCoupling(worst);
  const FieldElement omega_h = FieldElement::monomial(Kind::Form, chart::kBaseArea);
  const FieldElement omega_v = FieldElement::monomial(Kind::Form, chart::kFiberVolume);
  RecoveredTriple r;
  r.kappa = -interior(bigrade_project(m, 2, 0), omega_h)[0];
  const FieldElement b = -interior(bigrade_project(m, 0, 2), omega_v);
  for (int a = 0; a < kFiberDim; ++a) r.beta[a] = b[bit(y_index(a))];
  return r;
}

std::array<double, 10> jacobiator(const TripleJets& j) {
  const JetElement pi = j.pi();
  return trivector_components(schouten_bivectors(pi, pi));
}

std::array<double, 10> jacobiator(const PoissonTriple& t, const Point& p) {
  return jacobiator(TripleJets::at(t, p, 1));
}

double IcResiduals::max() const {
  double m = std::abs(ic1);
  for (double v : ic2) m = std::max(m, std::abs(v));
  for (double v : ic3) m = std::max(m, std::abs(v));
  return m;
}

IcResiduals ic_residuals(const TripleJets& j) {
  IcResiduals r;
  const auto& beta = j.beta;
  const auto& g = j.gamma.gamma;
  for (const auto& [a, b, c] : kCyclic) r.ic1 += (dy(beta[a], b) - dy(beta[b], a)) * beta[c].value();
  const double kappa = j.kappa.value();
  for (int i = 0; i < kBaseDim; ++i) {
    for (int a = 0; a < kFiberDim; ++a) {
      double s = dx(beta[a], i);
      for (int b = 0; b < kFiberDim; ++b) {
        s -= g[i][b].value() * dy(beta[a], b);
        s -= beta[b].value() * dy(g[i][b], a);
        s += beta[a].value() * dy(g[i][b], b);
      }
      r.ic2[static_cast<std::size_t>(i * kFiberDim + a)] = kappa * s;
    }
  }
  const auto rho = rho_values(j.gamma);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto [a, b, c] = kCyclic[k];
    r.ic3[k] = dy(j.kappa, a) * beta[b].value() - dy(j.kappa, b) * beta[a].value() + kappa * kappa * rho[c];
  }
  return r;
}

IcResiduals ic_residuals(const PoissonTriple& t, const Point& p) { return ic_residuals(TripleJets::at(t, p, 1)); }

double verdict_scale(const TripleJets& j) { return std::pow(1.0 + j.magnitude(), 4); }

VerificationReport equivalence_check(const PoissonTriple& t, const std::vector<Point>& samples, double tol,
                                     Execution ex) {
  struct Row {
    double ic = 0.0;
    double jac = 0.0;
  };
  const auto rows = map_points(
      samples,
      [&](const Point& p) {
        const TripleJets j = TripleJets::at(t, p, 1);
        const double s = verdict_scale(j);
        double jm = 0.0;
        for (double v : jacobiator(j)) jm = std::max(jm, std::abs(v));
        return Row{ic_residuals(j).max() / s, jm / s};
      },
      ex);
  VerificationReport rep;
  CheckResult& ic = rep.check("ic", tol);
  CheckResult& jac = rep.check("jacobiator", tol);
  std::vector<std::pair<Point, std::string>> disagreements;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    ic.record(rows[k].ic, samples[k]);
    jac.record(rows[k].jac, samples[k]);
    const bool ic_ok = rows[k].ic <= tol;
    const bool jac_ok = rows[k].jac <= tol;
    if (ic_ok != jac_ok) {
      std::ostringstream os;
      os.precision(6);
      os << "ic " << rows[k].ic << " vs jacobiator " << rows[k].jac;
      disagreements.emplace_back(samples[k], os.str());
    }
  }
  for (auto& [p, d] : disagreements) rep.add_disagreement(p, d);
  return rep;
}

double poisson_bracket(const PoissonTriple& t, const DifferentiableField& f, const DifferentiableField& g,
                       const Point& p) {
  const TripleJets j = TripleJets::at(t, p, 0);
  const Jet2 fj = f.evaluate(p, 1);
  const Jet2 gj = g.evaluate(p, 1);
  GradedElement df10(Kind::Form), dg10(Kind::Form), df01(Kind::Form), dg01(Kind::Form), beta(Kind::Form);
  for (int i = 0; i < kBaseDim; ++i) {
    df10[bit(x_index(i))] = hor(fj, j.gamma, i);
    dg10[bit(x_index(i))] = hor(gj, j.gamma, i);
  }
  for (int a = 0; a < kFiberDim; ++a) {
    df01[bit(y_index(a))] = dy(fj, a);
    dg01[bit(y_index(a))] = dy(gj, a);
    beta[bit(y_index(a))] = j.beta[a].value();
  }
  // ratios of top-degree forms: the coefficient against Omega^H, Omega^V
  const double horizontal = wedge(df10, dg10)[chart::kBaseArea];
  const double vertical = wedge(wedge(df01, dg01), beta)[chart::kFiberVolume];
  return j.kappa.value() * horizontal + vertical;
}

double poisson_bracket_direct(const PoissonTriple& t, const DifferentiableField& f, const DifferentiableField& g,
                              const Point& p) {
  const GradedElement pi = values(TripleJets::at(t, p, 0).pi());
  const Jet2 fj = f.evaluate(p, 1);
  const Jet2 gj = g.evaluate(p, 1);
  double s = 0.0;
  for (int mu = 0; mu < kDim; ++mu)
    for (int nu = 0; nu < kDim; ++nu) s += bivector_entry(pi, mu, nu) * fj.grad(mu) * gj.grad(nu);
  return s;
}

JetElement hamiltonian_field(const TripleJets& j, const Jet2& f) {
  const JetElement pi = j.pi();
  JetElement x(Kind::Multivector, Frame::Coordinate);
  for (int nu = 0; nu < kDim; ++nu) {
    Jet2 s(0.0, 2);
    for (int mu = 0; mu < kDim; ++mu) {
      const Jet2 e = bivector_entry(pi, mu, nu);
      if (e.is_zero()) continue;
      s += f.partial(mu) * e;
    }
    x[bit(nu)] = s;
  }
  return x;
}

GradedElement hamiltonian_field(const PoissonTriple& t, const DifferentiableField& f, const Point& p) {
  return values(hamiltonian_field(TripleJets::at(t, p, 0), f.evaluate(p, 1)));
}

BigradedVector hamiltonian_field_bigraded(const PoissonTriple& t, const DifferentiableField& f, const Point& p) {
  const TripleJets j = TripleJets::at(t, p, 0);
  const Jet2 fj = f.evaluate(p, 1);
  GradedElement d10(Kind::Form), d01(Kind::Form), beta(Kind::Form);
  for (int i = 0; i < kBaseDim; ++i) d10[bit(x_index(i))] = hor(fj, j.gamma, i);
  for (int a = 0; a < kFiberDim; ++a) {
    d01[bit(y_index(a))] = dy(fj, a);
    beta[bit(y_index(a))] = j.beta[a].value();
  }
  BigradedVector v;
  v.part10 = j.kappa.value() * interior(d10, chart::lifted_base_bivector());
  v.part01 = -interior(wedge(d01, beta), chart::vertical_dual());
  return v;
}

std::array<double, 2> casimir_residual(const PoissonTriple& t, const DifferentiableField& c, const Point& p) {
  const TripleJets j = TripleJets::at(t, p, 0);
  const Jet2 cj = c.evaluate(p, 1);
  const double k = std::abs(j.kappa.value());
  const double r1 = k * max_abs({hor(cj, j.gamma, 0), hor(cj, j.gamma, 1)});
  const auto w = wedge_with_beta(cj, j.beta);
  return {r1, max_abs({w[0], w[1], w[2]})};
}

double kappa_tolerance(const PoissonTriple& t, const std::vector<Point>& samples, double rel) {
  double m = 0.0;
  for (const Point& p : samples) m = std::max(m, std::abs(t.kappa.value(p)));
  return rel * (1.0 + m);
}

double poisson_connection_residual(const PoissonTriple& t, const Point& p, double kappa_tol) {
  const TripleJets j = TripleJets::at(t, p, 1);
  require_coupling(j.kappa, kappa_tol);
  const JetElement pb = j.vertical_poisson();
  double r = 0.0;
  for (int i = 0; i < kBaseDim; ++i) r = std::max(r, max_norm(lie_derivative_bivector(horizontal_lift(i, j.gamma), pb)));
  return r;
}

double c2_residual(const PoissonTriple& t, const Point& p) {
  const TripleJets j = TripleJets::at(t, p, 1);
  JetElement beta(Kind::Form);
  for (int a = 0; a < kFiberDim; ++a) beta[bit(y_index(a))] = j.beta[a];
  JetElement theta(Kind::Form);
  for (int i = 0; i < kBaseDim; ++i) {
    double s = 0.0;
    for (int a = 0; a < kFiberDim; ++a) s -= dy(j.gamma.gamma[i][a], a);
    theta[bit(x_index(i))] = Jet2(s, 0);
  }
  const SplitDifferential d = split_d(beta, j.gamma);
  return max_norm(d.d10 + wedge(beta, theta));
}

double c3_residual(const PoissonTriple& t, const Point& p, double kappa_tol) {
  const TripleJets j = TripleJets::at(t, p, 1);
  require_coupling(j.kappa, kappa_tol);
  const Jet2 inv = reciprocal(j.kappa);
  const auto w = wedge_with_beta(inv, j.beta);
  const auto rho = rho_values(j.gamma);
  // rho on eta^a ∧ eta^b for (1,2), (2,3), (3,1): -rho^3, -rho^1, -rho^2
  return max_abs({w[0] - rho[2], w[1] - rho[0], w[2] - rho[1]});
}

double c5_residual(const PoissonTriple& t, const Point& p) {
  const TripleJets j = TripleJets::at(t, p, 1);
  const auto w = wedge_with_beta(j.kappa, j.beta);
  return max_abs({w[0], w[1], w[2]});
}

double cocycle_residual(const PoissonTriple& t, const Point& p, double kappa_tol) {
  const TripleJets j = TripleJets::at(t, p, 1);
  require_coupling(j.kappa, kappa_tol);
  const JetElement qh = -lifted_base(j);
  return max_norm(schouten_bivectors(qh, j.vertical_poisson()));
}

double curvature_identity_residual(const PoissonTriple& t, const Point& p, double kappa_tol) {
  const TripleJets j = TripleJets::at(t, p, 1);
  require_coupling(j.kappa, kappa_tol);
  const GradedElement curv = lie_bracket(horizontal_lift(0, j.gamma), horizontal_lift(1, j.gamma));
  const Jet2 inv = reciprocal(j.kappa);
  const GradedElement pb = values(j.vertical_poisson());
  // omega(d_x1, d_x2) = 1
  GradedElement rhs(Kind::Multivector, Frame::Coordinate);
  for (int nu = 0; nu < kDim; ++nu) {
    double s = 0.0;
    for (int mu = 0; mu < kDim; ++mu) s += inv.grad(mu) * bivector_entry(pb, mu, nu);
    rhs[bit(nu)] = -s;
  }
  return max_norm(curv - rhs);
}

std::array<double, 3> flat_pair_residuals(const PoissonTriple& t, const Point& p) {
  const TripleJets j = TripleJets::at(t, p, 1);
  const GradedElement curv = lie_bracket(horizontal_lift(0, j.gamma), horizontal_lift(1, j.gamma));
  const JetElement pi20 = j.kappa * lifted_base(j);
  const JetElement pi02 = j.vertical_poisson();
  return {max_norm(curv), max_norm(schouten_bivectors(pi20, pi20)), max_norm(schouten_bivectors(pi20, pi02))};
}

VerificationReport submanifold_check(const PoissonTriple& t, const Section& s, const std::vector<Point>& samples,
                                     double tol) {
  VerificationReport rep;
  CheckResult& tangency = rep.check("tangency", tol);
  CheckResult& vertical = rep.check("vertical_vanishing", tol);
  for (const Point& base : samples) {
    Point p = base;
    for (int a = 0; a < kFiberDim; ++a) p = p.with(y_index(a), s.s[a].value(base));
    std::array<Jet2, kFiberDim> sj;
    for (int a = 0; a < kFiberDim; ++a) sj[a] = s.s[a].evaluate(p, 1);
    Eigen::Matrix<double, 5, 2> tangent = Eigen::Matrix<double, 5, 2>::Zero();
    for (int i = 0; i < kBaseDim; ++i) {
      tangent(x_index(i), i) = 1.0;
      for (int a = 0; a < kFiberDim; ++a) tangent(y_index(a), i) = dx(sj[a], i);
    }
    const TripleJets j = TripleJets::at(t, p, 0);
    const GradedElement pi20 = values(j.kappa * lifted_base(j));
    double worst = 0.0;
    for (int i = 0; i < kBaseDim; ++i) {
      Eigen::Matrix<double, 5, 1> v;
      for (int nu = 0; nu < kDim; ++nu) v(nu) = bivector_entry(pi20, x_index(i), nu);
      const Eigen::Vector2d c = tangent.colPivHouseholderQr().solve(v);
      worst = std::max(worst, (v - tangent * c).norm());
    }
    tangency.record(worst, p);
    vertical.record(max_abs({j.beta[0].value(), j.beta[1].value(), j.beta[2].value()}), p);
  }
  return rep;
}

PoissonTriple flat_triple(const Connection& gamma, const DifferentiableField& kappa0, const VerticalOneForm& beta,
                          const std::vector<Point>& samples, double tol) {
  PoissonTriple t{gamma, kappa0, beta};
  std::array<double, 4> worst{};
  std::array<Point, 4> where{};
  for (const Point& p : samples) {
    const TripleJets j = TripleJets::at(t, p, 1);
    const auto rho = rho_values(j.gamma);
    const JetElement pb = j.vertical_poisson();
    double pa = 0.0;
    for (int i = 0; i < kBaseDim; ++i)
      pa = std::max(pa, max_norm(lie_derivative_bivector(horizontal_lift(i, j.gamma), pb)));
    const auto w = wedge_with_beta(j.kappa, j.beta);
    const std::array<double, 4> r{max_abs({rho[0], rho[1], rho[2]}), std::abs(ic_residuals(j).ic1), pa,
                                  max_abs({w[0], w[1], w[2]})};
    for (std::size_t k = 0; k < 4; ++k)
      if (r[k] > worst[k]) {
        worst[k] = r[k];
        where[k] = p;
      }
  }
  if (worst[0] > tol) throw NotFlat(worst[0], where[0]);
  if (worst[1] > tol) throw NotPoissonFiber(worst[1], where[1]);
  if (worst[2] > tol) throw NotPoissonConnection(worst[2], where[2]);
  if (worst[3] > tol) throw NotCasimir(worst[3], where[3]);
  return t;
}

GradedElement coupling_form(const PoissonTriple& t, const Point& p, double kappa_tol) {
  const Jet2 k = t.kappa.evaluate(p, 0);
  require_coupling(k, kappa_tol);
  return (1.0 / k.value()) * chart::horizontal_volume();
}

double coupling_form_residual(const PoissonTriple& t, const Point& p, double kappa_tol) {
  const GradedElement sigma = coupling_form(t, p, kappa_tol);
  const GradedElement pi20 = t.kappa.value(p) * chart::lifted_base_bivector();
  double r = 0.0;
  for (int i = 0; i < kBaseDim; ++i) {
    const GradedElement alpha = GradedElement::monomial(Kind::Form, bit(x_index(i)));
    r = std::max(r, max_norm(interior(interior(alpha, pi20), sigma) + alpha));
  }
  return r;
}

}  // namespace acp
