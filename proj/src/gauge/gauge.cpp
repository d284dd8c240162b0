#include "acp/gauge.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace acp {

namespace {

using DF = DifferentiableField;

// e^{abc} for indices in 0..2.
int levi_civita(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0;
  return ((b - a + 3) % 3 == 1) ? 1 : -1;
}

DF hor_field(const Connection& g, int i, const DF& f) {
  DF s = partial(f, x_index(i));
  for (int a = 0; a < kFiberDim; ++a)
    if (!g.gamma[i][a].is_zero()) s = s - g.gamma[i][a] * partial(f, y_index(a));
  return s;
}

double hor_value(const ConnectionJets& g, int i, const Jet2& f) {
  double s = f.grad(x_index(i));
  for (int a = 0; a < kFiberDim; ++a) s -= g.gamma[i][a].value() * f.grad(y_index(a));
  return s;
}

GradedElement vertical_differential(const Jet2& f) {
  GradedElement d(Kind::Form);
  for (int a = 0; a < kFiberDim; ++a) d[bit(y_index(a))] = f.grad(y_index(a));
  return d;
}

int column_rank(const Eigen::MatrixXd& m) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0.0)) return 0;
  int r = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > 1e-9 * sv(0)) ++r;
  return r;
}

Eigen::MatrixXd sharp_matrix(const GradedElement& pi) {
  Eigen::MatrixXd m(kDim, kDim);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) m(i, j) = bivector_entry(pi, i, j);
  return m;
}

}  // namespace

void check_gauge_casimir(const PoissonTriple& t, const GaugeData& g, const std::vector<Point>& samples,
                         double tol) {
  double worst = 0.0;
  Point where;
  for (const Point& p : samples) {
    const double r = casimir_residual(t, g.c, p)[1];
    if (r > worst || std::isnan(r)) {
      worst = r;
      where = p;
    }
  }
  if (!(worst <= tol)) throw NotCasimir(worst, where);
}

double varkappa(const PoissonTriple& t, const GaugeData& g, double eps, const Point& p) {
  const ConnectionJets gj = t.gamma.jets(p, 1);
  std::array<Jet2, kBaseDim> mu{g.mu[0].evaluate(p, 1), g.mu[1].evaluate(p, 1)};
  JetElement form(Kind::Form);
  for (int i = 0; i < kBaseDim; ++i) form[bit(x_index(i))] = mu[i];
  const GradedElement d10 = values(split_d(form, gj).d10);

  GradedElement beta(Kind::Form);
  for (int a = 0; a < kFiberDim; ++a) beta[bit(y_index(a))] = t.beta[a].value(p);
  // {f1, f2}_beta = -Q_V(beta, df1, df2), Q(a1, a2, a3) = i_{a3∧a2∧a1} Q
  const auto bracket = [&](const Jet2& f1, const Jet2& f2) {
    const GradedElement args = wedge(wedge(vertical_differential(f2), vertical_differential(f1)), beta);
    return -scalar_part(interior(args, chart::vertical_dual()));
  };
  // {mu∧mu}_beta(hor1, hor2) = {mu(hor1), mu(hor2)} - {mu(hor2), mu(hor1)}
  const double mu_mu = bracket(mu[0], mu[1]) - bracket(mu[1], mu[0]);
  GradedElement two_form = d10;
  two_form[chart::kBaseArea] += 0.5 * eps * mu_mu;

  std::array<GradedElement, 5> hor;
  hor[0] = GradedElement::monomial(Kind::Multivector, chart::kHor1);
  hor[1] = GradedElement::monomial(Kind::Multivector, chart::kHor2);
  return evaluate_on(two_form, hor, 2) / evaluate_on(chart::horizontal_volume(), hor, 2);
}

double varkappa_coordinate(const PoissonTriple& t, const GaugeData& g, double eps, const Point& p) {
  const ConnectionJets gj = t.gamma.jets(p, 0);
  const Jet2 mu1 = g.mu[0].evaluate(p, 1);
  const Jet2 mu2 = g.mu[1].evaluate(p, 1);
  double s = hor_value(gj, 0, mu2) - hor_value(gj, 1, mu1);
  for (int a = 0; a < kFiberDim; ++a)
    for (int b = 0; b < kFiberDim; ++b)
      for (int c = 0; c < kFiberDim; ++c) {
        const int e = levi_civita(a, b, c);
        if (e == 0) continue;
        s -= eps * e * mu1.grad(y_index(a)) * t.beta[b].value(p) * mu2.grad(y_index(c));
      }
  return s;
}

DifferentiableField varkappa_field(const PoissonTriple& t, const GaugeData& g, double eps) {
  DF s = hor_field(t.gamma, 0, g.mu[1]) - hor_field(t.gamma, 1, g.mu[0]);
  if (eps == 0.0) return s;
  for (int a = 0; a < kFiberDim; ++a)
    for (int b = 0; b < kFiberDim; ++b)
      for (int c = 0; c < kFiberDim; ++c) {
        const int e = levi_civita(a, b, c);
        if (e == 0 || t.beta[b].is_zero()) continue;
        s = s - DF::constant(eps * e) * partial(g.mu[0], y_index(a)) * t.beta[b] * partial(g.mu[1], y_index(c));
      }
  return s;
}

DifferentiableField domain_denominator(const PoissonTriple& t, const GaugeData& g, double eps) {
  return DF::constant(1.0) - DF::constant(eps) * t.kappa * (varkappa_field(t, g, eps) - g.c);
}

double domain_indicator(const PoissonTriple& t, const GaugeData& g, double eps, const Point& p) {
  return 1.0 - eps * t.kappa.value(p) * (varkappa(t, g, eps, p) - g.c.value(p));
}

std::vector<Point> gauge_domain(const PoissonTriple& t, const GaugeData& g, double eps,
                                const std::vector<Point>& samples, double tol) {
  std::vector<Point> in;
  for (const Point& p : samples)
    if (std::abs(domain_indicator(t, g, eps, p)) > tol) in.push_back(p);
  if (in.empty()) throw EmptyDomain("gauge denominator vanishes at every sample");
  return in;
}

PoissonTriple family(const PoissonTriple& t, const GaugeData& g, double eps) {
  if (eps == 0.0) return t;
  PoissonTriple r = t;
  for (int i = 0; i < kBaseDim; ++i)
    for (int a = 0; a < kFiberDim; ++a)
      for (int b = 0; b < kFiberDim; ++b)
        for (int c = 0; c < kFiberDim; ++c) {
          const int e = levi_civita(a, b, c);
          if (e == 0 || t.beta[c].is_zero()) continue;
          r.gamma.gamma[i][a] =
              r.gamma.gamma[i][a] + DF::constant(eps * e) * partial(g.mu[i], y_index(b)) * t.beta[c];
        }
  r.kappa = t.kappa / domain_denominator(t, g, eps);
  return r;
}

PoissonTriple gauge_transform(const PoissonTriple& t, const GaugeData& g) { return family(t, g, 1.0); }

PoissonTriple scale(const PoissonTriple& t, double eps) {
  PoissonTriple r = t;
  const DF e = DF::constant(eps);
  r.kappa = e * t.kappa;
  for (int a = 0; a < kFiberDim; ++a) r.beta[a] = e * t.beta[a];
  return r;
}

CharacteristicComparison characteristic_compare(const GradedElement& a, const GradedElement& b) {
  const Eigen::MatrixXd ma = sharp_matrix(a);
  const Eigen::MatrixXd mb = sharp_matrix(b);
  Eigen::MatrixXd joint(kDim, 2 * kDim);
  joint << ma, mb;
  return {column_rank(ma), column_rank(mb), column_rank(joint)};
}

CharacteristicComparison characteristic_compare(const PoissonTriple& t, const GaugeData& g, double eps,
                                                const Point& p, double tol) {
  const double den = domain_indicator(t, g, eps, p);
  if (!(std::abs(den) > tol)) throw OutsideDomain("point " + p.str() + " is outside the gauge domain");
  const GradedElement a = values(TripleJets::at(t, p, 0).pi());
  const GradedElement b = values(TripleJets::at(family(t, g, eps), p, 0).pi());
  return characteristic_compare(a, b);
}

JetElement upsilon(const GaugeData& g, const Point& p, int order) {
  JetElement u(Kind::Form);
  for (int i = 0; i < kBaseDim; ++i) {
    const Jet2 mu = g.mu[i].evaluate(p, order + 1);
    JetElement dmu(Kind::Form);
    for (int k = 0; k < kDim; ++k) dmu[bit(k)] = mu.partial(k);
    u -= wedge(dmu, JetElement::monomial(Kind::Form, bit(x_index(i)), Jet2(1.0, order)));
  }
  const Jet2 c = g.c.evaluate(p, order);
  u[chart::kBaseArea] = u[chart::kBaseArea] + c;
  return u;
}

UpsilonClosedness upsilon_closedness(const GaugeData& g, const Point& p) {
  // moving frame of the zero connection = coordinate frame
  const JetElement d = exterior_d(upsilon(g, p, 1), ConnectionJets::flat(1));
  const Jet2 c = g.c.evaluate(p, 1);
  UpsilonClosedness r;
  r.d_upsilon = max_norm(d);
  for (int a = 0; a < kFiberDim; ++a) r.vertical_dc = std::max(r.vertical_dc, std::abs(c.grad(y_index(a))));
  return r;
}

}  // namespace acp
