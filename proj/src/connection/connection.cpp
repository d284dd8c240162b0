#include "acp/connection.hpp"

#include <algorithm>

namespace acp {

ConnectionJets Connection::jets(const Point& p, int order) const {
  ConnectionJets j;
  for (int i = 0; i < kBaseDim; ++i)
    for (int a = 0; a < kFiberDim; ++a) j.gamma[i][a] = gamma[i][a].evaluate(p, order);
  return j;
}

int Connection::budget() const {
  int b = 2;
  for (const auto& row : gamma)
    for (const auto& c : row) b = std::min(b, c.budget());
  return b;
}

bool Connection::is_flat_zero() const {
  for (const auto& row : gamma)
    for (const auto& c : row)
      if (!c.is_zero()) return false;
  return true;
}

FieldElement horizontal_lift(int i, const Connection& g) {
  FieldElement v = FieldElement::monomial(Kind::Multivector, bit(x_index(i)), Frame::Coordinate);
  for (int a = 0; a < kFiberDim; ++a) v[bit(y_index(a))] = -g.gamma[i][a];
  return v;
}

JetElement horizontal_lift(int i, const ConnectionJets& g) {
  JetElement v = JetElement::monomial(Kind::Multivector, bit(x_index(i)), Frame::Coordinate);
  for (int a = 0; a < kFiberDim; ++a) v[bit(y_index(a))] = -g.gamma[i][a];
  return v;
}

FieldElement theta(const Connection& g) {
  FieldElement t(Kind::Form);
  for (int i = 0; i < kBaseDim; ++i) {
    DifferentiableField c;
    for (int a = 0; a < kFiberDim; ++a) c -= partial(g.gamma[i][a], y_index(a));
    t[bit(x_index(i))] = c;
  }
  return t;
}

std::array<DifferentiableField, kFiberDim> rho_components(const Connection& g) {
  std::array<DifferentiableField, kFiberDim> r;
  const auto& g1 = g.gamma[0];
  const auto& g2 = g.gamma[1];
  for (int a = 0; a < kFiberDim; ++a) {
    DifferentiableField c = partial(g1[a], x_index(1)) - partial(g2[a], x_index(0));
    for (int b = 0; b < kFiberDim; ++b)
      c += g1[b] * partial(g2[a], y_index(b)) - g2[b] * partial(g1[a], y_index(b));
    r[a] = c;
  }
  return r;
}

namespace {

// Monomial eta^b ∧ eta^c (b < c) paired with rho^a in -1/2 eps_abc rho^a eta^b ∧ eta^c.
constexpr Mask eta_pair(int b, int c) { return bit(y_index(b)) | bit(y_index(c)); }

}  // namespace

FieldElement rho(const Connection& g) {
  const auto r = rho_components(g);
  FieldElement f(Kind::Form);
  f[eta_pair(1, 2)] = -r[0];
  f[eta_pair(0, 2)] = r[1];
  f[eta_pair(0, 1)] = -r[2];
  return f;
}

GradedElement theta_from_volume(const ConnectionJets& g) {
  const SplitDifferential d = split_d(constant_jets(chart::vertical_volume()), g);
  return values(-interior(constant_jets(chart::vertical_dual()), d.d10));
}

GradedElement rho_from_volume(const ConnectionJets& g) {
  const SplitDifferential d = split_d(constant_jets(chart::vertical_volume()), g);
  return values(interior(constant_jets(chart::horizontal_dual()), d.d2m1));
}

std::array<double, 2> volume_residuals(const Connection& g, const Point& p) {
  const ConnectionJets j = g.jets(p, 1);
  const SplitDifferential d = split_d(constant_jets(chart::vertical_volume()), j);
  const GradedElement th = values(evaluate(theta(g), p, 0));
  const GradedElement rh = values(evaluate(rho(g), p, 0));
  const GradedElement r1 = values(d.d10) - wedge(th, chart::vertical_volume());
  const GradedElement r2 = values(d.d2m1) - wedge(chart::horizontal_volume(), rh);
  return {max_norm(r1), max_norm(r2)};
}

std::array<double, kFiberDim> curvature(const Connection& g, const Point& p) {
  const ConnectionJets j = g.jets(p, 1);
  const GradedElement c = lie_bracket(horizontal_lift(0, j), horizontal_lift(1, j));
  return {c[bit(y_index(0))], c[bit(y_index(1))], c[bit(y_index(2))]};
}

double curvature_rho_residual(const Connection& g, const Point& p) {
  const auto c = curvature(g, p);
  GradedElement curv(Kind::Multivector);
  for (int a = 0; a < kFiberDim; ++a) curv[bit(y_index(a))] = c[a];
  const GradedElement lhs = interior(curv, chart::vertical_volume());
  // Omega^H(hor1, hor2) = i_hor2 i_hor1 (dx1 ∧ dx2)
  std::array<GradedElement, 5> frame;
  for (int k = 0; k < 5; ++k) frame[k] = GradedElement::monomial(Kind::Multivector, bit(k));
  const double area = evaluate_on(chart::horizontal_volume(), frame, 2);
  const GradedElement rh = values(evaluate(rho(g), p, 0));
  return max_norm(lhs + area * rh);
}

Connection shift(const Connection& g, const ConnectionShift& xi) {
  Connection r = g;
  for (int i = 0; i < kBaseDim; ++i)
    for (int a = 0; a < kFiberDim; ++a) r.gamma[i][a] = g.gamma[i][a] - xi.xi[i][a];
  return r;
}

}  // namespace acp
