#include "acp/calculus.hpp"

namespace acp {

ConnectionJets ConnectionJets::flat(int order) {
  ConnectionJets g;
  for (auto& row : g.gamma)
    for (auto& c : row) c = Jet2(0.0, order);
  return g;
}

std::array<std::array<double, kFiberDim>, kBaseDim> ConnectionJets::values() const {
  std::array<std::array<double, kFiberDim>, kBaseDim> v{};
  for (int i = 0; i < kBaseDim; ++i)
    for (int a = 0; a < kFiberDim; ++a) v[i][a] = gamma[i][a].value();
  return v;
}

std::array<std::array<Jet2, kFiberDim>, kBaseDim> gamma_array(const ConnectionJets& g) { return g.gamma; }

namespace chart {

GradedElement lifted_base_bivector() { return GradedElement::monomial(Kind::Multivector, kBaseArea); }
GradedElement horizontal_volume() { return GradedElement::monomial(Kind::Form, kBaseArea); }
GradedElement vertical_volume() { return GradedElement::monomial(Kind::Form, kFiberVolume); }
GradedElement horizontal_dual() { return GradedElement::monomial(Kind::Multivector, kBaseArea, -1.0); }
GradedElement vertical_dual() { return GradedElement::monomial(Kind::Multivector, kFiberVolume, -1.0); }

}  // namespace chart

namespace {

template <class T>
using Gamma = std::array<std::array<T, kFiberDim>, kBaseDim>;

// Image of basis slot k under the frame change; `forward` maps moving to
// coordinate.
template <class T>
Graded<T> slot_image(Kind kind, int k, const Gamma<T>& g, bool forward) {
  const Frame out = forward ? Frame::Coordinate : Frame::Moving;
  Graded<T> v = Graded<T>::monomial(kind, bit(k), out);
  if (kind == Kind::Multivector) {
    if (k >= kBaseDim) return v;
    // hor_i = d_xi - g d_ya, so d_xi = hor_i + g d_ya
    for (int a = 0; a < kFiberDim; ++a) {
      const T& c = g[k][a];
      if (scalar::is_nil(c)) continue;
      v[bit(y_index(a))] = forward ? -c : c;
    }
  } else {
    if (k < kBaseDim) return v;
    // eta^a = dy^a + g dx^i, so dy^a = eta^a - g dx^i
    const int a = k - kBaseDim;
    for (int i = 0; i < kBaseDim; ++i) {
      const T& c = g[i][a];
      if (scalar::is_nil(c)) continue;
      v[bit(x_index(i))] = forward ? c : -c;
    }
  }
  return v;
}

template <class T>
Graded<T> change_frame(const Graded<T>& a, const Gamma<T>& g, bool forward) {
  const Frame from = forward ? Frame::Moving : Frame::Coordinate;
  const Frame out = forward ? Frame::Coordinate : Frame::Moving;
  if (a.frame() != from) throw Error("frame conversion applied to the wrong frame");
  std::array<Graded<T>, 5> images;
  for (int k = 0; k < 5; ++k) images[static_cast<std::size_t>(k)] = slot_image(a.kind(), k, g, forward);
  Graded<T> r(a.kind(), out);
  for (Mask m = 0; m < kMonomials; ++m) {
    if (!a.nonzero(m)) continue;
    Graded<T> img = Graded<T>::monomial(a.kind(), 0, out);
    for (int k = 0; k < 5; ++k)
      if (m & bit(k)) img = wedge(img, images[static_cast<std::size_t>(k)]);
    r += a[m] * img;
  }
  return r;
}

JetElement jet_monomial(Mask m) { return JetElement::monomial(Kind::Form, m); }

}  // namespace

template <class T>
Graded<T> to_coordinate(const Graded<T>& a, const Gamma<T>& gamma) {
  return change_frame(a, gamma, true);
}

template <class T>
Graded<T> to_moving(const Graded<T>& a, const Gamma<T>& gamma) {
  return change_frame(a, gamma, false);
}

template Graded<double> to_coordinate(const Graded<double>&, const Gamma<double>&);
template Graded<Jet2> to_coordinate(const Graded<Jet2>&, const Gamma<Jet2>&);
template Graded<DifferentiableField> to_coordinate(const Graded<DifferentiableField>&,
                                                   const Gamma<DifferentiableField>&);
template Graded<double> to_moving(const Graded<double>&, const Gamma<double>&);
template Graded<Jet2> to_moving(const Graded<Jet2>&, const Gamma<Jet2>&);
template Graded<DifferentiableField> to_moving(const Graded<DifferentiableField>&,
                                               const Gamma<DifferentiableField>&);

namespace {

// hor_i applied to a scalar jet.
Jet2 horizontal_derivative(const Jet2& f, const ConnectionJets& g, int i) {
  Jet2 r = f.partial(x_index(i));
  for (int a = 0; a < kFiberDim; ++a) r -= g.gamma[i][a] * f.partial(y_index(a));
  return r;
}

}  // namespace

JetElement d_eta(const ConnectionJets& g, int a) {
  // d eta^a = d gamma_i^a ∧ dx^i with d gamma = (hor_j gamma) dx^j + (d_b gamma) eta^b
  JetElement r(Kind::Form);
  for (int i = 0; i < kBaseDim; ++i) {
    const Jet2& gi = g.gamma[i][a];
    const JetElement dxi = jet_monomial(bit(x_index(i)));
    JetElement dg(Kind::Form);
    for (int j = 0; j < kBaseDim; ++j) dg[bit(x_index(j))] = horizontal_derivative(gi, g, j);
    for (int b = 0; b < kFiberDim; ++b) dg[bit(y_index(b))] = gi.partial(y_index(b));
    r += wedge(dg, dxi);
  }
  return r;
}

JetElement exterior_d(const JetElement& form, const ConnectionJets& g) {
  if (form.kind() != Kind::Form || form.frame() != Frame::Moving)
    throw Error("exterior_d expects a moving-frame form");
  std::array<JetElement, kFiberDim> deta;
  bool deta_ready = false;
  JetElement r(Kind::Form);
  for (Mask m = 0; m < kMonomials; ++m) {
    if (!form.nonzero(m)) continue;
    const Jet2& c = form[m];
    const JetElement basis = jet_monomial(m);

    JetElement dc(Kind::Form);
    for (int i = 0; i < kBaseDim; ++i) dc[bit(x_index(i))] = horizontal_derivative(c, g, i);
    for (int a = 0; a < kFiberDim; ++a) dc[bit(y_index(a))] = c.partial(y_index(a));
    r += wedge(dc, basis);

    if (!(m & kVerticalBits)) continue;
    if (!deta_ready) {
      for (int a = 0; a < kFiberDim; ++a) deta[static_cast<std::size_t>(a)] = d_eta(g, a);
      deta_ready = true;
    }
    int position = 0;
    for (int k = 0; k < 5; ++k) {
      if (!(m & bit(k))) continue;
      if (k >= kBaseDim) {
        const Mask before = m & (bit(k) - 1);
        const Mask after = m & ~(bit(k + 1) - 1);
        JetElement term = wedge(wedge(jet_monomial(before), deta[static_cast<std::size_t>(k - kBaseDim)]),
                                jet_monomial(after));
        r += signed_term(position % 2 ? -1 : 1, c) * term;
      }
      ++position;
    }
  }
  return r;
}

SplitDifferential split_d(const JetElement& form, const ConnectionJets& g) {
  SplitDifferential s{JetElement(Kind::Form), JetElement(Kind::Form), JetElement(Kind::Form)};
  for (int p = 0; p <= kBaseDim; ++p) {
    for (int q = 0; q <= kFiberDim; ++q) {
      const JetElement piece = bigrade_project(form, p, q);
      if (piece.is_zero()) continue;
      const JetElement d = exterior_d(piece, g);
      s.d10 += bigrade_project(d, p + 1, q);
      s.d01 += bigrade_project(d, p, q + 1);
      if (q >= 1) s.d2m1 += bigrade_project(d, p + 2, q - 1);
    }
  }
  return s;
}

std::array<double, 3> cochain_residuals(const JetElement& form, const ConnectionJets& g) {
  const SplitDifferential s = split_d(form, g);
  const SplitDifferential s10 = split_d(s.d10, g);
  const SplitDifferential s01 = split_d(s.d01, g);
  const SplitDifferential s21 = split_d(s.d2m1, g);
  return {max_norm(s10.d10 + s01.d2m1 + s21.d01), max_norm(s01.d10 + s10.d01), max_norm(s01.d01)};
}

namespace {

void require_first_order(const JetElement& e) {
  for (Mask m = 0; m < kMonomials; ++m)
    if (e.nonzero(m) && e[m].order() < 1) throw OrderBudgetExceeded(1, e[m].order());
}

}  // namespace

GradedElement schouten_bivectors(const JetElement& a, const JetElement& b) {
  if (a.kind() != Kind::Multivector || b.kind() != Kind::Multivector || a.frame() != Frame::Coordinate ||
      b.frame() != Frame::Coordinate)
    throw Error("schouten_bivectors expects coordinate-frame bivectors");
  require_first_order(a);
  require_first_order(b);
  std::array<std::array<Jet2, kDim>, kDim> A, B;
  for (int mu = 0; mu < kDim; ++mu)
    for (int nu = 0; nu < kDim; ++nu) {
      A[mu][nu] = bivector_entry(a, mu, nu);
      B[mu][nu] = bivector_entry(b, mu, nu);
    }
  auto term = [&](int mu, int nu, int la) {
    double s = 0.0;
    for (int rho = 0; rho < kDim; ++rho) {
      s += A[mu][rho].value() * B[nu][la].grad(rho);
      s += B[mu][rho].value() * A[nu][la].grad(rho);
    }
    return s;
  };
  GradedElement r(Kind::Multivector, Frame::Coordinate);
  for (int mu = 0; mu < kDim; ++mu)
    for (int nu = mu + 1; nu < kDim; ++nu)
      for (int la = nu + 1; la < kDim; ++la)
        r[bit(mu) | bit(nu) | bit(la)] = term(mu, nu, la) + term(nu, la, mu) + term(la, mu, nu);
  return r;
}

GradedElement lie_derivative_bivector(const JetElement& x, const JetElement& p) {
  require_first_order(x);
  require_first_order(p);
  GradedElement r(Kind::Multivector, Frame::Coordinate);
  for (int mu = 0; mu < kDim; ++mu) {
    for (int nu = mu + 1; nu < kDim; ++nu) {
      double s = 0.0;
      for (int rho = 0; rho < kDim; ++rho) {
        const Jet2& xr = x[bit(rho)];
        s += xr.value() * bivector_entry(p, mu, nu).grad(rho);
        s -= bivector_entry(p, rho, nu).value() * x[bit(mu)].grad(rho);
        s -= bivector_entry(p, mu, rho).value() * x[bit(nu)].grad(rho);
      }
      r[bit(mu) | bit(nu)] = s;
    }
  }
  return r;
}

GradedElement lie_bracket(const JetElement& x, const JetElement& y) {
  require_first_order(x);
  require_first_order(y);
  GradedElement r(Kind::Multivector, Frame::Coordinate);
  for (int mu = 0; mu < kDim; ++mu) {
    double s = 0.0;
    for (int rho = 0; rho < kDim; ++rho)
      s += x[bit(rho)].value() * y[bit(mu)].grad(rho) - y[bit(rho)].value() * x[bit(mu)].grad(rho);
    r[bit(mu)] = s;
  }
  return r;
}

double divergence(const JetElement& x) {
  require_first_order(x);
  double s = 0.0;
  for (int mu = 0; mu < kDim; ++mu) s += x[bit(mu)].grad(mu);
  return s;
}

std::array<double, 10> trivector_components(const GradedElement& t) {
  std::array<double, 10> out{};
  std::size_t n = 0;
  for (int mu = 0; mu < kDim; ++mu)
    for (int nu = mu + 1; nu < kDim; ++nu)
      for (int la = nu + 1; la < kDim; ++la) out[n++] = t[bit(mu) | bit(nu) | bit(la)];
  return out;
}

}  // namespace acp
