#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "acp/triple.hpp"
#include "random_fields.hpp"

using namespace acp;
using acp::testing::random_connection;
using acp::testing::random_point;
using acp::testing::random_polynomial;

namespace {

DifferentiableField F(const char* s) { return DifferentiableField::parse(s); }

PoissonTriple sec5() {
  PoissonTriple t;
  for (int i = 0; i < 2; ++i) {
    t.gamma.gamma[i][1] = F("-1");
    t.gamma.gamma[i][2] = F("-1");
  }
  t.kappa = F("y1^2 - x1^2 - x2^2");
  t.beta = {F("y1^2"), F("0"), F("0")};
  return t;
}

// The bivector as displayed: k (d1∧d2 + (d1 - d2)∧(dy2 + dy3)) + y1^2 dy2∧dy3.
GradedElement sec5_displayed(const Point& p) {
  const double k = p.y(0) * p.y(0) - p.x(0) * p.x(0) - p.x(1) * p.x(1);
  GradedElement pi(Kind::Multivector, Frame::Coordinate);
  pi[bit(0) | bit(1)] = k;
  pi[bit(0) | bit(3)] = k;
  pi[bit(0) | bit(4)] = k;
  pi[bit(1) | bit(3)] = -k;
  pi[bit(1) | bit(4)] = -k;
  pi[bit(3) | bit(4)] = p.y(0) * p.y(0);
  return pi;
}

// so(3)* fiber, hor_1 = d/dx1 + X_mu with mu = x2*y3, hor_2 = d/dx2. The
// curvature is rho = grad(y3) × y and kappa = 1/(3 + y3) solves the
// curvature condition, so the triple is Poisson while gamma is curved.
PoissonTriple curved_gauge(double kappa_shift = 0.0) {
  PoissonTriple t;
  t.gamma.gamma[0] = {F("-x2*y2"), F("x2*y1"), F("0")};
  t.kappa = F("1/(3 + y3)") + DifferentiableField::constant(kappa_shift);
  t.beta = {F("y1"), F("y2"), F("y3")};
  return t;
}

PoissonTriple flat_so3(const char* kappa0 = "2 + tanh(x1 - x2*(y1^2 + y2^2 + y3^2))") {
  PoissonTriple t;
  t.kappa = F(kappa0);
  t.beta = {F("y1"), F("y2"), F("y3")};
  return t;
}

PoissonTriple random_triple(std::mt19937_64& rng) {
  PoissonTriple t;
  t.gamma = random_connection(rng, 2, 0.5);
  t.kappa = random_polynomial(rng, acp::testing::all_vars(), 2, 1.0);
  for (auto& b : t.beta) b = random_polynomial(rng, acp::testing::all_vars(), 2, 1.0);
  return t;
}

std::vector<Point> points(std::mt19937_64& rng, int n, double w = 0.9) {
  std::vector<Point> v;
  for (int k = 0; k < n; ++k) v.push_back(random_point(rng, w));
  return v;
}

double coordinate(const Point& p, int k) { return p[k]; }

// Jacobiator from central differences of the assembled bivector:
// J^{μνλ} = Σ_ρ Pi^{μρ} ∂_ρ Pi^{νλ} + cyclic.
double fd_jacobiator(const PoissonTriple& t, const Point& p) {
  const FieldElement pi = assemble_pi(t);
  const double h = 1e-5;
  const GradedElement at = values(evaluate(pi, p, 0));
  std::array<GradedElement, kDim> d;
  for (int r = 0; r < kDim; ++r) {
    const GradedElement plus = values(evaluate(pi, p.with(r, coordinate(p, r) + h), 0));
    const GradedElement minus = values(evaluate(pi, p.with(r, coordinate(p, r) - h), 0));
    d[r] = (1.0 / (2 * h)) * (plus - minus);
  }
  double worst = 0.0;
  for (int a = 0; a < kDim; ++a)
    for (int b = a + 1; b < kDim; ++b)
      for (int c = b + 1; c < kDim; ++c) {
        double s = 0.0;
        const int idx[3][3] = {{a, b, c}, {b, c, a}, {c, a, b}};
        for (const auto& [m, n, l] : idx)
          for (int r = 0; r < kDim; ++r) s += bivector_entry(at, m, r) * bivector_entry(d[r], n, l);
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

}  // namespace

TEST_CASE("the worked five-dimensional example is reproduced") {
  const PoissonTriple t = sec5();
  std::mt19937_64 rng(5);
  for (const Point& p : points(rng, 20, 2.0)) {
    const GradedElement pi = values(evaluate(assemble_pi(t), p, 0));
    CHECK(max_norm(pi - sec5_displayed(p)) <= 1e-14);
    const auto rec = recover_at(sec5_displayed(p), t.gamma.jets(p, 0).values());
    CHECK(rec.mixed <= 1e-14);
    CHECK(rec.kappa == doctest::Approx(t.kappa.value(p)).epsilon(1e-14));
    CHECK(rec.beta[0] == doctest::Approx(p.y(0) * p.y(0)).epsilon(1e-14));
    CHECK(rec.beta[1] == 0.0);
    CHECK(rec.beta[2] == 0.0);
    for (double j : jacobiator(t, p)) CHECK(std::abs(j) <= 1e-12);
    CHECK(ic_residuals(t, p).max() <= 1e-12);
    CHECK(fd_jacobiator(t, p) <= 1e-6);
  }
}

TEST_CASE("pointwise and symbolic recovery invert assembly") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 20; ++n) {
    const PoissonTriple t = random_triple(rng);
    const auto pts = points(rng, 5);
    const RecoveredTriple r = recover_triple(assemble_pi(t), t.gamma, pts);
    for (const Point& p : pts) {
      const auto rec = recover_at(values(evaluate(assemble_pi(t), p, 0)), t.gamma.jets(p, 0).values());
      CHECK(rec.mixed <= 1e-12);
      CHECK(std::abs(rec.kappa - t.kappa.value(p)) <= 1e-12);
      CHECK(std::abs(r.kappa.value(p) - t.kappa.value(p)) <= 1e-12);
      for (int a = 0; a < 3; ++a) {
        CHECK(std::abs(rec.beta[a] - t.beta[a].value(p)) <= 1e-12);
        CHECK(std::abs(r.beta[a].value(p) - t.beta[a].value(p)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("a bivector with a mixed part is not almost coupling") {
  const PoissonTriple t = sec5();
  FieldElement pi = assemble_pi(t);
  pi[bit(0) | bit(2)] = F("x1");
  std::vector<Point> pts{Point(1, 0, 0, 0, 0), Point(0, 1, 0, 0, 0)};
  CHECK_THROWS_AS(recover_triple(pi, t.gamma, pts), NotAlmostCoupling);
  std::vector<Point> on_zero{Point(0, 1, 0, 0, 0)};
  CHECK_NOTHROW(recover_triple(pi, t.gamma, on_zero));
}

TEST_CASE("vertical Poisson bivector of beta") {
  const auto pb = values(evaluate(vertical_poisson({F("2"), F("3"), F("5")}), Point(0, 0, 0, 0, 0), 0));
  CHECK(pb[bit(3) | bit(4)] == 2.0);
  CHECK(pb[bit(2) | bit(4)] == -3.0);
  CHECK(pb[bit(2) | bit(3)] == 5.0);
  CHECK(bivector_entry(pb, 4, 2) == 3.0);
}

TEST_CASE("curved Poisson triple satisfies every route") {
  const PoissonTriple t = curved_gauge();
  std::mt19937_64 rng(3);
  const auto pts = points(rng, 25);
  for (const Point& p : pts) {
    const auto rho = curvature(t.gamma, p);
    CHECK(std::abs(rho[0]) + std::abs(rho[1]) > 0.0);
    CHECK(ic_residuals(t, p).max() <= 1e-12);
    for (double j : jacobiator(t, p)) CHECK(std::abs(j) <= 1e-12);
    CHECK(fd_jacobiator(t, p) <= 1e-6);
    CHECK(poisson_connection_residual(t, p, 1e-9) <= 1e-12);
    CHECK(c2_residual(t, p) <= 1e-12);
    CHECK(c3_residual(t, p, 1e-9) <= 1e-12);
    CHECK(cocycle_residual(t, p, 1e-9) <= 1e-12);
    CHECK(curvature_identity_residual(t, p, 1e-9) <= 1e-12);
  }
  const auto rep = equivalence_check(t, pts, 1e-9);
  CHECK(rep.passed());
  CHECK(rep.disagreements.empty());
}

TEST_CASE("shifting kappa breaks both verdicts together") {
  const PoissonTriple t = curved_gauge(0.25);
  std::mt19937_64 rng(4);
  const auto pts = points(rng, 25);
  for (const Point& p : pts) {
    CHECK(ic_residuals(t, p).max() > 1e-3);
    CHECK(fd_jacobiator(t, p) > 1e-3);
    CHECK(curvature_identity_residual(t, p, 1e-9) > 1e-3);
  }
  const auto rep = equivalence_check(t, pts, 1e-9);
  CHECK(rep.find("ic")->failures == 25);
  CHECK(rep.find("jacobiator")->failures == 25);
  CHECK(rep.disagreements.empty());
}

TEST_CASE("IC verdict matches the Jacobiator on random and mixed triples") {
  std::mt19937_64 rng(17);
  for (int n = 0; n < 20; ++n) {
    const PoissonTriple t = random_triple(rng);
    const auto pts = points(rng, 10);
    const auto rep = equivalence_check(t, pts, 1e-9);
    CHECK(rep.disagreements.empty());
    CHECK(rep.find("ic")->failures == rep.find("jacobiator")->failures);
  }
  // Pi = P_beta for any gamma when kappa = 0 and beta is Poisson.
  PoissonTriple v;
  v.gamma = random_connection(rng);
  v.beta = {F("y1"), F("y2"), F("y3")};
  const auto rep = equivalence_check(v, points(rng, 10), 1e-9);
  CHECK(rep.passed());
  CHECK(rep.disagreements.empty());
}

TEST_CASE("serial and parallel equivalence reports agree") {
  std::mt19937_64 rng(23);
  const PoissonTriple t = random_triple(rng);
  const auto pts = points(rng, 40);
  const auto a = equivalence_check(t, pts, 1e-9, Execution::Serial);
  const auto b = equivalence_check(t, pts, 1e-9, Execution::Parallel);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t k = 0; k < a.checks.size(); ++k) {
    CHECK(a.checks[k].max == b.checks[k].max);
    CHECK(a.checks[k].sum == b.checks[k].sum);
    CHECK(a.checks[k].failures == b.checks[k].failures);
    CHECK(*a.checks[k].worst == *b.checks[k].worst);
  }
}

TEST_CASE("bracket routes agree and Hamiltonian fields decompose") {
  std::mt19937_64 rng(29);
  for (int n = 0; n < 20; ++n) {
    const PoissonTriple t = random_triple(rng);
    const auto f = random_polynomial(rng, acp::testing::all_vars(), 3);
    const auto g = random_polynomial(rng, acp::testing::all_vars(), 3);
    const Point p = random_point(rng);
    const double a = poisson_bracket(t, f, g, p);
    CHECK(std::abs(a - poisson_bracket_direct(t, f, g, p)) <= 1e-10 * (1 + std::abs(a)));
    CHECK(std::abs(a + poisson_bracket(t, g, f, p)) <= 1e-12 * (1 + std::abs(a)));
    const GradedElement x = hamiltonian_field(t, f, p);
    // X_F(g) = {F, g}
    double xg = 0.0;
    const Jet2 gj = g.evaluate(p, 1);
    for (int k = 0; k < kDim; ++k) xg += x[bit(k)] * gj.grad(k);
    CHECK(std::abs(xg - a) <= 1e-10 * (1 + std::abs(a)));
    const auto parts = hamiltonian_field_bigraded(t, f, p);
    const auto gamma = t.gamma.jets(p, 0).values();
    CHECK(max_norm(to_coordinate(parts.part10 + parts.part01, gamma) - x) <= 1e-10 * (1 + max_norm(x)));
    CHECK(max_norm(bigrade_project(parts.part10, 0, 1)) == 0.0);
    CHECK(max_norm(bigrade_project(parts.part01, 1, 0)) == 0.0);
  }
  PoissonTriple unit;
  unit.kappa = F("1");
  const auto x = hamiltonian_field(unit, F("x1"), Point(0, 0, 0, 0, 0));
  CHECK(x[bit(1)] == 1.0);
  CHECK(max_norm(x) == 1.0);
}

TEST_CASE("casimir residuals vanish exactly when the Hamiltonian field does") {
  const PoissonTriple t = flat_so3();
  std::mt19937_64 rng(31);
  for (const Point& p : points(rng, 10)) {
    const auto c = casimir_residual(t, F("y1^2 + y2^2 + y3^2"), p);
    CHECK(c[0] <= 1e-14);
    CHECK(c[1] <= 1e-14);
    CHECK(max_norm(hamiltonian_field(t, F("y1^2 + y2^2 + y3^2"), p)) <= 1e-14);
    const auto d = casimir_residual(t, F("y1 + x1"), p);
    CHECK(std::max(d[0], d[1]) > 1e-6);
    CHECK(max_norm(hamiltonian_field(t, F("y1 + x1"), p)) > 1e-6);
  }
}

TEST_CASE("coupling-domain guards") {
  const PoissonTriple t = sec5();
  const Point zero(1, 0, 1, 0, 0);
  CHECK_THROWS_AS(poisson_connection_residual(t, zero, 1e-9), OutsideCouplingDomain);
  CHECK_THROWS_AS(c3_residual(t, zero, 1e-9), OutsideCouplingDomain);
  CHECK_THROWS_AS(cocycle_residual(t, zero, 1e-9), OutsideCouplingDomain);
  CHECK_THROWS_AS(curvature_identity_residual(t, zero, 1e-9), OutsideCouplingDomain);
  CHECK_THROWS_AS(coupling_form(t, zero, 1e-9), OutsideCouplingDomain);
  CHECK(c5_residual(t, zero) <= 1e-14);
  std::mt19937_64 rng(37);
  const auto pts = points(rng, 10);
  CHECK(kappa_tolerance(t, pts) > 1e-9);
  for (const Point& p : pts) {
    CHECK(coupling_form_residual(t, p, 1e-9) <= 1e-12);
    CHECK(poisson_connection_residual(t, p, 1e-9) <= 1e-12);
  }
}

TEST_CASE("flat triples") {
  std::mt19937_64 rng(41);
  const auto pts = points(rng, 15);
  const PoissonTriple ok = flat_so3();
  CHECK_NOTHROW(flat_triple(ok.gamma, ok.kappa, ok.beta, pts));
  for (const Point& p : pts) {
    for (double r : flat_pair_residuals(ok, p)) CHECK(r <= 1e-12);
    CHECK(ic_residuals(ok, p).max() <= 1e-12);
  }
  CHECK(equivalence_check(ok, pts, 1e-9).passed());

  const PoissonTriple curved = curved_gauge();
  CHECK_THROWS_AS(flat_triple(curved.gamma, ok.kappa, ok.beta, pts), NotFlat);
  CHECK_THROWS_AS(flat_triple(ok.gamma, ok.kappa, {F("y2"), F("0"), F("1")}, pts), NotPoissonFiber);
  Connection stretch;
  stretch.gamma[0][0] = F("y1");
  CHECK_THROWS_AS(flat_triple(stretch, ok.kappa, ok.beta, pts), NotPoissonConnection);
  try {
    flat_triple(ok.gamma, F("y1"), ok.beta, pts);
    FAIL("expected NotCasimir");
  } catch (const NotCasimir& e) {
    CHECK(e.residual() > 0.0);
    CHECK(std::find(pts.begin(), pts.end(), e.witness()) != pts.end());
  }
  for (const Point& p : pts) CHECK(flat_pair_residuals(curved, p)[0] > 0.0);
}

TEST_CASE("poisson submanifolds") {
  const PoissonTriple t = sec5();
  std::mt19937_64 rng(43);
  const auto pts = points(rng, 10);
  const Section horizontal{{F("0"), F("x1 + x2 + 1"), F("x1 + x2 - 2")}};
  const auto good = submanifold_check(t, horizontal, pts, 1e-12);
  CHECK(good.passed());
  const Section level{{F("0"), F("0"), F("0")}};
  const auto bad = submanifold_check(t, level, pts, 1e-12);
  CHECK_FALSE(bad.find("tangency")->passed());
  CHECK(bad.find("vertical_vanishing")->passed());
  const Section off{{F("1"), F("x1 + x2"), F("x1 + x2")}};
  CHECK_FALSE(submanifold_check(t, off, pts, 1e-12).find("vertical_vanishing")->passed());
}

TEST_CASE("order budgets propagate") {
  PoissonTriple t = sec5();
  t.kappa = partial(partial(F("x1^3"), 0), 0);
  CHECK_THROWS_AS(ic_residuals(t, Point(0, 0, 0, 0, 0)), OrderBudgetExceeded);
  CHECK(t.budget() == 0);
}
