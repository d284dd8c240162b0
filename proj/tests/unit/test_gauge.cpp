#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "acp/gauge.hpp"
#include "acp/strata.hpp"
#include "random_fields.hpp"

using namespace acp;
using acp::testing::random_point;
using acp::testing::random_polynomial;
using acp::testing::random_polynomial_text;

namespace {

DifferentiableField F(const std::string& s) { return DifferentiableField::parse(s); }

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

PoissonTriple so3(const std::string& kappa) {
  PoissonTriple t;
  t.kappa = F(kappa);
  t.beta = {F("y1"), F("y2"), F("y3")};
  return t;
}

PoissonTriple curved() {
  PoissonTriple t = so3("1/(3 + y3)");
  t.gamma.gamma[0] = {F("-x2*y2"), F("x2*y1"), F("0")};
  return t;
}

std::vector<Point> box_points(int n, std::uint64_t seed = 0) {
  return sample_box(uniform_box(-1, 1), Generator::Halton, n, seed).points;
}

}  // namespace

TEST_CASE("varkappa examples and routes") {
  const PoissonTriple t = so3("1");
  const Point p(0.3, -0.2, 0.5, 0.1, -0.7);
  GaugeData zero;
  CHECK(varkappa(t, zero, 1.0, p) == 0.0);
  GaugeData lin;
  lin.mu = {F("0"), F("x1")};
  CHECK(varkappa(t, lin, 1.0, p) == doctest::Approx(1.0));
  CHECK(varkappa_coordinate(t, lin, 1.0, p) == doctest::Approx(1.0));
  GaugeData br;
  br.mu = {F("y3"), F("0")};
  CHECK(varkappa(t, br, 0.05, p) == 0.0);
  GaugeData both;
  both.mu = {F("y3"), F("y1*x2")};
  // eps beta·(grad mu1 × grad mu2) = eps y·((0,0,1)×(x2,0,0)) = eps x2 y2
  CHECK(varkappa(t, both, 0.5, p) == doctest::Approx(0.5 * p.x(1) * p.y(1)));
  std::mt19937_64 rng(3);
  for (int n = 0; n < 50; ++n) {
    PoissonTriple r = curved();
    r.gamma = acp::testing::random_connection(rng);
    for (auto& b : r.beta) b = random_polynomial(rng, acp::testing::all_vars(), 2);
    GaugeData g;
    g.mu = {random_polynomial(rng, acp::testing::all_vars(), 3), random_polynomial(rng, acp::testing::all_vars(), 3)};
    const Point q = random_point(rng);
    const double a = varkappa(r, g, 0.3, q);
    CHECK(std::abs(a - varkappa_coordinate(r, g, 0.3, q)) <= 1e-10 * (1 + std::abs(a)));
    CHECK(std::abs(a - varkappa_field(r, g, 0.3).value(q)) <= 1e-10 * (1 + std::abs(a)));
  }
}

TEST_CASE("family reproduces the trivial-bundle connection formula") {
  const PoissonTriple t = so3("cutoff(y1^2 + y2^2 + y3^2)");
  GaugeData g;
  g.mu = {F("y3"), F("0")};
  for (double eps : {0.01, 0.05}) {
    const PoissonTriple f = family(t, g, eps);
    for (const Point& p : box_points(30)) {
      CHECK(f.gamma.gamma[0][0].value(p) == doctest::Approx(-eps * p.y(1)));
      CHECK(f.gamma.gamma[0][1].value(p) == doctest::Approx(eps * p.y(0)));
      CHECK(f.gamma.gamma[0][2].value(p) == 0.0);
      for (int a = 0; a < 3; ++a) CHECK(f.gamma.gamma[1][a].value(p) == 0.0);
      CHECK(f.kappa.value(p) == t.kappa.value(p));
    }
  }
}

TEST_CASE("family at zero and the identity gauge") {
  const PoissonTriple t = curved();
  GaugeData g;
  g.mu = {F("x2*y3"), F("y1")};
  const PoissonTriple same = family(t, g, 0.0);
  CHECK(same.kappa.describe() == t.kappa.describe());
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 3; ++a) CHECK(same.gamma.gamma[i][a].describe() == t.gamma.gamma[i][a].describe());
  const PoissonTriple id = gauge_transform(t, GaugeData{});
  for (const Point& p : box_points(20)) {
    const auto a = values(TripleJets::at(t, p, 0).pi());
    const auto b = values(TripleJets::at(id, p, 0).pi());
    CHECK(max_norm(a - b) == 0.0);
    CHECK(domain_indicator(t, GaugeData{}, 1.0, p) == 1.0);
  }
}

TEST_CASE("the curved fixture is the gauge image of a flat triple") {
  const PoissonTriple flat = so3("1/3");
  GaugeData g;
  g.mu = {F("x2*y3"), F("0")};
  const PoissonTriple f = gauge_transform(flat, g);
  const PoissonTriple c = curved();
  for (const Point& p : box_points(20)) {
    const auto a = values(TripleJets::at(f, p, 0).pi());
    const auto b = values(TripleJets::at(c, p, 0).pi());
    CHECK(max_norm(a - b) <= 1e-14);
  }
}

TEST_CASE("gauge closure on verified triples") {
  std::mt19937_64 rng(19);
  struct Base {
    PoissonTriple t;
    std::vector<int> casimir_vars;  // c is a polynomial in these and the quadratic Casimir
    std::string casimir;
  };
  const std::vector<Base> bases{
      {so3("2 + tanh(x1 - x2*(y1^2 + y2^2 + y3^2))"), {0, 1}, "(y1^2 + y2^2 + y3^2)"},
      {curved(), {0, 1}, "(y1^2 + y2^2 + y3^2)"},
      {sec5(), {0, 1, 2}, "y1"},
  };
  int runs = 0;
  for (int n = 0; n < 30; ++n) {
    const Base& b = bases[static_cast<std::size_t>(n) % bases.size()];
    GaugeData g;
    for (auto& m : g.mu) m = random_polynomial(rng, acp::testing::all_vars(), 2, 0.5, 4);
    g.c = F(random_polynomial_text(rng, b.casimir_vars, 1, 0.5, 3) + " + 0.3*" + b.casimir);
    std::uniform_real_distribution<double> e(0.0, 0.1);
    g.epsilon = e(rng);
    const auto pts = box_points(40, static_cast<std::uint64_t>(n));
    check_gauge_casimir(b.t, g, pts, 1e-9);
    const auto dom = gauge_domain(b.t, g, g.epsilon, pts);
    const PoissonTriple f = family(b.t, g, g.epsilon);
    const auto rep = equivalence_check(f, dom, 1e-9);
    CHECK(rep.passed());
    CHECK(rep.disagreements.empty());
    for (int a = 0; a < 3; ++a) CHECK(f.beta[a].describe() == b.t.beta[a].describe());
    for (const Point& p : dom) {
      CHECK((b.t.kappa.value(p) == 0.0) == (f.kappa.value(p) == 0.0));
      CHECK(characteristic_compare(b.t, g, g.epsilon, p).equal());
    }
    ++runs;
  }
  CHECK(runs == 30);
}

TEST_CASE("zero set is preserved exactly") {
  const PoissonTriple t = sec5();
  GaugeData g;
  g.mu = {F("y1*x2 + y2"), F("x1*y3")};
  g.c = F("y1");
  const PoissonTriple f = family(t, g, 0.1);
  const auto grid = sample_box(uniform_box(-2, 2), Generator::Grid, 5).points;
  int zeros = 0;
  for (const Point& p : grid) {
    if (t.kappa.value(p) != 0.0) continue;
    ++zeros;
    CHECK(f.kappa.value(p) == 0.0);
  }
  CHECK(zeros > 0);
}

TEST_CASE("casimir requirement on c") {
  GaugeData g;
  g.c = F("y1");
  CHECK_THROWS_AS(check_gauge_casimir(so3("1"), g, box_points(10), 1e-9), NotCasimir);
  g.c = F("x1 + y1^2 + y2^2 + y3^2");
  CHECK_NOTHROW(check_gauge_casimir(so3("1"), g, box_points(10), 1e-9));
}

TEST_CASE("scaling") {
  const PoissonTriple t = sec5();
  for (const Point& p : box_points(20)) {
    const auto pi = values(TripleJets::at(t, p, 0).pi());
    CHECK(max_norm(values(TripleJets::at(scale(t, 1.0), p, 0).pi()) - pi) == 0.0);
    CHECK(max_norm(values(TripleJets::at(scale(t, 0.0), p, 0).pi())) == 0.0);
    CHECK(max_norm(values(TripleJets::at(scale(t, -2.0), p, 0).pi()) + 2.0 * pi) <= 1e-14);
    CHECK(ic_residuals(scale(t, -2.0), p).max() <= 1e-12);
  }
}

TEST_CASE("gauge domain") {
  PoissonTriple sym;
  sym.kappa = F("1");
  GaugeData g;
  g.mu = {F("0"), F("x1^2/2")};
  double prev = domain_indicator(sym, g, 1.0, Point(0, 0, 0, 0, 0));
  bool crossed = false;
  for (int k = 1; k <= 40; ++k) {
    const double d = domain_indicator(sym, g, 1.0, Point(0.05 * k + 0.013, 0, 0, 0, 0));
    if (d * prev < 0) crossed = true;
    prev = d;
  }
  CHECK(crossed);
  CHECK_THROWS_AS(characteristic_compare(sym, g, 1.0, Point(1, 0, 0, 0, 0)), OutsideDomain);

  GaugeData constant;
  constant.mu = {F("0"), F("x1")};
  CHECK_THROWS_AS(gauge_domain(sym, constant, 1.0, box_points(10)), EmptyDomain);

  const PoissonTriple t = sec5();
  GaugeData h;
  h.mu = {F("x2*y1"), F("x1^2")};
  double worst = 0.0;
  for (const Point& p : sample_box(uniform_box(-2, 2), Generator::Halton, 200).points)
    worst = std::max(worst, std::abs(domain_indicator(t, h, 1e-6, p) - 1.0));
  CHECK(worst <= 1e-4);
}

TEST_CASE("characteristic distributions of unrelated tensors differ") {
  const Point p(0.2, 0.4, 0.7, -0.3, 0.5);
  const auto a = values(TripleJets::at(so3("1"), p, 0).pi());
  const auto b = values(TripleJets::at(sec5(), p, 0).pi());
  CHECK_FALSE(characteristic_compare(a, b).equal());
  CHECK(characteristic_compare(a, a).equal());
}

TEST_CASE("closedness of the gauge two-form") {
  std::mt19937_64 rng(5);
  const Point p(0.1, -0.4, 0.3, 0.8, -0.5);
  for (int n = 0; n < 10; ++n) {
    GaugeData g;
    for (auto& m : g.mu) m = random_polynomial(rng, acp::testing::all_vars(), 3);
    const auto r = upsilon_closedness(g, p);
    CHECK(r.d_upsilon <= 1e-12);
    CHECK(r.vertical_dc == 0.0);
    g.c = F("x1*x2 - 3*x1");
    CHECK(upsilon_closedness(g, p).d_upsilon <= 1e-12);
    g.c = F("y1");
    const auto v = upsilon_closedness(g, p);
    CHECK(v.d_upsilon == doctest::Approx(1.0));
    CHECK(v.vertical_dc == 1.0);
  }
}
