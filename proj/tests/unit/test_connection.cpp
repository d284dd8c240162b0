#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "acp/connection.hpp"
#include "random_fields.hpp"

using namespace acp;
using acp::testing::random_connection;
using acp::testing::random_point;

namespace {

Connection sec5_connection() {
  Connection g;
  for (int i = 0; i < 2; ++i) {
    g.gamma[i][1] = DifferentiableField::constant(-1.0);
    g.gamma[i][2] = DifferentiableField::constant(-1.0);
  }
  return g;
}

}  // namespace

TEST_CASE("horizontal lifts") {
  const Point p(1, 2, 3, 4, 5);
  const auto flat = values(evaluate(horizontal_lift(0, Connection::flat()), p, 0));
  CHECK(flat[bit(0)] == 1.0);
  CHECK(max_norm(flat) == 1.0);
  for (int i = 0; i < 2; ++i) {
    const auto h = values(evaluate(horizontal_lift(i, sec5_connection()), p, 0));
    CHECK(h[bit(i)] == 1.0);
    CHECK(h[bit(2)] == 0.0);
    CHECK(h[bit(3)] == 1.0);
    CHECK(h[bit(4)] == 1.0);
  }
}

TEST_CASE("theta and rho vanish for flat and constant connections") {
  const Point p(0.3, -0.2, 1, 2, -1);
  for (const Connection& g : {Connection::flat(), sec5_connection()}) {
    CHECK(values(evaluate(theta(g), p, 0)).is_zero());
    CHECK(values(evaluate(rho(g), p, 0)).is_zero());
    CHECK(max_norm(theta_from_volume(g.jets(p, 1))) == 0.0);
    CHECK(max_norm(rho_from_volume(g.jets(p, 1))) == 0.0);
    for (double c : curvature(g, p)) CHECK(c == 0.0);
  }
}

TEST_CASE("component formulas agree with the volume routes") {
  std::mt19937_64 rng(21);
  for (int n = 0; n < 30; ++n) {
    const Connection g = random_connection(rng);
    for (int k = 0; k < 5; ++k) {
      const Point p = random_point(rng);
      const ConnectionJets j = g.jets(p, 1);
      CHECK(max_norm(theta_from_volume(j) - values(evaluate(theta(g), p, 0))) <= 1e-10);
      CHECK(max_norm(rho_from_volume(j) - values(evaluate(rho(g), p, 0))) <= 1e-10);
      for (double r : volume_residuals(g, p)) CHECK(r <= 1e-10);
      CHECK(curvature_rho_residual(g, p) <= 1e-10);
    }
  }
}

TEST_CASE("curvature by commutator for a y-dependent connection") {
  Connection g;
  g.gamma[0][0] = DifferentiableField::parse("y2");
  const Point p(0.1, 0.2, 0.3, 0.4, 0.5);
  const auto c = curvature(g, p);
  // [d_x1 - y2 d_y1, d_x2] = 0 and rho^1 = 0 for this connection
  for (double v : c) CHECK(v == 0.0);
  g.gamma[1][1] = DifferentiableField::parse("y1*x1");
  const auto c2 = curvature(g, p);
  const auto r = rho_components(g);
  for (int a = 0; a < 3; ++a) CHECK(c2[a] == doctest::Approx(r[a].value(p)).epsilon(1e-14));
  CHECK(std::abs(c2[1]) > 0.1);
}

TEST_CASE("theta for a gauge-type connection with closed beta") {
  // gamma_i^a = eps^{abc} d_b mu_i beta_c with beta = y, mu = (y3, 0)
  Connection g;
  g.gamma[0][0] = DifferentiableField::parse("-y2");
  g.gamma[0][1] = DifferentiableField::parse("y1");
  const Point p(0.4, 0.1, 0.3, -0.2, 0.9);
  CHECK(values(evaluate(theta(g), p, 0)).is_zero());
}

TEST_CASE("shifts") {
  std::mt19937_64 rng(4);
  const Connection g = random_connection(rng);
  ConnectionShift zero;
  const Point p = random_point(rng);
  const auto a = g.jets(p, 0).values();
  const auto b = shift(g, zero).jets(p, 0).values();
  CHECK(a == b);
  ConnectionShift s1, s2, s12;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 3; ++k) {
      s1.xi[i][k] = testing::random_polynomial(rng, testing::all_vars(), 2);
      s2.xi[i][k] = testing::random_polynomial(rng, testing::all_vars(), 2);
      s12.xi[i][k] = s1.xi[i][k] + s2.xi[i][k];
    }
  const auto c1 = shift(shift(g, s1), s2).jets(p, 0).values();
  const auto c2 = shift(g, s12).jets(p, 0).values();
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 3; ++k) CHECK(c1[i][k] == doctest::Approx(c2[i][k]).epsilon(1e-14));
}
