#pragma once

#include <array>

#include "acp/calculus.hpp"
#include "acp/field.hpp"

namespace acp {

using ComponentGrid = std::array<std::array<DifferentiableField, kFiberDim>, kBaseDim>;

/// Ehresmann connection gamma = (dy^a + gamma_i^a dx^i) ⊗ d/dy^a on the chart,
/// stored by its six components. Index i runs over 0..1, a over 0..2.
struct Connection {
  ComponentGrid gamma{};

  static Connection flat() { return {}; }
  ConnectionJets jets(const Point& p, int order) const;
  /// Smallest jet budget among the components.
  int budget() const;
  bool is_flat_zero() const;
};

/// A vertical-valued 1-form Xi, stored by Xi(d/dx^i) = Xi_i^a d/dy^a.
struct ConnectionShift {
  ComponentGrid xi{};
};

/// hor_i = d/dx^i - gamma_i^a d/dy^a as a coordinate-frame vector field.
FieldElement horizontal_lift(int i, const Connection& g);
/// Jets of hor_i at a point as a coordinate-frame vector.
JetElement horizontal_lift(int i, const ConnectionJets& g);

/// theta = -(d gamma_i^a / dy^a) dx^i, a moving-frame (1,0)-form.
FieldElement theta(const Connection& g);
/// Curvature scalars rho^a = d_x2 gamma_1^a - d_x1 gamma_2^a
///   + gamma_1^b d_yb gamma_2^a - gamma_2^b d_yb gamma_1^a.
std::array<DifferentiableField, kFiberDim> rho_components(const Connection& g);
/// rho = -1/2 eps_abc rho^a eta^b ∧ eta^c, a moving-frame (0,2)-form.
FieldElement rho(const Connection& g);

/// theta through the volume route, -i_{Q_V} d10 Omega^V. Needs 1-jets.
GradedElement theta_from_volume(const ConnectionJets& g);
/// rho through the volume route, i_{Q_H} d2m1 Omega^V. Needs 1-jets.
GradedElement rho_from_volume(const ConnectionJets& g);

/// Residuals of d10 Omega^V - theta ∧ Omega^V and d2m1 Omega^V - Omega^H ∧ rho,
/// with theta and rho taken from their component formulas at p.
std::array<double, 2> volume_residuals(const Connection& g, const Point& p);

/// The vertical vector [hor1, hor2] at p, by direct commutator. With the
/// conventions here it equals +rho^a d/dy^a.
std::array<double, kFiberDim> curvature(const Connection& g, const Point& p);
/// Residual of i_{Curv} Omega^V + Omega^H(hor1, hor2) rho at p.
double curvature_rho_residual(const Connection& g, const Point& p);

/// gamma - Xi.
Connection shift(const Connection& g, const ConnectionShift& xi);

}  // namespace acp
