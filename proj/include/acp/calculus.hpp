#pragma once

#include <array>

#include "acp/graded.hpp"

namespace acp {

/// Jets of the six connection components gamma_i^a at one point.
struct ConnectionJets {
  std::array<std::array<Jet2, kFiberDim>, kBaseDim> gamma{};

  /// The flat (zero) connection.
  static ConnectionJets flat(int order = 2);
  /// Values only.
  std::array<std::array<double, kFiberDim>, kBaseDim> values() const;
};

namespace chart {

// Monomials of the moving frame.
inline constexpr Mask kHor1 = bit(0), kHor2 = bit(1);
inline constexpr Mask kBaseArea = kHor1 | kHor2;
inline constexpr Mask kFiberVolume = bit(2) | bit(3) | bit(4);

/// hor1 ∧ hor2, the horizontal lift of the base bivector d/dx1 ∧ d/dx2.
GradedElement lifted_base_bivector();
/// Omega^H = dx1 ∧ dx2.
GradedElement horizontal_volume();
/// Omega^V = eta1 ∧ eta2 ∧ eta3.
GradedElement vertical_volume();
/// Q_H = -hor1 ∧ hor2, so that i_{Q_H} Omega^H = 1.
GradedElement horizontal_dual();
/// Q_V = -d/dy1 ∧ d/dy2 ∧ d/dy3, so that i_{Q_V} Omega^V = 1.
GradedElement vertical_dual();

}  // namespace chart

/// Frame conversions. Moving to coordinate uses hor_i = d/dx^i - gamma_i^a d/dy^a
/// and eta^a = dy^a + gamma_i^a dx^i; the inverse maps invert these.
template <class T>
Graded<T> to_coordinate(const Graded<T>& a, const std::array<std::array<T, kFiberDim>, kBaseDim>& gamma);
template <class T>
Graded<T> to_moving(const Graded<T>& a, const std::array<std::array<T, kFiberDim>, kBaseDim>& gamma);

/// The connection components of a ConnectionJets as a plain array, for the
/// conversions above.
std::array<std::array<Jet2, kFiberDim>, kBaseDim> gamma_array(const ConnectionJets& g);

/// d eta^a as a moving-frame 2-form; coefficients lose one jet order.
JetElement d_eta(const ConnectionJets& g, int a);

/// Exterior differential of a moving-frame form with jet coefficients.
/// Coefficients of the result have one jet order less than the inputs.
JetElement exterior_d(const JetElement& form, const ConnectionJets& g);

/// The three bigraded pieces of d.
struct SplitDifferential {
  JetElement d10;
  JetElement d01;
  JetElement d2m1;  // bidegree (2,-1)
};
SplitDifferential split_d(const JetElement& form, const ConnectionJets& g);

/// Residuals of d10² + d2m1 d01 + d01 d2m1, d10 d01 + d01 d10 and d01²
/// applied to `form`. Needs 2-jets of the form and the connection.
std::array<double, 3> cochain_residuals(const JetElement& form, const ConnectionJets& g);

/// Coordinate Jacobiator-type bracket of two coordinate-frame bivectors,
/// J^{μνλ} = Σ_ρ (A^{μρ} ∂_ρ B^{νλ} + B^{μρ} ∂_ρ A^{νλ}) + cyclic(μνλ),
/// returned as a coordinate trivector. Needs 1-jets.
GradedElement schouten_bivectors(const JetElement& a, const JetElement& b);

/// Lie derivative L_X P of a coordinate bivector along a coordinate vector.
/// Needs 1-jets of both.
GradedElement lie_derivative_bivector(const JetElement& x, const JetElement& p);

/// Lie bracket [X, Y] of two coordinate vector fields. Needs 1-jets.
GradedElement lie_bracket(const JetElement& x, const JetElement& y);

/// Coordinate divergence Σ_μ ∂_μ X^μ of a vector field. Needs 1-jets.
double divergence(const JetElement& x);

/// The ten components of a trivector in lexicographic order of (μ<ν<λ).
std::array<double, 10> trivector_components(const GradedElement& t);

}  // namespace acp
