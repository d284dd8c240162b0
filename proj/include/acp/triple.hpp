#pragma once

#include <array>
#include <vector>

#include "acp/campaign.hpp"
#include "acp/connection.hpp"
#include "acp/report.hpp"

namespace acp {

/// Coefficients beta_a of a vertical 1-form beta = beta_a eta^a.
using VerticalOneForm = std::array<DifferentiableField, kFiberDim>;

/// The datum (gamma, kappa, beta) of an almost-coupling bivector
/// Pi = kappa hor1 ∧ hor2 + P_beta. Poisson-ness is checked, not assumed.
struct PoissonTriple {
  Connection gamma;
  DifferentiableField kappa;
  VerticalOneForm beta{};

  int budget() const;
};

/// Jets of a triple's fields at one point.
struct TripleJets {
  ConnectionJets gamma;
  Jet2 kappa;
  std::array<Jet2, kFiberDim> beta{};

  static TripleJets at(const PoissonTriple& t, const Point& p, int order);
  /// Largest valid jet entry over kappa, beta and gamma.
  double magnitude() const;
  /// Pi over the moving frame: kappa hor1∧hor2 + P_beta.
  JetElement pi_moving() const;
  /// Pi over the coordinate frame.
  JetElement pi() const;
  JetElement vertical_poisson() const;
};

/// A section y = s(x) of the chart; components must not depend on y.
struct Section {
  std::array<DifferentiableField, kFiberDim> s{};
};

/// Failure of a precondition at a witness point.
class WitnessError : public ResidualError {
 public:
  WitnessError(const std::string& what, double residual, const Point& witness)
      : ResidualError(what + " at " + witness.str(), residual), witness_(witness) {}
  const Point& witness() const noexcept { return witness_; }

 private:
  Point witness_;
};

class NotFlat : public WitnessError {
 public:
  NotFlat(double r, const Point& p) : WitnessError("connection is not flat", r, p) {}
};
class NotPoissonConnection : public WitnessError {
 public:
  NotPoissonConnection(double r, const Point& p)
      : WitnessError("connection is not Poisson for P_beta", r, p) {}
};
class NotCasimir : public WitnessError {
 public:
  NotCasimir(double r, const Point& p) : WitnessError("kappa0 is not a Casimir of P_beta", r, p) {}
};
class NotPoissonFiber : public WitnessError {
 public:
  NotPoissonFiber(double r, const Point& p)
      : WitnessError("beta violates the fiberwise Jacobi identity", r, p) {}
};

/// P_beta = -i_beta Q_V = beta1 dy2∧dy3 + beta2 dy3∧dy1 + beta3 dy1∧dy2.
FieldElement vertical_poisson(const VerticalOneForm& beta);

/// Pi = kappa hor1∧hor2 + P_beta over the coordinate frame.
FieldElement assemble_pi(const PoissonTriple& t);
/// Same over the moving frame of t.gamma.
FieldElement assemble_pi_moving(const PoissonTriple& t);

/// kappa = -i_{Pi_20} Omega^H and beta = -i_{Pi_02} Omega^V from a
/// coordinate-frame bivector at one point, with the size of Pi_11.
struct PointRecovery {
  double kappa = 0.0;
  std::array<double, kFiberDim> beta{};
  double mixed = 0.0;
};
PointRecovery recover_at(const GradedElement& pi, const std::array<std::array<double, kFiberDim>, kBaseDim>& gamma);

/// Field-level recovery. The (1,1) part is checked at `samples`; throws
/// NotAlmostCoupling when it exceeds tol anywhere.
struct RecoveredTriple {
  DifferentiableField kappa;
  VerticalOneForm beta{};
};
RecoveredTriple recover_triple(const FieldElement& pi, const Connection& gamma, const std::vector<Point>& samples,
                               double tol = 1e-12);

/// The ten components of the Jacobiator schouten(Pi, Pi) at p.
std::array<double, 10> jacobiator(const PoissonTriple& t, const Point& p);
std::array<double, 10> jacobiator(const TripleJets& j);

/// IC1 (1 value), IC2 (i, a) in row-major order, IC3 for (a,b) in
/// (1,2), (2,3), (3,1).
struct IcResiduals {
  double ic1 = 0.0;
  std::array<double, 6> ic2{};
  std::array<double, 3> ic3{};
  double max() const;
};
IcResiduals ic_residuals(const PoissonTriple& t, const Point& p);
IcResiduals ic_residuals(const TripleJets& j);

/// Equivalence check: at every sample the IC verdict must equal the
/// Jacobiator verdict. Both residuals are divided by (1 + m)^4, m the jet
/// magnitude of the triple at the point, before comparison with tol.
/// Checks "ic" and "jacobiator"; disagreements list the points where the
/// verdicts differ.
VerificationReport equivalence_check(const PoissonTriple& t, const std::vector<Point>& samples, double tol,
                                     Execution ex = default_execution());
double verdict_scale(const TripleJets& j);

/// {f,g} through the bigraded formula.
double poisson_bracket(const PoissonTriple& t, const DifferentiableField& f, const DifferentiableField& g,
                       const Point& p);
/// {f,g} = Pi(df, dg) from the assembled coordinate bivector.
double poisson_bracket_direct(const PoissonTriple& t, const DifferentiableField& f, const DifferentiableField& g,
                              const Point& p);

/// X_F = i_{dF} Pi over the coordinate frame, X^ν = ∂_μF Pi^{μν}.
GradedElement hamiltonian_field(const PoissonTriple& t, const DifferentiableField& f, const Point& p);
/// Jets of X_F (one order below the inputs).
JetElement hamiltonian_field(const TripleJets& j, const Jet2& f);
/// The bigraded parts kappa i_{d10 F} hor1∧hor2 and -i_{d01F ∧ beta} Q_V
/// over the moving frame.
struct BigradedVector {
  GradedElement part10;
  GradedElement part01;
};
BigradedVector hamiltonian_field_bigraded(const PoissonTriple& t, const DifferentiableField& f, const Point& p);

/// max |kappa d10 c| and max |d01 c ∧ beta|.
std::array<double, 2> casimir_residual(const PoissonTriple& t, const DifferentiableField& c, const Point& p);

/// Coupling-domain membership threshold for a sample set:
/// rel * (1 + max |kappa| over the samples).
double kappa_tolerance(const PoissonTriple& t, const std::vector<Point>& samples, double rel = 1e-9);

/// max over i of |L_{hor_i} P_beta|. Throws OutsideCouplingDomain when
/// |kappa(p)| <= kappa_tol.
double poisson_connection_residual(const PoissonTriple& t, const Point& p, double kappa_tol);
/// |d10 beta + beta ∧ theta|, the form of the same condition.
double c2_residual(const PoissonTriple& t, const Point& p);
/// |d01(1/kappa) ∧ beta + rho|; needs |kappa| > kappa_tol.
double c3_residual(const PoissonTriple& t, const Point& p, double kappa_tol);
/// |d01 kappa ∧ beta| (the boundary condition, meaningful where kappa ≈ 0).
double c5_residual(const PoissonTriple& t, const Point& p);
/// |schouten(Q_H, P_beta)|; needs |kappa| > kappa_tol.
double cocycle_residual(const PoissonTriple& t, const Point& p, double kappa_tol);
/// |Curv(d_x1, d_x2) + omega(d_x1, d_x2) P_beta^# d(1/kappa)|; needs |kappa| > kappa_tol.
double curvature_identity_residual(const PoissonTriple& t, const Point& p, double kappa_tol);

/// Residuals behind the flat-pair proposition at a coupling-domain point:
/// |Curv|, |schouten(Pi_20, Pi_20)|, |schouten(Pi_20, Pi_02)|.
std::array<double, 3> flat_pair_residuals(const PoissonTriple& t, const Point& p);

/// Poisson-submanifold residuals at (x, s(x)) for each base point
/// (y-coordinates of the samples are ignored). Checks "tangency" and
/// "vertical_vanishing".
VerificationReport submanifold_check(const PoissonTriple& t, const Section& s, const std::vector<Point>& samples,
                                     double tol);

/// Builds (gamma, kappa0, beta) after checking on `samples` that gamma is
/// flat, gamma is a Poisson connection for P_beta, beta satisfies the
/// fiberwise Jacobi identity, and kappa0 is a Casimir of P_beta.
PoissonTriple flat_triple(const Connection& gamma, const DifferentiableField& kappa0, const VerticalOneForm& beta,
                          const std::vector<Point>& samples, double tol = 1e-9);

/// sigma = (1/kappa) Omega^H at p; throws OutsideCouplingDomain.
GradedElement coupling_form(const PoissonTriple& t, const Point& p, double kappa_tol);
/// max over alpha in {dx1, dx2} of |i_{i_alpha Pi_20} sigma + alpha|.
double coupling_form_residual(const PoissonTriple& t, const Point& p, double kappa_tol);

}  // namespace acp
