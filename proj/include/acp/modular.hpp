#pragma once

#include <array>
#include <optional>
#include <vector>

#include "acp/campaign.hpp"
#include "acp/report.hpp"
#include "acp/triple.hpp"

namespace acp {

/// Candidate data for the unimodularity criteria: a primitive h with
/// theta = -d10 h, a global factor K, and optionally a Casimir factor kappa0
/// in kappa = e^h kappa0 K.
struct UnimodularityCertificate {
  std::optional<DifferentiableField> h;
  std::optional<DifferentiableField> K;
  std::optional<DifferentiableField> kappa0;
};

/// Z^{a Omega} at p, Z^mu = (1/a) Σ_ν ∂_ν(a Pi^{μν}), over the coordinate
/// frame. Throws ZeroVolumeFactor when a(p) = 0.
GradedElement modular_direct(const PoissonTriple& t, const DifferentiableField& a, const Point& p);
GradedElement modular_direct(const PoissonTriple& t, const Point& p);

/// Z_10 = -i_{kappa theta + d10 kappa} hor1∧hor2 and
/// Z_01 = i_{d01 beta + kappa rho} Q_V over the moving frame (a = 1).
struct BigradedModular {
  GradedElement z10;
  GradedElement z01;
};
BigradedModular modular_bigraded(const PoissonTriple& t, const Point& p);

/// |Z^{a Omega} - Z^Omega + (1/a) i_{da} Pi|.
double renormalization_check(const PoissonTriple& t, const DifferentiableField& a, const Point& p);

/// kappa i_theta Q_H, the horizontal part of Z for the volume (1/kappa) Omega.
GradedElement modular_prime_horizontal(const PoissonTriple& t, const Point& p, double kappa_tol);

/// |d01 beta|; the theta parts are evaluated only when that is within tol
/// and |kappa(p)| > kappa_tol.
struct Closedness {
  double d_beta = 0.0;
  std::optional<double> theta_casimir;  // max_i |d01 theta_i ∧ beta|
  std::optional<double> d_theta;        // |d10 theta|
};
Closedness closedness_check(const PoissonTriple& t, const Point& p, double tol, double kappa_tol);

/// |L_Z Pi| for Z = Z^{a Omega}; needs 2-jets of the triple and of a.
double modular_lie_residual(const PoissonTriple& t, const DifferentiableField& a, const Point& p);

/// div_{a Omega}(X_F) relative to the size of its terms,
/// |Σ ∂X^ν + X^ν ∂_ν a / a| / (1 + Σ |terms|).
double hamiltonian_divergence(const PoissonTriple& t, const DifferentiableField& f, const DifferentiableField& a,
                              const Point& p);

/// div_{a Omega}(X_F) itself.
double volume_divergence(const PoissonTriple& t, const DifferentiableField& f, const DifferentiableField& a,
                         const Point& p);

/// The five coordinate functions followed by three cubic polynomials drawn
/// from a fixed seed.
std::vector<DifferentiableField> test_hamiltonians();

/// Coupling-domain criterion: checks "cl1", "theta_exact", "h_casimir" and
/// "invariant_volume" (for e^h/kappa Omega). Samples with |kappa| <=
/// kappa_tol are skipped. Throws MissingCertificate without h.
VerificationReport unimod_coupling_check(const PoissonTriple& t, const UnimodularityCertificate& cert,
                                         const std::vector<Point>& samples, const Tolerances& tol = {},
                                         Execution ex = default_execution());

/// Global criterion: the coupling checks plus "kappa_factorization"
/// (|kappa - e^h kappa0 K| on the coupling domain), "kappa0_casimir" when
/// kappa0 is given, "K_casimir" on the zero set of kappa and
/// "global_volume" (div for (1/K) Omega everywhere). Throws
/// MissingCertificate without h and K, ZeroVolumeFactor when K vanishes or
/// changes sign on the samples.
VerificationReport unimod_global_check(const PoissonTriple& t, const UnimodularityCertificate& cert,
                                       const std::vector<Point>& samples, const Tolerances& tol = {},
                                       Execution ex = default_execution());

}  // namespace acp
