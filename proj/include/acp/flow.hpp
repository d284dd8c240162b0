#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "acp/campaign.hpp"
#include "acp/report.hpp"
#include "acp/triple.hpp"

namespace acp {

/// States of a fixed-step integration of X_F, times[k] = k dt.
struct Trajectory {
  std::vector<double> times;
  std::vector<Point> states;
  DifferentiableField hamiltonian;
  double dt = 0.0;
  std::string method = "rk4";
  /// max over steps of |y(dt) - y(dt/2 twice)| / 15.
  double error_estimate = 0.0;
  bool truncated = false;
  std::string truncation;  // reason, empty unless truncated
};

/// n classical RK4 steps of X_F = i_{dF} Pi from p0. A DomainError or a
/// non-finite state stops the path early with `truncated` set; the states
/// so far are kept. Throws InputError for dt <= 0 or n < 0.
Trajectory integrate(const PoissonTriple& t, const DifferentiableField& f, const Point& p0, double dt, int n);

/// One trajectory per start, in input order.
std::vector<Trajectory> integrate_all(const PoissonTriple& t, const DifferentiableField& f,
                                      const std::vector<Point>& starts, double dt, int n,
                                      Execution ex = default_execution());

struct ConservationReport {
  double energy_drift = 0.0;          // max |F(x_k) - F(x_0)|
  std::vector<double> casimir_drift;  // same for each Casimir
  /// Steps where kappa has left its starting sign by more than kappa_tol.
  long kappa_crossings = 0;
  double kappa_tol = 0.0;
  /// Trapezoidal ∫ div_{a Omega}(X_F) dt, when a volume factor is given.
  std::optional<double> divergence_integral;
  bool truncated = false;

  /// Checks "energy_drift", "casimir_drift", "kappa_sign" and, with a volume,
  /// "volume_divergence", all against tol.conservation.
  VerificationReport verdict(const Tolerances& tol = {}) const;
};

ConservationReport conservation_report(const PoissonTriple& t, const Trajectory& traj,
                                       const std::vector<DifferentiableField>& casimirs,
                                       const std::optional<DifferentiableField>& volume = std::nullopt,
                                       double kappa_tol = 1e-9);

/// Header t,x1,x2,y1,y2,y3,F,casimir_1..k, one row per state.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::vector<DifferentiableField>& casimirs);

}  // namespace acp
