#include "acp/flow.hpp"

#include <cmath>
#include <ostream>

#include "acp/modular.hpp"

namespace acp {

namespace {

using State = std::array<double, kDim>;

State field_at(const PoissonTriple& t, const DifferentiableField& f, const State& s) {
  const GradedElement x = hamiltonian_field(t, f, Point(s));
  State v{};
  for (int k = 0; k < kDim; ++k) v[k] = x[bit(k)];
  return v;
}

State axpy(const State& y, double h, const State& k) {
  State r = y;
  for (int i = 0; i < kDim; ++i) r[i] += h * k[i];
  return r;
}

State rk4_step(const PoissonTriple& t, const DifferentiableField& f, const State& y, double h) {
  const State k1 = field_at(t, f, y);
  const State k2 = field_at(t, f, axpy(y, h / 2, k1));
  const State k3 = field_at(t, f, axpy(y, h / 2, k2));
  const State k4 = field_at(t, f, axpy(y, h, k3));
  State r = y;
  for (int i = 0; i < kDim; ++i) r[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return r;
}

bool finite(const State& s) {
  for (double v : s)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

Trajectory integrate(const PoissonTriple& t, const DifferentiableField& f, const Point& p0, double dt, int n) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("time step must be positive");
  if (n < 0) throw InputError("step count must be non-negative");
  Trajectory tr;
  tr.hamiltonian = f;
  tr.dt = dt;
  tr.times.push_back(0.0);
  tr.states.push_back(p0);
  State y = p0.coords();
  State half = y;
  for (int k = 1; k <= n; ++k) {
    try {
      const State next = rk4_step(t, f, y, dt);
      half = rk4_step(t, f, rk4_step(t, f, half, dt / 2), dt / 2);
      if (!finite(next) || !finite(half)) {
        tr.truncated = true;
        tr.truncation = "non-finite state after step " + std::to_string(k);
        break;
      }
      double diff = 0.0;
      for (int i = 0; i < kDim; ++i) diff = std::max(diff, std::abs(next[i] - half[i]));
      tr.error_estimate = std::max(tr.error_estimate, diff / 15.0);
      y = next;
    } catch (const DomainError& e) {
      tr.truncated = true;
      tr.truncation = "step " + std::to_string(k) + ": " + e.what();
      break;
    }
    tr.times.push_back(k * dt);
    tr.states.emplace_back(y);
  }
  return tr;
}

std::vector<Trajectory> integrate_all(const PoissonTriple& t, const DifferentiableField& f,
                                      const std::vector<Point>& starts, double dt, int n, Execution ex) {
  return map_points(starts, [&](const Point& p) { return integrate(t, f, p, dt, n); }, ex);
}

VerificationReport ConservationReport::verdict(const Tolerances& tol) const {
  VerificationReport rep;
  const Point origin;
  rep.check("energy_drift", tol.conservation).record(energy_drift, origin);
  CheckResult& cas = rep.check("casimir_drift", tol.conservation);
  for (double d : casimir_drift) cas.record(d, origin);
  rep.check("kappa_sign", 0.0).record(static_cast<double>(kappa_crossings), origin);
  if (divergence_integral)
    rep.check("volume_divergence", tol.conservation).record(std::abs(*divergence_integral), origin);
  if (truncated) rep.add_note("trajectory was truncated");
  return rep;
}

ConservationReport conservation_report(const PoissonTriple& t, const Trajectory& traj,
                                       const std::vector<DifferentiableField>& casimirs,
                                       const std::optional<DifferentiableField>& volume, double kappa_tol) {
  ConservationReport r;
  r.truncated = traj.truncated;
  r.kappa_tol = kappa_tol;
  r.casimir_drift.assign(casimirs.size(), 0.0);
  if (traj.states.empty()) return r;
  const Point& p0 = traj.states.front();
  const double f0 = traj.hamiltonian.value(p0);
  std::vector<double> c0;
  for (const auto& c : casimirs) c0.push_back(c.value(p0));
  const double k0 = t.kappa.value(p0);
  const double sign = std::abs(k0) > kappa_tol ? (k0 > 0 ? 1.0 : -1.0) : 0.0;

  double integral = 0.0, prev = 0.0;
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    const Point& p = traj.states[s];
    r.energy_drift = std::max(r.energy_drift, std::abs(traj.hamiltonian.value(p) - f0));
    for (std::size_t k = 0; k < casimirs.size(); ++k)
      r.casimir_drift[k] = std::max(r.casimir_drift[k], std::abs(casimirs[k].value(p) - c0[k]));
    const double kv = t.kappa.value(p);
    if (sign == 0.0 ? std::abs(kv) > kappa_tol : sign * kv < -kappa_tol) ++r.kappa_crossings;
    if (volume) {
      const double d = volume_divergence(t, traj.hamiltonian, *volume, p);
      if (s > 0) integral += 0.5 * traj.dt * (prev + d);
      prev = d;
    }
  }
  if (volume) r.divergence_integral = integral;
  return r;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::vector<DifferentiableField>& casimirs) {
  os << "t,x1,x2,y1,y2,y3,F";
  for (std::size_t k = 0; k < casimirs.size(); ++k) os << ",casimir_" << k + 1;
  os << '\n';
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    const Point& p = traj.states[s];
    os << format_real(traj.times[s]);
    for (int k = 0; k < kDim; ++k) os << ',' << format_real(p[k]);
    os << ',' << format_real(traj.hamiltonian.value(p));
    for (const auto& c : casimirs) os << ',' << format_real(c.value(p));
    os << '\n';
  }
}

}  // namespace acp
