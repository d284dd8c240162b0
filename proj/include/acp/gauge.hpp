#pragma once

#include <array>
#include <vector>

#include "acp/triple.hpp"

namespace acp {

/// A horizontal 1-form mu = mu_i dx^i, a Casimir c of P_beta and a
/// deformation parameter.
struct GaugeData {
  std::array<DifferentiableField, kBaseDim> mu{};
  DifferentiableField c;
  double epsilon = 1.0;
};

/// Throws NotCasimir unless |d01 c ∧ beta| <= tol at every sample.
void check_gauge_casimir(const PoissonTriple& t, const GaugeData& g, const std::vector<Point>& samples,
                         double tol);

/// varkappa = (d10 mu + (eps/2) {mu∧mu}_beta) / omega at p, from graded
/// elements, with {f1, f2}_beta = -Q_V(beta, df1, df2).
double varkappa(const PoissonTriple& t, const GaugeData& g, double eps, const Point& p);
/// hor_1 mu_2 - hor_2 mu_1 - eps e^{abc} (d_a mu_1) beta_b (d_c mu_2), the
/// trivial-bundle coordinate formula with x-derivatives taken along hor_i.
double varkappa_coordinate(const PoissonTriple& t, const GaugeData& g, double eps, const Point& p);
/// The same as a field (consumes one order of mu, gamma's order is kept).
DifferentiableField varkappa_field(const PoissonTriple& t, const GaugeData& g, double eps);

/// 1 - eps kappa (varkappa - c) as a field and at a point.
DifferentiableField domain_denominator(const PoissonTriple& t, const GaugeData& g, double eps);
double domain_indicator(const PoissonTriple& t, const GaugeData& g, double eps, const Point& p);
/// Samples with |denominator| > tol; throws EmptyDomain if none.
std::vector<Point> gauge_domain(const PoissonTriple& t, const GaugeData& g, double eps,
                                const std::vector<Point>& samples, double tol = 1e-9);

/// The triple of Pi_eps = rho_{1/eps} ∘ T_{mu,c} ∘ rho_eps (Pi): gamma_i^a
/// gains eps e^{abc} (d_b mu_i) beta_c, kappa becomes kappa / denominator,
/// beta is kept. eps = 0 returns t unchanged.
PoissonTriple family(const PoissonTriple& t, const GaugeData& g, double eps);
/// T_{mu,c}, i.e. the family at eps = 1.
PoissonTriple gauge_transform(const PoissonTriple& t, const GaugeData& g);

/// (gamma, eps kappa, eps beta).
PoissonTriple scale(const PoissonTriple& t, double eps);

/// Ranks of the column spaces of two bivectors and of their concatenation.
struct CharacteristicComparison {
  int rank_a = 0;
  int rank_b = 0;
  int rank_joint = 0;
  bool equal() const { return rank_a == rank_b && rank_b == rank_joint; }
};
CharacteristicComparison characteristic_compare(const GradedElement& a, const GradedElement& b);
/// Pi against Pi_eps at p; throws OutsideDomain when |denominator| <= tol.
CharacteristicComparison characteristic_compare(const PoissonTriple& t, const GaugeData& g, double eps,
                                                const Point& p, double tol = 1e-9);

/// Upsilon = -d mu + c Omega^H as a coordinate 2-form with jet coefficients
/// (needs 1-jets of mu and c).
JetElement upsilon(const GaugeData& g, const Point& p, int order);
/// |d Upsilon| computed from 2-jets of mu and 1-jets of c, next to the size
/// of the vertical part of dc.
struct UpsilonClosedness {
  double d_upsilon = 0.0;
  double vertical_dc = 0.0;
};
UpsilonClosedness upsilon_closedness(const GaugeData& g, const Point& p);

}  // namespace acp
