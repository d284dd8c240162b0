#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "acp/campaign.hpp"
#include "acp/report.hpp"
#include "acp/triple.hpp"

namespace acp {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};
using Box = std::array<Interval, kDim>;

/// Box with the same interval on every axis.
Box uniform_box(double lo, double hi);

enum class Generator { Grid, Halton };
const char* generator_name(Generator g);

struct SampleSet {
  std::vector<Point> points;
  Generator generator = Generator::Halton;
  Box box{};
  int count = 0;  // resolution per axis for grids, point count for Halton
  std::uint64_t seed = 0;
};

/// Grid: `count` equally spaced nodes per axis including the endpoints (the
/// midpoint when count is 1; a degenerate axis contributes one node).
/// Halton: `count` points of the bases 2, 3, 5, 7, 11 starting at index
/// seed + 1. Throws EmptyBox for an interval with lo > hi or non-finite ends.
SampleSet sample_box(const Box& box, Generator g, int count, std::uint64_t seed = 0);

/// Numerical rank of the antisymmetric 5×5 matrix of a coordinate bivector:
/// singular values above 1e-9 times the largest, counted in pairs.
int matrix_rank(const GradedElement& pi);

enum class StratumLabel { Rank0, Rank2Vertical, Rank2Horizontal, Rank4, NearBoundary };
const char* label_name(StratumLabel l);

struct Stratum {
  StratumLabel label = StratumLabel::Rank0;
  double kappa = 0.0;
  double beta_norm = 0.0;
  int rank = 0;
  /// Rank predicted by the label; -1 for near_boundary.
  int expected_rank() const;
};

/// Labels p by |kappa| and |beta| against the tolerances; |kappa| in
/// (kappa_tol, 10 kappa_tol] is near_boundary.
Stratum classify_point(const PoissonTriple& t, const Point& p, double kappa_tol, double beta_tol);

/// rank of the (2,0) block of a coordinate bivector re-bigraded with `gamma`.
int horizontal_rank(const GradedElement& pi, const std::array<std::array<double, kFiberDim>, kBaseDim>& gamma);

struct StrataRow {
  Point point;
  Stratum stratum;
  double ic1 = 0.0;
  double ic2 = 0.0;  // max over the six components
  double ic3 = 0.0;  // max over the three components
};

struct StrataReport {
  std::vector<StrataRow> rows;
  std::map<std::string, long> counts;
  /// Rows whose label disagrees with the matrix rank away from both
  /// tolerance bands.
  std::vector<Disagreement> disagreements;
  double kappa_tol = 0.0;
  double beta_tol = 0.0;
};

/// Tolerances are rel * (1 + max over the samples) for kappa and |beta|.
StrataReport strata_report(const PoissonTriple& t, const SampleSet& s, const Tolerances& tol = {},
                           Execution ex = default_execution());

/// CSV with header x1,x2,y1,y2,y3,kappa,beta_norm,rank,label,ic1,ic2,ic3.
void write_strata_csv(std::ostream& os, const StrataReport& r);

}  // namespace acp
