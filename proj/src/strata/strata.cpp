#include "acp/strata.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace acp {

namespace {

constexpr std::array<int, kDim> kHaltonBases{2, 3, 5, 7, 11};

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
    f *= inv;
  }
  return r;
}

void validate(const Box& box) {
  for (int k = 0; k < kDim; ++k) {
    const auto& iv = box[static_cast<std::size_t>(k)];
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      throw EmptyBox("interval for " + std::string(variable_name(k)) + " is not finite");
    if (iv.lo > iv.hi)
      throw EmptyBox("interval for " + std::string(variable_name(k)) + " has lo > hi");
  }
}

std::vector<double> nodes(const Interval& iv, int count) {
  if (iv.lo == iv.hi) return {iv.lo};
  if (count == 1) return {0.5 * (iv.lo + iv.hi)};
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double s = static_cast<double>(k) / (count - 1);
    v[static_cast<std::size_t>(k)] = k == count - 1 ? iv.hi : iv.lo + s * (iv.hi - iv.lo);
  }
  return v;
}

Eigen::Matrix<double, kDim, kDim> as_matrix(const GradedElement& pi) {
  Eigen::Matrix<double, kDim, kDim> m;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) m(i, j) = bivector_entry(pi, i, j);
  return m;
}

double beta_norm(const std::array<Jet2, kFiberDim>& b) {
  return std::sqrt(b[0].value() * b[0].value() + b[1].value() * b[1].value() + b[2].value() * b[2].value());
}

}  // namespace

Box uniform_box(double lo, double hi) {
  Box b;
  b.fill(Interval{lo, hi});
  return b;
}

const char* generator_name(Generator g) { return g == Generator::Grid ? "grid" : "halton"; }

SampleSet sample_box(const Box& box, Generator g, int count, std::uint64_t seed) {
  validate(box);
  if (count < 1) throw InputError("sample count must be positive");
  SampleSet s;
  s.generator = g;
  s.box = box;
  s.count = count;
  s.seed = seed;
  if (g == Generator::Halton) {
    s.points.reserve(static_cast<std::size_t>(count));
    for (int n = 0; n < count; ++n) {
      std::array<double, kDim> c{};
      for (int k = 0; k < kDim; ++k) {
        const auto& iv = box[static_cast<std::size_t>(k)];
        const double u = radical_inverse(seed + 1 + static_cast<std::uint64_t>(n), kHaltonBases[k]);
        c[k] = iv.lo + u * (iv.hi - iv.lo);
      }
      s.points.emplace_back(c);
    }
    return s;
  }
  std::array<std::vector<double>, kDim> axis;
  for (int k = 0; k < kDim; ++k) axis[k] = nodes(box[static_cast<std::size_t>(k)], count);
  std::array<std::size_t, kDim> idx{};
  while (true) {
    std::array<double, kDim> c{};
    for (int k = 0; k < kDim; ++k) c[k] = axis[k][idx[k]];
    s.points.emplace_back(c);
    int k = kDim - 1;
    while (k >= 0 && ++idx[k] == axis[k].size()) idx[k--] = 0;
    if (k < 0) break;
  }
  return s;
}

int matrix_rank(const GradedElement& pi) {
  const Eigen::JacobiSVD<Eigen::Matrix<double, kDim, kDim>> svd(as_matrix(pi));
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0)) return 0;
  const double thr = 1e-9 * sv(0);
  // singular values of an antisymmetric matrix come in equal pairs
  int rank = 0;
  for (int k = 0; k + 1 < kDim; k += 2)
    if (0.5 * (sv(k) + sv(k + 1)) > thr) rank += 2;
  return rank;
}

const char* label_name(StratumLabel l) {
  switch (l) {
    case StratumLabel::Rank0: return "rank0";
    case StratumLabel::Rank2Vertical: return "rank2_vertical";
    case StratumLabel::Rank2Horizontal: return "rank2_horizontal";
    case StratumLabel::Rank4: return "rank4";
    case StratumLabel::NearBoundary: return "near_boundary";
  }
  return "?";
}

int Stratum::expected_rank() const {
  switch (label) {
    case StratumLabel::Rank0: return 0;
    case StratumLabel::Rank2Vertical:
    case StratumLabel::Rank2Horizontal: return 2;
    case StratumLabel::Rank4: return 4;
    case StratumLabel::NearBoundary: return -1;
  }
  return -1;
}

Stratum classify_point(const PoissonTriple& t, const Point& p, double kappa_tol, double beta_tol) {
  const TripleJets j = TripleJets::at(t, p, 0);
  Stratum s;
  s.kappa = j.kappa.value();
  s.beta_norm = beta_norm(j.beta);
  s.rank = matrix_rank(values(j.pi()));
  const double k = std::abs(s.kappa);
  const bool coupling = k > kappa_tol;
  const bool vertical = s.beta_norm > beta_tol;
  if (coupling && k <= 10.0 * kappa_tol)
    s.label = StratumLabel::NearBoundary;
  else if (coupling)
    s.label = vertical ? StratumLabel::Rank4 : StratumLabel::Rank2Horizontal;
  else
    s.label = vertical ? StratumLabel::Rank2Vertical : StratumLabel::Rank0;
  return s;
}

int horizontal_rank(const GradedElement& pi, const std::array<std::array<double, kFiberDim>, kBaseDim>& gamma) {
  // the threshold is relative to the whole bivector, as in matrix_rank
  const Eigen::JacobiSVD<Eigen::Matrix<double, kDim, kDim>> svd(as_matrix(pi));
  const double top = svd.singularValues()(0);
  const double h = to_moving(pi, gamma)[bit(0) | bit(1)];
  return top > 0.0 && std::abs(h) > 1e-9 * top ? 2 : 0;
}

StrataReport strata_report(const PoissonTriple& t, const SampleSet& s, const Tolerances& tol, Execution ex) {
  StrataReport r;
  double kmax = 0.0;
  double bmax = 0.0;
  for (const Point& p : s.points) {
    const TripleJets j = TripleJets::at(t, p, 0);
    kmax = std::max(kmax, std::abs(j.kappa.value()));
    bmax = std::max(bmax, beta_norm(j.beta));
  }
  r.kappa_tol = tol.kappa_relative * (1.0 + kmax);
  r.beta_tol = tol.beta_relative * (1.0 + bmax);
  r.rows = map_points(
      s.points,
      [&](const Point& p) {
        StrataRow row;
        row.point = p;
        row.stratum = classify_point(t, p, r.kappa_tol, r.beta_tol);
        const IcResiduals ic = ic_residuals(t, p);
        row.ic1 = std::abs(ic.ic1);
        for (double v : ic.ic2) row.ic2 = std::max(row.ic2, std::abs(v));
        for (double v : ic.ic3) row.ic3 = std::max(row.ic3, std::abs(v));
        return row;
      },
      ex);
  for (const char* l : {"rank0", "rank2_vertical", "rank2_horizontal", "rank4", "near_boundary"}) r.counts[l] = 0;
  for (const StrataRow& row : r.rows) {
    ++r.counts[label_name(row.stratum.label)];
    const int want = row.stratum.expected_rank();
    const double b = row.stratum.beta_norm;
    const bool in_beta_band = b > r.beta_tol && b <= 10.0 * r.beta_tol;
    if (want < 0 || in_beta_band || want == row.stratum.rank) continue;
    r.disagreements.push_back({row.point, std::string(label_name(row.stratum.label)) + " but matrix rank " +
                                              std::to_string(row.stratum.rank)});
  }
  return r;
}

void write_strata_csv(std::ostream& os, const StrataReport& r) {
  os << "x1,x2,y1,y2,y3,kappa,beta_norm,rank,label,ic1,ic2,ic3\n";
  for (const StrataRow& row : r.rows) {
    for (int k = 0; k < kDim; ++k) os << format_real(row.point[k]) << ',';
    os << format_real(row.stratum.kappa) << ',' << format_real(row.stratum.beta_norm) << ',' << row.stratum.rank
       << ',' << label_name(row.stratum.label) << ',' << format_real(row.ic1) << ',' << format_real(row.ic2) << ','
       << format_real(row.ic3) << '\n';
  }
}

}  // namespace acp
