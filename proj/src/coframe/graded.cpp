#include "acp/graded.hpp"

namespace acp {

std::string monomial_name(Kind kind, Frame frame, Mask m) {
  static constexpr const char* kMovingForm[] = {"dx1", "dx2", "eta1", "eta2", "eta3"};
  static constexpr const char* kMovingVector[] = {"hor1", "hor2", "dy1", "dy2", "dy3"};
  static constexpr const char* kCoordForm[] = {"dx1", "dx2", "dy1", "dy2", "dy3"};
  static constexpr const char* kCoordVector[] = {"d_x1", "d_x2", "d_y1", "d_y2", "d_y3"};
  const char* const* names = kind == Kind::Form
                                 ? (frame == Frame::Moving ? kMovingForm : kCoordForm)
                                 : (frame == Frame::Moving ? kMovingVector : kCoordVector);
  if (m == 0) return "1";
  std::string out;
  for (int k = 0; k < 5; ++k) {
    if (!(m & bit(k))) continue;
    if (!out.empty()) out += "^";
    out += names[k];
  }
  return out;
}

GradedElement values(const JetElement& a) {
  GradedElement r(a.kind(), a.frame());
  for (Mask m = 0; m < kMonomials; ++m) r[m] = a[m].value();
  return r;
}

JetElement constant_jets(const GradedElement& a, int order) {
  JetElement r(a.kind(), a.frame());
  for (Mask m = 0; m < kMonomials; ++m)
    if (a[m] != 0.0) r[m] = Jet2(a[m], order);
  return r;
}

JetElement evaluate(const FieldElement& a, const Point& p, int order) {
  JetElement r(a.kind(), a.frame());
  for (Mask m = 0; m < kMonomials; ++m)
    if (a.nonzero(m)) r[m] = a[m].evaluate(p, order);
  return r;
}

double max_norm(const GradedElement& a) {
  double n = 0.0;
  for (Mask m = 0; m < kMonomials; ++m) n = std::max(n, std::abs(a[m]));
  return n;
}

double max_norm(const JetElement& a) { return max_norm(values(a)); }

double evaluate_on(const GradedElement& form, const std::array<GradedElement, 5>& vectors, int k) {
  GradedElement cur = form;
  for (int j = 0; j < k; ++j) cur = interior(vectors[static_cast<std::size_t>(j)], cur);
  return cur[0];
}

}  // namespace acp
