#include "acp/jet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "acp/error.hpp"

namespace acp {

Point::Point(const std::array<double, kDim>& coords) : c_(coords) {
  for (double v : c_) {
    if (!std::isfinite(v)) throw DomainError("non-finite chart coordinate");
  }
}

Point::Point(double x1, double x2, double y1, double y2, double y3)
    : Point(std::array<double, kDim>{x1, x2, y1, y2, y3}) {}

Point Point::with(int k, double v) const {
  auto c = c_;
  c[static_cast<std::size_t>(k)] = v;
  return Point(c);
}

std::string Point::str() const {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (int k = 0; k < kDim; ++k) {
    if (k) os << ", ";
    os << c_[static_cast<std::size_t>(k)];
  }
  os << ')';
  return os.str();
}

Jet2 Jet2::variable(int k, double value, int order) {
  Jet2 j(value, order);
  if (order >= 1) j.grad_[static_cast<std::size_t>(k)] = 1.0;
  return j;
}

std::array<std::array<double, kDim>, kDim> Jet2::hessian() const {
  std::array<std::array<double, kDim>, kDim> h{};
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = hess(i, j);
  return h;
}

Jet2 Jet2::truncated(int order) const {
  Jet2 r = *this;
  r.order_ = std::min(order_, order);
  if (r.order_ < 2) r.hess_.fill(0.0);
  if (r.order_ < 1) r.grad_.fill(0.0);
  return r;
}

Jet2 Jet2::partial(int k) const {
  if (order_ < 1) throw OrderBudgetExceeded(order_ + 1, order_);
  Jet2 r(grad_[static_cast<std::size_t>(k)], order_ - 1);
  if (r.order_ >= 1) {
    for (int j = 0; j < kDim; ++j) r.grad_[static_cast<std::size_t>(j)] = hess(k, j);
  }
  return r;
}

double Jet2::magnitude() const {
  double m = std::abs(value_);
  if (order_ >= 1)
    for (double g : grad_) m = std::max(m, std::abs(g));
  if (order_ >= 2)
    for (double h : hess_) m = std::max(m, std::abs(h));
  return m;
}

bool Jet2::is_zero() const {
  if (value_ != 0.0) return false;
  for (double g : grad_)
    if (g != 0.0) return false;
  for (double h : hess_)
    if (h != 0.0) return false;
  return true;
}

Jet2& Jet2::operator+=(const Jet2& o) {
  value_ += o.value_;
  order_ = std::min(order_, o.order_);
  if (order_ >= 1)
    for (std::size_t k = 0; k < grad_.size(); ++k) grad_[k] += o.grad_[k];
  else
    grad_.fill(0.0);
  if (order_ >= 2)
    for (std::size_t k = 0; k < hess_.size(); ++k) hess_[k] += o.hess_[k];
  else
    hess_.fill(0.0);
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
  value_ -= o.value_;
  order_ = std::min(order_, o.order_);
  if (order_ >= 1)
    for (std::size_t k = 0; k < grad_.size(); ++k) grad_[k] -= o.grad_[k];
  else
    grad_.fill(0.0);
  if (order_ >= 2)
    for (std::size_t k = 0; k < hess_.size(); ++k) hess_[k] -= o.hess_[k];
  else
    hess_.fill(0.0);
  return *this;
}

Jet2& Jet2::operator*=(double s) {
  value_ *= s;
  if (order_ >= 1)
    for (double& g : grad_) g *= s;
  if (order_ >= 2)
    for (double& h : hess_) h *= s;
  return *this;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r(a.value_ * b.value_, std::min(a.order_, b.order_));
  if (r.order_ >= 1) {
    for (std::size_t k = 0; k < r.grad_.size(); ++k)
      r.grad_[k] = a.value_ * b.grad_[k] + b.value_ * a.grad_[k];
  }
  if (r.order_ >= 2) {
    for (int i = 0; i < kDim; ++i) {
      for (int j = i; j < kDim; ++j) {
        const auto p = Jet2::packed(i, j);
        const auto ui = static_cast<std::size_t>(i);
        const auto uj = static_cast<std::size_t>(j);
        r.hess_[p] = a.value_ * b.hess_[p] + b.value_ * a.hess_[p] +
                     a.grad_[ui] * b.grad_[uj] + a.grad_[uj] * b.grad_[ui];
      }
    }
  }
  return r;
}

Jet2 Jet2::compose(double f0, double f1, double f2) const {
  Jet2 r(f0, order_);
  if (order_ >= 1)
    for (std::size_t k = 0; k < grad_.size(); ++k) r.grad_[k] = f1 * grad_[k];
  if (order_ >= 2) {
    for (int i = 0; i < kDim; ++i) {
      for (int j = i; j < kDim; ++j) {
        const auto p = packed(i, j);
        r.hess_[p] = f1 * hess_[p] + f2 * grad_[static_cast<std::size_t>(i)] *
                                         grad_[static_cast<std::size_t>(j)];
      }
    }
  }
  return r;
}

Jet2 reciprocal(const Jet2& u) {
  const double v = u.value();
  if (v == 0.0) throw DomainError("division by zero");
  const double inv = 1.0 / v;
  return u.compose(inv, -inv * inv, 2.0 * inv * inv * inv);
}

Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

namespace {

// Binary powering; v^2 is the rounded product v*v, unlike std::pow.
double ipow(double v, int n) {
  if (n < 0) return 1.0 / ipow(v, -n);
  double r = 1.0;
  for (double b = v; n; n >>= 1, b *= b)
    if (n & 1) r *= b;
  return r;
}

}  // namespace

Jet2 powi(const Jet2& u, int n) {
  if (n == 0) return Jet2(1.0, u.order());
  if (n == 1) return u;
  const double v = u.value();
  if (n < 0 && v == 0.0) throw DomainError("negative power of zero");
  const double f0 = ipow(v, n);
  const double f1 = n * ipow(v, n - 1);
  const double f2 = n * (n - 1) * ipow(v, n - 2);
  return u.compose(f0, f1, f2);
}

}  // namespace acp
