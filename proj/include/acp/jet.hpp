#pragma once

#include <array>
#include <cstddef>
#include <string>

namespace acp {

/// Number of chart coordinates: x1, x2 on the base, y1, y2, y3 on the fiber.
inline constexpr int kDim = 5;
inline constexpr int kBaseDim = 2;
inline constexpr int kFiberDim = 3;

/// Coordinate index of base variable i (0-based) and fiber variable a.
constexpr int x_index(int i) { return i; }
constexpr int y_index(int a) { return kBaseDim + a; }

/// A point of the chart R^2_x × R^3_y.
class Point {
 public:
  Point() = default;
  /// Throws DomainError if any coordinate is not finite.
  explicit Point(const std::array<double, kDim>& coords);
  Point(double x1, double x2, double y1, double y2, double y3);

  double operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  double x(int i) const { return c_[static_cast<std::size_t>(i)]; }
  double y(int a) const { return c_[static_cast<std::size_t>(kBaseDim + a)]; }
  const std::array<double, kDim>& coords() const { return c_; }

  Point with(int k, double v) const;
  std::string str() const;

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::array<double, kDim> c_{};
};

/// Truncated second-order Taylor expansion of a scalar at a point.
///
/// The Hessian is stored as a packed upper triangle so it is symmetric by
/// construction. `order` records how many derivative levels are valid; the
/// arithmetic below propagates the minimum order of its operands and does not
/// touch derivative slots beyond it.
class Jet2 {
 public:
  Jet2() = default;
  explicit Jet2(double value, int order = 2) : value_(value), order_(order) {}

  static Jet2 variable(int k, double value, int order = 2);

  double value() const { return value_; }
  double grad(int k) const { return grad_[static_cast<std::size_t>(k)]; }
  double hess(int i, int j) const { return hess_[packed(i, j)]; }
  int order() const { return order_; }

  const std::array<double, kDim>& gradient() const { return grad_; }
  std::array<std::array<double, kDim>, kDim> hessian() const;

  void set_value(double v) { value_ = v; }
  void set_grad(int k, double v) { grad_[static_cast<std::size_t>(k)] = v; }
  void set_hess(int i, int j, double v) { hess_[packed(i, j)] = v; }

  /// Same jet with every slot above `order` cleared.
  Jet2 truncated(int order) const;

  /// The jet of the first partial along coordinate k; costs one order.
  /// Throws OrderBudgetExceeded on a value-only jet.
  Jet2 partial(int k) const;

  /// Largest absolute entry among the valid slots.
  double magnitude() const;
  bool is_zero() const;

  Jet2& operator+=(const Jet2& o);
  Jet2& operator-=(const Jet2& o);
  Jet2& operator*=(double s);

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator*(Jet2 a, double s) { return a *= s; }
  friend Jet2 operator*(double s, Jet2 a) { return a *= s; }
  friend Jet2 operator-(const Jet2& a) { return a * -1.0; }
  friend Jet2 operator*(const Jet2& a, const Jet2& b);
  friend Jet2 operator/(const Jet2& a, const Jet2& b);
  friend Jet2 operator+(Jet2 a, double s) {
    a.value_ += s;
    return a;
  }
  friend Jet2 operator+(double s, Jet2 a) { return a + s; }
  friend Jet2 operator-(Jet2 a, double s) { return a + (-s); }
  friend Jet2 operator-(double s, const Jet2& a) { return (-a) + s; }

  /// Composition with a scalar function given its value and first two
  /// derivatives at value().
  Jet2 compose(double f0, double f1, double f2) const;

 private:
  static constexpr std::size_t packed(int i, int j) {
    if (i > j) {
      int t = i;
      i = j;
      j = t;
    }
    return static_cast<std::size_t>(i * kDim - i * (i - 1) / 2 + (j - i));
  }

  double value_ = 0.0;
  std::array<double, kDim> grad_{};
  std::array<double, 15> hess_{};
  int order_ = 2;
};

Jet2 powi(const Jet2& u, int n);
Jet2 reciprocal(const Jet2& u);

}  // namespace acp
