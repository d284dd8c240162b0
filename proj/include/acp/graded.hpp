#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>
#include <type_traits>

#include "acp/error.hpp"
#include "acp/field.hpp"
#include "acp/jet.hpp"

namespace acp {

/// Basis monomials are bitmasks over the five frame slots. Bits 0 and 1 are
/// the horizontal slots (dx^i, hor_i in the moving frame; dx^i, d/dx^i in the
/// coordinate frame), bits 2..4 the vertical ones (eta^a, d/dy^a; dy^a,
/// d/dy^a). Indices within a monomial are taken in increasing bit order.
using Mask = unsigned;
inline constexpr int kMonomials = 32;

constexpr Mask bit(int k) { return Mask{1} << k; }
constexpr Mask kHorizontalBits = 0b00011;
constexpr Mask kVerticalBits = 0b11100;

constexpr int degree(Mask m) { return std::popcount(m); }
constexpr int horizontal_degree(Mask m) { return std::popcount(m & kHorizontalBits); }
constexpr int vertical_degree(Mask m) { return std::popcount(m & kVerticalBits); }

/// Sign of reordering e_a ∧ e_b into increasing order; 0 if they overlap.
constexpr int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int swaps = 0;
  for (int k = 0; k < 5; ++k)
    if (b & bit(k)) swaps += std::popcount(a >> (k + 1));
  return (swaps % 2) ? -1 : 1;
}

/// Sign of contracting slot k out of e_S through the first slot; 0 if k ∉ S.
constexpr int contract_sign(int k, Mask s) {
  if (!(s & bit(k))) return 0;
  return (std::popcount(s & (bit(k) - 1)) % 2) ? -1 : 1;
}

/// Sign of i_{e_T} e_S with i_{X∧Y} = i_X ∘ i_Y (the last factor of T acts
/// first); 0 unless T ⊆ S.
constexpr int interior_sign(Mask t, Mask s) {
  if ((t & s) != t) return 0;
  int sign = 1;
  for (int k = 4; k >= 0; --k) {
    if (!(t & bit(k))) continue;
    sign *= contract_sign(k, s);
    s &= ~bit(k);
  }
  return sign;
}

enum class Kind { Form, Multivector };
enum class Frame { Moving, Coordinate };

std::string monomial_name(Kind kind, Frame frame, Mask m);

namespace scalar {

inline bool is_nil(double v) { return v == 0.0; }
inline bool is_nil(const Jet2& v) { return v.is_zero(); }
inline bool is_nil(const DifferentiableField& v) { return v.is_zero(); }

template <class T>
T one() {
  if constexpr (std::is_same_v<T, DifferentiableField>)
    return DifferentiableField::constant(1.0);
  else
    return T(1.0);
}

}  // namespace scalar

/// A form or multivector over the moving (co)frame or the coordinate
/// (co)frame, with coefficients of type T: double at a point, Jet2 for
/// coefficients carrying derivatives, DifferentiableField for field elements.
template <class T>
class Graded {
 public:
  explicit Graded(Kind kind = Kind::Form, Frame frame = Frame::Moving) : kind_(kind), frame_(frame) {}

  static Graded monomial(Kind kind, Mask m, T coeff, Frame frame = Frame::Moving) {
    Graded g(kind, frame);
    g.c_[m] = std::move(coeff);
    return g;
  }
  static Graded monomial(Kind kind, Mask m, Frame frame = Frame::Moving) {
    return monomial(kind, m, scalar::one<T>(), frame);
  }

  Kind kind() const { return kind_; }
  Frame frame() const { return frame_; }

  T& operator[](Mask m) { return c_[m]; }
  const T& operator[](Mask m) const { return c_[m]; }

  bool nonzero(Mask m) const { return !scalar::is_nil(c_[m]); }
  bool is_zero() const {
    for (Mask m = 0; m < kMonomials; ++m)
      if (nonzero(m)) return false;
    return true;
  }
  /// Largest / smallest degree among nonzero monomials (-1 if zero).
  int max_degree() const {
    int d = -1;
    for (Mask m = 0; m < kMonomials; ++m)
      if (nonzero(m)) d = std::max(d, degree(m));
    return d;
  }
  int min_degree() const {
    int d = -1;
    for (Mask m = 0; m < kMonomials; ++m)
      if (nonzero(m) && (d < 0 || degree(m) < d)) d = degree(m);
    return d;
  }

  Graded& operator+=(const Graded& o) {
    check_compatible(o);
    for (Mask m = 0; m < kMonomials; ++m)
      if (o.nonzero(m)) c_[m] = c_[m] + o.c_[m];
    return *this;
  }
  Graded& operator-=(const Graded& o) {
    check_compatible(o);
    for (Mask m = 0; m < kMonomials; ++m)
      if (o.nonzero(m)) c_[m] = c_[m] - o.c_[m];
    return *this;
  }
  friend Graded operator+(Graded a, const Graded& b) { return a += b; }
  friend Graded operator-(Graded a, const Graded& b) { return a -= b; }
  friend Graded operator-(const Graded& a) {
    Graded r(a.kind_, a.frame_);
    for (Mask m = 0; m < kMonomials; ++m)
      if (a.nonzero(m)) r.c_[m] = -a.c_[m];
    return r;
  }
  /// Multiplication by a scalar function (or number) of the same type.
  friend Graded operator*(const T& s, const Graded& a) {
    Graded r(a.kind_, a.frame_);
    if (scalar::is_nil(s)) return r;
    for (Mask m = 0; m < kMonomials; ++m)
      if (a.nonzero(m)) r.c_[m] = s * a.c_[m];
    return r;
  }

  void check_compatible(const Graded& o) const {
    if (kind_ != o.kind_) throw Error("mixing forms and multivectors");
    if (frame_ != o.frame_) throw Error("mixing moving and coordinate frames");
  }

 private:
  Kind kind_;
  Frame frame_;
  std::array<T, kMonomials> c_{};
};

using GradedElement = Graded<double>;
using JetElement = Graded<Jet2>;
using FieldElement = Graded<DifferentiableField>;

template <class T>
T signed_term(int sign, const T& v) {
  return sign > 0 ? v : -v;
}

/// Exterior product. Throws DegreeOverflow when the degrees sum past 5.
template <class T>
Graded<T> wedge(const Graded<T>& a, const Graded<T>& b) {
  a.check_compatible(b);
  Graded<T> r(a.kind(), a.frame());
  if (a.is_zero() || b.is_zero()) return r;
  if (a.max_degree() + b.max_degree() > 5) throw DegreeOverflow("wedge product exceeds degree 5");
  for (Mask i = 0; i < kMonomials; ++i) {
    if (!a.nonzero(i)) continue;
    for (Mask j = 0; j < kMonomials; ++j) {
      if (!b.nonzero(j)) continue;
      const int s = wedge_sign(i, j);
      if (s == 0) continue;
      r[i | j] = r[i | j] + signed_term(s, a[i] * b[j]);
    }
  }
  return r;
}

/// Interior product of `arg` into `target` through the natural pairing of
/// the frame with its dual coframe; arg and target have opposite kinds and
/// the same frame. Uses i_{X∧Y} = i_X ∘ i_Y. Throws DegreeUnderflow when arg
/// has larger degree than anything in target.
template <class T>
Graded<T> interior(const Graded<T>& arg, const Graded<T>& target) {
  if (arg.kind() == target.kind()) throw Error("interior product needs a form and a multivector");
  if (arg.frame() != target.frame()) throw Error("mixing moving and coordinate frames");
  Graded<T> r(target.kind(), target.frame());
  if (arg.is_zero() || target.is_zero()) return r;
  if (arg.min_degree() > target.max_degree())
    throw DegreeUnderflow("interior product argument exceeds target degree");
  for (Mask t = 0; t < kMonomials; ++t) {
    if (!arg.nonzero(t)) continue;
    for (Mask s = 0; s < kMonomials; ++s) {
      if (!target.nonzero(s)) continue;
      const int sg = interior_sign(t, s);
      if (sg == 0) continue;
      r[s & ~t] = r[s & ~t] + signed_term(sg, arg[t] * target[s]);
    }
  }
  return r;
}

/// Keeps exactly the monomials of horizontal degree p and vertical degree q.
template <class T>
Graded<T> bigrade_project(const Graded<T>& a, int p, int q) {
  Graded<T> r(a.kind(), a.frame());
  for (Mask m = 0; m < kMonomials; ++m)
    if (horizontal_degree(m) == p && vertical_degree(m) == q) r[m] = a[m];
  return r;
}

/// Scalar part (the empty monomial).
template <class T>
const T& scalar_part(const Graded<T>& a) {
  return a[0];
}

/// Values of a jet element.
GradedElement values(const JetElement& a);
/// Constant coefficients promoted to jets.
JetElement constant_jets(const GradedElement& a, int order = 2);
/// Jets of a field element at p, truncated to `order`.
JetElement evaluate(const FieldElement& a, const Point& p, int order);
/// max |coefficient|.
double max_norm(const GradedElement& a);
double max_norm(const JetElement& a);

/// Evaluation ω(v1, …, vk) = i_{vk} ∘ … ∘ i_{v1} ω on vectors (degree-1
/// multivectors in the same frame).
double evaluate_on(const GradedElement& form, const std::array<GradedElement, 5>& vectors, int k);

/// Entry A^{μν} of a bivector stored over monomials of degree 2.
template <class T>
T bivector_entry(const Graded<T>& a, int mu, int nu) {
  if (mu == nu) return T{};
  const Mask m = bit(mu) | bit(nu);
  return mu < nu ? a[m] : -a[m];
}

}  // namespace acp
