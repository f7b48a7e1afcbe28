#pragma once

#include <array>
#include <span>

namespace bakry {

inline constexpr int kMaxJetDim = 3;
inline constexpr int kMaxJetOrder = 4;
inline constexpr int kMaxJetCoeffs = 35;  // monomials of degree <= 4 in 3 variables

/// Truncated multivariate Taylor polynomial: the value of a function and all
/// its mixed partial derivatives up to `order()` at a point.
///
/// Coefficients are stored in graded order as c_alpha = (d^alpha f) / alpha!.
/// Arithmetic is exact truncated-polynomial arithmetic, so derivatives carry
/// only rounding error. Binary operations on jets of different order yield the
/// smaller order; `derivative()` lowers the order by one.
class Jet {
 public:
  Jet() = default;

  static Jet constant(int dim, int order, double value);
  /// The coordinate function x_index, expanded at `value`.
  static Jet variable(int dim, int order, int index, double value);

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  int size() const noexcept;

  double value() const noexcept { return c_[0]; }
  /// Partial derivatives; indices are 0-based coordinate indices.
  double d(int i) const;
  double d(int i, int j) const;
  double d(int i, int j, int k) const;
  double d(int i, int j, int k, int l) const;

  /// The jet of d f / d x_i, one order lower.
  Jet derivative(int i) const;
  Jet truncated(int order) const;

  /// Raw Taylor coefficients in graded order.
  std::span<const double> coefficients() const noexcept { return {c_.data(), static_cast<std::size_t>(size())}; }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator+=(double s) noexcept { c_[0] += s; return *this; }
  Jet& operator-=(double s) noexcept { c_[0] -= s; return *this; }
  Jet& operator*=(double s) noexcept;
  Jet operator-() const noexcept;

  /// Composition with a univariate function given by its Taylor coefficients
  /// at value(): result = sum_k taylor[k] * (u - u0)^k, k = 0..order().
  Jet compose(std::span<const double> taylor) const;

 private:
  int dim_ = 1;
  int order_ = 0;
  std::array<double, kMaxJetCoeffs> c_{};

  friend Jet operator*(const Jet& a, const Jet& b);
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double s);
Jet operator+(double s, Jet a);
Jet operator-(Jet a, double s);
Jet operator-(double s, const Jet& a);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator/(Jet a, double s);

// Elementary functions. Callers are responsible for domain checks
// (log/sqrt/reciprocal need value() > 0 or != 0); out-of-domain inputs give NaN.
Jet reciprocal(const Jet& u);
Jet exp(const Jet& u);
Jet log(const Jet& u);
Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet sqrt(const Jet& u);
/// u^p for a constant exponent. Integer exponents use repeated products and
/// are valid at u = 0 for p >= 0; non-integer exponents need value() > 0.
Jet pow(const Jet& u, double p);

/// Multivariate composition: `outer` is a jet in variables y at y0 =
/// (inner[a].value()); the result is outer(inner) as a jet in the variables of
/// `inner`, truncated to min(outer.order(), inner orders).
Jet substitute(const Jet& outer, std::span<const Jet> inner);

/// Value, gradient, Hessian and third derivatives of a function at a point.
struct Jet3 {
  int dim = 1;
  double value = 0.0;
  std::array<double, 3> grad{};
  std::array<std::array<double, 3>, 3> hess{};
  std::array<std::array<std::array<double, 3>, 3>, 3> third{};

  static Jet3 from(const Jet& j);
};

}  // namespace bakry
