#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace billiards {

/// Truncated Taylor series c_0 + c_1 t + ... + c_n t^n about a base point,
/// with c_k = f^(k)(base) / k!. Used for exact curvature jets: a shape is
/// evaluated on a jet of its parameter and the result is re-expanded in
/// arclength by series reversion.
class Jet {
 public:
  static constexpr int kMaxOrder = 14;

  Jet() = default;
  explicit Jet(int order, double constant = 0.0) : order_(order) {
    c_.fill(0.0);
    c_[0] = constant;
  }
  /// The identity jet base + t.
  static Jet variable(int order, double base) {
    Jet j(order, base);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  int order() const { return order_; }
  double operator[](int k) const { return c_[k]; }
  double& operator[](int k) { return c_[k]; }
  double value() const { return c_[0]; }
  /// k-th derivative at the base point.
  double derivative(int k) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double a);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double k) { return a *= k; }
  friend Jet operator*(double k, Jet a) { return a *= k; }
  friend Jet operator+(Jet a, double k) { a.c_[0] += k; return a; }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

 private:
  int order_ = 0;
  std::array<double, kMaxOrder + 1> c_{};
};

Jet sqrt(const Jet& a);
Jet pow(const Jet& a, double exponent);  // requires a.value() > 0
Jet sin(const Jet& a);
Jet cos(const Jet& a);
/// Antiderivative with zero constant term (order is preserved by dropping
/// the top coefficient of the input).
Jet integrate(const Jet& a);
/// Term-wise derivative; the order drops by one.
Jet differentiate(const Jet& a);
/// f(g(t)) where g.value() is the base point of f's expansion, i.e. f is a
/// series in (x - g0) and g - g0 is substituted.
Jet compose(const Jet& f, const Jet& g);
/// Inverse series: given g with g[0] = y0, g[1] != 0, returns h with
/// h[0] = 0 such that g(h(t)) - y0 = t. Result is a series in t = y - y0
/// for the displacement x - x0.
Jet revert(const Jet& g);

}  // namespace billiards
