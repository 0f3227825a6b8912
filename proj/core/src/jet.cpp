#include "billiards/jet.hpp"

#include <algorithm>

namespace billiards {

double Jet::derivative(int k) const {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return c_[k] * f;
}

Jet& Jet::operator+=(const Jet& o) {
  order_ = std::min(order_, o.order_);
  for (int k = 0; k <= order_; ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  order_ = std::min(order_, o.order_);
  for (int k = 0; k <= order_; ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator*=(double a) {
  for (int k = 0; k <= order_; ++k) c_[k] *= a;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r(std::min(a.order_, b.order_));
  for (int k = 0; k <= r.order_; ++k) {
    double s = 0.0;
    for (int i = 0; i <= k; ++i) s += a.c_[i] * b.c_[k - i];
    r.c_[k] = s;
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  Jet q(std::min(a.order_, b.order_));
  for (int k = 0; k <= q.order_; ++k) {
    double s = a.c_[k];
    for (int i = 1; i <= k; ++i) s -= b.c_[i] * q.c_[k - i];
    q.c_[k] = s / b.c_[0];
  }
  return q;
}

Jet sqrt(const Jet& a) {
  Jet s(a.order());
  s[0] = std::sqrt(a[0]);
  for (int k = 1; k <= a.order(); ++k) {
    double acc = a[k];
    for (int i = 1; i < k; ++i) acc -= s[i] * s[k - i];
    s[k] = acc / (2.0 * s[0]);
  }
  return s;
}

Jet pow(const Jet& a, double exponent) {
  Jet p(a.order());
  p[0] = std::pow(a[0], exponent);
  for (int k = 1; k <= a.order(); ++k) {
    double acc = 0.0;
    for (int i = 1; i <= k; ++i) acc += ((exponent + 1.0) * i - k) * a[i] * p[k - i];
    p[k] = acc / (k * a[0]);
  }
  return p;
}

namespace {

void sincos(const Jet& a, Jet& s, Jet& c) {
  s = Jet(a.order(), std::sin(a[0]));
  c = Jet(a.order(), std::cos(a[0]));
  for (int k = 1; k <= a.order(); ++k) {
    double ss = 0.0, cc = 0.0;
    for (int i = 1; i <= k; ++i) {
      ss += i * a[i] * c[k - i];
      cc -= i * a[i] * s[k - i];
    }
    s[k] = ss / k;
    c[k] = cc / k;
  }
}

}  // namespace

Jet sin(const Jet& a) {
  Jet s, c;
  sincos(a, s, c);
  return s;
}

Jet cos(const Jet& a) {
  Jet s, c;
  sincos(a, s, c);
  return c;
}

Jet integrate(const Jet& a) {
  Jet r(a.order());
  for (int k = 1; k <= a.order(); ++k) r[k] = a[k - 1] / k;
  return r;
}

Jet differentiate(const Jet& a) {
  Jet r(a.order() > 0 ? a.order() - 1 : 0);
  for (int k = 0; k < a.order(); ++k) r[k] = (k + 1) * a[k + 1];
  return r;
}

Jet compose(const Jet& f, const Jet& g) {
  const int n = std::min(f.order(), g.order());
  Jet d = g;
  d[0] = 0.0;
  Jet r(n, f[n]);
  for (int k = n - 1; k >= 0; --k) {
    r = r * d;
    r[0] += f[k];
  }
  return r;
}

Jet revert(const Jet& g) {
  const int n = g.order();
  Jet h(n);
  if (n == 0) return h;
  h[1] = 1.0 / g[1];
  for (int k = 2; k <= n; ++k) {
    // coefficient of t^k in sum_{j>=2} g_j h^j using the known h_1..h_{k-1}
    Jet hp = h;  // h^1
    double acc = 0.0;
    for (int j = 2; j <= k; ++j) {
      hp = hp * h;
      acc += g[j] * hp[k];
    }
    h[k] = -acc / g[1];
  }
  return h;
}

}  // namespace billiards
