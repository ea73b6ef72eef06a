// Second-order forward-mode scalar: value, gradient and Hessian with respect
// to a fixed set of M seed directions. Used to differentiate the pointwise
// energy density through the polarization-dependent material tensors.
#pragma once

#include <Eigen/Dense>

#include <cmath>

namespace ferro {

template <int M>
struct Dual2 {
  using Grad = Eigen::Matrix<double, M, 1>;
  using Hess = Eigen::Matrix<double, M, M>;

  double v = 0.0;
  Grad g = Grad::Zero();
  Hess h = Hess::Zero();

  Dual2() = default;
  Dual2(double value) : v(value) {}  // NOLINT: implicit constant lift

  static Dual2 variable(double value, int k) {
    Dual2 d(value);
    d.g[k] = 1.0;
    return d;
  }

  Dual2 operator-() const {
    Dual2 r;
    r.v = -v;
    r.g = -g;
    r.h = -h;
    return r;
  }

  Dual2& operator+=(const Dual2& o) {
    v += o.v;
    g += o.g;
    h += o.h;
    return *this;
  }
  Dual2& operator-=(const Dual2& o) {
    v -= o.v;
    g -= o.g;
    h -= o.h;
    return *this;
  }
};

template <int M>
Dual2<M> operator+(const Dual2<M>& a, const Dual2<M>& b) {
  Dual2<M> r(a);
  r += b;
  return r;
}
template <int M>
Dual2<M> operator-(const Dual2<M>& a, const Dual2<M>& b) {
  Dual2<M> r(a);
  r -= b;
  return r;
}

template <int M>
Dual2<M> operator*(const Dual2<M>& a, const Dual2<M>& b) {
  Dual2<M> r;
  r.v = a.v * b.v;
  r.g = a.g * b.v + b.g * a.v;
  r.h = a.h * b.v + b.h * a.v + a.g * b.g.transpose() + b.g * a.g.transpose();
  return r;
}
template <int M>
Dual2<M> operator*(const Dual2<M>& a, double s) {
  Dual2<M> r;
  r.v = a.v * s;
  r.g = a.g * s;
  r.h = a.h * s;
  return r;
}
template <int M>
Dual2<M> operator*(double s, const Dual2<M>& a) {
  return a * s;
}
template <int M>
Dual2<M> operator+(const Dual2<M>& a, double s) {
  Dual2<M> r(a);
  r.v += s;
  return r;
}
template <int M>
Dual2<M> operator+(double s, const Dual2<M>& a) {
  return a + s;
}
template <int M>
Dual2<M> operator-(const Dual2<M>& a, double s) {
  return a + (-s);
}
template <int M>
Dual2<M> operator-(double s, const Dual2<M>& a) {
  return (-a) + s;
}

/// Composition with a scalar function given f(u), f'(u), f''(u).
template <int M>
Dual2<M> chain(const Dual2<M>& u, double f, double df, double ddf) {
  Dual2<M> r;
  r.v = f;
  r.g = df * u.g;
  r.h = df * u.h + ddf * (u.g * u.g.transpose());
  return r;
}

template <int M>
Dual2<M> inverse(const Dual2<M>& u) {
  const double iv = 1.0 / u.v;
  return chain(u, iv, -iv * iv, 2.0 * iv * iv * iv);
}
template <int M>
Dual2<M> operator/(const Dual2<M>& a, const Dual2<M>& b) {
  return a * inverse(b);
}
template <int M>
Dual2<M> operator/(const Dual2<M>& a, double s) {
  return a * (1.0 / s);
}
template <int M>
Dual2<M> operator/(double s, const Dual2<M>& b) {
  return inverse(b) * s;
}

template <int M>
Dual2<M> sqrt(const Dual2<M>& u) {
  const double s = std::sqrt(u.v);
  return chain(u, s, 0.5 / s, -0.25 / (s * u.v));
}

template <int M>
Dual2<M> log(const Dual2<M>& u) {
  return chain(u, std::log(u.v), 1.0 / u.v, -1.0 / (u.v * u.v));
}

/// u^a for real exponent a, u > 0.
template <int M>
Dual2<M> pow(const Dual2<M>& u, double a) {
  const double f = std::pow(u.v, a);
  return chain(u, f, a * f / u.v, a * (a - 1.0) * f / (u.v * u.v));
}

}  // namespace ferro
