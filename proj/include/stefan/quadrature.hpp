#pragma once

#include <functional>

namespace stefan::quad {

// 4-point Gauss-Legendre rule, exact for polynomials of degree <= 7.
inline constexpr double kX1 = 0.33998104358485626;
inline constexpr double kW1 = 0.65214515486254614;
inline constexpr double kX2 = 0.86113631159405258;
inline constexpr double kW2 = 0.34785484513745385;

template <class F>
double gauss4(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  return r * (kW1 * (f(c - r * kX1) + f(c + r * kX1)) +
              kW2 * (f(c - r * kX2) + f(c + r * kX2)));
}

template <class F>
double gauss4_composite(const F& f, double a, double b, int panels) {
  double sum = 0.0;
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) sum += gauss4(f, a + p * w, a + (p + 1) * w);
  return sum;
}

/// Tensor 4x4 rule over [x0,x1] x [t0,t1].
template <class F>
double gauss4_cell(const F& f, double x0, double x1, double t0, double t1) {
  return gauss4([&](double x) { return gauss4([&](double t) { return f(x, t); }, t0, t1); },
                x0, x1);
}

}  // namespace stefan::quad
