// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations used by the tests.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Composite Simpson rule with n (even) intervals.
template <class T>
T simpson(const std::function<T(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  T sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return sum * (h / 3.0);
}

template <class T>
T simpson2d(const std::function<T(double, double)>& f, double ax, double bx, double ay,
            double by, int n) {
  return simpson<T>(
      [&](double x) { return simpson<T>([&](double y) { return f(x, y); }, ay, by, n); }, ax,
      bx, n);
}

inline double sine_mode(int m, double L, double x) {
  return std::sqrt(2.0 / L) * std::sin(m * pi * x / L);
}

inline double sine_mode_dx(int m, double L, double x) {
  return std::sqrt(2.0 / L) * (m * pi / L) * std::cos(m * pi * x / L);
}

}  // namespace oracle
