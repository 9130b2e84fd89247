#pragma once

// Reference values computed without the library's closed forms: ambient
// inner products for the model planes, explicit great circles for R x S^2,
// and brute-force recursion for the discrete Frechet distance.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "lorentz/types.hpp"

namespace oracle {

using lorentz::Event;
using lorentz::Vec;

inline constexpr double kPi = std::numbers::pi;

inline double minkowski_tau(const Event& x, const Event& y) {
  const double dt = y[0] - x[0];
  double dx2 = 0.0;
  for (Eigen::Index i = 1; i < x.size(); ++i) dx2 += (y[i] - x[i]) * (y[i] - x[i]);
  const double s = dt * dt - dx2;
  return dt > 0.0 && s > 0.0 ? std::sqrt(s) : 0.0;
}

// Anti-de Sitter cover, radius R, 2D chart (t, y):
// P = (rho cos(t/R), rho sin(t/R), y), rho^2 = R^2 + y^2, and
// b(P, Q) = -R^2 cos(tau / R) for timelike pairs inside the diamond.
inline double ads_tau(double R, const Event& x, const Event& y) {
  auto amb = [R](const Event& e) {
    const double rho = std::hypot(R, e[1]);
    return std::array<double, 3>{rho * std::cos(e[0] / R), rho * std::sin(e[0] / R), e[1]};
  };
  const auto P = amb(x), Q = amb(y);
  const double b = -P[0] * Q[0] - P[1] * Q[1] + P[2] * Q[2];
  const double c = std::clamp(-b / (R * R), -1.0, 1.0);
  return R * std::acos(c);
}

// de Sitter plane, radius R, chart (t, x):
// P = (R sinh(t/R), R cosh(t/R) cos(x/R), R cosh(t/R) sin(x/R)) and
// b(P, Q) = R^2 cosh(tau / R) for timelike pairs.
inline double ds_tau(double R, const Event& x, const Event& y) {
  auto amb = [R](const Event& e) {
    const double c = R * std::cosh(e[0] / R);
    return std::array<double, 3>{R * std::sinh(e[0] / R), c * std::cos(e[1] / R), c * std::sin(e[1] / R)};
  };
  const auto P = amb(x), Q = amb(y);
  const double b = -P[0] * Q[0] + P[1] * Q[1] + P[2] * Q[2];
  return R * std::acosh(std::max(1.0, b / (R * R)));
}

// Great circle on a round sphere from (theta, phi) with coordinate
// velocity (dtheta, dphi), returned as (theta, phi) at parameter s. The time
// component of R x S^2 is affine and handled by the caller.
inline std::array<double, 2> great_circle(double theta, double phi, double dtheta, double dphi, double s) {
  const std::array<double, 3> X{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
  const std::array<double, 3> Et{std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta)};
  const std::array<double, 3> Ep{-std::sin(phi), std::cos(phi), 0.0};
  std::array<double, 3> V{};
  for (int i = 0; i < 3; ++i) V[i] = dtheta * Et[i] + dphi * std::sin(theta) * Ep[i];
  const double w = std::sqrt(V[0] * V[0] + V[1] * V[1] + V[2] * V[2]);  // angular speed on the unit sphere
  std::array<double, 3> Y{};
  for (int i = 0; i < 3; ++i) Y[i] = std::cos(w * s) * X[i] + (w > 0 ? std::sin(w * s) * V[i] / w : 0.0);
  return {std::acos(std::clamp(Y[2], -1.0, 1.0)), std::atan2(Y[1], Y[0])};
}

// Discrete Frechet distance by the textbook memoized recursion.
inline double frechet_recursive(const std::vector<Event>& a, const std::vector<Event>& b) {
  std::map<std::pair<std::size_t, std::size_t>, double> memo;
  std::function<double(std::size_t, std::size_t)> c = [&](std::size_t i, std::size_t j) -> double {
    const auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const double d = (a[i] - b[j]).norm();
    double r;
    if (i == 0 && j == 0)
      r = d;
    else if (i == 0)
      r = std::max(c(0, j - 1), d);
    else if (j == 0)
      r = std::max(c(i - 1, 0), d);
    else
      r = std::max(std::min({c(i - 1, j), c(i - 1, j - 1), c(i, j - 1)}), d);
    memo[key] = r;
    return r;
  };
  return c(a.size() - 1, b.size() - 1);
}

inline std::vector<Event> random_walk(std::mt19937_64& rng, int n, int dim, double step = 1.0) {
  std::normal_distribution<double> g(0.0, step);
  std::vector<Event> pts;
  Event x = Event::Zero(dim);
  for (int i = 0; i < n; ++i) {
    Event d(dim);
    for (int k = 0; k < dim; ++k) d[k] = g(rng);
    x += d;
    pts.push_back(x);
  }
  return pts;
}

// Future timelike polyline in a chart where the metric is close to
// diag(-1, 1, ...): each leg advances time by dt and space by at most
// slope * dt.
inline std::vector<Event> timelike_polyline(std::mt19937_64& rng, const Event& start, int legs, double dt,
                                            double slope) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Event> pts{start};
  for (int i = 0; i < legs; ++i) {
    Event next = pts.back();
    next[0] += dt;
    Vec dir(start.size() - 1);
    for (Eigen::Index k = 0; k < dir.size(); ++k) dir[k] = u(rng);
    if (dir.norm() > 1.0) dir.normalize();
    next.tail(start.size() - 1) += slope * dt * dir;
    pts.push_back(next);
  }
  return pts;
}

}  // namespace oracle
