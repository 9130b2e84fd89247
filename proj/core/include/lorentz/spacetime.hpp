#pragma once

#include <ceres/jet.h>

#include <optional>
#include <string>

#include "lorentz/types.hpp"

namespace lorentz {

// Christoffel symbols and (optionally) their first partial derivatives.
struct Connection {
  int n = 0;
  double gamma[kMaxDim][kMaxDim][kMaxDim] = {};                 // gamma[k][i][j] = G^k_ij
  double dgamma[kMaxDim][kMaxDim][kMaxDim][kMaxDim] = {};       // dgamma[m][k][i][j] = d_m G^k_ij
};

struct FlowState {
  Event x;
  Tangent v;
};

class SmoothSpacetime {
 public:
  virtual ~SmoothSpacetime() = default;

  virtual int dim() const = 0;
  virtual std::string name() const = 0;
  virtual bool in_domain(const Event& x) const = 0;
  virtual Mat metric(const Event& x) const = 0;
  virtual void connection(const Event& x, Connection& out, bool with_derivative) const = 0;

  virtual bool has_exact_flow() const { return false; }
  // Geodesic with initial data (p, v) at parameter s. Only valid when
  // has_exact_flow() is true.
  virtual FlowState exact_flow(const Event& p, const Tangent& v, double s) const;
  virtual std::optional<double> exact_time_separation(const Event&, const Event&) const {
    return std::nullopt;
  }
  // Chart-coordinate size of parameter windows on which geodesic segments of
  // unit speed are maximizing.
  virtual double convexity_window() const { return 0.5; }

  double inner(const Event& x, const Tangent& v, const Tangent& w) const {
    return v.dot(metric(x) * w);
  }
  void check_domain(const Event& x) const;
  // Throws DomainError unless g(x) has signature (-,+,...,+).
  void check_signature(const Event& x) const;
  // Christoffel symbols from central differences of metric() with step h.
  Connection connection_fd(const Event& x, double h) const;
};

namespace detail {

using Jet1 = ceres::Jet<double, kMaxDim>;
using Jet2 = ceres::Jet<Jet1, kMaxDim>;

template <class T>
struct ScalarLift {
  static T make(double c) { return T(c); }
};
template <class U, int N>
struct ScalarLift<ceres::Jet<U, N>> {
  static ceres::Jet<U, N> make(double c) { return ceres::Jet<U, N>(ScalarLift<U>::make(c)); }
};

// Assembles Christoffels (and derivatives if ddg != nullptr) from g, dg[m] =
// d_m g and ddg[m][l] = d_m d_l g, all row-major n x n.
void assemble_connection(int n, const double* g, const double* dg, const double* ddg,
                         Connection& out);

}  // namespace detail

// Constant of scalar type T; nested jets do not mix with plain doubles.
template <class T>
T lit(double c) {
  return detail::ScalarLift<T>::make(c);
}

// Implements metric() and connection() from a templated metric
// `template <class T> void metric_t(const T* x, T* g) const` on Derived, with
// derivatives from forward-mode automatic differentiation.
template <class Derived>
class MetricSpacetime : public SmoothSpacetime {
 public:
  Mat metric(const Event& x) const override {
    const int n = dim();
    double xs[kMaxDim];
    double g[kMaxDim * kMaxDim];
    for (int i = 0; i < n; ++i) xs[i] = x[i];
    self().metric_t(xs, g);
    Mat out(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) out(a, b) = g[a * n + b];
    return out;
  }

  void connection(const Event& x, Connection& out, bool with_derivative) const override {
    const int n = dim();
    double g[kMaxDim * kMaxDim];
    double dg[kMaxDim * kMaxDim * kMaxDim];
    if (!with_derivative) {
      detail::Jet1 xs[kMaxDim];
      detail::Jet1 gj[kMaxDim * kMaxDim];
      for (int i = 0; i < n; ++i) xs[i] = detail::Jet1(x[i], i);
      self().metric_t(xs, gj);
      for (int ab = 0; ab < n * n; ++ab) {
        g[ab] = gj[ab].a;
        for (int m = 0; m < n; ++m) dg[m * n * n + ab] = gj[ab].v[m];
      }
      detail::assemble_connection(n, g, dg, nullptr, out);
      return;
    }
    double ddg[kMaxDim * kMaxDim * kMaxDim * kMaxDim];
    detail::Jet2 xs[kMaxDim];
    detail::Jet2 gj[kMaxDim * kMaxDim];
    for (int i = 0; i < n; ++i) xs[i] = detail::Jet2(detail::Jet1(x[i], i), i);
    self().metric_t(xs, gj);
    for (int ab = 0; ab < n * n; ++ab) {
      g[ab] = gj[ab].a.a;
      for (int m = 0; m < n; ++m) {
        dg[m * n * n + ab] = gj[ab].a.v[m];
        for (int l = 0; l < n; ++l) ddg[(m * n + l) * n * n + ab] = gj[ab].v[m].v[l];
      }
    }
    detail::assemble_connection(n, g, dg, ddg, out);
  }

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

}  // namespace lorentz
