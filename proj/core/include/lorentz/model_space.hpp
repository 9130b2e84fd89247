#pragma once

#include <cmath>
#include <string>

#include "lorentz/space.hpp"
#include "lorentz/spacetime.hpp"

namespace lorentz {

using AmbientVec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim + 1, 1>;

// Constant-curvature model spacetime of curvature K.
//
// K = 0: Minkowski space, coordinates (t, x_1..x_{n-1}), any n in [2, 4].
// K < 0: universal cover of anti-de Sitter space of radius R = 1/sqrt(-K),
//        coordinates (t, y) with y in R^{n-1}. The quadric
//        -u^2 - v^2 + |X|^2 = -R^2 is parametrized by
//        u = rho cos(t/R), v = rho sin(t/R), X = y, rho^2 = R^2 + |y|^2.
// K > 0: de Sitter plane (n = 2), coordinates (t, x) with
//        P = (R sinh(t/R), R cosh(t/R) cos(x/R), R cosh(t/R) sin(x/R)) on the
//        quadric -X0^2 + X1^2 + X2^2 = R^2, x ranging over the cover.
//
// Along the worldline through the chart origin the metric is diag(-1, 1, ...).
class ModelSpace final : public MetricSpacetime<ModelSpace>, public PreLengthSpace {
 public:
  ModelSpace(double K, int dim, double tol_chron = 1e-12);

  double curvature() const { return K_; }
  int dim() const override { return dim_; }
  std::string name() const override;
  bool in_domain(const Event& x) const override;

  // Infinite for K >= 0.
  double radius() const { return R_; }
  double timelike_diameter() const;

  double time_separation(const Event& x, const Event& y) const override;
  bool causal(const Event& x, const Event& y) const override;
  Event interpolate(const Event& x, const Event& y, double lambda) const override;
  bool has_geodesic_interpolation() const override { return true; }

  bool has_exact_flow() const override { return true; }
  FlowState exact_flow(const Event& p, const Tangent& v, double s) const override;
  std::optional<double> exact_time_separation(const Event& x, const Event& y) const override {
    return time_separation(x, y);
  }
  double convexity_window() const override;

  // Ambient model. For K = 0 the ambient space is the chart itself.
  int ambient_dim() const { return K_ == 0.0 ? dim_ : dim_ + 1; }
  double b(const AmbientVec& u, const AmbientVec& w) const;
  AmbientVec to_ambient(const Event& x) const;
  AmbientVec push_forward(const Event& x, const Tangent& v) const;
  // Chart point over P, choosing the sheet of the cover closest to `near`.
  Event from_ambient(const AmbientVec& P, const Event& near) const;
  Tangent pull_back(const Event& x, const AmbientVec& V) const;

  template <class T>
  void metric_t(const T* x, T* g) const;

 private:
  double K_;
  int dim_;
  double R_;
};

double tau_model(const ModelSpace& space, const Event& x, const Event& y);
double timelike_diameter(const ModelSpace& space);
double timelike_diameter(double K);
Event model_geodesic(const ModelSpace& space, const Event& p, const Tangent& v, double t);

template <class T>
void ModelSpace::metric_t(const T* x, T* g) const {
  const int n = dim_;
  for (int i = 0; i < n * n; ++i) g[i] = lit<T>(0.0);
  if (K_ == 0.0) {
    g[0] = lit<T>(-1.0);
    for (int i = 1; i < n; ++i) g[i * n + i] = lit<T>(1.0);
    return;
  }
  if (K_ < 0.0) {
    const T r2 = lit<T>(R_ * R_);
    T rho2 = r2;
    for (int i = 1; i < n; ++i) rho2 += x[i] * x[i];
    g[0] = -rho2 / r2;
    for (int i = 1; i < n; ++i)
      for (int j = 1; j < n; ++j) g[i * n + j] = lit<T>(i == j ? 1.0 : 0.0) - x[i] * x[j] / rho2;
    return;
  }
  using std::cosh;
  const T c = cosh(x[0] / lit<T>(R_));
  g[0] = lit<T>(-1.0);
  g[3] = c * c;
}

}  // namespace lorentz
