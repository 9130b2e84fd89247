#pragma once

#include <cmath>
#include <memory>
#include <string>

#include "lorentz/geodesic.hpp"
#include "lorentz/space.hpp"
#include "lorentz/spacetime.hpp"

namespace lorentz {

enum class FiberKind { sphere, ellipsoid, flat };

struct FiberSpec {
  FiberKind kind = FiberKind::sphere;
  double radius = 1.0;                 // sphere
  double a = 1.0, b = 1.0, c = 1.0;    // ellipsoid semi-axes
  int flat_dim = 1;                    // flat fiber R^k
  // Charts on the sphere and ellipsoid stay this far from the poles.
  double pole_margin = 0.05;
};

// R x N with metric -dt^2 + h. Coordinates (t, theta, phi) for the sphere and
// the ellipsoid (a sin(theta) cos(phi), b sin(theta) sin(phi), c cos(theta)),
// and (t, x_1..x_k) for a flat fiber.
class ProductSpacetime final : public MetricSpacetime<ProductSpacetime> {
 public:
  explicit ProductSpacetime(FiberSpec fiber);

  int dim() const override { return dim_; }
  std::string name() const override;
  bool in_domain(const Event& x) const override;
  const FiberSpec& fiber() const { return fiber_; }

  bool has_exact_flow() const override { return fiber_.kind == FiberKind::flat; }
  FlowState exact_flow(const Event& p, const Tangent& v, double s) const override;
  std::optional<double> exact_time_separation(const Event& x, const Event& y) const override;
  double convexity_window() const override;

  // Embedding of the fiber point of x into R^3 (curved fibers only).
  Eigen::Vector3d embed_fiber(const Event& x) const;

  template <class T>
  void metric_t(const T* x, T* g) const;

 private:
  FiberSpec fiber_;
  int dim_;
};

template <class T>
void ProductSpacetime::metric_t(const T* x, T* g) const {
  const int n = dim_;
  for (int i = 0; i < n * n; ++i) g[i] = lit<T>(0.0);
  g[0] = lit<T>(-1.0);
  if (fiber_.kind == FiberKind::flat) {
    for (int i = 1; i < n; ++i) g[i * n + i] = lit<T>(1.0);
    return;
  }
  using std::cos;
  using std::sin;
  const T st = sin(x[1]), ct = cos(x[1]);
  if (fiber_.kind == FiberKind::sphere) {
    const T r2 = lit<T>(fiber_.radius * fiber_.radius);
    g[4] = r2;
    g[8] = r2 * st * st;
    return;
  }
  const T sp = sin(x[2]), cp = cos(x[2]);
  const T a = lit<T>(fiber_.a), b = lit<T>(fiber_.b), c = lit<T>(fiber_.c);
  // Tangent vectors of the embedding in the theta and phi directions.
  const T xt[3] = {a * ct * cp, b * ct * sp, -c * st};
  const T xp[3] = {-a * st * sp, b * st * cp, lit<T>(0.0)};
  g[4] = xt[0] * xt[0] + xt[1] * xt[1] + xt[2] * xt[2];
  g[5] = xt[0] * xp[0] + xt[1] * xp[1];
  g[7] = g[5];
  g[8] = xp[0] * xp[0] + xp[1] * xp[1];
}

// A smooth spacetime seen as a pre-length space: tau from the closed form when
// available, else by shooting around the chart segment; x <= y when the chart
// segment from x to y is causal at sampled points or tau(x, y) > 0.
class SpacetimePreLength final : public PreLengthSpace {
 public:
  explicit SpacetimePreLength(std::shared_ptr<const SmoothSpacetime> st, ShootingOptions opts = {});
  int dim() const override { return st_->dim(); }
  std::string name() const override { return st_->name(); }
  bool in_domain(const Event& x) const override;
  double time_separation(const Event& x, const Event& y) const override;
  bool causal(const Event& x, const Event& y) const override;

 private:
  std::shared_ptr<const SmoothSpacetime> st_;
  ShootingOptions opts_;
};

}  // namespace lorentz
