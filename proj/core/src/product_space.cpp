#include "lorentz/product_space.hpp"

#include <algorithm>
#include <numbers>

namespace lorentz {

ProductSpacetime::ProductSpacetime(FiberSpec fiber) : fiber_(fiber) {
  switch (fiber_.kind) {
    case FiberKind::flat:
      if (fiber_.flat_dim < 1 || fiber_.flat_dim > kMaxDim - 1)
        throw DomainError("product: flat fiber dimension must lie in [1, 3]");
      dim_ = 1 + fiber_.flat_dim;
      break;
    case FiberKind::sphere:
      if (!(fiber_.radius > 0.0)) throw DomainError("product: sphere radius must be positive");
      dim_ = 3;
      break;
    case FiberKind::ellipsoid:
      if (!(fiber_.a > 0.0 && fiber_.b > 0.0 && fiber_.c > 0.0))
        throw DomainError("product: ellipsoid semi-axes must be positive");
      dim_ = 3;
      break;
  }
}

std::string ProductSpacetime::name() const {
  switch (fiber_.kind) {
    case FiberKind::flat:
      return "product-flat";
    case FiberKind::sphere:
      return "product-sphere";
    default:
      return "product-ellipsoid";
  }
}

bool ProductSpacetime::in_domain(const Event& x) const {
  if (x.size() != dim_ || !x.allFinite()) return false;
  if (fiber_.kind == FiberKind::flat) return true;
  return x[1] > fiber_.pole_margin && x[1] < std::numbers::pi - fiber_.pole_margin;
}

FlowState ProductSpacetime::exact_flow(const Event& p, const Tangent& v, double s) const {
  if (fiber_.kind != FiberKind::flat) return SmoothSpacetime::exact_flow(p, v, s);
  return {p + s * v, v};
}

std::optional<double> ProductSpacetime::exact_time_separation(const Event& x, const Event& y) const {
  if (fiber_.kind != FiberKind::flat) return std::nullopt;
  const double dt = y[0] - x[0];
  const double dx = (y.tail(dim_ - 1) - x.tail(dim_ - 1)).norm();
  if (dt <= 0.0 || dt < dx) return 0.0;
  return std::sqrt((dt - dx) * (dt + dx));
}

double ProductSpacetime::convexity_window() const {
  if (fiber_.kind == FiberKind::flat) return kInf;
  if (fiber_.kind == FiberKind::sphere) return 0.5 * fiber_.radius;
  return 0.5 * std::min({fiber_.a, fiber_.b, fiber_.c});
}

Eigen::Vector3d ProductSpacetime::embed_fiber(const Event& x) const {
  if (fiber_.kind == FiberKind::flat) throw Error("product: flat fibers have no embedding");
  const double st = std::sin(x[1]), ct = std::cos(x[1]);
  const double sp = std::sin(x[2]), cp = std::cos(x[2]);
  if (fiber_.kind == FiberKind::sphere) return fiber_.radius * Eigen::Vector3d(st * cp, st * sp, ct);
  return {fiber_.a * st * cp, fiber_.b * st * sp, fiber_.c * ct};
}

SpacetimePreLength::SpacetimePreLength(std::shared_ptr<const SmoothSpacetime> st, ShootingOptions opts)
    : st_(std::move(st)), opts_(std::move(opts)) {}

bool SpacetimePreLength::in_domain(const Event& x) const {
  return x.size() == st_->dim() && x.allFinite() && st_->in_domain(x);
}

double SpacetimePreLength::time_separation(const Event& x, const Event& y) const {
  if (x == y) return 0.0;
  return local_time_separation(*st_, x, y, Tangent(y - x), opts_);
}

bool SpacetimePreLength::causal(const Event& x, const Event& y) const {
  if (x == y) return true;
  const Tangent d = y - x;
  if (d[0] > 0.0) {
    bool ok = true;
    for (double lam : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const Event m = x + lam * d;
      if (!st_->in_domain(m) || st_->inner(m, d, d) > 1e-12 * d.squaredNorm()) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return time_separation(x, y) > chronology_tolerance();
}

}  // namespace lorentz
