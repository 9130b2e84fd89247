#include "lorentz/factory.hpp"

namespace lorentz {

SpaceHandle make_model_space(double K, int dim) {
  SpaceDescriptor d;
  d.space = "model_k";
  d.K = K;
  d.dim = dim;
  return make_space(d);
}

SpaceHandle make_space(const SpaceDescriptor& desc) {
  SpaceHandle h;
  if (desc.space == "minkowski" || desc.space == "model_k") {
    const double K = desc.space == "minkowski" ? 0.0 : desc.K;
    auto m = std::make_shared<const ModelSpace>(K, desc.dim, desc.tol_chron);
    h.model = m;
    h.prelength = m;
    h.spacetime = m;
    return h;
  }
  if (desc.space == "product") {
    FiberSpec f;
    if (desc.fiber == "sphere") {
      f.kind = FiberKind::sphere;
      f.radius = desc.radius;
    } else if (desc.fiber == "ellipsoid") {
      if (desc.axes.size() != 3) throw DomainError("product: ellipsoid needs three semi-axes");
      f.kind = FiberKind::ellipsoid;
      f.a = desc.axes[0];
      f.b = desc.axes[1];
      f.c = desc.axes[2];
    } else if (desc.fiber == "flat") {
      f.kind = FiberKind::flat;
      f.flat_dim = desc.dim - 1;
    } else {
      throw DomainError("product: unknown fiber '" + desc.fiber + "'");
    }
    auto st = std::make_shared<const ProductSpacetime>(f);
    h.spacetime = st;
    h.prelength = std::make_shared<const SpacetimePreLength>(st);
    return h;
  }
  if (desc.space == "euclidean") {
    h.prelength = std::make_shared<const EuclideanSpace>(desc.dim);
    return h;
  }
  throw DomainError("unknown space kind '" + desc.space + "'");
}

}  // namespace lorentz
