#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lorentz/model_space.hpp"
#include "lorentz/product_space.hpp"

namespace lorentz {

// Typed form of the JSON space descriptor
// {"space": "minkowski" | "model_k" | "product" | "euclidean", "K", "dim", ...}.
struct SpaceDescriptor {
  std::string space = "minkowski";
  double K = 0.0;
  int dim = 2;
  // Product spaces.
  std::string fiber = "sphere";  // sphere | ellipsoid | flat
  double radius = 1.0;
  std::vector<double> axes{1.0, 1.0, 1.0};
  double tol_chron = 1e-12;
};

struct SpaceHandle {
  std::shared_ptr<const PreLengthSpace> prelength;
  std::shared_ptr<const SmoothSpacetime> spacetime;  // null for metric-only spaces
  std::shared_ptr<const ModelSpace> model;           // null unless a model space
};

SpaceHandle make_space(const SpaceDescriptor& desc);
SpaceHandle make_model_space(double K, int dim);

}  // namespace lorentz
