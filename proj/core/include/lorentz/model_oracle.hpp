#pragma once

#include "lorentz/geodesic.hpp"
#include "lorentz/model_space.hpp"

namespace lorentz {

// Independent check of tau_model: the longest future timelike geodesic from x
// to y found by shooting the numerically integrated geodesic equation of the
// chart metric (the closed-form flow is not used). Throws OracleFailure when
// no connecting timelike geodesic is found.
double model_tau_oracle(const ModelSpace& space, const Event& x, const Event& y);
double model_tau_oracle(const ModelSpace& space, const Event& x, const Event& y, const ShootingOptions& opts);

}  // namespace lorentz
