#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "lorentz/space.hpp"
#include "lorentz/spacetime.hpp"

namespace lorentz {

enum class Interpolation { chart_linear, geodesic };
enum class CausalCharacter { timelike, null, causal_mixed };

std::string to_string(Interpolation mode);
std::string to_string(CausalCharacter c);

// A curve sampled on a strictly increasing parameter grid in [0, 1].
class SampledCurve {
 public:
  SampledCurve(std::shared_ptr<const PreLengthSpace> space, std::vector<double> params, std::vector<Event> points);
  // Uniform parameters on [0, 1].
  SampledCurve(std::shared_ptr<const PreLengthSpace> space, std::vector<Event> points);

  const PreLengthSpace& space() const { return *space_; }
  const std::shared_ptr<const PreLengthSpace>& space_ptr() const { return space_; }
  const std::vector<double>& params() const { return params_; }
  const std::vector<Event>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  Interpolation interpolation() const { return interpolation_; }

  const Event& front() const { return points_.front(); }
  const Event& back() const { return points_.back(); }
  // Point at parameter u in [0, 1], interpolated between samples.
  Event at(double u) const;
  // Largest d-gap between consecutive samples.
  double mesh_width() const;
  // Largest ratio of d-gap to parameter gap.
  double lipschitz_estimate() const;

 private:
  std::shared_ptr<const PreLengthSpace> space_;
  std::vector<double> params_;
  std::vector<Event> points_;
  Interpolation interpolation_;
};

// Representative with parameter proportional to d-arclength.
struct CurveClass {
  SampledCurve canonical;
};

struct TauLength {
  double value = 0.0;
  // Decrease of the partition sum from the half-resolution grid to the full
  // grid; an empirical bound on the remaining gap to the infimum.
  double refinement_gap = 0.0;
};

// Every consecutive pair causally related; by transitivity every ordered pair.
bool is_causal(const SampledCurve& c);
double partition_sum(const SampledCurve& c, std::size_t stride = 1);
TauLength tau_length(const SampledCurve& c);
CausalCharacter classify_character(const SampledCurve& c, double tol = 1e-12);
bool is_maximizer(const SampledCurve& c, double tol);
CurveClass canonicalize(const SampledCurve& c);
// Midpoint-rule integral of sqrt(-g(c', c')).
double l_g_length(const SampledCurve& c, const SmoothSpacetime& st);
// Same image, resampled at the given parameters.
SampledCurve resample(const SampledCurve& c, const std::vector<double>& params);

// CSV with header "t,x1,...,xn"; parameters are mapped affinely onto [0, 1].
SampledCurve read_curve_csv(std::istream& in, std::shared_ptr<const PreLengthSpace> space);
SampledCurve read_curve_csv(const std::string& path, std::shared_ptr<const PreLengthSpace> space);
void write_curve_csv(std::ostream& out, const std::vector<double>& params, const std::vector<Event>& points);

}  // namespace lorentz
