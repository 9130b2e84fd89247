#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lorentz/types.hpp"

namespace lorentz {

// A Lorentzian pre-length space realized on a chart: ground metric d, time
// separation tau and the causal relation. The timelike relation is derived as
// {tau > tol_chron}.
class PreLengthSpace {
 public:
  explicit PreLengthSpace(double tol_chron = 1e-12) : tol_chron_(tol_chron) {}
  virtual ~PreLengthSpace() = default;

  virtual int dim() const = 0;
  virtual std::string name() const = 0;

  virtual bool in_domain(const Event& x) const;
  // Euclidean distance in chart coordinates.
  virtual double distance(const Event& x, const Event& y) const;
  // Nonnegative, possibly +inf.
  virtual double time_separation(const Event& x, const Event& y) const = 0;
  virtual bool causal(const Event& x, const Event& y) const;

  // Point at fraction lambda between x and y; chart-linear unless overridden.
  virtual Event interpolate(const Event& x, const Event& y, double lambda) const;
  virtual bool has_geodesic_interpolation() const { return false; }

  double chronology_tolerance() const { return tol_chron_; }
  void check_domain(const Event& x) const;

 private:
  double tol_chron_;
};

bool chronological(const PreLengthSpace& space, const Event& x, const Event& y);

struct TriangleViolation {
  std::size_t x = 0, y = 0, z = 0;
  double margin = 0.0;  // tau(x,z) - tau(x,y) - tau(y,z)
};

struct AuditReport {
  std::size_t samples = 0;
  std::size_t ordered_triples = 0;
  std::size_t violations = 0;
  double worst_margin = kInf;
  // Pairs with tau > 0 that are not causally related, and pairs where both
  // tau(x,y) and tau(y,x) are positive.
  std::size_t relation_violations = 0;
  std::size_t symmetry_violations = 0;
  std::vector<TriangleViolation> examples;  // first few violations
  bool ok() const { return violations == 0 && relation_violations == 0 && symmetry_violations == 0; }
};

AuditReport reverse_triangle_audit(const PreLengthSpace& space, const std::vector<Event>& samples,
                                   double tol);

// A metric space seen as a pre-length space with tau identically zero and the
// causal relation reduced to equality. Used as the ground for plain curves.
class EuclideanSpace final : public PreLengthSpace {
 public:
  explicit EuclideanSpace(int dim);
  int dim() const override { return dim_; }
  std::string name() const override { return "euclidean"; }
  double time_separation(const Event&, const Event&) const override { return 0.0; }
  bool causal(const Event& x, const Event& y) const override;

 private:
  int dim_;
};

}  // namespace lorentz
