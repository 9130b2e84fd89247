#include "lorentz/space.hpp"

#include <cmath>
#include <sstream>

namespace lorentz {

bool PreLengthSpace::in_domain(const Event& x) const {
  return x.size() == dim() && x.allFinite();
}

double PreLengthSpace::distance(const Event& x, const Event& y) const { return (x - y).norm(); }

bool PreLengthSpace::causal(const Event& x, const Event& y) const {
  return x == y || time_separation(x, y) > tol_chron_;
}

Event PreLengthSpace::interpolate(const Event& x, const Event& y, double lambda) const {
  return (1.0 - lambda) * x + lambda * y;
}

void PreLengthSpace::check_domain(const Event& x) const {
  if (in_domain(x)) return;
  std::ostringstream os;
  os << name() << ": event (";
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ") outside the chart domain";
  throw DomainError(os.str());
}

bool chronological(const PreLengthSpace& space, const Event& x, const Event& y) {
  space.check_domain(x);
  space.check_domain(y);
  return space.time_separation(x, y) > space.chronology_tolerance();
}

AuditReport reverse_triangle_audit(const PreLengthSpace& space, const std::vector<Event>& samples,
                                   double tol) {
  constexpr std::size_t kMaxExamples = 16;
  AuditReport report;
  const std::size_t n = samples.size();
  report.samples = n;
  std::vector<double> tau(n * n);
  std::vector<char> le(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      tau[i * n + j] = space.time_separation(samples[i], samples[j]);
      le[i * n + j] = space.causal(samples[i], samples[j]) ? 1 : 0;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double t = tau[i * n + j];
      if (t > space.chronology_tolerance() && !le[i * n + j]) ++report.relation_violations;
      if (i < j && t > space.chronology_tolerance() && tau[j * n + i] > space.chronology_tolerance())
        ++report.symmetry_violations;
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (!le[x * n + y]) continue;
      for (std::size_t z = 0; z < n; ++z) {
        if (!le[y * n + z]) continue;
        ++report.ordered_triples;
        const double txz = tau[x * n + z];
        const double sum = tau[x * n + y] + tau[y * n + z];
        double margin;
        if (std::isinf(txz))
          margin = kInf;
        else if (std::isinf(sum))
          margin = -kInf;
        else
          margin = txz - sum;
        report.worst_margin = std::min(report.worst_margin, margin);
        if (margin + tol < 0.0) {
          ++report.violations;
          if (report.examples.size() < kMaxExamples) report.examples.push_back({x, y, z, margin});
        }
      }
    }
  }
  return report;
}

EuclideanSpace::EuclideanSpace(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) throw DomainError("euclidean: dimension out of range");
}

bool EuclideanSpace::causal(const Event& x, const Event& y) const { return x == y; }

}  // namespace lorentz
