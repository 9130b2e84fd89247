#include "lorentz/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace lorentz {

std::string to_string(Interpolation mode) {
  return mode == Interpolation::geodesic ? "geodesic" : "chart-linear";
}

std::string to_string(CausalCharacter c) {
  switch (c) {
    case CausalCharacter::timelike:
      return "timelike";
    case CausalCharacter::null:
      return "null";
    default:
      return "causal-mixed";
  }
}

SampledCurve::SampledCurve(std::shared_ptr<const PreLengthSpace> space, std::vector<double> params,
                           std::vector<Event> points)
    : space_(std::move(space)), params_(std::move(params)), points_(std::move(points)) {
  if (!space_) throw DomainError("curve: missing space");
  if (points_.size() < 2) throw DegenerateCurveError("curve: at least two samples required");
  if (params_.size() != points_.size()) throw DomainError("curve: parameter and point counts differ");
  if (params_.front() < 0.0 || params_.back() > 1.0) throw DomainError("curve: parameters must lie in [0, 1]");
  for (std::size_t i = 1; i < params_.size(); ++i)
    if (!(params_[i] > params_[i - 1])) throw DomainError("curve: parameters must be strictly increasing");
  for (const Event& x : points_) space_->check_domain(x);
  interpolation_ = space_->has_geodesic_interpolation() ? Interpolation::geodesic : Interpolation::chart_linear;
}

namespace {
std::vector<double> uniform_params(std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
  return t;
}
}  // namespace

SampledCurve::SampledCurve(std::shared_ptr<const PreLengthSpace> space, std::vector<Event> points)
    : SampledCurve(std::move(space), uniform_params(points.size()), points) {}

Event SampledCurve::at(double u) const {
  if (u <= params_.front()) return points_.front();
  if (u >= params_.back()) return points_.back();
  const auto it = std::upper_bound(params_.begin(), params_.end(), u);
  const std::size_t k = static_cast<std::size_t>(it - params_.begin());
  const double lam = (u - params_[k - 1]) / (params_[k] - params_[k - 1]);
  if (interpolation_ == Interpolation::geodesic) return space_->interpolate(points_[k - 1], points_[k], lam);
  return (1.0 - lam) * points_[k - 1] + lam * points_[k];
}

double SampledCurve::mesh_width() const {
  double w = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) w = std::max(w, space_->distance(points_[i - 1], points_[i]));
  return w;
}

double SampledCurve::lipschitz_estimate() const {
  double L = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i)
    L = std::max(L, space_->distance(points_[i - 1], points_[i]) / (params_[i] - params_[i - 1]));
  return L;
}

bool is_causal(const SampledCurve& c) {
  const auto& pts = c.points();
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (!c.space().causal(pts[i - 1], pts[i])) return false;
  return true;
}

double partition_sum(const SampledCurve& c, std::size_t stride) {
  const auto& pts = c.points();
  const std::size_t n = pts.size();
  stride = std::max<std::size_t>(1, stride);
  double sum = 0.0;
  std::size_t prev = 0;
  while (prev < n - 1) {
    const std::size_t next = std::min(prev + stride, n - 1);
    sum += c.space().time_separation(pts[prev], pts[next]);
    prev = next;
  }
  return sum;
}

TauLength tau_length(const SampledCurve& c) {
  if (!is_causal(c)) throw ClassificationError("tau_length: curve is not causal");
  TauLength out;
  out.value = partition_sum(c, 1);
  if (c.size() > 2) {
    const double coarse = partition_sum(c, 2);
    out.refinement_gap = std::isfinite(coarse) && std::isfinite(out.value) ? std::max(0.0, coarse - out.value) : 0.0;
  }
  return out;
}

CausalCharacter classify_character(const SampledCurve& c, double tol) {
  if (!is_causal(c)) throw ClassificationError("classify_character: curve is not causal");
  const auto& pts = c.points();
  bool all_positive = true;
  bool all_zero = true;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double t = c.space().time_separation(pts[i - 1], pts[i]);
    all_positive = all_positive && t > tol;
    all_zero = all_zero && t <= tol;
  }
  if (all_positive) return CausalCharacter::timelike;
  if (all_zero) return CausalCharacter::null;
  return CausalCharacter::causal_mixed;
}

bool is_maximizer(const SampledCurve& c, double tol) {
  const double L = tau_length(c).value;
  const double tau = c.space().time_separation(c.front(), c.back());
  if (std::isinf(L) || std::isinf(tau)) return false;
  return std::abs(L - tau) <= tol;
}

CurveClass canonicalize(const SampledCurve& c) {
  const auto& pts = c.points();
  std::vector<double> cum(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double gap = c.space().distance(pts[i - 1], pts[i]);
    if (gap <= 1e-12) throw DegenerateCurveError("canonicalize: repeated consecutive points");
    cum[i] = cum[i - 1] + gap;
  }
  const double total = cum.back();
  for (double& s : cum) s /= total;
  cum.front() = 0.0;
  cum.back() = 1.0;
  return {SampledCurve(c.space_ptr(), std::move(cum), pts)};
}

double l_g_length(const SampledCurve& c, const SmoothSpacetime& st) {
  if (st.dim() != c.space().dim()) throw IncompatibleError("l_g_length: dimension mismatch");
  const auto& pts = c.points();
  double L = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const Tangent d = pts[i] - pts[i - 1];
    const Event mid = 0.5 * (pts[i] + pts[i - 1]);
    const double q = st.inner(mid, d, d);
    if (q > 1e-12 * d.squaredNorm()) throw ClassificationError("l_g_length: spacelike velocity segment");
    L += std::sqrt(std::max(0.0, -q));
  }
  return L;
}

SampledCurve resample(const SampledCurve& c, const std::vector<double>& params) {
  std::vector<Event> pts;
  pts.reserve(params.size());
  for (double u : params) pts.push_back(c.at(u));
  return SampledCurve(c.space_ptr(), params, std::move(pts));
}

SampledCurve read_curve_csv(std::istream& in, std::shared_ptr<const PreLengthSpace> space) {
  std::string line;
  std::vector<double> ts;
  std::vector<Event> pts;
  const int n = space->dim();
  bool header_checked = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.empty()) continue;
    if (!header_checked) {
      header_checked = true;
      char* end = nullptr;
      std::strtod(cells[0].c_str(), &end);
      if (end == cells[0].c_str()) continue;  // header row
    }
    if (static_cast<int>(cells.size()) != n + 1)
      throw DomainError("curve csv: line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                        " columns, expected " + std::to_string(n + 1));
    Event x(n);
    try {
      ts.push_back(std::stod(cells[0]));
      for (int i = 0; i < n; ++i) x[i] = std::stod(cells[static_cast<std::size_t>(i + 1)]);
    } catch (const std::exception&) {
      throw DomainError("curve csv: unparsable number on line " + std::to_string(lineno));
    }
    pts.push_back(x);
  }
  if (pts.size() < 2) throw DegenerateCurveError("curve csv: at least two samples required");
  const double t0 = ts.front(), t1 = ts.back();
  if (!(t1 > t0)) throw DomainError("curve csv: parameters must increase");
  for (double& t : ts) t = (t - t0) / (t1 - t0);
  ts.front() = 0.0;
  ts.back() = 1.0;
  return SampledCurve(std::move(space), std::move(ts), std::move(pts));
}

SampledCurve read_curve_csv(const std::string& path, std::shared_ptr<const PreLengthSpace> space) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open curve file " + path);
  return read_curve_csv(in, std::move(space));
}

void write_curve_csv(std::ostream& out, const std::vector<double>& params, const std::vector<Event>& points) {
  const int n = points.empty() ? 0 : static_cast<int>(points.front().size());
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",x" << i;
  out << "\n" << std::setprecision(17);
  for (std::size_t k = 0; k < points.size(); ++k) {
    out << params[k];
    for (int i = 0; i < n; ++i) out << "," << points[k][i];
    out << "\n";
  }
}

}  // namespace lorentz
