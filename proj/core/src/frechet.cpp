#include "lorentz/frechet.hpp"

#include <algorithm>
#include <cmath>

namespace lorentz {

double euclidean_distance(const Event& x, const Event& y) { return (x - y).norm(); }

bool MonotoneCoupling::valid(std::size_t last_a, std::size_t last_b) const {
  if (pairs.empty() || pairs.front() != std::make_pair<std::size_t, std::size_t>(0, 0)) return false;
  if (pairs.back() != std::make_pair(last_a, last_b)) return false;
  for (std::size_t k = 1; k < pairs.size(); ++k) {
    const auto [i0, j0] = pairs[k - 1];
    const auto [i1, j1] = pairs[k];
    if (i1 < i0 || j1 < j0 || i1 - i0 > 1 || j1 - j0 > 1 || (i1 == i0 && j1 == j0)) return false;
  }
  return true;
}

double discrete_frechet(const std::vector<Event>& a, const std::vector<Event>& b, const GroundMetric& d) {
  if (a.empty() || b.empty()) throw DegenerateCurveError("discrete_frechet: empty curve");
  const std::size_t m = b.size();
  std::vector<double> prev(m), cur(m);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double c = d(a[i], b[j]);
      double best;
      if (i == 0 && j == 0)
        best = c;
      else if (i == 0)
        best = std::max(cur[j - 1], c);
      else if (j == 0)
        best = std::max(prev[0], c);
      else
        best = std::max(std::min({prev[j], prev[j - 1], cur[j - 1]}), c);
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

FrechetCoupling discrete_frechet_coupling(const std::vector<Event>& a, const std::vector<Event>& b,
                                          const GroundMetric& d) {
  if (a.empty() || b.empty()) throw DegenerateCurveError("discrete_frechet: empty curve");
  const std::size_t n = a.size(), m = b.size();
  std::vector<double> D(n * m);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return D[i * m + j]; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double c = d(a[i], b[j]);
      if (i == 0 && j == 0)
        at(i, j) = c;
      else if (i == 0)
        at(i, j) = std::max(at(i, j - 1), c);
      else if (j == 0)
        at(i, j) = std::max(at(i - 1, j), c);
      else
        at(i, j) = std::max(std::min({at(i - 1, j), at(i - 1, j - 1), at(i, j - 1)}), c);
    }
  FrechetCoupling out;
  out.value = at(n - 1, m - 1);
  std::size_t i = n - 1, j = m - 1;
  out.coupling.pairs.emplace_back(i, j);
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const double diag = at(i - 1, j - 1), up = at(i - 1, j), left = at(i, j - 1);
      if (diag <= up && diag <= left) {
        --i;
        --j;
      } else if (up <= left) {
        --i;
      } else {
        --j;
      }
    }
    out.coupling.pairs.emplace_back(i, j);
  }
  std::reverse(out.coupling.pairs.begin(), out.coupling.pairs.end());
  return out;
}

double coupling_cost(const std::vector<Event>& a, const std::vector<Event>& b, const MonotoneCoupling& c,
                     const GroundMetric& d) {
  double cost = 0.0;
  for (const auto& [i, j] : c.pairs) cost = std::max(cost, d(a[i], b[j]));
  return cost;
}

namespace {

void require_same_ground(const SampledCurve& a, const SampledCurve& b) {
  if (a.space_ptr() == b.space_ptr()) return;
  if (a.space().name() != b.space().name() || a.space().dim() != b.space().dim())
    throw IncompatibleError("discrete_frechet: curves live over different ground metrics");
}

}  // namespace

double discrete_frechet(const SampledCurve& a, const SampledCurve& b) {
  require_same_ground(a, b);
  const PreLengthSpace& space = a.space();
  return discrete_frechet(a.points(), b.points(),
                          [&space](const Event& x, const Event& y) { return space.distance(x, y); });
}

double discrete_frechet(const CurveClass& a, const CurveClass& b) { return discrete_frechet(a.canonical, b.canonical); }

double d_gamma(const CurveClass& a, const CurveClass& b) {
  const double df = discrete_frechet(a, b);
  const double la = tau_length(a.canonical).value;
  const double lb = tau_length(b.canonical).value;
  if (std::isinf(la) || std::isinf(lb)) return la == lb ? df : kInf;
  return df + std::abs(la - lb);
}

double d_gamma(const SmoothSpacetime& st, const GeodesicSolution& a, const GeodesicSolution& b) {
  return discrete_frechet(a.positions, b.positions) + std::abs(lg_length(st, a) - lg_length(st, b));
}

ParamPath normalize_monotone(const ParamPath& alpha, std::size_t min_samples) {
  const std::size_t K = alpha.params.size();
  if (K < 2 || alpha.phi.size() != K || alpha.psi.size() != K) throw DomainError("normalize_monotone: malformed path");
  std::vector<double> s(K);
  for (std::size_t k = 0; k < K; ++k) {
    s[k] = alpha.phi[k] + alpha.psi[k];
    if (k > 0 && (alpha.phi[k] < alpha.phi[k - 1] || alpha.psi[k] < alpha.psi[k - 1]))
      throw DomainError("normalize_monotone: path is not componentwise non-decreasing");
  }
  const double total = s.back();
  // Output grid: uniform samples together with every breakpoint of s.
  const std::size_t uniform = std::max(min_samples, 2 * K);
  std::vector<double> u(s);
  for (std::size_t i = 0; i < uniform; ++i) u.push_back(total * static_cast<double>(i) / static_cast<double>(uniform - 1));
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());

  ParamPath out;
  out.params.reserve(u.size());
  for (double ui : u) {
    // theta(u) = inf { t : s(t) >= u }
    const auto it = std::lower_bound(s.begin(), s.end(), ui);
    const std::size_t k = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - s.begin(), static_cast<std::ptrdiff_t>(K - 1)));
    double phi, psi;
    if (k == 0 || s[k] == ui) {
      phi = alpha.phi[k];
      psi = alpha.psi[k];
    } else {
      const double lam = (ui - s[k - 1]) / (s[k] - s[k - 1]);
      phi = alpha.phi[k - 1] + lam * (alpha.phi[k] - alpha.phi[k - 1]);
      psi = alpha.psi[k - 1] + lam * (alpha.psi[k] - alpha.psi[k - 1]);
    }
    out.params.push_back(ui);
    out.phi.push_back(phi);
    out.psi.push_back(psi);
  }
  return out;
}

RefineResult frechet_refine(const CurveSampler& a, const CurveSampler& b, std::size_t initial_segments,
                            double target_gap, int max_refinements, const GroundMetric& d) {
  RefineResult out;
  std::size_t segs = std::max<std::size_t>(1, initial_segments);
  double value = discrete_frechet(a(segs), b(segs), d);
  out.value = value;
  out.certified_gap = kInf;
  for (int k = 1; k <= max_refinements; ++k) {
    segs *= 2;
    const double next = discrete_frechet(a(segs), b(segs), d);
    out.refinements = k;
    out.certified_gap = std::abs(next - value);
    out.value = next;
    value = next;
    if (out.certified_gap <= target_gap) {
      out.converged = true;
      break;
    }
  }
  return out;
}

RefineResult frechet_refine(const CurveClass& a, const CurveClass& b, double target_gap, int max_refinements) {
  require_same_ground(a.canonical, b.canonical);
  constexpr std::size_t kMaxSamples = 1u << 13;
  const PreLengthSpace& space = a.canonical.space();
  const GroundMetric d = [&space](const Event& x, const Event& y) { return space.distance(x, y); };
  std::vector<double> ta = a.canonical.params(), tb = b.canonical.params();
  auto refine = [](const std::vector<double>& t) {
    std::vector<double> r;
    r.reserve(2 * t.size());
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      r.push_back(t[i]);
      r.push_back(0.5 * (t[i] + t[i + 1]));
    }
    r.push_back(t.back());
    return r;
  };
  auto sample = [](const SampledCurve& c, const std::vector<double>& t) {
    std::vector<Event> pts;
    pts.reserve(t.size());
    for (double u : t) pts.push_back(c.at(u));
    return pts;
  };
  RefineResult out;
  double value = discrete_frechet(a.canonical.points(), b.canonical.points(), d);
  out.value = value;
  out.certified_gap = kInf;
  for (int k = 1; k <= max_refinements; ++k) {
    if (ta.size() > kMaxSamples || tb.size() > kMaxSamples) break;
    ta = refine(ta);
    tb = refine(tb);
    const double next = discrete_frechet(sample(a.canonical, ta), sample(b.canonical, tb), d);
    out.refinements = k;
    out.certified_gap = std::abs(next - value);
    out.value = next;
    value = next;
    if (out.certified_gap <= target_gap) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace lorentz
