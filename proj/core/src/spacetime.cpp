#include "lorentz/spacetime.hpp"

#include <Eigen/Dense>
#include <sstream>

namespace lorentz {

FlowState SmoothSpacetime::exact_flow(const Event&, const Tangent&, double) const {
  throw Error(name() + ": no closed-form geodesic flow");
}

void SmoothSpacetime::check_domain(const Event& x) const {
  if (x.size() == dim() && x.allFinite() && in_domain(x)) return;
  std::ostringstream os;
  os << name() << ": event (";
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ") outside the chart domain";
  throw DomainError(os.str());
}

void SmoothSpacetime::check_signature(const Event& x) const {
  Eigen::SelfAdjointEigenSolver<Mat> es(metric(x));
  const auto& ev = es.eigenvalues();
  bool ok = ev[0] < 0.0;
  for (Eigen::Index i = 1; i < ev.size(); ++i) ok = ok && ev[i] > 0.0;
  if (!ok) throw DomainError(name() + ": metric is not Lorentzian at a sampled point");
}

Connection SmoothSpacetime::connection_fd(const Event& x, double h) const {
  const int n = dim();
  double g[kMaxDim * kMaxDim];
  double dg[kMaxDim * kMaxDim * kMaxDim];
  const Mat g0 = metric(x);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g[a * n + b] = g0(a, b);
  for (int m = 0; m < n; ++m) {
    Event xp = x, xm = x;
    xp[m] += h;
    xm[m] -= h;
    const Mat d = (metric(xp) - metric(xm)) / (2.0 * h);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) dg[m * n * n + a * n + b] = d(a, b);
  }
  Connection out;
  detail::assemble_connection(n, g, dg, nullptr, out);
  return out;
}

namespace detail {

void assemble_connection(int n, const double* g, const double* dg, const double* ddg,
                         Connection& out) {
  out.n = n;
  Mat gm(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) gm(a, b) = g[a * n + b];
  const Mat ginv = gm.inverse();
  auto DG = [&](int m, int a, int b) { return dg[m * n * n + a * n + b]; };

  // First kind: G_lij = (d_i g_lj + d_j g_li - d_l g_ij) / 2.
  double first[kMaxDim][kMaxDim][kMaxDim];
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) first[l][i][j] = 0.5 * (DG(i, l, j) + DG(j, l, i) - DG(l, i, j));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += ginv(k, l) * first[l][i][j];
        out.gamma[k][i][j] = s;
      }
  if (ddg == nullptr) return;

  // d_m G^k_ij = g^kl (d_m G_lij - d_m g_la G^a_ij).
  auto DDG = [&](int m, int l, int a, int b) { return ddg[(m * n + l) * n * n + a * n + b]; };
  for (int m = 0; m < n; ++m) {
    double inner[kMaxDim][kMaxDim][kMaxDim];
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.5 * (DDG(m, i, l, j) + DDG(m, j, l, i) - DDG(m, l, i, j));
          for (int a = 0; a < n; ++a) s -= DG(m, l, a) * out.gamma[a][i][j];
          inner[l][i][j] = s;
        }
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) s += ginv(k, l) * inner[l][i][j];
          out.dgamma[m][k][i][j] = s;
        }
  }
}

}  // namespace detail
}  // namespace lorentz
