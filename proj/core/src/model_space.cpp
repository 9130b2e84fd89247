#include "lorentz/model_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lorentz {
namespace {

constexpr double kPi = std::numbers::pi;

// Euclidean angle between unit vectors, accurate for nearly equal and nearly
// opposite arguments.
double unit_angle(const Vec& a, const Vec& b) { return 2.0 * std::atan2((a - b).norm(), (a + b).norm()); }

// Wraps an angle difference into (-pi, pi].
double wrap(double a) { return std::remainder(a, 2.0 * kPi); }

}  // namespace

ModelSpace::ModelSpace(double K, int dim, double tol_chron)
    : PreLengthSpace(tol_chron), K_(K), dim_(dim), R_(K == 0.0 ? kInf : 1.0 / std::sqrt(std::abs(K))) {
  if (!std::isfinite(K)) throw DomainError("model space: curvature must be finite");
  if (dim < 2 || dim > kMaxDim) throw DomainError("model space: dimension must lie in [2, 4]");
  if (K > 0.0 && dim != 2) throw DomainError("model space: de Sitter charts are provided for dim = 2 only");
}

std::string ModelSpace::name() const {
  if (K_ == 0.0) return "minkowski";
  return K_ < 0.0 ? "anti-de-sitter" : "de-sitter";
}

bool ModelSpace::in_domain(const Event& x) const { return x.size() == dim_ && x.allFinite(); }

double ModelSpace::timelike_diameter() const { return lorentz::timelike_diameter(K_); }

double ModelSpace::convexity_window() const { return K_ < 0.0 ? 0.5 * kPi * R_ : 1.0; }

double ModelSpace::b(const AmbientVec& u, const AmbientVec& w) const {
  if (K_ == 0.0) return -u[0] * w[0] + u.tail(dim_ - 1).dot(w.tail(dim_ - 1));
  if (K_ < 0.0) return -u[0] * w[0] - u[1] * w[1] + u.tail(dim_ - 1).dot(w.tail(dim_ - 1));
  return -u[0] * w[0] + u[1] * w[1] + u[2] * w[2];
}

AmbientVec ModelSpace::to_ambient(const Event& x) const {
  if (K_ == 0.0) return AmbientVec(x);
  AmbientVec P(dim_ + 1);
  if (K_ < 0.0) {
    const double rho = std::sqrt(R_ * R_ + x.tail(dim_ - 1).squaredNorm());
    const double th = x[0] / R_;
    P[0] = rho * std::cos(th);
    P[1] = rho * std::sin(th);
    P.tail(dim_ - 1) = x.tail(dim_ - 1);
    return P;
  }
  const double ch = R_ * std::cosh(x[0] / R_);
  const double ph = x[1] / R_;
  P << R_ * std::sinh(x[0] / R_), ch * std::cos(ph), ch * std::sin(ph);
  return P;
}

AmbientVec ModelSpace::push_forward(const Event& x, const Tangent& v) const {
  if (K_ == 0.0) return AmbientVec(v);
  AmbientVec V(dim_ + 1);
  if (K_ < 0.0) {
    const auto y = x.tail(dim_ - 1);
    const double rho = std::sqrt(R_ * R_ + y.squaredNorm());
    const double th = x[0] / R_;
    const double c = std::cos(th), s = std::sin(th);
    const double radial = y.dot(v.tail(dim_ - 1)) / rho;
    V[0] = -rho * s * v[0] / R_ + radial * c;
    V[1] = rho * c * v[0] / R_ + radial * s;
    V.tail(dim_ - 1) = v.tail(dim_ - 1);
    return V;
  }
  const double ch = std::cosh(x[0] / R_), sh = std::sinh(x[0] / R_);
  const double c = std::cos(x[1] / R_), s = std::sin(x[1] / R_);
  V << ch * v[0], sh * c * v[0] - ch * s * v[1], sh * s * v[0] + ch * c * v[1];
  return V;
}

Event ModelSpace::from_ambient(const AmbientVec& P, const Event& near) const {
  if (K_ == 0.0) return Event(P);
  Event x(dim_);
  if (K_ < 0.0) {
    const double th_ref = near[0] / R_;
    const double th = th_ref + wrap(std::atan2(P[1], P[0]) - th_ref);
    x[0] = R_ * th;
    x.tail(dim_ - 1) = P.tail(dim_ - 1);
    return x;
  }
  x[0] = R_ * std::asinh(P[0] / R_);
  const double ph_ref = near[1] / R_;
  x[1] = R_ * (ph_ref + wrap(std::atan2(P[2], P[1]) - ph_ref));
  return x;
}

Tangent ModelSpace::pull_back(const Event& x, const AmbientVec& V) const {
  if (K_ == 0.0) return Tangent(V);
  Tangent v(dim_);
  if (K_ < 0.0) {
    const double rho = std::sqrt(R_ * R_ + x.tail(dim_ - 1).squaredNorm());
    const double th = x[0] / R_;
    v[0] = R_ * (-std::sin(th) * V[0] + std::cos(th) * V[1]) / rho;
    v.tail(dim_ - 1) = V.tail(dim_ - 1);
    return v;
  }
  const double ch = std::cosh(x[0] / R_);
  const double ph = x[1] / R_;
  v[0] = V[0] / ch;
  v[1] = (-std::sin(ph) * V[1] + std::cos(ph) * V[2]) / ch;
  return v;
}

FlowState ModelSpace::exact_flow(const Event& p, const Tangent& v, double s) const {
  if (K_ == 0.0) return {p + s * v, v};
  const AmbientVec A = to_ambient(p);
  const AmbientVec V = push_forward(p, v);
  // Geodesics of the quadric b(P,P) = 1/K solve P'' = lambda P.
  const double lambda = -K_ * b(V, V);
  const double omega = std::sqrt(std::abs(lambda));
  // Closed-form point and velocity at parameter r.
  auto at = [&](double r, AmbientVec& P, AmbientVec& dP) {
    double c, S, dc, dS;
    if (lambda < 0.0) {
      c = std::cos(omega * r);
      S = omega > 0.0 ? std::sin(omega * r) / omega : r;
      dc = -omega * std::sin(omega * r);
      dS = c;
    } else if (lambda > 0.0) {
      c = std::cosh(omega * r);
      S = std::sinh(omega * r) / omega;
      dc = omega * std::sinh(omega * r);
      dS = c;
    } else {
      c = 1.0;
      S = r;
      dc = 0.0;
      dS = 1.0;
    }
    P = c * A + S * V;
    dP = dc * A + dS * V;
  };
  // Sub-steps keep each angular increment below pi/4 so the lift onto the
  // cover is unambiguous.
  int steps = 1;
  if (lambda < 0.0) steps = std::max(1, static_cast<int>(std::ceil(omega * std::abs(s) / (0.25 * kPi))));
  Event x = p;
  AmbientVec P, dP;
  for (int k = 1; k <= steps; ++k) {
    at(s * k / steps, P, dP);
    x = from_ambient(P, x);
  }
  return {x, pull_back(x, dP)};
}

double ModelSpace::time_separation(const Event& x, const Event& y) const {
  if (K_ == 0.0) {
    const double dt = y[0] - x[0];
    const double dx = (y.tail(dim_ - 1) - x.tail(dim_ - 1)).norm();
    if (dt <= 0.0 || dt < dx) return 0.0;
    return std::sqrt((dt - dx) * (dt + dx));
  }
  if (!causal(x, y)) return 0.0;
  const AmbientVec P = to_ambient(x);
  const AmbientVec Q = to_ambient(y);
  const AmbientVec D = Q - P;
  const double half_sin = std::sqrt(std::max(0.0, -b(D, D))) / (2.0 * R_);
  if (K_ > 0.0) return 2.0 * R_ * std::asinh(half_sin);
  // Anti-de Sitter: beyond the closed diamond between x and its refocusing
  // point x' = (t + pi R, -y) no maximizer exists and tau is infinite.
  Vec n_y(dim_), n_ref(dim_);
  const double rho_x = std::sqrt(R_ * R_ + x.tail(dim_ - 1).squaredNorm());
  const double rho_y = std::sqrt(R_ * R_ + y.tail(dim_ - 1).squaredNorm());
  n_y << R_, y.tail(dim_ - 1);
  n_y /= rho_y;
  n_ref << R_, -x.tail(dim_ - 1);
  n_ref /= rho_x;
  const double remaining = (x[0] - y[0]) / R_ + kPi;
  if (remaining < unit_angle(n_y, n_ref) - 1e-12) return kInf;
  const AmbientVec S = Q + P;
  const double half_cos = std::sqrt(std::max(0.0, -b(S, S))) / (2.0 * R_);
  return 2.0 * R_ * std::atan2(half_sin, half_cos);
}

bool ModelSpace::causal(const Event& x, const Event& y) const {
  if (x == y) return true;
  if (K_ == 0.0) {
    const double dt = y[0] - x[0];
    return dt > 0.0 && dt >= (y.tail(dim_ - 1) - x.tail(dim_ - 1)).norm();
  }
  if (K_ < 0.0) {
    // Conformal to R x hemisphere: causal iff the angular time gap dominates
    // the spherical distance of the spatial positions.
    Vec n_x(dim_), n_y(dim_);
    n_x << R_, x.tail(dim_ - 1);
    n_y << R_, y.tail(dim_ - 1);
    n_x.normalize();
    n_y.normalize();
    const double dth = (y[0] - x[0]) / R_;
    return dth > 0.0 && dth >= unit_angle(n_x, n_y);
  }
  const double dT = std::atan(std::sinh(y[0] / R_)) - std::atan(std::sinh(x[0] / R_));
  return dT > 0.0 && dT >= std::abs(y[1] - x[1]) / R_;
}

Event ModelSpace::interpolate(const Event& x, const Event& y, double lambda) const {
  const Event linear = (1.0 - lambda) * x + lambda * y;
  if (K_ == 0.0) return linear;
  const double tau = time_separation(x, y);
  if (!(tau > 0.0) || !std::isfinite(tau)) return linear;
  const AmbientVec P = to_ambient(x);
  const AmbientVec Q = to_ambient(y);
  // P(s) = C(s) P + S(s) U with U the unit initial velocity.
  auto C = [&](double s) { return K_ < 0.0 ? std::cos(s / R_) : std::cosh(s / R_); };
  auto S = [&](double s) { return K_ < 0.0 ? R_ * std::sin(s / R_) : R_ * std::sinh(s / R_); };
  const double S_tau = S(tau);
  if (std::abs(S_tau) < 1e-8 * R_) return linear;
  const AmbientVec U = (Q - C(tau) * P) / S_tau;
  const AmbientVec M = C(lambda * tau) * P + S(lambda * tau) * U;
  return from_ambient(M, linear);
}

double timelike_diameter(double K) { return K < 0.0 ? kPi / std::sqrt(-K) : kInf; }

double timelike_diameter(const ModelSpace& space) { return space.timelike_diameter(); }

double tau_model(const ModelSpace& space, const Event& x, const Event& y) {
  space.PreLengthSpace::check_domain(x);
  space.PreLengthSpace::check_domain(y);
  return space.time_separation(x, y);
}

Event model_geodesic(const ModelSpace& space, const Event& p, const Tangent& v, double t) {
  space.PreLengthSpace::check_domain(p);
  if (v.size() != space.dim() || !v.allFinite()) throw DomainError("model_geodesic: invalid tangent vector");
  return space.exact_flow(p, v, t).x;
}

}  // namespace lorentz
