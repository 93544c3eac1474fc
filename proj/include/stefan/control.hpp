#pragma once

#include <functional>
#include <vector>

#include "stefan/errors.hpp"

namespace stefan {

/// Discrete control [v]_n = ([s]_n, [g]_n): boundary samples s_0..s_n and
/// flux samples g_0..g_n on the uniform time grid of step tau.
/// The backward difference at k = 0 uses the convention s_{-1} = s_0.
struct DiscreteControl {
  std::vector<double> s;
  std::vector<double> g;
  double tau = 0.0;

  int n() const { return static_cast<int>(s.size()) - 1; }
  double T() const { return tau * n(); }
};

/// tau-weighted discrete Sobolev norms of a discrete control:
///   s_norm_sq = sum_{k=0..n-1} tau s_k^2 + sum_{k=1..n} tau s_{tbar,k}^2
///             + sum_{k=0..n-1} tau s_{tbar t,k}^2
///   g_norm_sq = sum_{k=0..n-1} tau g_k^2 + sum_{k=1..n} tau g_{tbar,k}^2
struct NormReport {
  double s_norm_sq = 0.0;
  double g_norm_sq = 0.0;
};

NormReport discrete_norms(const DiscreteControl& v);

/// Membership in the discrete control set: delta <= s_k <= l for all k and
/// max(s_norm_sq, g_norm_sq) <= R^2 (closed ball).
bool is_feasible_discrete(const DiscreteControl& v, double delta, double l, double R);

/// Pointwise sampling of a continuous control at the grid knots.
DiscreteControl sample_Qn(const std::function<double(double)>& s,
                          const std::function<double(double)>& g, int n, double T);

/// Lifted control: s^n is the C^1 piecewise-quadratic spline with
/// s^n(0) = s_0 and (s^n)'(0) = 0, g^n the piecewise-linear interpolant.
/// Each branch k covers [t_{k-1}, t_k] and is stored as
/// s^n(t) = sA[k-1] + d*sB[k-1] + d^2*sC[k-1] with d = t - t_{k-1}.
struct ContinuousControl {
  int n = 0;
  double tau = 0.0;
  std::vector<double> sA, sB, sC;
  std::vector<double> g;

  double T() const { return tau * n; }
};

ContinuousControl lift_Pn(const DiscreteControl& v);

struct ControlPoint {
  double s = 0.0;
  double ds = 0.0;  // (s^n)'
  double g = 0.0;
};

/// Evaluate the lifted control. Arguments outside [0,T] clamp to the
/// nearest endpoint of the final (or first) segment.
ControlPoint eval_control(const ContinuousControl& c, double t);

/// Clip every s_k into [delta,l] keeping s_0 fixed, then, if a norm exceeds
/// R^2, shrink the deviation from the constant-s_0 / zero-g center radially:
/// s <- s_0 + lambda (s - s_0), g <- lambda g with the largest feasible
/// lambda found by bisection to 1e-12. The result is feasible.
DiscreteControl project_to_feasible(DiscreteControl v, double delta, double l, double R);

/// Warm-start transfer: lift to the continuous control and resample at n2.
DiscreteControl refine_control(const DiscreteControl& v, int n2);

}  // namespace stefan
