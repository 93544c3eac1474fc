#include "stefan/control.hpp"

#include <algorithm>
#include <cmath>

namespace stefan {

NormReport discrete_norms(const DiscreteControl& v) {
  const int n = v.n();
  const double tau = v.tau;
  NormReport r;

  auto s_at = [&v](int k) { return v.s[static_cast<std::size_t>(k < 0 ? 0 : k)]; };

  for (int k = 0; k <= n - 1; ++k) r.s_norm_sq += tau * v.s[static_cast<std::size_t>(k)] * v.s[static_cast<std::size_t>(k)];
  for (int k = 1; k <= n; ++k) {
    const double d = (s_at(k) - s_at(k - 1)) / tau;
    r.s_norm_sq += tau * d * d;
  }
  for (int k = 0; k <= n - 1; ++k) {
    const double dd = (s_at(k + 1) - 2.0 * s_at(k) + s_at(k - 1)) / (tau * tau);
    r.s_norm_sq += tau * dd * dd;
  }

  for (int k = 0; k <= n - 1; ++k) r.g_norm_sq += tau * v.g[static_cast<std::size_t>(k)] * v.g[static_cast<std::size_t>(k)];
  for (int k = 1; k <= n; ++k) {
    const double d = (v.g[static_cast<std::size_t>(k)] - v.g[static_cast<std::size_t>(k - 1)]) / tau;
    r.g_norm_sq += tau * d * d;
  }
  return r;
}

bool is_feasible_discrete(const DiscreteControl& v, double delta, double l, double R) {
  for (double sk : v.s)
    if (sk < delta || sk > l) return false;
  const NormReport r = discrete_norms(v);
  return std::max(r.s_norm_sq, r.g_norm_sq) <= R * R;
}

DiscreteControl sample_Qn(const std::function<double(double)>& s,
                          const std::function<double(double)>& g, int n, double T) {
  if (n < 1) throw ConfigError("sample_Qn needs n >= 1");
  DiscreteControl v;
  v.tau = T / n;
  v.s.resize(static_cast<std::size_t>(n) + 1);
  v.g.resize(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    const double tk = k == n ? T : k * v.tau;
    v.s[static_cast<std::size_t>(k)] = s(tk);
    v.g[static_cast<std::size_t>(k)] = g(tk);
  }
  return v;
}

ContinuousControl lift_Pn(const DiscreteControl& v) {
  const int n = v.n();
  if (n < 1) throw ConfigError("lift_Pn needs n >= 1");
  const double tau = v.tau;
  ContinuousControl c;
  c.n = n;
  c.tau = tau;
  c.g = v.g;
  c.sA.resize(static_cast<std::size_t>(n));
  c.sB.resize(static_cast<std::size_t>(n));
  c.sC.resize(static_cast<std::size_t>(n));

  // first branch: s_0 + d^2/(2 tau) * s_{tbar,1}
  c.sA[0] = v.s[0];
  c.sB[0] = 0.0;
  c.sC[0] = (v.s[1] - v.s[0]) / (2.0 * tau * tau);
  for (int k = 2; k <= n; ++k) {
    const double sb = (v.s[static_cast<std::size_t>(k - 1)] - v.s[static_cast<std::size_t>(k - 2)]) / tau;
    const double sdd =
        (v.s[static_cast<std::size_t>(k)] - 2.0 * v.s[static_cast<std::size_t>(k - 1)] + v.s[static_cast<std::size_t>(k - 2)]) /
        (tau * tau);
    c.sA[static_cast<std::size_t>(k - 1)] = v.s[static_cast<std::size_t>(k - 1)] - 0.5 * tau * sb;
    c.sB[static_cast<std::size_t>(k - 1)] = sb;
    c.sC[static_cast<std::size_t>(k - 1)] = 0.5 * sdd;
  }
  return c;
}

ControlPoint eval_control(const ContinuousControl& c, double t) {
  const double T = c.T();
  if (t < 0.0) t = 0.0;
  if (t > T) t = T;
  int k = static_cast<int>(std::floor(t / c.tau)) + 1;
  k = std::clamp(k, 1, c.n);
  const double d = t - (k - 1) * c.tau;

  ControlPoint p;
  const std::size_t b = static_cast<std::size_t>(k - 1);
  p.s = c.sA[b] + d * (c.sB[b] + d * c.sC[b]);
  p.ds = c.sB[b] + 2.0 * d * c.sC[b];
  p.g = c.g[b] + (c.g[b + 1] - c.g[b]) * (d / c.tau);
  return p;
}

DiscreteControl project_to_feasible(DiscreteControl v, double delta, double l, double R) {
  if (v.s.empty() || v.s.front() < delta || v.s.front() > l)
    throw ConfigError("initial boundary position lies outside [delta, l]");
  for (std::size_t k = 1; k < v.s.size(); ++k) v.s[k] = std::clamp(v.s[k], delta, l);

  if (is_feasible_discrete(v, delta, l, R)) return v;

  const double s0 = v.s.front();
  auto blend = [&](double lambda) {
    DiscreteControl w = v;
    for (std::size_t k = 0; k < w.s.size(); ++k) {
      w.s[k] = s0 + lambda * (v.s[k] - s0);
      w.g[k] = lambda * v.g[k];
    }
    return w;
  };

  if (!is_feasible_discrete(blend(0.0), delta, l, R))
    throw ConfigError("feasible set is empty: the constant control exceeds the norm ball");

  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (is_feasible_discrete(blend(mid), delta, l, R))
      lo = mid;
    else
      hi = mid;
  }
  return blend(lo);
}

DiscreteControl refine_control(const DiscreteControl& v, int n2) {
  const ContinuousControl c = lift_Pn(v);
  return sample_Qn([&c](double t) { return eval_control(c, t).s; },
                   [&c](double t) { return eval_control(c, t).g; }, n2, v.T());
}

}  // namespace stefan
