#include "stefan/state.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace stefan {

TriSystem assemble_step(const SpatialGrid& grid, const TimeGrid& tg,
                        const AveragedCoefficients& avg, int k,
                        std::span<const double> u_prev) {
  const int m = grid.boundary_index(k);
  const double tau = tg.tau;
  TriSystem sys;
  sys.lower.assign(static_cast<std::size_t>(m) + 1, 0.0);
  sys.diag.assign(static_cast<std::size_t>(m) + 1, 0.0);
  sys.upper.assign(static_cast<std::size_t>(m) + 1, 0.0);
  sys.rhs.assign(static_cast<std::size_t>(m) + 1, 0.0);

  {
    const double h = grid.width(0);
    const double a0k = avg.a(0, k), b0k = avg.b(0, k), c0k = avg.c(0, k);
    sys.diag[0] = a0k + h * b0k - h * h * c0k + h * h / tau;
    sys.upper[0] = -(a0k + h * b0k);
    sys.rhs[0] = (h * h / tau) * u_prev[0] - h * h * avg.f(0, k) - h * avg.g_avg(k);
  }
  for (int i = 1; i <= m - 1; ++i) {
    const double hi = grid.width(i), hm = grid.width(i - 1);
    const double ai1 = avg.a(i - 1, k), ai = avg.a(i, k);
    const double bi = avg.b(i, k), ci = avg.c(i, k);
    const std::size_t ii = static_cast<std::size_t>(i);
    sys.lower[ii] = -ai1 * hi;
    sys.diag[ii] = ai1 * hi + ai * hm + bi * hi * hm - ci * hi * hi * hm + hi * hi * hm / tau;
    sys.upper[ii] = -(ai * hm + bi * hi * hm);
    sys.rhs[ii] = -hi * hi * hm * avg.f(i, k) + (hi * hi * hm / tau) * u_prev[ii];
  }
  {
    const double hm = grid.width(m - 1);
    const double am = avg.a(m - 1, k);
    const std::size_t mm = static_cast<std::size_t>(m);
    sys.lower[mm] = -am;
    sys.diag[mm] = am;
    sys.rhs[mm] = -hm * (avg.gamma_sprime_avg(k) - avg.chi_avg(k));
  }
  return sys;
}

std::vector<double> solve_step(const TriSystem& sys, int step_k) {
  const int m = static_cast<int>(sys.size());
  if (m == 0) return {};
  std::vector<double> low = sys.lower, d = sys.diag, up = sys.upper, b = sys.rhs;
  std::vector<double> up2(static_cast<std::size_t>(m), 0.0);  // fill-in from pivoting

  for (int i = 0; i + 1 < m; ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    if (std::abs(low[ii + 1]) > std::abs(d[ii])) {
      std::swap(d[ii], low[ii + 1]);
      std::swap(up[ii], d[ii + 1]);
      std::swap(up2[ii], up[ii + 1]);
      std::swap(b[ii], b[ii + 1]);
    }
    if (std::abs(d[ii]) < 1e-300)
      throw SolveError("singular time-step system", step_k);
    const double mult = low[ii + 1] / d[ii];
    low[ii + 1] = 0.0;
    d[ii + 1] -= mult * up[ii];
    up[ii + 1] -= mult * up2[ii];
    b[ii + 1] -= mult * b[ii];
  }
  if (std::abs(d[static_cast<std::size_t>(m - 1)]) < 1e-300)
    throw SolveError("singular time-step system", step_k);

  std::vector<double> x(static_cast<std::size_t>(m));
  for (int i = m - 1; i >= 0; --i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    double v = b[ii];
    if (i + 1 < m) v -= up[ii] * x[ii + 1];
    if (i + 2 < m) v -= up2[ii] * x[ii + 2];
    x[ii] = v / d[ii];
  }

  // residual against the original system
  double rmax = 0.0, anorm = 0.0, xnorm = 0.0, bnorm = 0.0;
  for (int i = 0; i < m; ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    double r = sys.diag[ii] * x[ii] - sys.rhs[ii];
    double row = std::abs(sys.diag[ii]);
    if (i > 0) {
      r += sys.lower[ii] * x[ii - 1];
      row += std::abs(sys.lower[ii]);
    }
    if (i + 1 < m) {
      r += sys.upper[ii] * x[ii + 1];
      row += std::abs(sys.upper[ii]);
    }
    rmax = std::max(rmax, std::abs(r));
    anorm = std::max(anorm, row);
    xnorm = std::max(xnorm, std::abs(x[ii]));
    bnorm = std::max(bnorm, std::abs(sys.rhs[ii]));
  }
  if (rmax > 1e-10 * (anorm * xnorm + bnorm))
    throw SolveError("time-step solve failed the residual check", step_k);
  return x;
}

int reflection_fold_cap(double l, double delta) {
  return static_cast<int>(std::ceil(1.0 + std::log2(l / delta) - 1e-9));
}

double reflect_fold(double x, double s, int max_folds) {
  int folds = 0;
  while (x > s && folds < max_folds) {
    double bound = 2.0 * s;
    while (x > bound) bound *= 2.0;
    x = bound - x;
    ++folds;
  }
  return std::clamp(x, 0.0, s);
}

namespace {

// piecewise-linear value over the node prefix 0..m
double pl_eval(const SpatialGrid& grid, std::span<const double> u, int m, double x) {
  const auto& xs = grid.nodes;
  if (x <= xs[0]) return u[0];
  if (x >= xs[static_cast<std::size_t>(m)]) return u[static_cast<std::size_t>(m)];
  const auto it = std::upper_bound(xs.begin(), xs.begin() + m + 1, x);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
  const double w = (x - xs[i]) / grid.width(static_cast<int>(i));
  return u[i] + w * (u[i + 1] - u[i]);
}

double pl_slope(const SpatialGrid& grid, std::span<const double> u, int m, double x) {
  const auto& xs = grid.nodes;
  std::size_t i;
  if (x <= xs[0])
    i = 0;
  else if (x >= xs[static_cast<std::size_t>(m)])
    i = static_cast<std::size_t>(m) - 1;
  else {
    const auto it = std::upper_bound(xs.begin(), xs.begin() + m + 1, x);
    i = static_cast<std::size_t>(it - xs.begin()) - 1;
  }
  return (u[i + 1] - u[i]) / grid.width(static_cast<int>(i));
}

void extend_layer(const SpatialGrid& grid, int m, int fold_cap, std::span<double> layer) {
  const double s = grid.nodes[static_cast<std::size_t>(m)];
  for (int i = m + 1; i <= grid.N(); ++i) {
    const double xf = reflect_fold(grid.nodes[static_cast<std::size_t>(i)], s, fold_cap);
    layer[static_cast<std::size_t>(i)] = pl_eval(grid, layer, m, xf);
  }
}

}  // namespace

double DiscreteState::u_hat(int k, double x) const {
  const int m = front(k);
  const std::size_t off = static_cast<std::size_t>(k) * (grid.N() + 1);
  const std::span<const double> layer(values.data() + off, static_cast<std::size_t>(grid.N()) + 1);
  const double s = grid.nodes[static_cast<std::size_t>(m)];
  return pl_eval(grid, layer, m, reflect_fold(x, s, fold_cap));
}

double DiscreteState::u_hat_dx(int k, double x) const {
  const int m = front(k);
  const std::size_t off = static_cast<std::size_t>(k) * (grid.N() + 1);
  const std::span<const double> layer(values.data() + off, static_cast<std::size_t>(grid.N()) + 1);
  const double s = grid.nodes[static_cast<std::size_t>(m)];
  double sign = 1.0;
  int folds = 0;
  while (x > s && folds < fold_cap) {
    double bound = 2.0 * s;
    while (x > bound) bound *= 2.0;
    x = bound - x;
    sign = -sign;
    ++folds;
  }
  return sign * pl_slope(grid, layer, m, std::clamp(x, 0.0, s));
}

DiscreteState run_forward(const ProblemData& p, const DiscreteControl& v,
                          const SpatialGrid& grid, const TimeGrid& tg,
                          AveragedCoefficients& avg, std::vector<std::string>* warnings) {
  const double tau0 = p.tau0();
  if (tg.tau >= tau0 && warnings)
    warnings->push_back("tau = " + std::to_string(tg.tau) +
                        " is not below the solvability threshold tau0 = " +
                        std::to_string(tau0));

  avg.set_flux_samples(v.g);

  DiscreteState st;
  st.tgrid = tg;
  st.grid = grid;
  st.control = v;
  st.fold_cap = reflection_fold_cap(p.l, p.delta);
  const std::size_t stride = static_cast<std::size_t>(grid.N()) + 1;
  st.values.assign(stride * (static_cast<std::size_t>(tg.n) + 1), 0.0);

  {
    std::span<double> layer0(st.values.data(), stride);
    const int m0 = grid.boundary_index(0);
    for (int i = 0; i <= m0; ++i)
      layer0[static_cast<std::size_t>(i)] = p.phi.eval(grid.nodes[static_cast<std::size_t>(i)], 0.0);
    extend_layer(grid, m0, st.fold_cap, layer0);
  }

  for (int k = 1; k <= tg.n; ++k) {
    const std::span<const double> prev(st.values.data() + stride * (static_cast<std::size_t>(k) - 1),
                                       stride);
    const TriSystem sys = assemble_step(grid, tg, avg, k, prev);
    const std::vector<double> sol = solve_step(sys, k);
    std::span<double> layer(st.values.data() + stride * static_cast<std::size_t>(k), stride);
    std::copy(sol.begin(), sol.end(), layer.begin());
    extend_layer(grid, grid.boundary_index(k), st.fold_cap, layer);
  }
  return st;
}

DiscreteState run_forward(const ProblemData& p, const DiscreteControl& v, double c_h,
                          std::vector<std::string>* warnings) {
  const TimeGrid tg = build_time_grid(p.T, v.n());
  SpatialGrid grid = build_spatial_grid(v.s, p.l, tg.tau, c_h);
  AveragedCoefficients avg(p, grid, tg, lift_Pn(v));
  return run_forward(p, v, avg.grid(), tg, avg, warnings);
}

ResidualReport residual_identity(const DiscreteState& st, const AveragedCoefficients& avg,
                                 int k, std::span<const double> eta) {
  const SpatialGrid& grid = st.grid;
  const int m = st.front(k);
  assert(static_cast<int>(eta.size()) == m + 1);
  const double tau = st.tgrid.tau;

  ResidualReport r;
  auto add = [&r](double term) {
    r.value += term;
    r.scale += std::abs(term);
  };

  for (int i = 0; i <= m - 1; ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    const double hi = grid.width(i);
    const double uix = (st.at(k, i + 1) - st.at(k, i)) / hi;
    const double etax = (eta[ii + 1] - eta[ii]) / hi;
    const double uit = (st.at(k, i) - st.at(k - 1, i)) / tau;
    add(hi * avg.a(i, k) * uix * etax);
    add(-hi * avg.b(i, k) * uix * eta[ii]);
    add(-hi * avg.c(i, k) * st.at(k, i) * eta[ii]);
    add(hi * avg.f(i, k) * eta[ii]);
    add(hi * uit * eta[ii]);
  }
  add((avg.gamma_sprime_avg(k) - avg.chi_avg(k)) * eta[static_cast<std::size_t>(m)]);
  add(avg.g_avg(k) * eta[0]);
  return r;
}

int time_cell_index(const TimeGrid& tg, double t) {
  if (t <= 0.0) return 0;
  if (t >= tg.T) return tg.n;
  int k = static_cast<int>(std::floor(t / tg.tau));
  if (t > k * tg.tau) ++k;  // smallest k with t <= t_k
  return std::clamp(k, 0, tg.n);
}

double eval_interpolant(const DiscreteState& st, double x, double t, Interpolant which) {
  const int k = time_cell_index(st.tgrid, t);
  switch (which) {
    case Interpolant::u_tau:
      return st.u_hat(k, x);
    case Interpolant::u_hat_tau: {
      if (k == 0) return st.u_hat(0, x);
      if (t >= st.tgrid.T) return st.u_hat(st.n(), x);
      const double w = (t - st.tgrid.t(k - 1)) / st.tgrid.tau;
      return st.u_hat(k - 1, x) + w * (st.u_hat(k, x) - st.u_hat(k - 1, x));
    }
    case Interpolant::u_tilde_tau: {
      const auto& xs = st.grid.nodes;
      int i;
      if (x <= xs[0])
        i = 0;
      else if (x >= xs.back())
        i = st.N() - 1;
      else {
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        i = static_cast<int>(it - xs.begin()) - 1;
      }
      return st.at(k, i);
    }
  }
  throw EvalError("unknown interpolant");
}

}  // namespace stefan
