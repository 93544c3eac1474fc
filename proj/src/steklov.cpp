#include "stefan/steklov.hpp"

#include <cassert>
#include <cmath>
#include <limits>

namespace stefan {

double cell_average(const Expr& d, const SpatialGrid& grid, const TimeGrid& tg, int i,
                    int k) {
  assert(i >= 0 && i < grid.N());
  assert(k >= 1 && k <= tg.n);
  double c;
  if (d.is_constant(&c)) return c;
  const double x0 = grid.nodes[static_cast<std::size_t>(i)];
  const double x1 = grid.nodes[static_cast<std::size_t>(i) + 1];
  const double t0 = tg.t(k - 1), t1 = tg.t(k);
  const double integral =
      quad::gauss4_cell([&d](double x, double t) { return d.eval(x, t); }, x0, x1, t0, t1);
  return integral / ((x1 - x0) * (t1 - t0));
}

double time_average(const std::function<double(double)>& h, double t0, double t1) {
  return quad::gauss4(h, t0, t1) / (t1 - t0);
}

TraceAverages trace_averages(const ContinuousControl& c, const Expr& gamma,
                             const Expr& chi, const TimeGrid& tg, int k, int panels) {
  const double t0 = tg.t(k - 1), t1 = tg.t(k);
  TraceAverages out;
  double gc, cc;
  const bool gamma_zero = gamma.is_constant(&gc) && gc == 0.0;
  if (!gamma_zero) {
    out.gamma_sprime = quad::gauss4_composite(
                           [&](double t) {
                             const ControlPoint p = eval_control(c, t);
                             return gamma.eval(p.s, t) * p.ds;
                           },
                           t0, t1, panels) /
                       (t1 - t0);
  }
  if (chi.is_constant(&cc)) {
    out.chi = cc;
  } else {
    out.chi = quad::gauss4_composite(
                  [&](double t) { return chi.eval(eval_control(c, t).s, t); }, t0, t1,
                  panels) /
              (t1 - t0);
  }
  return out;
}

AveragedCoefficients::AveragedCoefficients(const ProblemData& p, SpatialGrid grid,
                                           TimeGrid tg, ContinuousControl boundary)
    : p_(p), grid_(std::move(grid)), tg_(tg), boundary_(std::move(boundary)) {
  const Expr* exprs[4] = {&p_.a, &p_.b, &p_.c, &p_.f};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int w = 0; w < 4; ++w) {
    slots_[w].expr = exprs[w];
    slots_[w].constant = exprs[w]->is_constant(&slots_[w].constant_value);
    if (!slots_[w].constant)
      cells_[w].assign(static_cast<std::size_t>(grid_.N()) * tg_.n, nan);
  }
  nu_.assign(static_cast<std::size_t>(tg_.n) + 1, nan);
  mu_.assign(static_cast<std::size_t>(tg_.n) + 1, nan);
  gsp_.assign(static_cast<std::size_t>(tg_.n) + 1, nan);
  chi_.assign(static_cast<std::size_t>(tg_.n) + 1, nan);
  gs_.assign(static_cast<std::size_t>(tg_.n) + 1, 0.0);
}

double AveragedCoefficients::coeff(int which, int i, int k) const {
  const CoeffSlot& s = slots_[which];
  if (s.constant) return s.constant_value;
  const std::size_t idx =
      static_cast<std::size_t>(k - 1) * grid_.N() + static_cast<std::size_t>(i);
  double& v = cells_[which][idx];
  if (std::isnan(v)) v = cell_average(*s.expr, grid_, tg_, i, k);
  return v;
}

double AveragedCoefficients::g_avg(int k) const {
  // exact mean of the piecewise-linear lift over cell k
  return 0.5 * (gs_[static_cast<std::size_t>(k - 1)] + gs_[static_cast<std::size_t>(k)]);
}

double AveragedCoefficients::nu_avg(int k) const {
  double& v = nu_[static_cast<std::size_t>(k)];
  if (std::isnan(v)) v = p_.nu.cell_average(tg_.t(k - 1), tg_.t(k));
  return v;
}

double AveragedCoefficients::mu_avg(int k) const {
  double& v = mu_[static_cast<std::size_t>(k)];
  if (std::isnan(v)) v = p_.mu.cell_average(tg_.t(k - 1), tg_.t(k));
  return v;
}

void AveragedCoefficients::ensure_traces(int k) const {
  double& g = gsp_[static_cast<std::size_t>(k)];
  if (std::isnan(g)) {
    const TraceAverages t = trace_averages(boundary_, p_.gamma, p_.chi, tg_, k);
    g = t.gamma_sprime;
    chi_[static_cast<std::size_t>(k)] = t.chi;
  }
}

double AveragedCoefficients::gamma_sprime_avg(int k) const {
  ensure_traces(k);
  return gsp_[static_cast<std::size_t>(k)];
}

double AveragedCoefficients::chi_avg(int k) const {
  ensure_traces(k);
  return chi_[static_cast<std::size_t>(k)];
}

void AveragedCoefficients::set_flux_samples(std::vector<double> g) {
  if (g.size() != static_cast<std::size_t>(tg_.n) + 1)
    throw ConfigError("flux sample count does not match the time grid");
  gs_ = std::move(g);
}

void AveragedCoefficients::build_all() const {
  for (int k = 1; k <= tg_.n; ++k) {
    ensure_traces(k);
    if (!p_.nu.empty()) nu_avg(k);
    if (!p_.mu.empty()) mu_avg(k);
    for (int w = 0; w < 4; ++w)
      if (!slots_[w].constant)
        for (int i = 0; i < grid_.N(); ++i) coeff(w, i, k);
  }
}

}  // namespace stefan
