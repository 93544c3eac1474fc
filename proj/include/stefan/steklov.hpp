#pragma once

#include <vector>

#include "stefan/control.hpp"
#include "stefan/grid.hpp"
#include "stefan/problem.hpp"
#include "stefan/quadrature.hpp"

namespace stefan {

/// Cell-time mean of d over [x_i, x_{i+1}] x [t_{k-1}, t_k], 4-point
/// Gauss-Legendre per axis. Requires 0 <= i <= N-1, 1 <= k <= n.
double cell_average(const Expr& d, const SpatialGrid& grid, const TimeGrid& tg, int i,
                    int k);

/// Time mean of h over [t0, t1], single 4-point Gauss-Legendre panel.
double time_average(const std::function<double(double)>& h, double t0, double t1);

struct TraceAverages {
  double gamma_sprime = 0.0;  // mean of gamma(s^n(t), t) (s^n)'(t)
  double chi = 0.0;           // mean of chi(s^n(t), t)
};

/// Trace means over [t_{k-1}, t_k] along the lifted boundary, composite
/// Gauss-Legendre (the spline is smooth inside each time cell).
TraceAverages trace_averages(const ContinuousControl& c, const Expr& gamma,
                             const Expr& chi, const TimeGrid& tg, int k,
                             int panels = 4);

/// Per-solve bundle of averaged inputs for the time-step systems.
///
/// Cell averages of a, b, c, f depend only on the grid; trace and
/// measurement averages depend on the boundary spline and the time grid;
/// the flux averages depend on the flux samples alone and can be swapped
/// cheaply via set_flux_samples. Everything except the flux is memoized
/// lazily; call build_all before sharing across threads.
class AveragedCoefficients {
 public:
  AveragedCoefficients(const ProblemData& p, SpatialGrid grid, TimeGrid tg,
                       ContinuousControl boundary);

  double a(int i, int k) const { return coeff(0, i, k); }
  double b(int i, int k) const { return coeff(1, i, k); }
  double c(int i, int k) const { return coeff(2, i, k); }
  double f(int i, int k) const { return coeff(3, i, k); }

  double g_avg(int k) const;            // mean of g^n over cell k (exact)
  double nu_avg(int k) const;
  double mu_avg(int k) const;
  double gamma_sprime_avg(int k) const;
  double chi_avg(int k) const;

  void set_flux_samples(std::vector<double> g);
  void build_all() const;

  const SpatialGrid& grid() const { return grid_; }
  const TimeGrid& time_grid() const { return tg_; }
  const ContinuousControl& boundary() const { return boundary_; }
  const ProblemData& problem() const { return p_; }

 private:
  double coeff(int which, int i, int k) const;
  void ensure_traces(int k) const;

  ProblemData p_;
  SpatialGrid grid_;
  TimeGrid tg_;
  ContinuousControl boundary_;
  std::vector<double> gs_;

  struct CoeffSlot {
    bool constant = false;
    double constant_value = 0.0;
    const Expr* expr = nullptr;
  };
  CoeffSlot slots_[4];
  mutable std::vector<double> cells_[4];        // (k-1)*N + i, NaN = not yet computed
  mutable std::vector<double> nu_, mu_, gsp_, chi_;  // index k, NaN sentinel
};

}  // namespace stefan
