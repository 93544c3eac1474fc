#pragma once

#include <span>
#include <string>
#include <vector>

#include "stefan/steklov.hpp"

namespace stefan {

/// Tridiagonal time-step system. lower[0] and upper[m] are unused.
struct TriSystem {
  std::vector<double> lower, diag, upper, rhs;

  std::size_t size() const { return diag.size(); }
};

/// Assemble the step-k system over the active nodes 0..m_{j_k}.
/// Row 0 carries the flux condition at x = 0, the last row the first-order
/// flux balance at the moving boundary; u_prev is layer k-1 including its
/// reflective extension.
TriSystem assemble_step(const SpatialGrid& grid, const TimeGrid& tg,
                        const AveragedCoefficients& avg, int k,
                        std::span<const double> u_prev);

/// Gaussian elimination with partial pivoting specialized to a tridiagonal
/// band (pivoting introduces one extra superdiagonal). Verifies the residual
/// against the original system; throws SolveError carrying the step index on
/// a vanishing pivot or a failed residual check.
std::vector<double> solve_step(const TriSystem& sys, int step_k);

/// Fold count bound for the reflective continuation on [0,l] with
/// boundary >= delta.
int reflection_fold_cap(double l, double delta);

/// Map x into [0, s] by repeated reflection x -> 2^m s - x with the smallest
/// m >= 1 such that x <= 2^m s.
double reflect_fold(double x, double s, int max_folds);

/// Layered nodal solution of the forward problem on the full grid [0, l].
/// Values above a layer's front come from the reflective continuation of its
/// piecewise-linear interpolant. Immutable once built.
struct DiscreteState {
  TimeGrid tgrid;
  SpatialGrid grid;
  DiscreteControl control;
  std::vector<double> values;  // (n+1) x (N+1), row-major
  int fold_cap = 0;

  int n() const { return tgrid.n; }
  int N() const { return grid.N(); }
  int front(int k) const { return grid.boundary_index(k); }
  double at(int k, int i) const {
    return values[static_cast<std::size_t>(k) * (grid.N() + 1) + static_cast<std::size_t>(i)];
  }

  /// Piecewise-linear interpolant of layer k on [0, s_k], continued by
  /// reflection to [0, l].
  double u_hat(int k, double x) const;
  /// One-sided spatial derivative of u_hat (sign-corrected across folds).
  double u_hat_dx(int k, double x) const;
};

/// Solve layer by layer: layer 0 from phi, then assemble/solve/extend for
/// k = 1..n. avg must be bound to the same grid and boundary spline; the
/// flux samples of v are installed into avg. Appends a warning when
/// tau >= tau0 (the sufficient solvability threshold).
DiscreteState run_forward(const ProblemData& p, const DiscreteControl& v,
                          const SpatialGrid& grid, const TimeGrid& tg,
                          AveragedCoefficients& avg,
                          std::vector<std::string>* warnings = nullptr);

/// Convenience overload building the grid and averages internally.
DiscreteState run_forward(const ProblemData& p, const DiscreteControl& v,
                          double c_h = 1.0, std::vector<std::string>* warnings = nullptr);

struct ResidualReport {
  double value = 0.0;  // left side of the summation identity
  double scale = 0.0;  // sum of the magnitudes of its terms
};

/// Summation-identity residual of layer k against the test vector eta
/// (length m_{j_k}+1). Vanishes for a solved layer up to rounding.
ResidualReport residual_identity(const DiscreteState& st, const AveragedCoefficients& avg,
                                 int k, std::span<const double> eta);

enum class Interpolant { u_tau, u_hat_tau, u_tilde_tau };

/// Space-time interpolants of the discrete state: piecewise constant in t
/// (u_tau), linear in t (u_hat_tau), piecewise constant in both (u_tilde_tau).
/// Time cells are half-open (t_{k-1}, t_k]; t <= 0 maps to layer 0 and
/// t >= T to layer n.
double eval_interpolant(const DiscreteState& st, double x, double t, Interpolant which);

/// Time-cell index for the half-open convention.
int time_cell_index(const TimeGrid& tg, double t);

}  // namespace stefan
