#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stefan/expr.hpp"

namespace stefan {

enum class SeriesKind { point_samples, cell_averages };
enum class MeasurementAveraging { steklov, point };

/// Measurement function of t on [0,T]: either an expression or a sampled
/// series. A sampled series interpolates linearly between consecutive rows;
/// a cell_averages series stores per-cell means whose times are the right
/// cell endpoints, looked up directly when the requested cell aligns.
class Measurement {
 public:
  Measurement() = default;
  static Measurement from_expr(Expr e);
  static Measurement from_series(std::vector<double> t, std::vector<double> v,
                                 SeriesKind kind);

  bool empty() const { return !expr_.has_value() && st_.empty(); }
  bool is_series() const { return !st_.empty(); }
  SeriesKind kind() const { return kind_; }

  double value(double t) const;
  /// Mean over [t0, t1] (Steklov average).
  double cell_average(double t0, double t1) const;

 private:
  std::optional<Expr> expr_;
  std::vector<double> st_, sv_;
  SeriesKind kind_ = SeriesKind::point_samples;
};

/// Full problem definition: coefficients, data, measurements, and the
/// control-set parameters.
struct ProblemData {
  Expr a, b, c, f;      // coefficients of the parabolic operator, over (x,t)
  Expr gamma, chi;      // free-boundary flux data, over (x,t)
  Expr phi;             // initial temperature, over x
  Measurement nu, mu;   // boundary / phase-temperature measurements, over t

  double T = 1.0;       // time horizon
  double l = 1.0;       // slab width
  double s0 = 0.5;      // initial boundary position
  double delta = 0.1;   // lower box bound for the boundary
  double R = 10.0;      // control-set radius
  double beta0 = 1.0;   // boundary-measurement weight
  double beta1 = 1.0;   // phase-measurement weight
  double a0 = 1.0;      // ellipticity lower bound for a

  MeasurementAveraging measurement_averaging = MeasurementAveraging::steklov;

  // optional reference control (forward runs, synthetic data)
  std::optional<Expr> s_true, g_true;  // over t
  // optional exact solution for error studies
  std::optional<Expr> exact_u;         // over (x,t)
  std::optional<Expr> exact_s;         // over t

  /// Checks ranges and that the sampled minimum of a on a 101x101 lattice of
  /// [0,l]x[0,T] is >= a0. Throws ConfigError.
  void validate() const;

  /// max of |a|,|b|,|c| sampled on a 101x101 lattice of [0,l]x[0,T].
  double estimate_M() const;
  /// Solvability threshold tau0 = (M^2/(2 a0) + M)^{-1}.
  double tau0() const;
};

double tau0_bound(double M, double a0);

/// Manufactured verification case: data derived so exact_u solves the state
/// problem with the front exact_s.
struct ManufacturedCase {
  Expr exact_u;
  Expr exact_s;
  ProblemData data;
};

/// Derive f, phi, chi, nu, mu and the reference control (exact_s, g) from an
/// exact solution. base supplies a, b, c, gamma and the box/set parameters.
ManufacturedCase manufactured_problem(const Expr& exact_u, const Expr& exact_s,
                                      const ProblemData& base);

/// Max PDE residual of case.data's exact solution on a lattice of
/// [0,s]x[0,T] (res x res points).
double manufactured_residual(const ManufacturedCase& mc, int res = 50);

/// Load a problem from a key = value config file. Expression values are
/// parsed with parse_expression; nu/mu accept `csv:path` or `csv-avg:path`
/// (relative to the config file). Keys exact_u/exact_s switch to the
/// manufactured route.
ProblemData load_problem(const std::string& path);

/// Measurement series file with header `t,value`.
std::pair<std::vector<double>, std::vector<double>> read_series_csv(const std::string& path);
void write_series_csv(const std::string& path, const std::vector<double>& t,
                      const std::vector<double>& v);

}  // namespace stefan
