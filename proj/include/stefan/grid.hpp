#pragma once

#include <vector>

#include "stefan/errors.hpp"

namespace stefan {

/// Uniform grid t_j = j*tau on [0,T] with tau = T/n. t(n) is exactly T.
struct TimeGrid {
  int n = 0;
  double T = 0.0;
  double tau = 0.0;

  double t(int j) const { return j == n ? T : j * tau; }
};

TimeGrid build_time_grid(double T, int n);

/// Nested spatial grid on [0,l] adapted to a boundary sample sequence s_0..s_n.
///
/// The sorted boundary values define a chain of levels: a uniform base grid
/// on [0, min_k s_k] with step h <= c_h*sqrt(tau), one refinement per strictly
/// larger boundary value (the gap is subdivided uniformly with step <= h so
/// the value becomes a node bit-exactly), and a uniform tail of step hbar <= h
/// up to l. Level j's nodes are a prefix of level j+1's nodes.
struct SpatialGrid {
  std::vector<double> nodes;       // x_0 < ... < x_N
  std::vector<double> widths;     // h_i = x_{i+1} - x_i, i = 0..N-1
  std::vector<int> level_size;    // m_j for sorted level j (level has m_j+1 nodes)
  std::vector<int> perm;          // permutation with s[perm[0]] <= ... <= s[perm[n]]
  std::vector<int> front_node;    // k -> m_{j_k}, the node index of s_k
  double h = 0.0;                 // base step
  double hbar = 0.0;              // tail step (0 when s_max == l)

  int N() const { return static_cast<int>(nodes.size()) - 1; }
  int levels() const { return static_cast<int>(level_size.size()); }
  double width(int i) const { return widths[static_cast<std::size_t>(i)]; }

  /// Node index m_{j_k} with nodes[m_{j_k}] == s_k exactly.
  int boundary_index(int k) const { return front_node[static_cast<std::size_t>(k)]; }
};

/// Build the nested grid for boundary samples s (length n+1) on [0,l].
/// Requires 0 < s_k <= l for all k, tau > 0, c_h > 0.
SpatialGrid build_spatial_grid(const std::vector<double>& s, double l, double tau,
                               double c_h = 1.0);

}  // namespace stefan
