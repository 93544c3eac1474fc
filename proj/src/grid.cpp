#include "stefan/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stefan {

TimeGrid build_time_grid(double T, int n) {
  if (!(T > 0.0)) throw ConfigError("time horizon must be positive");
  if (n < 1) throw ConfigError("time grid needs at least one step");
  return TimeGrid{n, T, T / n};
}

namespace {

// ceil with a guard against values sitting one rounding error above an integer
int safe_ceil(double v) {
  const int c = static_cast<int>(std::ceil(v - 1e-12));
  return c < 1 ? 1 : c;
}

}  // namespace

SpatialGrid build_spatial_grid(const std::vector<double>& s, double l, double tau,
                               double c_h) {
  if (s.empty()) throw ConfigError("boundary sample sequence is empty");
  if (!(l > 0.0) || !(tau > 0.0) || !(c_h > 0.0))
    throw ConfigError("grid parameters must be positive");
  for (double sk : s)
    if (!(sk > 0.0) || sk > l)
      throw ConfigError("boundary samples must lie in (0, l]");

  const int n = static_cast<int>(s.size()) - 1;

  SpatialGrid g;
  g.perm.resize(s.size());
  std::iota(g.perm.begin(), g.perm.end(), 0);
  // stable: equal boundary values keep time order
  std::stable_sort(g.perm.begin(), g.perm.end(),
                   [&s](int a, int b) { return s[a] < s[b]; });

  const double s_min = s[static_cast<std::size_t>(g.perm.front())];
  const int m0 = safe_ceil(s_min / (c_h * std::sqrt(tau)));
  g.h = s_min / m0;

  g.nodes.reserve(static_cast<std::size_t>(2 * m0 + n + 2));
  g.nodes.push_back(0.0);
  for (int i = 1; i < m0; ++i) g.nodes.push_back(i * g.h);
  g.nodes.push_back(s_min);  // s values become nodes exactly, never via i*h

  g.level_size.assign(s.size(), m0);
  for (int j = 1; j <= n; ++j) {
    const double prev = s[static_cast<std::size_t>(g.perm[j - 1])];
    const double cur = s[static_cast<std::size_t>(g.perm[j])];
    if (cur > prev) {
      const double gap = cur - prev;
      const int cells = safe_ceil(gap / g.h);
      const double step = gap / cells;
      for (int q = 1; q < cells; ++q) g.nodes.push_back(prev + q * step);
      g.nodes.push_back(cur);
      g.level_size[static_cast<std::size_t>(j)] =
          g.level_size[static_cast<std::size_t>(j - 1)] + cells;
    } else {
      g.level_size[static_cast<std::size_t>(j)] =
          g.level_size[static_cast<std::size_t>(j - 1)];
    }
  }

  const double s_max = s[static_cast<std::size_t>(g.perm.back())];
  if (s_max < l) {
    const double gap = l - s_max;
    const int cells = safe_ceil(gap / g.h);
    g.hbar = gap / cells;
    for (int q = 1; q < cells; ++q) g.nodes.push_back(s_max + q * g.hbar);
    g.nodes.push_back(l);
  }

  g.widths.resize(g.nodes.size() - 1);
  for (std::size_t i = 0; i + 1 < g.nodes.size(); ++i)
    g.widths[i] = g.nodes[i + 1] - g.nodes[i];

  // j_k = sorted position of time index k; front node is the level size there
  std::vector<int> sorted_pos(s.size());
  for (int j = 0; j <= n; ++j)
    sorted_pos[static_cast<std::size_t>(g.perm[j])] = j;
  g.front_node.resize(s.size());
  for (int k = 0; k <= n; ++k)
    g.front_node[static_cast<std::size_t>(k)] =
        g.level_size[static_cast<std::size_t>(sorted_pos[static_cast<std::size_t>(k)])];

  return g;
}

}  // namespace stefan
