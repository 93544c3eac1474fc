#include "stefan/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "stefan/quadrature.hpp"

namespace stefan {

Measurement Measurement::from_expr(Expr e) {
  Measurement m;
  m.expr_ = std::move(e);
  return m;
}

Measurement Measurement::from_series(std::vector<double> t, std::vector<double> v,
                                     SeriesKind kind) {
  if (t.size() != v.size() || t.size() < 2)
    throw ConfigError("measurement series needs at least two rows");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw ConfigError("measurement series times must increase");
  Measurement m;
  m.st_ = std::move(t);
  m.sv_ = std::move(v);
  m.kind_ = kind;
  return m;
}

double Measurement::value(double t) const {
  if (expr_) return expr_->eval(0.0, t);
  if (st_.empty()) throw ConfigError("measurement is not set");
  if (t <= st_.front()) return sv_.front();
  if (t >= st_.back()) return sv_.back();
  const auto it = std::upper_bound(st_.begin(), st_.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - st_.begin());
  const double w = (t - st_[j - 1]) / (st_[j] - st_[j - 1]);
  return sv_[j - 1] + w * (sv_[j] - sv_[j - 1]);
}

double Measurement::cell_average(double t0, double t1) const {
  if (!(t1 > t0)) throw ConfigError("empty averaging cell");
  if (expr_) {
    const Expr& e = *expr_;
    double c;
    if (e.is_constant(&c)) return c;
    return quad::gauss4([&e](double t) { return e.eval(0.0, t); }, t0, t1) / (t1 - t0);
  }
  if (st_.empty()) throw ConfigError("measurement is not set");

  if (kind_ == SeriesKind::cell_averages) {
    // direct lookup when [t0,t1] is one of the series' own cells
    const double tol = 1e-9 * (t1 - t0);
    const auto it = std::lower_bound(st_.begin(), st_.end(), t1 - tol);
    if (it != st_.end() && std::abs(*it - t1) <= tol) {
      const std::size_t j = static_cast<std::size_t>(it - st_.begin());
      const double left = j == 0 ? *it - (st_[1] - st_[0]) : st_[j - 1];
      if (std::abs(left - t0) <= tol) return sv_[j];
    }
    // fall through: treat the stored values as samples
  }

  // exact integral of the piecewise-linear interpolant over [t0,t1]
  double sum = 0.0;
  double a = t0;
  while (a < t1 - 0.0) {
    const auto it = std::upper_bound(st_.begin(), st_.end(), a);
    double b;
    if (it == st_.end())
      b = t1;
    else
      b = std::min(t1, *it);
    if (b <= a) b = t1;  // a sits exactly on the last breakpoint
    sum += 0.5 * (value(a) + value(b)) * (b - a);
    a = b;
    if (b >= t1) break;
  }
  return sum / (t1 - t0);
}

void ProblemData::validate() const {
  if (!(T > 0.0)) throw ConfigError("T must be positive");
  if (!(l > 0.0)) throw ConfigError("l must be positive");
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  if (!(R > 0.0)) throw ConfigError("R must be positive");
  if (!(a0 > 0.0)) throw ConfigError("a0 must be positive");
  if (s0 < delta || s0 > l) throw ConfigError("s0 must lie in [delta, l]");
  if (beta0 < 0.0 || beta1 < 0.0) throw ConfigError("cost weights must be nonnegative");
  if (beta0 == 0.0 && beta1 == 0.0)
    throw ConfigError("at least one cost weight must be positive");
  if (phi.depends_on('t')) throw ConfigError("phi must depend on x only");

  double amin = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 100; ++i)
    for (int j = 0; j <= 100; ++j)
      amin = std::min(amin, a.eval(l * i / 100.0, T * j / 100.0));
  if (amin < a0)
    throw ConfigError("coefficient a drops below a0 on the sampled lattice");
}

double ProblemData::estimate_M() const {
  double m = 0.0;
  for (int i = 0; i <= 100; ++i)
    for (int j = 0; j <= 100; ++j) {
      const double x = l * i / 100.0, t = T * j / 100.0;
      m = std::max({m, std::abs(a.eval(x, t)), std::abs(b.eval(x, t)),
                    std::abs(c.eval(x, t))});
    }
  return m;
}

double tau0_bound(double M, double a0) { return 1.0 / (M * M / (2.0 * a0) + M); }

double ProblemData::tau0() const { return tau0_bound(estimate_M(), a0); }

ManufacturedCase manufactured_problem(const Expr& exact_u, const Expr& exact_s,
                                      const ProblemData& base) {
  ManufacturedCase mc;
  mc.exact_u = exact_u;
  mc.exact_s = exact_s;
  mc.data = base;
  ProblemData& p = mc.data;

  p.s0 = exact_s.eval(0.0, 0.0);
  for (int j = 0; j <= 200; ++j) {
    const double sv = exact_s.eval(0.0, p.T * j / 200.0);
    if (sv < p.delta || sv > p.l)
      throw ConfigError("exact front leaves [delta, l] on [0, T]");
  }

  const Expr ux = exact_u.diff('x');
  p.f = (p.a * ux).diff('x') + p.b * ux + p.c * exact_u - exact_u.diff('t');
  p.phi = exact_u.subst('t', Expr::number(0.0));
  p.chi = p.a * ux + p.gamma * exact_s.diff('t');
  p.nu = Measurement::from_expr(exact_u.subst('x', Expr::number(0.0)));
  p.mu = Measurement::from_expr(exact_u.subst('x', exact_s));
  p.g_true = (p.a * ux).subst('x', Expr::number(0.0));
  p.s_true = exact_s;
  p.exact_u = exact_u;
  p.exact_s = exact_s;
  return mc;
}

double manufactured_residual(const ManufacturedCase& mc, int res) {
  const ProblemData& p = mc.data;
  const Expr ux = mc.exact_u.diff('x');
  const Expr lhs =
      (p.a * ux).diff('x') + p.b * ux + p.c * mc.exact_u - mc.exact_u.diff('t') - p.f;
  double worst = 0.0;
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j) {
      const double t = p.T * j / (res - 1);
      const double x = mc.exact_s.eval(0.0, t) * i / (res - 1);
      worst = std::max(worst, std::abs(lhs.eval(x, t)));
    }
  return worst;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number_value(const std::string& key, const std::string& text) {
  Expr e = parse_expression(text);
  if (e.depends_on('x') || e.depends_on('t'))
    throw ConfigError("key '" + key + "' must be a numeric constant");
  return e.eval(0.0, 0.0);
}

Measurement parse_measurement(const std::string& text, const std::filesystem::path& dir) {
  auto load = [&dir](const std::string& rel, SeriesKind kind) {
    const std::filesystem::path path = dir / rel;
    auto [t, v] = read_series_csv(path.string());
    return Measurement::from_series(std::move(t), std::move(v), kind);
  };
  if (text.rfind("csv-avg:", 0) == 0)
    return load(trim(text.substr(8)), SeriesKind::cell_averages);
  if (text.rfind("csv:", 0) == 0)
    return load(trim(text.substr(4)), SeriesKind::point_samples);
  Expr e = parse_expression(text);
  if (e.depends_on('x')) throw ConfigError("measurements may depend on t only");
  return Measurement::from_expr(std::move(e));
}

}  // namespace

ProblemData load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open problem file '" + path + "'");
  const std::filesystem::path dir = std::filesystem::path(path).parent_path();

  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key or value");
    if (kv.count(key))
      throw ConfigError(path + ": duplicate key '" + key + "'");
    kv[key] = val;
  }

  static const std::set<std::string> known = {
      "T",  "l",  "s0",   "delta", "R",     "beta0",   "beta1",   "a0",
      "a",  "b",  "c",    "f",     "gamma", "chi",     "phi",     "nu",
      "mu", "s",  "g",    "exact_u", "exact_s", "measurement_averaging",
      "phi_steklov_averages"};
  for (const auto& [k, v] : kv)
    if (!known.count(k)) throw ConfigError(path + ": unknown key '" + k + "'");

  auto has = [&kv](const char* k) { return kv.count(k) > 0; };
  auto get = [&kv, &path](const char* k) -> const std::string& {
    auto it = kv.find(k);
    if (it == kv.end()) throw ConfigError(path + ": missing required key '" + std::string(k) + "'");
    return it->second;
  };
  auto expr_or = [&](const char* k, const char* dflt) {
    return parse_expression(has(k) ? kv[k] : std::string(dflt));
  };

  if (has("phi_steklov_averages") && kv["phi_steklov_averages"] != "false")
    throw ConfigError(
        "phi_steklov_averages: the weak-data variant (phi in L2 with "
        "cell-averaged initial values) is reserved but not implemented");

  ProblemData p;
  p.T = parse_number_value("T", get("T"));
  p.l = parse_number_value("l", get("l"));
  p.delta = parse_number_value("delta", get("delta"));
  p.R = parse_number_value("R", get("R"));
  p.beta0 = parse_number_value("beta0", get("beta0"));
  p.beta1 = parse_number_value("beta1", get("beta1"));
  p.a0 = parse_number_value("a0", get("a0"));
  p.a = parse_expression(get("a"));
  p.b = expr_or("b", "0");
  p.c = expr_or("c", "0");
  p.gamma = expr_or("gamma", "0");
  if (has("measurement_averaging")) {
    const std::string& m = kv["measurement_averaging"];
    if (m == "steklov")
      p.measurement_averaging = MeasurementAveraging::steklov;
    else if (m == "point")
      p.measurement_averaging = MeasurementAveraging::point;
    else
      throw ConfigError("measurement_averaging must be 'steklov' or 'point'");
  }

  if (has("exact_u")) {
    if (!has("exact_s")) throw ConfigError(path + ": exact_u requires exact_s");
    for (const char* k : {"f", "phi", "chi", "nu", "mu", "g", "s"})
      if (has(k))
        throw ConfigError(path + ": key '" + std::string(k) +
                          "' conflicts with the derived exact_u data");
    ProblemData base = p;
    base.s0 = base.delta;  // placeholder; derived from exact_s below
    ManufacturedCase mc =
        manufactured_problem(parse_expression(kv["exact_u"]),
                             parse_expression(kv["exact_s"]), base);
    if (has("s0") &&
        std::abs(parse_number_value("s0", kv["s0"]) - mc.data.s0) > 1e-12)
      throw ConfigError(path + ": s0 disagrees with exact_s(0)");
    mc.data.validate();
    return mc.data;
  }

  p.s0 = parse_number_value("s0", get("s0"));
  p.f = expr_or("f", "0");
  p.chi = expr_or("chi", "0");
  p.phi = parse_expression(get("phi"));
  if (has("nu")) p.nu = parse_measurement(kv["nu"], dir);
  if (has("mu")) p.mu = parse_measurement(kv["mu"], dir);
  if (has("s")) {
    Expr e = parse_expression(kv["s"]);
    if (e.depends_on('x')) throw ConfigError("s must depend on t only");
    p.s_true = std::move(e);
  }
  if (has("g")) {
    Expr e = parse_expression(kv["g"]);
    if (e.depends_on('x')) throw ConfigError("g must depend on t only");
    p.g_true = std::move(e);
  }
  p.validate();
  return p;
}

std::pair<std::vector<double>, std::vector<double>> read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open series file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line) != "t,value")
    throw ConfigError(path + ": expected header 't,value'");
  std::vector<double> t, v;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 't,value'");
    try {
      t.push_back(std::stod(line.substr(0, comma)));
      v.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return {std::move(t), std::move(v)};
}

void write_series_csv(const std::string& path, const std::vector<double>& t,
                      const std::vector<double>& v) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write series file '" + path + "'");
  out << "t,value\n";
  char buf[96];
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t[i], v[i]);
    out << buf;
  }
}

}  // namespace stefan
