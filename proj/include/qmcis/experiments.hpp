#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmcis/dirichlet.hpp"
#include "qmcis/estimators.hpp"
#include "qmcis/integrands.hpp"
#include "qmcis/io.hpp"
#include "qmcis/sequences.hpp"

namespace qmcis {

/**
 * Convergence-study configuration. File format: one `key = value` per line,
 * lists comma-separated, `#` starts a comment. Keys:
 *
 *   dims     = 2,4,6
 *   n_grid   = 16,32,...       strictly increasing
 *   kinds    = halton,sobol,uniform
 *   mc_seed  = 20190101        first seed; rep r uses mc_seed + r
 *   mc_reps  = 32
 *   fit_min  = 64              n range used for the slope fits
 *   fit_max  = 16384
 *   output   = results         default output directory
 *
 * The model is always alpha = (2,...,2,d) with gamma = (1,...,1).
 */
struct ExperimentConfig {
  std::vector<std::size_t> dims{2, 4, 6};
  std::vector<std::size_t> n_grid;
  std::vector<std::string> kinds{"halton", "sobol", "uniform"};
  std::uint64_t mc_seed = 20190101;
  std::size_t mc_reps = 32;
  std::size_t fit_min = 64;
  std::size_t fit_max = 16384;
  std::string output = "results";

  ExperimentConfig() {
    for (std::size_t n = 16; n <= 65536; n *= 2) n_grid.push_back(n);
  }

  void validate() const {
    if (dims.empty()) throw std::invalid_argument("config: dims is empty");
    for (auto d : dims)
      if (d < 1 || d > max_sequence_dimension) throw std::invalid_argument("config: dims must lie in 1..16");
    if (n_grid.empty()) throw std::invalid_argument("config: n_grid is empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      if (n_grid[i] == 0) throw std::invalid_argument("config: n_grid entries must be positive");
      if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw std::invalid_argument("config: n_grid must be strictly increasing");
    }
    if (kinds.empty()) throw std::invalid_argument("config: kinds is empty");
    for (const auto& k : kinds)
      if (k != "halton" && k != "sobol" && k != "uniform")
        throw std::invalid_argument("config: unknown kind '" + k + "'");
    if (mc_reps < 2) throw std::invalid_argument("config: mc_reps must be >= 2");
    if (fit_min > fit_max) throw std::invalid_argument("config: fit_min > fit_max");
  }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

namespace detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(trim(tok));
  return out;
}

inline std::uint64_t parse_uint(const std::string& s) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) throw std::invalid_argument("not a non-negative integer: '" + s + "'");
  return v;
}

}  // namespace detail

inline ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": missing '='");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    auto uints = [&] {
      std::vector<std::size_t> v;
      for (const auto& t : detail::split_commas(value)) v.push_back(detail::parse_uint(t));
      return v;
    };
    if (key == "dims") c.dims = uints();
    else if (key == "n_grid") c.n_grid = uints();
    else if (key == "kinds") c.kinds = detail::split_commas(value);
    else if (key == "mc_seed") c.mc_seed = detail::parse_uint(value);
    else if (key == "mc_reps") c.mc_reps = detail::parse_uint(value);
    else if (key == "fit_min") c.fit_min = detail::parse_uint(value);
    else if (key == "fit_max") c.fit_max = detail::parse_uint(value);
    else if (key == "output") c.output = value;
    else throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config '" + path + "'");
  return parse_config(is);
}

inline std::string serialize_config(const ExperimentConfig& c) {
  auto list = [](const auto& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
  };
  std::ostringstream os;
  os << "dims = " << list(c.dims) << '\n'
     << "n_grid = " << list(c.n_grid) << '\n'
     << "kinds = " << list(c.kinds) << '\n'
     << "mc_seed = " << c.mc_seed << '\n'
     << "mc_reps = " << c.mc_reps << '\n'
     << "fit_min = " << c.fit_min << '\n'
     << "fit_max = " << c.fit_max << '\n'
     << "output = " << c.output << '\n';
  return os.str();
}

/// One (kind, d, n) cell. For the uniform kind the estimate is the mean over
/// the reps and normalized_error is their root mean square.
struct ConvergenceRow {
  std::string kind;
  std::size_t d = 0;
  std::size_t n = 0;
  std::size_t reps = 1;
  double estimate = std::nan("");
  double reference = 0.0;
  double normalized_error = std::nan("");
  double wall_time = 0.0;  // seconds
  std::string status = "ok";
};

/// (3d-1)!/(4d-1)! for alpha = (2,...,2,d), gamma = 1.
inline double standard_reference(std::size_t d) {
  return monomial_expectation(DirichletModel::standard(d), MonomialIntegrand::ones(d));
}

inline constexpr std::size_t high_dimension_n_cap = std::size_t{1} << 16;

inline ConvergenceRow run_cell(const ExperimentConfig& cfg, const std::string& kind, std::size_t d,
                               std::size_t n) {
  ConvergenceRow row;
  row.kind = kind;
  row.d = d;
  row.n = n;
  const DirichletModel model = DirichletModel::standard(d);
  const MonomialIntegrand f = MonomialIntegrand::ones(d);
  row.reference = standard_reference(d);
  auto u = [&model](std::span<const double> x) { return dirichlet_u(model, x); };
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (kind == "uniform") {
      const auto s = mc_repeated(cfg.mc_seed, cfg.mc_reps, n, d, f, u, row.reference);
      row.reps = s.runs.size();
      row.estimate = s.mean_estimate;
      row.normalized_error = s.rmse;
      if (s.failed_runs > 0) row.status = "ok;zero-density-runs=" + std::to_string(s.failed_runs);
    } else {
      const PointSet pts = kind == "halton" ? halton(n, d) : sobol(n, d);
      const auto r = importance_estimate(pts, f, u, row.reference);
      row.estimate = r.estimate;
      row.normalized_error = *r.normalized_error;
    }
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
  }
  row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

/// Runs every (kind, d, n) cell. Rows come out sorted by kind (in config
/// order), then d, then n. Dimensions >= 6 stop at n = 2^16.
inline std::vector<ConvergenceRow> run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<std::size_t> dims = cfg.dims;
  std::sort(dims.begin(), dims.end());
  std::vector<ConvergenceRow> rows;
  for (const auto& kind : cfg.kinds)
    for (auto d : dims)
      for (auto n : cfg.n_grid) {
        if (d >= 6 && n > high_dimension_n_cap) continue;
        rows.push_back(run_cell(cfg, kind, d, n));
      }
  return rows;
}

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;  // rows with zero (or undefined) error
};

/// Least squares line through (log2 n, log2 error). Rows with error 0 or NaN
/// are excluded and counted; at least 4 usable rows are required.
inline RateFit fit_rate(const std::vector<ConvergenceRow>& rows) {
  std::vector<double> xs, ys;
  RateFit fit;
  for (const auto& r : rows) {
    if (!(r.normalized_error > 0.0) || !std::isfinite(r.normalized_error)) {
      ++fit.excluded;
      continue;
    }
    xs.push_back(std::log2(static_cast<double>(r.n)));
    ys.push_back(std::log2(r.normalized_error));
  }
  fit.used = xs.size();
  if (fit.used < 4) throw std::invalid_argument("fit_rate: need at least 4 rows with positive error");
  const double k = static_cast<double>(fit.used);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_rate: all rows have the same n");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

struct RateRow {
  std::string kind;
  std::size_t d = 0;
  std::optional<RateFit> fit;
  std::string status = "ok";
};

/// Slope per (kind, d) over rows with fit_min <= n <= fit_max.
inline std::vector<RateRow> fit_rates(const ExperimentConfig& cfg, const std::vector<ConvergenceRow>& rows) {
  std::vector<RateRow> out;
  for (const auto& kind : cfg.kinds) {
    std::vector<std::size_t> dims = cfg.dims;
    std::sort(dims.begin(), dims.end());
    for (auto d : dims) {
      std::vector<ConvergenceRow> sel;
      for (const auto& r : rows)
        if (r.kind == kind && r.d == d && r.n >= cfg.fit_min && r.n <= cfg.fit_max) sel.push_back(r);
      RateRow rr{kind, d, std::nullopt, "ok"};
      try {
        rr.fit = fit_rate(sel);
      } catch (const std::exception& e) {
        rr.status = std::string("error: ") + e.what();
      }
      out.push_back(std::move(rr));
    }
  }
  return out;
}

struct ExperimentCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// For d in {2,4}: each QMC kind decays strictly faster than the Monte Carlo
/// baseline. Only checked when both fits exist.
inline std::vector<ExperimentCheck> experiment_checks(const std::vector<RateRow>& rates) {
  std::vector<ExperimentCheck> out;
  auto find = [&](const std::string& kind, std::size_t d) -> const RateRow* {
    for (const auto& r : rates)
      if (r.kind == kind && r.d == d) return &r;
    return nullptr;
  };
  for (std::size_t d : {std::size_t{2}, std::size_t{4}}) {
    const RateRow* mc = find("uniform", d);
    if (!mc) continue;
    for (const char* kind : {"halton", "sobol"}) {
      const RateRow* q = find(kind, d);
      if (!q) continue;
      ExperimentCheck c;
      c.name = std::string("slope(") + kind + ") < slope(uniform), d=" + std::to_string(d);
      if (q->fit && mc->fit) {
        c.pass = q->fit->slope < mc->fit->slope;
        c.detail = format_double(q->fit->slope) + " vs " + format_double(mc->fit->slope);
      } else {
        c.detail = "fit unavailable";
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

inline void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << "kind,d,n,reps,estimate,reference,normalized_error,wall_time,status\n";
  for (const auto& r : rows)
    os << r.kind << ',' << r.d << ',' << r.n << ',' << r.reps << ',' << format_double(r.estimate) << ','
       << format_double(r.reference) << ',' << format_double(r.normalized_error) << ','
       << format_double(r.wall_time) << ',' << r.status << '\n';
}

inline void write_rates_csv(std::ostream& os, const std::vector<RateRow>& rates) {
  os << "kind,d,slope,intercept,used,excluded,status\n";
  for (const auto& r : rates) {
    os << r.kind << ',' << r.d << ',';
    if (r.fit)
      os << format_double(r.fit->slope) << ',' << format_double(r.fit->intercept) << ',' << r.fit->used << ','
         << r.fit->excluded;
    else
      os << ",,,";
    os << ',' << r.status << '\n';
  }
}

}  // namespace qmcis
