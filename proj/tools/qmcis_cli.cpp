#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmcis/qmcis.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qmcis;

namespace {

PointSet make_points(const std::string& kind, std::size_t n, std::size_t d, std::uint64_t seed) {
  if (kind == "halton") return halton(n, d);
  if (kind == "sobol") return sobol(n, d);
  if (kind == "uniform") return uniform_random(n, d, seed);
  throw std::invalid_argument("unknown kind '" + kind + "'");
}

json check_json(const std::optional<InequalityCheck>& c) {
  if (!c) return nullptr;
  return {{"lhs", c->lhs}, {"rhs", c->rhs}, {"slack", c->slack}, {"pass", c->pass}, {"margin", c->margin}};
}

json report_json(const BoundReport& r) {
  return {{"model", r.model},
          {"integrand", r.integrand},
          {"source", r.source},
          {"n", r.n},
          {"d_classical", r.d_classical},
          {"d_weighted", r.d_weighted},
          {"h1_norm", r.h1_norm},
          {"h1_seminorm", r.h1_seminorm},
          {"u_D_estimate", r.u_D_estimate},
          {"u_D_delta", r.u_D_delta},
          {"u_l1", r.u_l1},
          {"oracle_eps", r.oracle_eps},
          {"reference", r.reference},
          {"estimate", r.estimate},
          {"koksma_hlawka", check_json(r.koksma_hlawka)},
          {"koksma_hlawka_full_norm", check_json(r.koksma_hlawka_full)},
          {"relation", check_json(r.relation)},
          {"main", check_json(r.main)},
          {"pass", r.all_pass()}};
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot open '" + p.string() + "' for writing");
  return os;
}

struct GenerateArgs {
  std::string kind;
  std::size_t n = 0;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::string out = "-";
};

int run_generate(const GenerateArgs& a) {
  const PointSet pts = make_points(a.kind, a.n, a.dim, a.seed);
  if (a.out == "-") write_points_csv(std::cout, pts);
  else write_points_csv(a.out, pts);
  return 0;
}

struct DiscrepancyArgs {
  std::string points;
  std::string weights;
  std::string measure = "lebesgue";
  std::string mode = "exact";
  std::uint64_t effort = 10000;
  std::uint64_t seed = 0;
  std::uint64_t budget = default_corner_budget;
};

int run_discrepancy(const DiscrepancyArgs& a) {
  const PointSet pts = read_points_csv(a.points);
  const auto measure = parse_measure(a.measure);
  const bool classical = a.weights.empty() && std::holds_alternative<std::monostate>(measure);
  DiscrepancyResult r;
  if (a.mode == "lower-bound") {
    if (!classical) throw std::invalid_argument("lower-bound mode supports only the unweighted Lebesgue case");
    r = star_discrepancy_lower_bound(pts, a.effort, a.seed);
  } else if (classical) {
    r = star_discrepancy_exact(pts, a.budget);
  } else {
    const WeightVector w = a.weights.empty() ? WeightVector::uniform(pts.size()) : WeightVector(read_weights(a.weights));
    if (const auto* m = std::get_if<DirichletModel>(&measure)) {
      if (m->dim() != pts.dim()) throw std::invalid_argument("measure and points differ in dimension");
      r = weighted_star_discrepancy(pts, w, DirichletCellMeasure(*m), a.budget);
    } else {
      r = weighted_star_discrepancy(pts, w, LebesgueMeasure{}, a.budget);
    }
  }
  json out{{"value", r.value},
           {"mode", to_string(r.mode)},
           {"witness", r.witness},
           {"witness_side", r.witness_side == BoxSide::open ? "open" : "closed"},
           {"boxes_evaluated", r.boxes_evaluated},
           {"oracle_eps", r.oracle_eps}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

struct EstimateArgs {
  std::string points;
  std::string kind;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string model;
  std::string integrand;
  std::string reference;
  bool with_weights = false;
};

int run_estimate(const EstimateArgs& a) {
  const ModelChoice model = parse_model(a.model);
  const IntegrandChoice f = parse_integrand(a.integrand);
  const std::size_t d = dim_of(model);
  if (dim_of(f) != d) throw std::invalid_argument("model and integrand differ in dimension");
  std::optional<PointSet> pts;
  if (!a.points.empty()) pts = read_points_csv(a.points);
  else if (!a.kind.empty() && a.n > 0) pts = make_points(a.kind, a.n, d, a.seed);
  else throw std::invalid_argument("estimate needs --points or --kind with --n");
  if (pts->dim() != d) throw std::invalid_argument("points and model differ in dimension");

  return std::visit(
      [&](const auto& m, const auto& g) {
        std::optional<double> ref;
        if (a.reference == "auto") ref = expectation(m, g);
        else if (!a.reference.empty()) ref = detail::parse_double(a.reference);
        const auto r = importance_estimate(*pts, g, density_of(m), ref);
        json out{{"model", to_string(m)},
                 {"integrand", to_string(g)},
                 {"source", to_string(pts->source().kind)},
                 {"estimate", r.estimate},
                 {"n", r.n},
                 {"zero_density_points", r.zero_density_points}};
        out["reference"] = r.reference ? json(*r.reference) : json(nullptr);
        out["abs_error"] = r.abs_error ? json(*r.abs_error) : json(nullptr);
        out["normalized_error"] = r.normalized_error ? json(*r.normalized_error) : json(nullptr);
        if (a.with_weights) out["weights_used"] = r.weights_used;
        std::cout << out.dump(2) << '\n';
        return 0;
      },
      model, f);
}

struct VerifyArgs {
  std::string model;
  std::string integrand;
  std::string kind;
  std::vector<std::size_t> n_list;
  std::uint64_t budget = default_corner_budget;
  int ud_grid = 0;
  int ud_order = default_ud_quadrature_order;
  std::string out;
};

int run_verify(const VerifyArgs& a) {
  const ModelChoice model = parse_model(a.model);
  const IntegrandChoice f = parse_integrand(a.integrand);
  const std::size_t d = dim_of(model);
  if (dim_of(f) != d) throw std::invalid_argument("model and integrand differ in dimension");
  if (a.kind != "halton" && a.kind != "sobol") throw std::invalid_argument("verify needs --kind halton or sobol");

  std::optional<std::ofstream> jsonl, csv;
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    jsonl = open_out(fs::path(a.out) / "reports.jsonl");
    csv = open_out(fs::path(a.out) / "summary.csv");
    *csv << "kind,n,lhs_kh,rhs_kh,lhs_rel,rhs_rel,lhs_main,rhs_main,ratio_main,pass\n";
  }

  bool all_pass = true;
  std::visit(
      [&](const auto& m, const auto& g) {
        BoundOptions opt;
        opt.budget = a.budget;
        opt.ud = u_D_info(m, a.ud_grid, a.ud_order);
        for (auto n : a.n_list) {
          const PointSet pts = make_points(a.kind, n, d, 0);
          BoundReport r = check_main_bound(pts, m, g, opt);
          r.model = to_string(m);
          r.integrand = to_string(g);
          all_pass = all_pass && r.all_pass();
          const std::string line = report_json(r).dump();
          std::cout << line << '\n';
          if (jsonl) *jsonl << line << '\n';
          if (csv) {
            const double ratio = r.main->lhs > 0.0 ? r.main->rhs / r.main->lhs : std::numeric_limits<double>::infinity();
            *csv << a.kind << ',' << n << ',' << format_double(r.koksma_hlawka->lhs) << ','
                 << format_double(r.koksma_hlawka->rhs) << ',' << format_double(r.relation->lhs) << ','
                 << format_double(r.relation->rhs) << ',' << format_double(r.main->lhs) << ','
                 << format_double(r.main->rhs) << ',' << format_double(ratio) << ','
                 << (r.all_pass() ? "pass" : "FAIL") << '\n';
          }
        }
      },
      model, f);
  return all_pass ? 0 : 1;
}

struct ExperimentArgs {
  std::string config;
  std::string out;
};

int run_experiment(const ExperimentArgs& a) {
  ExperimentConfig cfg = a.config.empty() ? ExperimentConfig{} : parse_config_file(a.config);
  const fs::path dir = a.out.empty() ? fs::path(cfg.output) : fs::path(a.out);
  fs::create_directories(dir);
  const auto rows = run_convergence(cfg);
  const auto rates = fit_rates(cfg, rows);
  {
    auto os = open_out(dir / "convergence.csv");
    write_convergence_csv(os, rows);
  }
  {
    auto os = open_out(dir / "rates.csv");
    write_rates_csv(os, rates);
  }
  bool ok = true;
  for (const auto& c : experiment_checks(rates)) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  [" << c.detail << "]\n";
    ok = ok && c.pass;
  }
  for (const auto& r : rates)
    if (r.fit) std::cout << "slope " << r.kind << " d=" << r.d << ": " << r.fit->slope << '\n';
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasi-Monte Carlo importance sampling toolkit"};
  app.require_subcommand(1);

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "write a point set as CSV");
  gen->add_option("--kind", ga.kind)->required()->check(CLI::IsMember({"halton", "sobol", "uniform"}));
  gen->add_option("--n", ga.n)->required();
  gen->add_option("--dim", ga.dim)->required();
  gen->add_option("--seed", ga.seed);
  gen->add_option("--out", ga.out, "output file, '-' for stdout");

  DiscrepancyArgs da;
  auto* disc = app.add_subcommand("discrepancy", "star discrepancy of a point file");
  disc->add_option("--points", da.points)->required();
  disc->add_option("--weights", da.weights);
  disc->add_option("--measure", da.measure, "lebesgue or dirichlet:a1,...,a_{d+1}");
  disc->add_option("--mode", da.mode)->check(CLI::IsMember({"exact", "lower-bound"}));
  disc->add_option("--effort", da.effort);
  disc->add_option("--seed", da.seed);
  disc->add_option("--budget", da.budget);

  EstimateArgs ea;
  auto* est = app.add_subcommand("estimate", "self-normalized importance sampling estimate");
  est->add_option("--points", ea.points);
  est->add_option("--kind", ea.kind)->check(CLI::IsMember({"halton", "sobol", "uniform"}));
  est->add_option("--n", ea.n);
  est->add_option("--seed", ea.seed);
  est->add_option("--model", ea.model)->required();
  est->add_option("--integrand", ea.integrand)->required();
  est->add_option("--reference", ea.reference, "'auto' or a number");
  est->add_flag("--weights", ea.with_weights, "include the normalized weights in the output");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "check the error bounds on Halton or Sobol points");
  ver->add_option("--model", va.model)->required();
  ver->add_option("--integrand", va.integrand)->required();
  ver->add_option("--kind", va.kind)->required();
  ver->add_option("--n-list", va.n_list)->required()->delimiter(',');
  ver->add_option("--budget", va.budget);
  ver->add_option("--ud-grid", va.ud_grid);
  ver->add_option("--ud-order", va.ud_order);
  ver->add_option("--out", va.out, "directory for reports.jsonl and summary.csv");

  ExperimentArgs xa;
  auto* exp = app.add_subcommand("experiment", "convergence study");
  exp->add_option("--config", xa.config);
  exp->add_option("--out", xa.out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return run_generate(ga);
    if (*disc) return run_discrepancy(da);
    if (*est) return run_estimate(ea);
    if (*ver) return run_verify(va);
    if (*exp) return run_experiment(xa);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
