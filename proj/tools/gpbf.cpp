// gpbf: Bayes factor tests of linear vs nonlinear predictor effects.
//
// Subcommands:
//   test      log B01 between the linear and nonlinear model on CSV data
//   onesided  sign-consistency probabilities and one-sided Bayes factors
//   simulate  synthetic bump/step grid of log B01 values
//   draws     posterior mean-function and slope-function draws as plot data

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpbf/csv.hpp"
#include "gpbf/draws.hpp"
#include "gpbf/inference.hpp"
#include "gpbf/report.hpp"
#include "gpbf/simulate.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNumeric = 4;

struct DataFlags {
  std::string csv_path;
  std::string y_col = "y";
  std::string x_col = "x";
  std::vector<std::string> z_cols;
  bool intercept = false;
  bool center = false;
};

struct CommonFlags {
  std::string scale = "medium";  // small | medium | large | all
  double s_xi = 0.0;             // overrides --scale when > 0
  double g = 0.0;                // 0 -> n
  int n_quad = 201;
  int n_is = 5000;
  std::uint64_t seed = 20260826;
  int threads = 1;
  std::string json_path;
};

void add_data_flags(CLI::App* cmd, DataFlags& df) {
  cmd->add_option("csv", df.csv_path, "input CSV file")->required();
  cmd->add_option("--y", df.y_col, "outcome column name");
  cmd->add_option("--x", df.x_col, "key predictor column name");
  cmd->add_option("--z", df.z_cols, "covariate column names")->delimiter(',');
  cmd->add_flag("--intercept", df.intercept, "add a column of ones to Z");
  cmd->add_flag("--center", df.center,
                "residualize x against the covariates before testing");
}

void add_common_flags(CLI::App* cmd, CommonFlags& cf) {
  cmd->add_option("--scale", cf.scale,
                  "prior scale preset: small, medium, large, all")
      ->check(CLI::IsMember({"small", "medium", "large", "all"}));
  cmd->add_option("--s-xi", cf.s_xi, "explicit half-Cauchy prior scale");
  cmd->add_option("--g", cf.g, "g-prior factor (default: n)");
  cmd->add_option("--n-quad", cf.n_quad, "quadrature node count");
  cmd->add_option("--n-is", cf.n_is, "importance sample count");
  cmd->add_option("--seed", cf.seed, "RNG seed");
  cmd->add_option("--threads", cf.threads, "max worker threads");
  cmd->add_option("--json", cf.json_path, "write the full run report as JSON");
}

void apply_env_overrides(CommonFlags& cf) {
  if (const char* s = std::getenv("GPBF_SEED"))
    cf.seed = std::strtoull(s, nullptr, 10);
  if (const char* s = std::getenv("GPBF_THREADS"))
    cf.threads = std::atoi(s);
}

gpbf::Dataset load_dataset(const DataFlags& df) {
  const auto table = gpbf::read_csv(df.csv_path);
  gpbf::Dataset d;
  d.y = table.column(df.y_col);
  d.x = table.column(df.x_col);
  const Eigen::Index n = d.y.size();
  Eigen::Index k = static_cast<Eigen::Index>(df.z_cols.size()) +
                   (df.intercept ? 1 : 0);
  if (k > 0) {
    d.Z.resize(n, k);
    Eigen::Index j = 0;
    if (df.intercept) d.Z.col(j++).setOnes();
    for (const auto& name : df.z_cols) d.Z.col(j++) = table.column(name);
  }
  return d;
}

std::vector<gpbf::ScaleSetting> requested_scales(const CommonFlags& cf) {
  if (cf.s_xi > 0.0) return {{"custom", 0.0}};
  for (const auto& sc : gpbf::standard_scales())
    if (sc.name == cf.scale) return {sc};
  return gpbf::standard_scales();  // "all"
}

gpbf::TestConfig make_config(const CommonFlags& cf,
                             const gpbf::ScaleSetting& sc) {
  gpbf::TestConfig cfg;
  cfg.g = cf.g;
  cfg.s_xi = cf.s_xi;
  if (cf.s_xi <= 0.0) cfg.e = sc.e;
  cfg.seed = cf.seed;
  cfg.n_quad = cf.n_quad;
  cfg.n_is = cf.n_is;
  cfg.threads = cf.threads;
  cfg.check();
  return cfg;
}

gpbf::Json config_json(const CommonFlags& cf, const DataFlags* df) {
  gpbf::Json j{{"scale", cf.scale},  {"s_xi", cf.s_xi},
               {"g", cf.g},          {"n_quad", cf.n_quad},
               {"n_is", cf.n_is},    {"seed", cf.seed},
               {"threads", cf.threads}};
  if (df) {
    j["csv"] = df->csv_path;
    j["y"] = df->y_col;
    j["x"] = df->x_col;
    j["z"] = df->z_cols;
    j["intercept"] = df->intercept;
    j["center"] = df->center;
  }
  return j;
}

void emit_report(const gpbf::RunReport& report, const std::string& json_path) {
  if (json_path.empty()) return;
  std::ofstream out(json_path);
  if (!out)
    throw gpbf::validation_error("cannot write JSON report: " + json_path);
  out << report.to_json().dump(2) << "\n";
}

// ---------------------------------------------------------------- test ----

int cmd_test(const DataFlags& df, const CommonFlags& cf,
             const std::string& method) {
  gpbf::Dataset d = load_dataset(df);
  auto diags = gpbf::validate_dataset(d);
  if (df.center) {
    d = gpbf::residualize_x(d);
    diags = gpbf::validate_dataset(d);
  }

  gpbf::RunReport report;
  report.command = "test";
  report.config = config_json(cf, &df);
  report.config["method"] = method;
  report.dataset_summary = gpbf::dataset_summary_json(d, diags);

  std::cout << "n=" << d.n() << " k=" << d.k() << " range(x)=" << d.range_x()
            << " seed=" << cf.seed << "\n";
  for (const auto& dg : diags)
    if (dg.warning) std::cout << "warning: " << dg.detail << "\n";

  for (const auto& sc : requested_scales(cf)) {
    const auto cfg = make_config(cf, sc);
    std::vector<gpbf::BayesFactorResult> results;
    if (method == "quadrature" || method == "both")
      results.push_back(gpbf::log_bf01_quadrature(d, cfg));
    if (method == "importance" || method == "both")
      results.push_back(gpbf::log_bf01_importance(d, cfg));
    for (const auto& r : results) {
      std::cout << "scale=" << sc.name << " s_xi=" << r.s_xi << " ["
                << to_string(r.method) << "] log(B01)=" << r.log_bf01
                << " B01=" << r.bf01()
                << " P(M0|y)=" << r.post_prob_m0()
                << " P(M1|y)=" << 1.0 - r.post_prob_m0();
      if (r.method == gpbf::BfMethod::importance)
        std::cout << " mc_se=" << r.mc_se << " ess=" << r.ess;
      std::cout << "\n";
      auto j = gpbf::to_json(r);
      j["scale"] = sc.name;
      report.results.push_back(j);
    }
  }
  emit_report(report, cf.json_path);
  return 0;
}

// ------------------------------------------------------------ onesided ----

int cmd_onesided(const DataFlags& df, const CommonFlags& cf, int n_fn_draws,
                 int grid_points) {
  if (n_fn_draws < 1)
    throw gpbf::usage_error("--draws must be a positive draw count");
  gpbf::Dataset d = load_dataset(df);
  auto diags = gpbf::validate_dataset(d);
  if (df.center) {
    d = gpbf::residualize_x(d);
    diags = gpbf::validate_dataset(d);
  }

  const auto scales = requested_scales(cf);
  const auto cfg0 = make_config(cf, scales.front());
  const double s_xi = cfg0.effective_s_xi(d);

  gpbf::Vector grid;
  if (grid_points > 1) {
    grid.resize(grid_points);
    const double lo = d.x.minCoeff(), hi = d.x.maxCoeff();
    for (int i = 0; i < grid_points; ++i)
      grid[i] = lo + (hi - lo) * i / (grid_points - 1);
  } else {
    grid = gpbf::default_grid(d);
  }

  // Sign patterns are invariant to the prior magnitude, so tau2 = 1 for the
  // prior draws; xi is marginalized over its half-Cauchy prior.
  const auto prior =
      gpbf::draw_functions_prior_marginal(grid, s_xi, 1.0, n_fn_draws,
                                          cfg0.seed);
  const auto samples = gpbf::sample_posterior(d, cfg0, n_fn_draws);
  const auto posterior = gpbf::draw_functions_posterior(d, cfg0, samples, grid);
  const auto r = gpbf::one_sided_bayes_factors(prior, posterior);

  std::cout << "n=" << d.n() << " k=" << d.k() << " s_xi=" << s_xi
            << " draws=" << n_fn_draws << " seed=" << cf.seed << "\n";
  std::cout << "prior:     p_pos=" << r.prior.p_pos
            << " p_neg=" << r.prior.p_neg << " p_comp=" << r.prior.p_comp
            << "\n";
  std::cout << "posterior: p_pos=" << r.posterior.p_pos
            << " p_neg=" << r.posterior.p_neg
            << " p_comp=" << r.posterior.p_comp << "\n";
  std::cout << "BF(pos,u)=" << r.bf_pos_u << " BF(neg,u)=" << r.bf_neg_u
            << " BF(comp,u)=" << r.bf_comp_u << "\n";
  std::cout << "BF(pos,neg)=" << r.bf_pos_neg
            << " BF(pos,comp)=" << r.bf_pos_comp
            << " BF(neg,comp)=" << r.bf_neg_comp << "\n";
  if (r.any_infinite)
    std::cout << "note: infinite Bayes factor(s); zero-count proportions have "
                 "rule-of-three upper bound "
              << r.prior_zero_bound << "\n";

  gpbf::RunReport report;
  report.command = "onesided";
  report.config = config_json(cf, &df);
  report.config["draws"] = n_fn_draws;
  report.config["grid_points"] = grid_points;
  report.dataset_summary = gpbf::dataset_summary_json(d, diags);
  report.one_sided = gpbf::to_json(r);
  emit_report(report, cf.json_path);
  return 0;
}

// ------------------------------------------------------------ simulate ----

std::vector<double> parse_values(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    double start, stop, step;
    char c1, c2;
    std::istringstream ss(spec);
    if (!(ss >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' ||
        step <= 0.0)
      throw gpbf::usage_error("bad range spec '" + spec +
                              "', expected start:stop:step");
    for (double v = start; v <= stop + 1e-12; v += step) out.push_back(v);
    return out;
  }
  std::istringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end != tok.c_str() + tok.size())
      throw gpbf::usage_error("bad numeric list element '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw gpbf::usage_error("empty value list '" + spec + "'");
  return out;
}

int cmd_simulate(const CommonFlags& cf, const std::string& kind_spec,
                 const std::string& h_spec, const std::string& n_spec,
                 const std::string& scales_spec, int reps, double sigma,
                 const std::string& out_path) {
  std::vector<gpbf::Scenario::Kind> kinds;
  if (kind_spec == "bump" || kind_spec == "both")
    kinds.push_back(gpbf::Scenario::Kind::bump);
  if (kind_spec == "step" || kind_spec == "both")
    kinds.push_back(gpbf::Scenario::Kind::step);
  if (kinds.empty())
    throw gpbf::usage_error("--kind must be bump, step, or both");

  const auto h_values = parse_values(h_spec);
  std::vector<int> n_values;
  for (double v : parse_values(n_spec)) n_values.push_back(static_cast<int>(v));

  std::vector<gpbf::ScaleSetting> scales;
  if (scales_spec == "all") {
    scales = gpbf::standard_scales();
  } else {
    std::istringstream ss(scales_spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      bool found = false;
      for (const auto& sc : gpbf::standard_scales())
        if (sc.name == tok) {
          scales.push_back(sc);
          found = true;
        }
      if (!found)
        throw gpbf::usage_error("unknown scale '" + tok + "'");
    }
  }
  if (scales.empty()) throw gpbf::usage_error("no scales requested");

  gpbf::TestConfig cfg;
  cfg.g = cf.g;
  cfg.n_quad = cf.n_quad;
  cfg.n_is = cf.n_is;
  cfg.threads = cf.threads;
  cfg.check();

  const auto cells = gpbf::run_grid(kinds, h_values, n_values, scales, reps,
                                    cf.seed, cfg, sigma);

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file)
      throw gpbf::validation_error("cannot write CSV: " + out_path);
    os = &file;
  }
  *os << "kind,h,n,scale,rep,log_bf01,mc_se\n";
  int failures = 0;
  for (const auto& c : cells) {
    if (!c.error.empty()) {
      ++failures;
      continue;
    }
    *os << to_string(c.kind) << "," << gpbf::format_double(c.h) << "," << c.n
        << "," << c.scale << "," << c.rep << ","
        << gpbf::format_double(c.log_bf01) << ","
        << gpbf::format_double(c.mc_se) << "\n";
  }
  if (!out_path.empty())
    std::cout << "wrote " << cells.size() - failures << " rows to " << out_path
              << " (seed=" << cf.seed << ", " << failures
              << " failed cells)\n";
  return 0;
}

// --------------------------------------------------------------- draws ----

int cmd_draws(const DataFlags& df, const CommonFlags& cf, int n_fn_draws,
              const std::string& out_path) {
  if (n_fn_draws < 1)
    throw gpbf::usage_error("--draws must be a positive draw count");
  gpbf::Dataset d = load_dataset(df);
  gpbf::validate_dataset(d);
  if (df.center) d = gpbf::residualize_x(d);

  const auto scales = requested_scales(cf);
  const auto cfg = make_config(cf, scales.front());
  const auto grid = gpbf::default_grid(d);
  const auto samples = gpbf::sample_posterior(d, cfg, n_fn_draws);
  const auto fd = gpbf::draw_functions_posterior(d, cfg, samples, grid);

  std::ofstream out(out_path);
  if (!out) throw gpbf::validation_error("cannot write CSV: " + out_path);
  out << "series,draw,x,value\n";
  for (Eigen::Index i = 0; i < d.n(); ++i)
    out << "obs,0," << gpbf::format_double(d.x[i]) << ","
        << gpbf::format_double(d.y[i]) << "\n";
  for (Eigen::Index t = 0; t < fd.draws(); ++t)
    for (Eigen::Index i = 0; i < grid.size(); ++i)
      out << "mean," << (t + 1) << "," << gpbf::format_double(grid[i]) << ","
          << gpbf::format_double(fd.mean_fn(t, i)) << "\n";
  for (Eigen::Index t = 0; t < fd.draws(); ++t)
    for (Eigen::Index i = 0; i < grid.size(); ++i)
      out << "slope," << (t + 1) << "," << gpbf::format_double(grid[i]) << ","
          << gpbf::format_double(fd.slope(t, i)) << "\n";
  std::cout << "wrote " << d.n() + 2 * fd.draws() * grid.size() << " rows to "
            << out_path << " (seed=" << cf.seed << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayes factor tests of linear vs nonlinear effects"};
  app.require_subcommand(1);
  // --h is a simulate flag, so help is --help only.
  app.set_help_flag("--help", "print help and exit");

  DataFlags df_test, df_onesided, df_draws;
  CommonFlags cf_test, cf_onesided, cf_sim, cf_draws;
  std::string method = "quadrature";
  int onesided_draws = 10000, onesided_grid = 0;
  int draws_T = 50;
  std::string sim_kind = "bump", sim_h = "0:0.5:0.1", sim_n = "200";
  std::string sim_scales = "medium", sim_out, draws_out = "draws.csv";
  int sim_reps = 1;
  double sim_sigma = 0.1;

  auto* t = app.add_subcommand("test", "linear vs nonlinear Bayes factor");
  add_data_flags(t, df_test);
  add_common_flags(t, cf_test);
  t->add_option("--method", method, "quadrature, importance, or both")
      ->check(CLI::IsMember({"quadrature", "importance", "both"}));

  auto* o = app.add_subcommand("onesided",
                               "one-sided nonlinear sign-consistency test");
  add_data_flags(o, df_onesided);
  add_common_flags(o, cf_onesided);
  o->add_option("--draws", onesided_draws, "function draws per side");
  o->add_option("--grid-points", onesided_grid,
                "dense evaluation grid size (default: observed x)");

  auto* s = app.add_subcommand("simulate", "bump/step simulation grid");
  s->set_help_flag("--help", "print help and exit");  // frees -h for --h
  add_common_flags(s, cf_sim);
  s->add_option("--kind", sim_kind, "bump, step, or both");
  s->add_option("--h", sim_h, "h values: comma list or start:stop:step");
  s->add_option("--n", sim_n, "sample sizes, comma list");
  s->add_option("--scales", sim_scales, "comma list of small,medium,large or all");
  s->add_option("--reps", sim_reps, "replications per cell");
  s->add_option("--sigma", sim_sigma, "noise standard deviation");
  s->add_option("--out", sim_out, "output CSV path (default: stdout)");

  auto* dr = app.add_subcommand("draws", "posterior function draws as plot data");
  add_data_flags(dr, df_draws);
  add_common_flags(dr, cf_draws);
  dr->add_option("--draws", draws_T, "number of posterior function draws");
  dr->add_option("--out", draws_out, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kExitUsage;
  }

  try {
    if (t->parsed()) {
      apply_env_overrides(cf_test);
      return cmd_test(df_test, cf_test, method);
    }
    if (o->parsed()) {
      apply_env_overrides(cf_onesided);
      return cmd_onesided(df_onesided, cf_onesided, onesided_draws,
                          onesided_grid);
    }
    if (s->parsed()) {
      apply_env_overrides(cf_sim);
      return cmd_simulate(cf_sim, sim_kind, sim_h, sim_n, sim_scales, sim_reps,
                          sim_sigma, sim_out);
    }
    if (dr->parsed()) {
      apply_env_overrides(cf_draws);
      return cmd_draws(df_draws, cf_draws, draws_T, draws_out);
    }
  } catch (const gpbf::usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gpbf::numeric_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const gpbf::validation_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
