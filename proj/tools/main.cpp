#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "addhaz/cone.hpp"
#include "addhaz/data_io.hpp"
#include "addhaz/errors.hpp"
#include "addhaz/fit_io.hpp"
#include "addhaz/mle.hpp"
#include "addhaz/ols.hpp"
#include "addhaz/predict.hpp"
#include "addhaz/simulate.hpp"

namespace {

using namespace addhaz;

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t");
    const auto e = field.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& csv, const std::string& flag) {
  std::vector<double> out;
  for (const std::string& f : split_list(csv)) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(f, &pos));
      if (pos != f.size()) throw std::invalid_argument(f);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse '" + f + "' in " + flag);
    }
  }
  return out;
}

// "start:stop:step" or a comma-separated list of times.
std::vector<double> parse_grid(const std::string& spec) {
  if (spec.find(':') == std::string::npos) return parse_double_list(spec, "--grid");
  const auto parts = [&] {
    std::vector<std::string> out;
    std::stringstream ss(spec);
    std::string field;
    while (std::getline(ss, field, ':')) out.push_back(field);
    return out;
  }();
  if (parts.size() != 3) throw ConfigError("--grid expects start:stop:step");
  double start, stop, step;
  try {
    start = std::stod(parts[0]);
    stop = std::stod(parts[1]);
    step = std::stod(parts[2]);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse --grid '" + spec + "'");
  }
  if (!(step > 0.0) || stop < start) throw ConfigError("--grid needs step > 0 and stop >= start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

std::vector<std::string> header_columns(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string header;
  if (!std::getline(in, header)) throw ParseError("'" + path + "' is empty, expected a header");
  std::vector<std::string> cols = split_list(header);
  for (auto& c : cols)
    if (!c.empty() && c.back() == '\r') c.pop_back();
  return cols;
}

struct DataFlags {
  std::string input;
  std::string time_col = "time";
  std::string status_col = "status";
  std::string covariates;  // comma list; empty = all other columns
  std::string ties = "reject";
  bool rescale = false;
  std::uint64_t seed = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--input", input, "dataset CSV with a header row")->required();
    cmd->add_option("--time-col", time_col, "follow-up time column");
    cmd->add_option("--status-col", status_col, "event indicator column (1 event, 0 censored)");
    cmd->add_option("--covariates", covariates,
                    "comma-separated covariate columns (default: all other columns)");
    cmd->add_option("--ties", ties, "tied event times: reject or jitter")
        ->check(CLI::IsMember({"reject", "jitter"}));
    cmd->add_flag("--rescale", rescale, "map each covariate column to [0,1]");
    cmd->add_option("--seed", seed, "seed for the jitter tie policy");
  }

  Dataset load() const {
    std::vector<std::string> cov_cols;
    if (covariates.empty()) {
      for (const auto& c : header_columns(input))
        if (c != time_col && c != status_col) cov_cols.push_back(c);
    } else {
      cov_cols = split_list(covariates);
    }
    Dataset d = load_dataset(input, time_col, status_col, cov_cols);
    if (rescale) d = rescale_covariates(d);
    return check_ties(d, ties == "jitter" ? TiePolicy::jitter : TiePolicy::reject, seed);
  }
};

int cmd_fit(const DataFlags& data, const std::string& output, const std::string& method,
            const std::string& cone_matrix, const std::string& cone_solver) {
  const Dataset d = data.load();

  FitResult fit;
  if (method == "ols") {
    fit = fit_ols(d);
  } else if (method == "mle") {
    fit = fit_mle(d);
  } else {
    if (cone_matrix.empty())
      throw ConfigError("--method mle-cone requires --cone-matrix (a CSV path or 'full')");
    const ConstraintCone cone = cone_matrix == "full"
                                    ? full_constraint_cone(static_cast<int>(d.p))
                                    : load_cone_csv(cone_matrix);
    ConeMethod solver = ConeMethod::naive;
    if (cone_solver == "ascending") solver = ConeMethod::ascending;
    if (cone_solver == "descending") solver = ConeMethod::descending;
    if (solver == ConeMethod::naive && cone.r() > 30)
      std::cerr << "note: naive edge enumeration over " << cone.r()
                << " rows is combinatorial; consider --cone-solver ascending\n";
    fit = fit_mle_cone(d, cone, solver);
  }

  save_fit(fit, output);

  std::cout << "method: " << method_label(fit.coefficients.method) << "\n";
  std::cout << "event times: " << fit.coefficients.event_times.size() << "\n";
  int deficient = 0;
  for (const auto& diag : fit.diagnostics) deficient += diag.rank_deficient;
  if (fit.coefficients.method == Method::ols)
    std::cout << "rank-deficient times (zero jump): " << deficient << "\n";
  if (fit.total_loglik) std::cout << "total log-likelihood: " << *fit.total_loglik << "\n";
  std::cout << "fit written to " << output << "\n";
  return 0;
}

int cmd_predict(const std::string& input, const std::string& output, const std::string& x_spec,
                bool raw, const std::string& grid_spec) {
  const FitResult fit = load_fit(input);
  std::vector<double> x = parse_double_list(x_spec, "--x");
  if (raw) x = rescale_point(fit, x);
  const std::vector<double> grid = parse_grid(grid_spec);

  const auto curve = survival_curve(fit, x, grid);
  std::ofstream out(output);
  if (!out) throw IoError("cannot write '" + output + "'");
  out << "time,cumulative_hazard,survival\n";
  char buf[64];
  for (const auto& [t, surv] : curve) {
    const double h = -std::log(surv);
    auto put = [&](double v, char sep) {
      auto res = std::to_chars(buf, buf + sizeof(buf), v);
      out.write(buf, res.ptr - buf);
      out.put(sep);
    };
    put(t, ',');
    put(h == 0.0 ? 0.0 : h, ',');  // normalize -0
    put(surv, '\n');
  }
  if (!out) throw IoError("failed while writing '" + output + "'");
  std::cout << "curve with " << curve.size() << " points written to " << output << "\n";
  return 0;
}

int cmd_simulate(const std::string& output, const std::string& config_path, int n, int reps,
                 std::uint64_t seed, int threads, double censor_low, double censor_high,
                 const CLI::App* cmd) {
  SimConfig cfg;
  if (!config_path.empty()) apply_config_file(cfg, config_path);
  if (cmd->count("--n")) cfg.n = n;
  if (cmd->count("--reps")) cfg.reps = reps;
  if (cmd->count("--seed")) cfg.master_seed = seed;
  if (cmd->count("--threads")) cfg.threads = threads;
  if (cmd->count("--censor-low")) cfg.censor_low = censor_low;
  if (cmd->count("--censor-high")) cfg.censor_high = censor_high;
  cfg.validate();

  const SimSummary summary = run_study(cfg);
  const std::string table = format_summary_table(cfg, summary);
  const std::string csv = format_summary_csv(summary);

  {
    std::ofstream out(output + ".txt");
    if (!out) throw IoError("cannot write '" + output + ".txt'");
    out << table;
  }
  {
    std::ofstream out(output + ".csv");
    if (!out) throw IoError("cannot write '" + output + ".csv'");
    out << csv;
  }
  std::cout << table;
  return 0;
}

int cmd_compare(const DataFlags& data, const std::string& output) {
  const Dataset d = data.load();
  const FitResult ols = fit_ols(d);
  const FitResult mle = fit_mle(d);

  std::ofstream out(output);
  if (!out) throw IoError("cannot write '" + output + "'");
  out << "time,covariate,method,cumulative\n";
  char buf[64];
  auto fmt = [&](double v) {
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  };
  for (const FitResult* fit : {&ols, &mle}) {
    const auto cum = fit->coefficients.cumulative();
    const char* label = method_label(fit->coefficients.method);
    for (std::size_t k = 0; k < cum.size(); ++k)
      for (Eigen::Index j = 0; j < cum[k].size(); ++j) {
        const std::string name = j == 0 ? "baseline" : d.names[static_cast<std::size_t>(j - 1)];
        out << fmt(fit->coefficients.event_times[k]) << "," << name << "," << label << ","
            << fmt(cum[k](j)) << "\n";
      }
  }
  if (!out) throw IoError("failed while writing '" + output + "'");
  std::cout << "comparison written to " << output << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"additive hazards model fitting (least squares and constrained likelihood)"};
  app.require_subcommand(1);

  DataFlags fit_data;
  std::string fit_output;
  std::string fit_method = "mle";
  std::string cone_matrix;
  std::string cone_solver = "naive";
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit the model and write a fit file");
  fit_data.add_to(fit_cmd);
  fit_cmd->add_option("--output", fit_output, "fit file to write")->required();
  fit_cmd->add_option("--method", fit_method, "ols, mle, or mle-cone")
      ->check(CLI::IsMember({"ols", "mle", "mle-cone"}));
  fit_cmd->add_option("--cone-matrix", cone_matrix,
                      "constraint matrix CSV, or 'full' for the unit-cube vertex set");
  fit_cmd->add_option("--cone-solver", cone_solver, "naive, ascending, or descending")
      ->check(CLI::IsMember({"naive", "ascending", "descending"}));

  std::string pred_input, pred_output, pred_x, pred_grid;
  bool pred_raw = false;
  CLI::App* pred_cmd = app.add_subcommand("predict", "survival curve from a fit file");
  pred_cmd->add_option("--input", pred_input, "fit file")->required();
  pred_cmd->add_option("--output", pred_output, "curve CSV to write")->required();
  pred_cmd->add_option("--x", pred_x, "comma-separated covariate vector")->required();
  pred_cmd->add_flag("--raw", pred_raw, "covariates are in original units; convert via the fit's scale");
  pred_cmd->add_option("--grid", pred_grid, "time grid start:stop:step or comma list")->required();

  std::string sim_output, sim_config;
  int sim_n = 500, sim_reps = 1000, sim_threads = 1;
  std::uint64_t sim_seed = 1;
  double sim_clow = 2.5, sim_chigh = 7.5;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo comparison of OLS and MLE");
  sim_cmd->add_option("--output", sim_output, "output prefix (.txt and .csv)")->required();
  sim_cmd->add_option("--config", sim_config, "key = value configuration file");
  sim_cmd->add_option("--n", sim_n, "subjects per replication");
  sim_cmd->add_option("--reps", sim_reps, "replication count");
  sim_cmd->add_option("--seed", sim_seed, "master seed");
  sim_cmd->add_option("--threads", sim_threads, "worker threads (default 1)");
  sim_cmd->add_option("--censor-low", sim_clow, "lower bound of the censoring uniform");
  sim_cmd->add_option("--censor-high", sim_chigh, "upper bound of the censoring uniform");

  DataFlags cmp_data;
  std::string cmp_output;
  CLI::App* cmp_cmd = app.add_subcommand("compare", "cumulative coefficients, OLS vs MLE");
  cmp_data.add_to(cmp_cmd);
  cmp_cmd->add_option("--output", cmp_output, "long-format CSV to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "CONFIG: " << e.what() << "\n";
    return 2;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit_data, fit_output, fit_method, cone_matrix, cone_solver);
    if (pred_cmd->parsed()) return cmd_predict(pred_input, pred_output, pred_x, pred_raw, pred_grid);
    if (sim_cmd->parsed())
      return cmd_simulate(sim_output, sim_config, sim_n, sim_reps, sim_seed, sim_threads,
                          sim_clow, sim_chigh, sim_cmd);
    if (cmp_cmd->parsed()) return cmd_compare(cmp_data, cmp_output);
  } catch (const Error& e) {
    std::cerr << category_label(e.category()) << ": " << e.what() << "\n";
    return category_exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "IO: " << e.what() << "\n";
    return category_exit_code(ErrorCategory::io);
  }
  return 0;
}
