#include "cli.hpp"

#include "pdsplit/errors.hpp"
#include "pdsplit/harness/acceptance.hpp"
#include "pdsplit/harness/problems.hpp"
#include "pdsplit/harness/trace.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace pdsplit::cli {

namespace {

using harness::Instance;
using harness::ProblemSpec;
using harness::TraceRecord;

struct ProblemOptions {
  std::string kind = "affine_pd";
  std::vector<Index> dims{4};
  std::uint64_t seed = 0;
  double norm_scale = 1.0;
  double lambda_reg = 0.1;
  std::size_t max_iters = 100000;
  double tol = 1e-8;
  double sigma_tol = 1e-14;
  double epsilon = 1e-3;
  std::string stop = "kt";
  std::string init = "zero";

  ProblemSpec spec() const {
    ProblemSpec s;
    s.kind = harness::parse_problem_kind(kind);
    s.dims = dims;
    s.seed = seed;
    s.norm_scale = norm_scale;
    s.lambda_reg = lambda_reg;
    return s;
  }

  SolverConfig config(double gamma, double mu, double lambda) const {
    SolverConfig cfg;
    cfg.epsilon = epsilon;
    cfg.gamma = constant_schedule(gamma);
    cfg.mu = constant_schedule(mu);
    cfg.lambda = constant_schedule(lambda);
    cfg.max_iters = max_iters;
    cfg.residual_tol = tol;
    cfg.sigma_tol = sigma_tol;
    if (stop == "kt") {
      cfg.stopping = StoppingRule::kKtResidual;
    } else if (stop == "delta") {
      cfg.stopping = StoppingRule::kDelta;
    } else {
      cfg.stopping = StoppingRule::kStepNorm;
    }
    return cfg;
  }
};

void add_problem_options(CLI::App* app, ProblemOptions& o) {
  app->add_option("--kind", o.kind, "Problem kind")
      ->check(CLI::IsMember({"affine_pd", "lasso", "consensus", "sum_two", "normfree_stress"}))
      ->capture_default_str();
  app->add_option("--dim", o.dims, "Dimensions (repeat or comma-separate)")
      ->delimiter(',')
      ->capture_default_str();
  app->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
  app->add_option("--norm-scale", o.norm_scale, "Spectral norm of L (affine kinds)")
      ->capture_default_str();
  app->add_option("--lambda-reg", o.lambda_reg, "l1 weight (lasso)")->capture_default_str();
  app->add_option("--max-iters", o.max_iters, "Iteration cap")->capture_default_str();
  app->add_option("--tol", o.tol, "Stopping tolerance")->capture_default_str();
  app->add_option("--sigma-tol", o.sigma_tol, "Relative terminal-branch tolerance")
      ->capture_default_str();
  app->add_option("--epsilon", o.epsilon, "Parameter-range margin")->capture_default_str();
  app->add_option("--stop", o.stop, "Stopping metric")
      ->check(CLI::IsMember({"kt", "delta", "step"}))
      ->capture_default_str();
  app->add_option("--init", o.init, "Starting point")
      ->check(CLI::IsMember({"zero", "oracle"}))
      ->capture_default_str();

}

// Plain `key=value` lines apply to the subcommand being run; CLI11 itself
// expects them scoped as `solve.key` or under a [solve] section.
class SubcommandConfig : public CLI::ConfigINI {
 public:
  explicit SubcommandConfig(const CLI::App* app) : app_(app) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigINI::from_config(input);
    const auto subs = app_->get_subcommands();
    if (subs.empty()) return items;
    const std::string& name = subs.front()->get_name();
    for (auto& item : items) {
      if (item.parents.empty() && item.name != "--") item.parents.push_back(name);
    }
    return items;
  }

 private:
  const CLI::App* app_;
};

PDPoint initial_point(const Instance& inst, const ProblemOptions& o) {
  if (o.init == "oracle") {
    if (!inst.oracle()) throw ParameterError("--init oracle: instance has no oracle");
    return *inst.oracle();
  }
  return inst.zero_point();
}

struct RunOutcome {
  SolveReport report;
  std::vector<TraceRecord> trace;
};

RunOutcome run_one(const Instance& inst, const ProblemOptions& o, double gamma, double mu,
                   double lambda) {
  RunOutcome out;
  SolverConfig cfg = o.config(gamma, mu, lambda);
  cfg.observer = harness::trace_observer(out.trace, inst.oracle());
  out.report = inst.solve(initial_point(inst, o), cfg);
  return out;
}

void write_trace_file(const std::filesystem::path& path, const std::vector<TraceRecord>& trace) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  harness::write_trace_csv(f, trace);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void print_report(std::ostream& out, const Instance& inst, const RunOutcome& run) {
  const SolveReport& r = run.report;
  out << "kind " << harness::to_string(inst.spec().kind) << "\n"
      << "reason " << to_string(r.reason) << "\n"
      << "iterations " << r.iterations << "\n"
      << "kt_res " << num(r.kt_res) << "\n";
  if (inst.oracle()) out << "dist_to_oracle " << num(norm(r.solution - *inst.oracle())) << "\n";
  if (!r.objective.empty()) out << "objective " << num(r.objective.back()) << "\n";
  if (inst.oracle_objective()) out << "oracle_objective " << num(*inst.oracle_objective()) << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Primal-dual projective splitting: solve generated problems, run the "
               "acceptance suite, sweep parameters"};
  app.name("pdsplit");
  app.require_subcommand(1);
  app.set_config("--config", "", "Optional key=value file; command-line flags take precedence");
  app.config_formatter(std::make_shared<SubcommandConfig>(&app));
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();  // accept --config after the subcommand too

  ProblemOptions solve_opts;
  double gamma = 1.0, mu = 1.0, lambda = 1.8;
  std::string out_path = "trace.csv";
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one generated instance");
  add_problem_options(solve_cmd, solve_opts);
  solve_cmd->add_option("--gamma", gamma, "Primal step size")->capture_default_str();
  solve_cmd->add_option("--mu", mu, "Dual step size")->capture_default_str();
  solve_cmd->add_option("--lambda", lambda, "Relaxation in ]0,2[")->capture_default_str();
  solve_cmd->add_option("--out", out_path, "Trace CSV path")->capture_default_str();

  CLI::App* accept_cmd = app.add_subcommand("accept", "Run the acceptance suite");

  ProblemOptions sweep_opts;
  std::vector<double> gammas{1.0}, mus{1.0}, lambdas{1.8};
  std::string outdir = "sweep";
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Grid over gamma x mu x lambda");
  add_problem_options(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--gamma", gammas, "Primal step sizes")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--mu", mus, "Dual step sizes")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--lambda", lambdas, "Relaxations")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--outdir", outdir, "Directory for the trace files")->capture_default_str();

  std::vector<std::string> argv(args.rbegin(), args.rend());  // CLI11 consumes from the back
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "pdsplit: " << e.what() << "\n" << "run 'pdsplit --help' for usage\n";
    return kUsage;
  }

  try {
    if (*solve_cmd) {
      const Instance inst = harness::generate(solve_opts.spec());
      const RunOutcome run = run_one(inst, solve_opts, gamma, mu, lambda);
      write_trace_file(out_path, run.trace);
      print_report(out, inst, run);
      out << "trace " << out_path << " (" << run.trace.size() << " records)\n";
      return kOk;
    }
    if (*accept_cmd) {
      const auto results = harness::run_acceptance(&out);
      const bool ok = harness::all_passed(results);
      out << (ok ? "all acceptance criteria passed\n" : "acceptance suite FAILED\n");
      return ok ? kOk : kSuiteFailure;
    }
    if (*sweep_cmd) {
      const Instance inst = harness::generate(sweep_opts.spec());
      for (double g : gammas) {
        for (double m : mus) {
          for (double l : lambdas) {
            const RunOutcome run = run_one(inst, sweep_opts, g, m, l);
            const auto path = std::filesystem::path(outdir) /
                              ("g" + num(g) + "_m" + num(m) + "_l" + num(l) + ".csv");
            write_trace_file(path, run.trace);
            out << path.string() << " " << to_string(run.report.reason) << " "
                << run.report.iterations << " kt_res " << num(run.report.kt_res) << "\n";
          }
        }
      }
      return kOk;
    }
  } catch (const NumericError& e) {
    err << "pdsplit: numeric failure at iteration " << e.iteration() << ": " << e.what() << "\n";
    return kNumeric;
  } catch (const std::invalid_argument& e) {
    // ParameterError and ShapeError: bad values that passed flag parsing.
    err << "pdsplit: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "pdsplit: " << e.what() << "\n";
    return kSuiteFailure;
  }
  return kUsage;
}

}  // namespace pdsplit::cli
