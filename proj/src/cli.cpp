#include "nudgek/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "nudgek/atir.hpp"
#include "nudgek/config_io.hpp"
#include "nudgek/error.hpp"
#include "nudgek/fcfs.hpp"
#include "nudgek/nudge.hpp"
#include "nudgek/sim.hpp"

namespace nudgek::cli {
namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Range {
  double first = 0.0;
  double last = 0.0;
  double step = 0.0;
};

// "A", or "A:B:STEP" with the end point included when it lies on the grid.
std::vector<double> expand(const std::string& text, const char* flag) {
  std::vector<double> parts;
  std::stringstream in(text);
  std::string item;
  try {
    while (std::getline(in, item, ':')) {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    }
  } catch (const std::exception&) {
    throw Error(ErrorKind::ConfigError, std::string(flag) + ": cannot parse \"" + text + "\"");
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
    throw Error(ErrorKind::ConfigError, std::string(flag) + " needs A:B:STEP with A <= B and STEP > 0");
  const Range r{parts[0], parts[1], parts[2]};
  const auto count = static_cast<long>(std::floor((r.last - r.first) / r.step + 1e-9)) + 1;
  std::vector<double> out;
  for (long i = 0; i < count; ++i) out.push_back(r.first + static_cast<double>(i) * r.step);
  return out;
}

std::vector<SwapDepth> parse_depths(const std::string& text) {
  std::vector<SwapDepth> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(SwapDepth::parse(item));
  if (out.empty()) throw Error(ErrorKind::ConfigError, "--k needs at least one value");
  return out;
}

// Runs task(i) for i < n on up to `workers` threads. Results keep index order
// and the lowest-index failure is rethrown.
template <typename T>
std::vector<T> parallel_map(std::size_t n, int workers, const std::function<T(std::size_t)>& task) {
  std::vector<std::optional<T>> results(n);
  std::vector<std::exception_ptr> errors(n);
  const auto threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += threads) {
          try {
            results[i] = task(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*results[i]));
  }
  return out;
}

struct Args {
  std::string config;
  std::string k_list;
  std::optional<double> t_min;
  std::optional<double> t_max;
  std::optional<int> t_points;
  std::string lambda_range;
  std::string ratio_range;
  std::string p_range;
  std::uint64_t arrivals = 10'000'000;
  std::uint64_t seed = 42;
  std::string out_path;
  int workers = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  int batches = 50;
  double warmup = 0.1;
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary);
    if (!file_) throw Error(ErrorKind::ConfigError, "cannot write " + path);
    stream_ = &file_;
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::vector<double> grid_for(const Args& a, double theta) {
  if (!a.t_min && !a.t_max && !a.t_points) {
    auto grid = default_grid(theta);
    grid.erase(grid.begin());
    return grid;
  }
  return linear_grid(a.t_min.value_or(0.0), a.t_max.value_or(std::max(20.0, 12.0 / theta)),
                     a.t_points.value_or(200));
}

std::vector<double> sim_grid(const Args& a, const SystemConfig& cfg) {
  if (a.t_min || a.t_max || a.t_points) {
    const double theta = fcfs::spectral(cfg).theta();
    return linear_grid(a.t_min.value_or(0.5), a.t_max.value_or(std::log(100.0) / theta),
                       a.t_points.value_or(10));
  }
  const double theta = fcfs::spectral(cfg).theta();
  return linear_grid(0.5, std::max(2.0, std::log(100.0) / theta), 10);
}

std::vector<SwapDepth> depths_for(const Args& a, const SystemConfig& cfg) {
  if (a.k_list.empty()) return {cfg.depth()};
  return parse_depths(a.k_list);
}

int cmd_analyze(const Args& a, std::ostream& out) {
  const SystemConfig base = load_config(a.config).build();
  const auto tail = fcfs::spectral(base);
  const auto means = fcfs::means(base);
  out << "lambda = " << num(base.lambda()) << '\n'
      << "p = " << num(base.p()) << '\n'
      << "E[X1] = " << num(base.type1().mean()) << '\n'
      << "E[X2] = " << num(base.type2().mean()) << '\n'
      << "theta_Z = " << num(tail.theta()) << '\n'
      << "c_Z = " << num(tail.c_z) << '\n'
      << "c_FCFS = " << num(tail.c_z * tail.laplace_mix) << '\n'
      << "E[R_FCFS] = " << num(means.response) << '\n'
      << "E[Z] = " << num(means.workload) << '\n';
  for (const SwapDepth depth : depths_for(a, base)) {
    const SystemConfig cfg = base.with_depth(depth);
    const auto c = nudge::tail_constants(cfg);
    const std::string k = "[K=" + depth.to_string() + "]";
    out << k << " c_W1 = " << num(c.c_w1) << '\n'
        << k << " c_R1 = " << num(c.c_r1) << '\n'
        << k << " c_W2 = " << num(c.c_w2) << '\n'
        << k << " c_R2 = " << num(c.c_r2) << '\n'
        << k << " p_swap = " << num(nudge::p_swap(cfg)) << '\n'
        << k << " E[R_Nudge] = " << num(nudge::mean_response(cfg)) << '\n'
        << k << " ATIR = " << num(atir::atir(tail, cfg.p(), depth)) << '\n';
  }
  const unsigned kopt = atir::k_opt(tail, base.p());
  out << "K_opt = " << kopt << '\n'
      << "ATIR(K_opt) = " << num(atir::atir(tail, base.p(), SwapDepth(kopt))) << '\n';
  return kExitOk;
}

int cmd_tir(const Args& a, std::ostream& fallback) {
  const SystemConfig base = load_config(a.config).build();
  const auto grid = grid_for(a, fcfs::spectral(base).theta());
  const auto depths = depths_for(a, base);
  const auto curves = parallel_map<nudge::TirCurve>(depths.size(), a.workers, [&](std::size_t i) {
    return nudge::tir_curve(base.with_depth(depths[i]), grid);
  });
  Output file(a.out_path, fallback);
  std::ostream& out = file.get();
  out << "k,t,ccdf_fcfs,ccdf_nudge,tir\n";
  for (std::size_t i = 0; i < depths.size(); ++i) {
    const auto& c = curves[i];
    for (std::size_t j = 0; j < grid.size(); ++j)
      out << depths[i].to_string() << ',' << num(grid[j]) << ',' << num(c.fcfs.values[j]) << ','
          << num(c.nudge.values[j]) << ',' << num(c.tir[j]) << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const Args& a, std::ostream& fallback) {
  const ConfigSpec spec = load_config(a.config);
  const auto lambdas = a.lambda_range.empty() ? std::vector<double>{spec.lambda} : expand(a.lambda_range, "--lambda-range");
  std::vector<double> ratios;
  if (!a.ratio_range.empty()) ratios = expand(a.ratio_range, "--ratio-range");
  else if (spec.ratio) ratios = {*spec.ratio};
  else throw Error(ErrorKind::ConfigError, "atir-sweep needs a ratio in the config or --ratio-range");
  const auto ps = a.p_range.empty() ? std::vector<double>{spec.p} : expand(a.p_range, "--p-range");

  struct Row {
    double lambda, ratio, p, atir1, atir_kopt;
    unsigned kopt;
  };
  const std::size_t n = lambdas.size() * ratios.size() * ps.size();
  const auto rows = parallel_map<Row>(n, a.workers, [&](std::size_t idx) {
    const double p = ps[idx % ps.size()];
    const double ratio = ratios[(idx / ps.size()) % ratios.size()];
    const double lambda = lambdas[idx / (ps.size() * ratios.size())];
    const auto tail = fcfs::spectral(spec.build(lambda, ratio, p));
    const unsigned k = atir::k_opt(tail, p);
    return Row{lambda, ratio, p, atir::atir(tail, p, SwapDepth(1)), atir::atir(tail, p, SwapDepth(k)), k};
  });
  Output file(a.out_path, fallback);
  std::ostream& out = file.get();
  out << "lambda,ratio,p,atir_1,atir_kopt,k_opt\n";
  for (const auto& r : rows)
    out << num(r.lambda) << ',' << num(r.ratio) << ',' << num(r.p) << ',' << num(r.atir1) << ','
        << num(r.atir_kopt) << ',' << r.kopt << '\n';
  return kExitOk;
}

bool is_expo(const PhaseType& x) { return x.order() == 1; }

int cmd_kopt(const Args& a, std::ostream& out) {
  const SystemConfig cfg = load_config(a.config).build();
  const auto tail = fcfs::spectral(cfg);
  out << "K_opt = " << atir::k_opt(tail, cfg.p()) << '\n'
      << "K_opt_real = " << num(atir::k_opt_real(tail)) << '\n';
  if (is_expo(cfg.type1()) && is_expo(cfg.type2())) {
    // With exponential types S~1 (S~2 - 1) / (S~2 (S~1 - 1)) = E[X2] / E[X1].
    const double x = std::log(cfg.type2().mean() / cfg.type1().mean()) / std::log(tail.laplace_mix);
    out << "K_opt_expo_real = " << num(x) << '\n';
  }
  try {
    const auto ht = atir::heavy_traffic_k(cfg);
    out << "K_approx = " << ht.k_approx << '\n'
        << "K_approx_workload = " << ht.k_approx_workload << '\n'
        << "kingman_theta = " << num(ht.kingman_theta) << '\n';
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::MeanOrderViolation) throw;
    out << "K_approx = n/a (" << e.what() << ")\n";
  }
  return kExitOk;
}

sim::Options sim_options(const Args& a, const SystemConfig& cfg) {
  sim::Options opt;
  opt.arrivals = a.arrivals;
  opt.seed = a.seed;
  opt.batches = a.batches;
  opt.warmup_fraction = a.warmup;
  opt.t_points = sim_grid(a, cfg);
  return opt;
}

void write_estimates(std::ostream& out, const sim::SimStats& s) {
  out << "quantity,t,estimate,half_width\n";
  const auto row = [&](const std::string& name, double t, const sim::Estimate& e) {
    out << name << ',' << num(t) << ',' << num(e.value) << ',' << num(e.half_width) << '\n';
  };
  row("mean_response", 0.0, s.mean_response);
  row("mean_response1", 0.0, s.mean_response1);
  row("mean_response2", 0.0, s.mean_response2);
  row("mean_workload", 0.0, s.mean_workload);
  row("p_swap", 0.0, s.swap_fraction_type2);
  for (const auto& [law, estimates] : s.ccdf)
    for (std::size_t i = 0; i < estimates.size(); ++i) row(std::string(to_string(law)), s.t_points[i], estimates[i]);
}

int cmd_simulate(const Args& a, std::ostream& fallback) {
  const SystemConfig cfg = load_config(a.config).build();
  const auto stats = sim::simulate(cfg, sim_options(a, cfg));
  Output file(a.out_path, fallback);
  write_estimates(file.get(), stats);
  return kExitOk;
}

int cmd_validate(const Args& a, std::ostream& out) {
  const SystemConfig cfg = load_config(a.config).build();
  const auto stats = sim::simulate(cfg, sim_options(a, cfg));
  const auto report = sim::validate_system(cfg, stats);
  if (!a.out_path.empty()) {
    Output file(a.out_path, out);
    std::ostream& csv = file.get();
    csv << "name,t,analytic,estimate,half_width,z,within\n";
    for (const auto& pt : report.points)
      csv << pt.name << ',' << num(pt.t) << ',' << num(pt.analytic) << ',' << num(pt.estimate.value) << ','
          << num(pt.estimate.half_width) << ',' << num(pt.z) << ',' << (pt.within ? 1 : 0) << '\n';
  }
  for (const auto& pt : report.points) {
    char line[160];
    std::snprintf(line, sizeof line, "%-14s t=%-8.4g analytic=%-12.6g sim=%-12.6g +/-%-10.3g z=%+.2f %s\n",
                  pt.name.c_str(), pt.t, pt.analytic, pt.estimate.value, pt.estimate.half_width, pt.z,
                  pt.within ? "ok" : "OUT");
    out << line;
  }
  out << (report.pass ? "PASS" : "FAIL") << ' ' << num(report.pass_fraction) << " of "
      << report.points.size() << " points within 3 half-widths (" << stats.n_arrivals << " arrivals counted)\n";
  return report.pass ? kExitOk : kExitValidation;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nudge-K M/PH/1 analysis and simulation"};
  app.require_subcommand(1);
  Args a;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", a.config, "JSON system configuration")->required();
    sub->add_option("--workers", a.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", a.out_path, "output file (default: standard output)");
  };
  const auto grid_flags = [&](CLI::App* sub) {
    sub->add_option("--t-min", a.t_min, "first t of a linear grid");
    sub->add_option("--t-max", a.t_max, "last t of a linear grid");
    sub->add_option("--t-points", a.t_points, "number of grid points")->check(CLI::PositiveNumber);
  };
  const auto sim_flags = [&](CLI::App* sub) {
    sub->add_option("--arrivals", a.arrivals, "simulated arrivals");
    sub->add_option("--seed", a.seed, "master seed");
    sub->add_option("--batches", a.batches, "batch-means batches");
    sub->add_option("--warmup", a.warmup, "discarded fraction of arrivals");
  };

  auto* analyze = app.add_subcommand("analyze", "tail constants, means, p_swap, ATIR and K_opt");
  common(analyze);
  analyze->add_option("--k", a.k_list, "swap depths, e.g. 1,2,3,inf");
  auto* tir = app.add_subcommand("tir", "CSV of the tail improvement ratio over t");
  common(tir);
  grid_flags(tir);
  tir->add_option("--k", a.k_list, "swap depths, e.g. 1,2,3,inf");
  auto* sweep = app.add_subcommand("atir-sweep", "CSV of ATIR(1), ATIR(K_opt) and K_opt over a grid");
  common(sweep);
  sweep->add_option("--lambda-range", a.lambda_range, "A:B:STEP");
  sweep->add_option("--ratio-range", a.ratio_range, "A:B:STEP of E[X2]/E[X1]");
  sweep->add_option("--p-range", a.p_range, "A:B:STEP of the type-1 fraction");
  auto* kopt = app.add_subcommand("kopt", "optimal swap depth and heavy-traffic approximation");
  common(kopt);
  auto* simulate = app.add_subcommand("simulate", "discrete-event simulation estimates as CSV");
  common(simulate);
  grid_flags(simulate);
  sim_flags(simulate);
  auto* validate = app.add_subcommand("validate", "simulation against the analytic laws");
  common(validate);
  grid_flags(validate);
  sim_flags(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(a, out);
    if (tir->parsed()) return cmd_tir(a, out);
    if (sweep->parsed()) return cmd_sweep(a, out);
    if (kopt->parsed()) return cmd_kopt(a, out);
    if (simulate->parsed()) return cmd_simulate(a, out);
    if (validate->parsed()) return cmd_validate(a, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return e.is_config_error() ? kExitConfig : kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace nudgek::cli
