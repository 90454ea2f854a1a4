#include "nudgek/sim.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <deque>
#include <limits>
#include <thread>

#include "nudgek/error.hpp"
#include "nudgek/fcfs.hpp"
#include "nudgek/nudge.hpp"

namespace nudgek::sim {

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32U),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32U), 0x6e75U};
  return Rng(seq);
}

PhaseSampler::PhaseSampler(const PhaseType& ph) {
  const Index n = ph.order();
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) {
    acc += ph.alpha()[i];
    initial_.push_back(acc);
  }
  initial_.back() = 1.0;
  for (Index i = 0; i < n; ++i) {
    Phase phase;
    phase.rate = -ph.generator()(i, i);
    double cum = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (j != i) cum += ph.generator()(i, j) / phase.rate;
      phase.cumulative.push_back(j == i ? -1.0 : cum);
    }
    phase.cumulative.push_back(1.0);  // absorption
    phases_.push_back(std::move(phase));
  }
}

double PhaseSampler::operator()(Rng& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  const auto pick = [](const std::vector<double>& cum, double u) {
    std::size_t k = 0;
    while (k + 1 < cum.size() && (cum[k] < 0.0 || u >= cum[k])) ++k;
    return k;
  };
  std::size_t phase = pick(initial_, unif(rng));
  const std::size_t absorbing = phases_.size();
  double elapsed = 0.0;
  while (phase != absorbing) {
    const Phase& current = phases_[phase];
    elapsed += expo(rng) / current.rate;
    phase = pick(current.cumulative, unif(rng));
  }
  return elapsed;
}

double ph_sample(const PhaseType& ph, Rng& rng) { return PhaseSampler(ph)(rng); }

namespace {

struct Job {
  std::uint64_t index = 0;
  double arrival = 0.0;
  double size = 0.0;
  std::uint8_t type = 1;
  std::uint8_t times_passed = 0;
};

// Tallies for one batch of consecutive arrivals.
struct Batch {
  std::uint64_t arrivals = 0;
  std::uint64_t n1 = 0;
  std::uint64_t n2 = 0;
  std::uint64_t swapped2 = 0;
  double sum_r1 = 0.0;
  double sum_r2 = 0.0;
  double sum_z = 0.0;
  std::vector<std::uint64_t> z_over;
  std::vector<std::uint64_t> w1_over;
  std::vector<std::uint64_t> w2_over;
  std::vector<std::uint64_t> r1_over;
  std::vector<std::uint64_t> r2_over;
  std::vector<std::uint64_t> qlen;

  Batch(std::size_t points, std::size_t bins)
      : z_over(points), w1_over(points), w2_over(points), r1_over(points), r2_over(points), qlen(bins) {}
};

struct Replication {
  std::vector<Batch> batches;
  unsigned max_passes = 0;
  unsigned max_times_passed = 0;
};

void count_exceed(std::vector<std::uint64_t>& counts, const std::vector<double>& t_points, double value) {
  for (std::size_t i = 0; i < t_points.size(); ++i)
    if (value > t_points[i]) ++counts[i];
}

Replication run_replication(const SystemConfig& cfg, const Options& opt, std::uint64_t arrivals,
                            std::uint64_t stream) {
  Rng rng = make_stream(opt.seed, stream);
  const PhaseSampler sampler1(cfg.type1());
  const PhaseSampler sampler2(cfg.type2());
  std::exponential_distribution<double> interarrival(cfg.lambda());
  std::bernoulli_distribution is_type1(cfg.p());

  const SwapDepth depth = cfg.depth();
  const unsigned max_pass = depth.is_infinite() ? std::numeric_limits<unsigned>::max() : depth.value();
  const auto warmup = static_cast<std::uint64_t>(opt.warmup_fraction * static_cast<double>(arrivals));
  const auto batches = static_cast<std::uint64_t>(opt.batches);
  const std::uint64_t batch_size = (arrivals - warmup) / batches;
  const std::size_t points = opt.t_points.size();
  const auto bins = static_cast<std::size_t>(opt.queue_length_bins);

  Replication rep;
  rep.batches.assign(batches, Batch(points, bins));
  const auto batch_of = [&](std::uint64_t index) -> Batch* {
    if (index < warmup) return nullptr;
    const std::uint64_t b = (index - warmup) / batch_size;
    return b < batches ? &rep.batches[b] : nullptr;
  };

  std::deque<Job> queue;
  Job in_service;
  bool busy = false;
  double service_end = std::numeric_limits<double>::infinity();
  double next_arrival = interarrival(rng);
  double workload = 0.0;
  double last_arrival = 0.0;
  std::uint64_t arrived = 0;

  const auto start_service = [&](const Job& job, double now) {
    in_service = job;
    busy = true;
    service_end = now + job.size;
    Batch* batch = batch_of(job.index);
    if (batch == nullptr) return;
    const double wait = now - job.arrival;
    const double response = wait + job.size;
    if (job.type == 1) {
      ++batch->n1;
      batch->sum_r1 += response;
      count_exceed(batch->w1_over, opt.t_points, wait);
      count_exceed(batch->r1_over, opt.t_points, response);
    } else {
      ++batch->n2;
      batch->sum_r2 += response;
      if (job.times_passed > 0) ++batch->swapped2;
      count_exceed(batch->w2_over, opt.t_points, wait);
      count_exceed(batch->r2_over, opt.t_points, response);
    }
  };

  while (arrived < arrivals || busy) {
    if (arrived < arrivals && next_arrival < service_end) {
      const double now = next_arrival;
      Job job;
      job.index = arrived++;
      job.arrival = now;
      job.type = is_type1(rng) ? 1 : 2;
      job.size = job.type == 1 ? sampler1(rng) : sampler2(rng);

      const double seen = std::max(0.0, workload - (now - last_arrival));
      workload = seen + job.size;
      last_arrival = now;
      if (Batch* batch = batch_of(job.index)) {
        ++batch->arrivals;
        batch->sum_z += seen;
        count_exceed(batch->z_over, opt.t_points, seen);
        const std::size_t in_system = queue.size() + (busy ? 1 : 0);
        if (in_system < bins) ++batch->qlen[in_system];
      }

      if (!busy) {
        start_service(job, now);
      } else {
        queue.push_back(job);
        if (job.type == 1) {
          // Walk towards the head passing unswapped type-2 jobs; the job in
          // service is not in the queue and is never passed.
          std::size_t pos = queue.size() - 1;
          unsigned passes = 0;
          while (passes < max_pass && pos > 0) {
            Job& ahead = queue[pos - 1];
            if (ahead.type != 2 || ahead.times_passed > 0) break;
            ++ahead.times_passed;
            rep.max_times_passed = std::max<unsigned>(rep.max_times_passed, ahead.times_passed);
            std::swap(queue[pos - 1], queue[pos]);
            --pos;
            ++passes;
          }
          rep.max_passes = std::max(rep.max_passes, passes);
        }
      }
      next_arrival = now + interarrival(rng);
    } else {
      const double now = service_end;
      busy = false;
      service_end = std::numeric_limits<double>::infinity();
      if (!queue.empty()) {
        const Job next = queue.front();
        queue.pop_front();
        start_service(next, now);
      }
    }
  }
  return rep;
}

double t_quantile(double confidence, int dof) {
  const boost::math::students_t dist(dof);
  return boost::math::quantile(dist, 0.5 + 0.5 * confidence);
}

// Batch-means estimate from per-batch values (NaN entries make the estimate NaN).
Estimate batch_estimate(const std::vector<double>& values, double quantile) {
  const auto b = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= b;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= (b - 1.0);
  const double se = std::sqrt(var / b);
  return {mean, quantile * se, se};
}

double ratio(double num, double den) {
  return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

SimStats simulate(const SystemConfig& cfg, const Options& opt) {
  if (!(cfg.lambda() < 1.0)) throw Error(ErrorKind::UnstableSystem, "simulation needs lambda < 1");
  if (opt.arrivals < 100'000) throw Error(ErrorKind::InvalidArgument, "simulation needs at least 1e5 arrivals");
  if (opt.batches < 30) throw Error(ErrorKind::InsufficientBatches, "batch means needs at least 30 batches");
  if (opt.replications < 1) throw Error(ErrorKind::InvalidArgument, "need at least one replication");
  if (!(opt.warmup_fraction >= 0.0 && opt.warmup_fraction < 1.0))
    throw Error(ErrorKind::InvalidArgument, "warm-up fraction must lie in [0, 1)");
  if (!(opt.confidence > 0.0 && opt.confidence < 1.0))
    throw Error(ErrorKind::InvalidArgument, "confidence must lie in (0, 1)");

  const auto reps = static_cast<std::uint64_t>(opt.replications);
  const std::uint64_t per_rep = opt.arrivals / reps;
  std::vector<Replication> results(reps);
  const auto workers = static_cast<std::uint64_t>(std::max(1, opt.workers));
  if (workers == 1 || reps == 1) {
    for (std::uint64_t r = 0; r < reps; ++r) results[r] = run_replication(cfg, opt, per_rep, r);
  } else {
    std::vector<std::jthread> pool;
    for (std::uint64_t w = 0; w < std::min(workers, reps); ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t r = w; r < reps; r += workers) results[r] = run_replication(cfg, opt, per_rep, r);
      });
    }
  }

  std::vector<const Batch*> all;
  SimStats stats;
  stats.seed = opt.seed;
  stats.t_points = opt.t_points;
  for (const auto& rep : results) {
    stats.max_passes = std::max(stats.max_passes, rep.max_passes);
    stats.max_times_passed = std::max(stats.max_times_passed, rep.max_times_passed);
    for (const auto& b : rep.batches) all.push_back(&b);
  }
  stats.batches = static_cast<int>(all.size());
  const double q = t_quantile(opt.confidence, stats.batches - 1);

  const auto estimate = [&](auto&& per_batch) {
    std::vector<double> values;
    values.reserve(all.size());
    for (const Batch* b : all) values.push_back(per_batch(*b));
    return batch_estimate(values, q);
  };

  for (const Batch* b : all) {
    stats.n_arrivals += b->arrivals;
    stats.n_type1 += b->n1;
    stats.n_type2 += b->n2;
    stats.sum_response1 += b->sum_r1;
    stats.sum_response2 += b->sum_r2;
    stats.sum_workload += b->sum_z;
  }
  stats.mean_response = estimate([](const Batch& b) {
    return ratio(b.sum_r1 + b.sum_r2, static_cast<double>(b.n1 + b.n2));
  });
  stats.mean_response1 = estimate([](const Batch& b) { return ratio(b.sum_r1, static_cast<double>(b.n1)); });
  stats.mean_response2 = estimate([](const Batch& b) { return ratio(b.sum_r2, static_cast<double>(b.n2)); });
  stats.mean_workload = estimate([](const Batch& b) { return ratio(b.sum_z, static_cast<double>(b.arrivals)); });
  stats.swap_fraction_type2 = estimate([](const Batch& b) {
    return ratio(static_cast<double>(b.swapped2), static_cast<double>(b.n2));
  });

  const auto ccdf_of = [&](std::vector<std::uint64_t> Batch::*counts, std::uint64_t Batch::*den) {
    std::vector<Estimate> out;
    for (std::size_t i = 0; i < opt.t_points.size(); ++i) {
      out.push_back(estimate([&](const Batch& b) {
        return ratio(static_cast<double>((b.*counts)[i]), static_cast<double>(b.*den));
      }));
    }
    return out;
  };
  stats.ccdf[Law::Workload] = ccdf_of(&Batch::z_over, &Batch::arrivals);
  stats.ccdf[Law::Wait1] = ccdf_of(&Batch::w1_over, &Batch::n1);
  stats.ccdf[Law::Wait2] = ccdf_of(&Batch::w2_over, &Batch::n2);
  stats.ccdf[Law::Response1] = ccdf_of(&Batch::r1_over, &Batch::n1);
  stats.ccdf[Law::Response2] = ccdf_of(&Batch::r2_over, &Batch::n2);
  {
    std::vector<Estimate> mixed;
    for (std::size_t i = 0; i < opt.t_points.size(); ++i) {
      mixed.push_back(estimate([&](const Batch& b) {
        return ratio(static_cast<double>(b.r1_over[i] + b.r2_over[i]), static_cast<double>(b.n1 + b.n2));
      }));
    }
    stats.ccdf[Law::NudgeResponse] = std::move(mixed);
  }
  for (int k = 0; k < opt.queue_length_bins; ++k) {
    stats.queue_length_pmf.push_back(estimate([&](const Batch& b) {
      return ratio(static_cast<double>(b.qlen[static_cast<std::size_t>(k)]), static_cast<double>(b.arrivals));
    }));
  }
  return stats;
}

namespace {

ValidationPoint compare(std::string name, double t, double analytic, const Estimate& est, double tolerance) {
  ValidationPoint point{std::move(name), t, analytic, est, 0.0, false};
  const double diff = analytic - est.value;
  if (est.std_error > 0.0) point.z = diff / est.std_error;
  else point.z = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  point.within = std::abs(diff) <= tolerance * est.half_width;
  return point;
}

void finish(ValidationReport& report, double required_fraction) {
  std::size_t ok = 0;
  for (const auto& point : report.points) ok += point.within ? 1 : 0;
  report.pass_fraction = report.points.empty() ? 0.0 : static_cast<double>(ok) / report.points.size();
  report.pass = !report.points.empty() && report.pass_fraction >= required_fraction;
}

}  // namespace

ValidationReport validate(const std::vector<CcdfCurve>& analytic, const SimStats& stats, double tolerance,
                          double required_fraction) {
  ValidationReport report;
  for (const auto& curve : analytic) {
    const auto found = stats.ccdf.find(curve.label);
    if (found == stats.ccdf.end())
      throw Error(ErrorKind::GridMismatch, "no simulated curve for " + std::string(to_string(curve.label)));
    const auto& est = found->second;
    if (curve.grid.size() != stats.t_points.size() || curve.values.size() != est.size())
      throw Error(ErrorKind::GridMismatch, "curve " + std::string(to_string(curve.label)) +
                                               " has a different number of points than the simulation");
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
      if (std::abs(curve.grid[i] - stats.t_points[i]) > 1e-12 * std::max(1.0, std::abs(curve.grid[i])))
        throw Error(ErrorKind::GridMismatch, "curve " + std::string(to_string(curve.label)) +
                                                 " uses other t points than the simulation");
      report.points.push_back(
          compare(std::string(to_string(curve.label)), curve.grid[i], curve.values[i], est[i], tolerance));
    }
  }
  finish(report, required_fraction);
  return report;
}

ValidationReport validate_system(const SystemConfig& cfg, const SimStats& stats, double tolerance,
                                 double required_fraction) {
  const auto& grid = stats.t_points;
  std::vector<CcdfCurve> curves{fcfs::workload_ccdf(cfg, grid), nudge::w1_ccdf(cfg, grid),
                                nudge::w2_ccdf(cfg, grid), nudge::r1_ccdf(cfg, grid),
                                nudge::r2_ccdf(cfg, grid)};
  ValidationReport report = validate(curves, stats, tolerance, required_fraction);
  report.points.push_back(
      compare("p_swap", 0.0, nudge::p_swap(cfg), stats.swap_fraction_type2, tolerance));
  report.points.push_back(
      compare("mean_response", 0.0, nudge::mean_response(cfg), stats.mean_response, tolerance));
  finish(report, required_fraction);
  return report;
}

}  // namespace nudgek::sim
