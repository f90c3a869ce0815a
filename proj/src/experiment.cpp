#include "pss/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace pss {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t scaled_n(double full, const ExperimentScale& s) {
  return static_cast<std::uint64_t>(std::llround(full / s.n_divisor));
}

std::uint32_t scaled_k(double full, const ExperimentScale& s) {
  return static_cast<std::uint32_t>(std::max<long long>(2, std::llround(full / s.k_divisor)));
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

double shift_of(const ExperimentConfig& c) { return c.family == Family::kHurwitz ? c.a : 0.0; }

}  // namespace

ExperimentConfig make_preset(const std::string& name, const ExperimentScale& scale) {
  if (!(scale.n_divisor > 0.0) || !(scale.k_divisor > 0.0)) {
    throw std::invalid_argument("experiment scale divisors must be positive");
  }
  ExperimentConfig c;
  c.preset = name;
  if (name == "exp1") {
    for (int k = 1000; k <= 10000; k += 1000) {
      c.cells.push_back({scaled_n(500e6, scale), scaled_k(k, scale), 1.5});
    }
  } else if (name == "exp2") {
    for (int n = 100; n <= 1000; n += 100) {
      c.cells.push_back({scaled_n(n * 1e6, scale), scaled_k(2000, scale), 1.5});
    }
  } else if (name == "exp3") {
    for (int r = 1; r <= 6; ++r) {
      c.cells.push_back({scaled_n(500e6, scale), scaled_k(2000, scale), 0.5 * r});
    }
  } else {
    throw std::invalid_argument("unknown experiment preset '" + name + "'");
  }
  return c;
}

CiSummary summarize(const std::vector<double>& samples) {
  if (samples.size() >= 2) return confidence_interval(samples);
  if (samples.size() == 1) return CiSummary{samples.front(), kNaN, 1};
  return CiSummary{kNaN, kNaN, 0};
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.cells.empty()) throw std::invalid_argument("experiment has no cells");
  if (config.strategies.empty()) throw std::invalid_argument("experiment has no strategies");
  if (config.seeds == 0) throw std::invalid_argument("experiment needs at least one seed");

  const std::size_t n_cells = config.cells.size();
  const std::size_t n_strategies = config.strategies.size();
  const std::size_t n_seeds = config.seeds;

  // Cells sharing a skew share the generated stream; smaller n are prefixes.
  std::map<double, std::vector<std::size_t>> by_rho;
  for (std::size_t i = 0; i < n_cells; ++i) by_rho[config.cells[i].rho].push_back(i);
  std::vector<std::pair<std::unique_ptr<RankDistribution>, std::vector<std::size_t>>> groups;
  for (auto& [rho, cells] : by_rho) {
    DistSpec spec;
    spec.family = config.family;
    spec.rho = rho;
    spec.a = config.a;
    spec.universe = config.universe;
    spec.form = config.form;
    groups.emplace_back(std::make_unique<RankDistribution>(spec), cells);
  }

  std::vector<std::optional<MetricsReport>> slots(n_cells * n_strategies * n_seeds);
  auto slot_of = [&](std::size_t cell, std::size_t strategy, std::size_t seed) {
    return (cell * n_strategies + strategy) * n_seeds + seed;
  };
  std::vector<std::string> cell_errors(n_cells);
  std::mutex error_mutex;

  const std::size_t tasks = groups.size() * n_seeds;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks;) {
      const auto& [dist, cells] = groups[t / n_seeds];
      const std::size_t seed_index = t % n_seeds;
      const std::uint64_t seed = config.seed_base + seed_index;
      std::uint64_t max_n = 0;
      for (std::size_t c : cells) max_n = std::max(max_n, config.cells[c].n);
      std::vector<Item> stream;
      try {
        stream = dist->sample_stream(max_n, seed);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        for (std::size_t c : cells) cell_errors[c] = e.what();
        continue;
      }
      for (std::size_t c : cells) {
        const ExperimentCell& cell = config.cells[c];
        try {
          const std::span<const Item> prefix(stream.data(), cell.n);
          const FrequencyTable table = exact_frequencies(prefix);
          const std::vector<Summary> locals =
              local_summaries(prefix, config.p, cell.k, Execution::kSimulated);
          for (std::size_t s = 0; s < n_strategies; ++s) {
            RunOptions options;
            options.strategy = config.strategies[s];
            options.execution = Execution::kSimulated;
            options.agarwal_output = config.agarwal_output;
            const ParallelResult r = reduce_locals(locals, cell.n, cell.k, options);
            slots[slot_of(c, s, seed_index)] = score(r.report, table, cell.k);
          }
        } catch (const std::exception& e) {
          std::lock_guard lock(error_mutex);
          cell_errors[c] = e.what();
        }
      }
    }
  };
  {
    const unsigned jobs = std::max(1u, config.jobs);
    std::vector<std::jthread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(work);
    work();
  }

  ExperimentResult result;
  for (std::size_t c = 0; c < n_cells; ++c) {
    for (std::size_t s = 0; s < n_strategies; ++s) {
      CellAggregate agg;
      agg.cell = config.cells[c];
      agg.strategy = config.strategies[s];
      agg.failed = !cell_errors[c].empty();
      agg.error = cell_errors[c];
      std::vector<double> total_error, precision, recall, are;
      for (std::size_t seed = 0; seed < n_seeds; ++seed) {
        const auto& m = slots[slot_of(c, s, seed)];
        if (!m) continue;
        if (!agg.failed) {
          result.runs.push_back(RunRecord{slot_of(c, s, seed), c, config.strategies[s],
                                          config.seed_base + seed, *m});
        }
        total_error.push_back(static_cast<double>(m->total_error));
        if (m->reported > 0 || m->true_frequent > 0) precision.push_back(m->precision);
        recall.push_back(m->recall);
        are.push_back(m->are);
      }
      if (agg.failed) {
        agg.total_error = agg.precision = agg.recall = agg.are = summarize({});
      } else {
        agg.runs = total_error.size();
        agg.total_error = summarize(total_error);
        agg.precision = summarize(precision);
        agg.recall = summarize(recall);
        agg.are = summarize(are);
      }
      result.cells.push_back(std::move(agg));
    }
  }
  return result;
}

void write_runs_csv(std::ostream& out, const ExperimentConfig& config,
                    const ExperimentResult& result) {
  out << "run_id,strategy,p,n,k,rho,a,total_error,precision,recall,are\n";
  for (const RunRecord& r : result.runs) {
    const ExperimentCell& cell = config.cells[r.cell];
    out << r.run_id << ',' << to_string(r.strategy) << ',' << config.p << ',' << cell.n << ','
        << cell.k << ',' << num(cell.rho) << ',' << num(shift_of(config)) << ','
        << r.metrics.total_error << ',' << num(r.metrics.precision) << ','
        << num(r.metrics.recall) << ',' << num(r.metrics.are) << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const ExperimentConfig& config,
                         const ExperimentResult& result) {
  out << "strategy,p,n,k,rho,a,runs,total_error,total_error_ci_half_width,precision,"
         "precision_ci_half_width,precision_runs,recall,recall_ci_half_width,are,"
         "are_ci_half_width,status\n";
  for (const CellAggregate& c : result.cells) {
    out << to_string(c.strategy) << ',' << config.p << ',' << c.cell.n << ',' << c.cell.k << ','
        << num(c.cell.rho) << ',' << num(shift_of(config)) << ',' << c.runs << ','
        << num(c.total_error.mean) << ',' << num(c.total_error.half_width) << ','
        << num(c.precision.mean) << ',' << num(c.precision.half_width) << ','
        << c.precision.runs << ',' << num(c.recall.mean) << ',' << num(c.recall.half_width)
        << ',' << num(c.are.mean) << ',' << num(c.are.half_width) << ','
        << (c.failed ? "failed" : "ok") << '\n';
  }
}

}  // namespace pss
