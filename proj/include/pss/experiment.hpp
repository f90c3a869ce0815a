#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pss/datagen.hpp"
#include "pss/driver.hpp"
#include "pss/eval.hpp"

namespace pss {

// Divisors applied to the full-size error-experiment grids (n up to 10^9,
// k in thousands) to get desk-scale presets.
struct ExperimentScale {
  double n_divisor = 100.0;
  double k_divisor = 10.0;
};

struct ExperimentCell {
  std::uint64_t n = 0;
  std::uint32_t k = 0;
  double rho = 0.0;
};

struct ExperimentConfig {
  std::string preset;
  std::vector<ExperimentCell> cells;
  Family family = Family::kZipf;
  SkewForm form = SkewForm::kRho;
  double a = 0.5;
  std::uint64_t universe = 1'000'000;
  std::uint32_t p = 8;
  std::vector<Strategy> strategies{Strategy::kPaper, Strategy::kAgarwal};
  AgarwalOutput agarwal_output = AgarwalOutput::kCandidates;
  std::uint32_t seeds = 20;
  std::uint64_t seed_base = 1;
  unsigned jobs = 1;
};

// exp1: k sweep at fixed n and rho = 1.5; exp2: n sweep at fixed k and
// rho = 1.5; exp3: rho in {0.5, ..., 3.0} at fixed n and k. Throws
// std::invalid_argument for an unknown name or non-positive divisors.
ExperimentConfig make_preset(const std::string& name, const ExperimentScale& scale = {});

struct RunRecord {
  std::uint64_t run_id = 0;
  std::size_t cell = 0;
  Strategy strategy = Strategy::kPaper;
  std::uint64_t seed = 0;
  MetricsReport metrics;
};

struct CellAggregate {
  ExperimentCell cell;
  Strategy strategy = Strategy::kPaper;
  std::size_t runs = 0;
  CiSummary total_error;
  // Runs with nothing reported and nothing frequent are left out;
  // precision_runs counts the rest. NaN mean when none remain.
  CiSummary precision;
  CiSummary recall;
  CiSummary are;
  bool failed = false;
  std::string error;
};

struct ExperimentResult {
  std::vector<RunRecord> runs;  // ordered by run_id
  std::vector<CellAggregate> cells;  // cell-major, then strategy
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Aggregates samples into a CI; NaN fields when there are fewer than two.
CiSummary summarize(const std::vector<double>& samples);

void write_runs_csv(std::ostream& out, const ExperimentConfig& config,
                    const ExperimentResult& result);
void write_aggregate_csv(std::ostream& out, const ExperimentConfig& config,
                         const ExperimentResult& result);

}  // namespace pss
