#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "pss/summary.hpp"

namespace pss {

// Inclusive index range [left, right] of the stream handled by one worker.
struct BlockAssignment {
  std::uint32_t rank = 0;
  std::uint64_t left = 0;
  std::uint64_t right = 0;

  std::uint64_t size() const { return right + 1 - left; }
};

// left = floor(rank*n/p), right = floor((rank+1)*n/p) - 1, so every block
// holds floor(n/p) or ceil(n/p) items. Throws std::invalid_argument unless
// 0 <= rank < p <= n.
BlockAssignment block_bounds(std::uint32_t rank, std::uint32_t p, std::uint64_t n);

// Binary-tree schedule. In round r (1-based) rank i receives from
// i + 2^(r-1) whenever i is a multiple of 2^r and the sender exists.
struct ReductionPlan {
  struct Transfer {
    std::uint32_t receiver = 0;
    std::uint32_t sender = 0;
  };
  std::uint32_t p = 0;
  std::vector<std::vector<Transfer>> rounds;
};

ReductionPlan make_reduction_plan(std::uint32_t p);

enum class Strategy { kPaper, kAgarwal };

std::string_view to_string(Strategy s);
// Accepts "paper" and "agarwal"; throws std::invalid_argument otherwise.
Strategy parse_strategy(std::string_view name);

// How p logical workers are executed. Both modes ship serialized summaries
// along the same plan and produce bit-identical results.
enum class Execution { kThreads, kSimulated };

// What the root returns for the baseline strategy: every surviving counter
// (the baseline's own output), or only those reaching floor(n/k) + 1.
enum class AgarwalOutput { kCandidates, kThresholded };

struct RunOptions {
  Strategy strategy = Strategy::kPaper;
  Execution execution = Execution::kThreads;
  AgarwalOutput agarwal_output = AgarwalOutput::kCandidates;
};

struct ReductionTrace {
  std::uint64_t messages = 0;
  std::uint64_t counters_shipped = 0;
  std::uint64_t bytes_shipped = 0;
};

struct ParallelResult {
  FrequentReport report;
  Summary global;
  ReductionTrace trace;
};

using MergeFn = std::function<Summary(const Summary&, const Summary&, std::uint32_t)>;

// Merge function for a strategy: merge_step (dropping the stats) or
// agarwal_merge_step.
MergeFn merge_function(Strategy s);

// Applies the fixed reduction tree to one summary per rank and returns what
// rank 0 ends up holding. Runs in the calling thread; messages go through
// the wire format. Throws std::invalid_argument on empty input or mismatched
// capacities.
Summary reduce_tree(std::span<const Summary> summaries, std::uint32_t k, const MergeFn& step,
                    ReductionTrace* trace = nullptr);

// Space Saving on every block, in parallel when options.execution is
// kThreads.
std::vector<Summary> local_summaries(std::span<const Item> stream, std::uint32_t p,
                                     std::uint32_t k, Execution execution);

// Reduces per-rank summaries covering a stream of length n and builds the
// root's report. For the baseline strategy each local summary is normalized
// first, except when p = 1 where no reduction takes place.
ParallelResult reduce_locals(std::vector<Summary> locals, std::uint64_t n, std::uint32_t k,
                             const RunOptions& options);

// The whole pipeline: block decomposition, local Space Saving, tree
// reduction, final pruning at rank 0. Requires k >= 2 and 1 <= p <= n.
ParallelResult run_parallel(std::span<const Item> stream, std::uint32_t p, std::uint32_t k,
                            const RunOptions& options);

}  // namespace pss
