#include "pss/driver.hpp"

#include <atomic>
#include <bit>
#include <exception>
#include <future>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

#include "pss/merge.hpp"
#include "pss/wire.hpp"

namespace pss {
namespace {

using Bytes = std::vector<std::byte>;

void require_workers(std::uint32_t p, std::uint64_t n) {
  if (p == 0) throw std::invalid_argument("worker count must be positive");
  if (p > n) {
    throw std::invalid_argument("worker count " + std::to_string(p) +
                                " exceeds stream length " + std::to_string(n));
  }
}

// Every non-root rank sends exactly once, so one promise per sender is the
// whole transport.
class Mailboxes {
 public:
  explicit Mailboxes(std::uint32_t p) : outbox_(p) {
    inbox_.reserve(p);
    for (auto& promise : outbox_) inbox_.push_back(promise.get_future());
  }

  void send(std::uint32_t from, Bytes payload) { outbox_[from].set_value(std::move(payload)); }
  void fail(std::uint32_t from, std::exception_ptr error) {
    outbox_[from].set_exception(std::move(error));
  }
  Bytes receive(std::uint32_t from) { return inbox_[from].get(); }

 private:
  std::vector<std::promise<Bytes>> outbox_;
  std::vector<std::future<Bytes>> inbox_;
};

// Role of one rank in one round.
struct Action {
  bool receive = false;
  std::uint32_t partner = 0;
};

std::vector<std::optional<Action>> schedule_for(const ReductionPlan& plan, std::uint32_t rank) {
  std::vector<std::optional<Action>> actions(plan.rounds.size());
  for (std::size_t r = 0; r < plan.rounds.size(); ++r) {
    for (const auto& t : plan.rounds[r]) {
      if (t.receiver == rank) actions[r] = Action{true, t.sender};
      if (t.sender == rank) actions[r] = Action{false, t.receiver};
    }
  }
  return actions;
}

void record(ReductionTrace* trace, const Summary& sent, std::size_t bytes) {
  if (trace == nullptr) return;
  ++trace->messages;
  trace->counters_shipped += sent.size();
  trace->bytes_shipped += bytes;
}

Summary prepare_local(Summary local, std::uint32_t p, std::uint32_t k, Strategy strategy) {
  if (strategy == Strategy::kAgarwal && p > 1) return agarwal_normalize(local, k);
  return local;
}

FrequentReport root_report(const Summary& global, std::uint64_t n, std::uint32_t k,
                           std::uint32_t p, const RunOptions& options) {
  if (options.strategy == Strategy::kPaper || p == 1) return prune(global, n, k);
  if (options.agarwal_output == AgarwalOutput::kThresholded) {
    FrequentReport report = prune(global, n, k);
    for (auto& e : report.entries) e.guaranteed = false;
    return report;
  }
  FrequentReport report;
  report.threshold = 1;
  for (const Counter& c : global.counters()) {
    report.entries.push_back(ReportEntry{c.item, c.est_freq, c.err, false});
  }
  return report;
}

// Runs p workers; worker `rank` obtains its local summary from make_local.
template <typename MakeLocal>
ParallelResult run_workers(std::uint32_t p, std::uint64_t n, std::uint32_t k,
                           const RunOptions& options, MakeLocal make_local) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  require_workers(p, n);
  const MergeFn step = merge_function(options.strategy);
  ReductionTrace trace;

  if (options.execution == Execution::kSimulated) {
    std::vector<Summary> locals;
    locals.reserve(p);
    for (std::uint32_t rank = 0; rank < p; ++rank) {
      locals.push_back(prepare_local(make_local(rank), p, k, options.strategy));
    }
    Summary global = reduce_tree(locals, k, step, &trace);
    FrequentReport report = root_report(global, n, k, p, options);
    return ParallelResult{std::move(report), std::move(global), trace};
  }

  const ReductionPlan plan = make_reduction_plan(p);
  Mailboxes mail(p);
  std::vector<std::exception_ptr> errors(p);
  std::optional<Summary> global;
  std::atomic<std::uint64_t> messages{0}, counters{0}, bytes{0};

  auto worker = [&](std::uint32_t rank) {
    bool sent = false;
    try {
      Summary local = prepare_local(make_local(rank), p, k, options.strategy);
      for (const auto& action : schedule_for(plan, rank)) {
        if (!action) continue;
        if (action->receive) {
          const Bytes payload = mail.receive(action->partner);
          local = step(local, deserialize(payload), k);
        } else {
          Bytes payload = serialize(local);
          messages.fetch_add(1, std::memory_order_relaxed);
          counters.fetch_add(local.size(), std::memory_order_relaxed);
          bytes.fetch_add(payload.size(), std::memory_order_relaxed);
          sent = true;
          mail.send(rank, std::move(payload));
          return;
        }
      }
      global.emplace(std::move(local));
    } catch (...) {
      errors[rank] = std::current_exception();
      if (rank != 0 && !sent) mail.fail(rank, errors[rank]);
    }
  };

  {
    std::vector<std::jthread> threads;
    threads.reserve(p);
    for (std::uint32_t rank = 0; rank < p; ++rank) threads.emplace_back(worker, rank);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  trace.messages = messages.load();
  trace.counters_shipped = counters.load();
  trace.bytes_shipped = bytes.load();
  FrequentReport report = root_report(*global, n, k, p, options);
  return ParallelResult{std::move(report), std::move(*global), trace};
}

}  // namespace

BlockAssignment block_bounds(std::uint32_t rank, std::uint32_t p, std::uint64_t n) {
  require_workers(p, n);
  if (rank >= p) {
    throw std::invalid_argument("rank " + std::to_string(rank) + " out of range for p=" +
                                std::to_string(p));
  }
  using Wide = unsigned __int128;
  const auto left = static_cast<std::uint64_t>(Wide{rank} * n / p);
  const auto end = static_cast<std::uint64_t>((Wide{rank} + 1) * n / p);
  return BlockAssignment{rank, left, end - 1};
}

ReductionPlan make_reduction_plan(std::uint32_t p) {
  if (p == 0) throw std::invalid_argument("worker count must be positive");
  ReductionPlan plan;
  plan.p = p;
  for (std::uint64_t half = 1; half < p; half *= 2) {
    auto& round = plan.rounds.emplace_back();
    for (std::uint64_t i = 0; i + half < p; i += 2 * half) {
      round.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + half)});
    }
  }
  return plan;
}

std::string_view to_string(Strategy s) {
  return s == Strategy::kPaper ? "paper" : "agarwal";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "paper") return Strategy::kPaper;
  if (name == "agarwal") return Strategy::kAgarwal;
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

MergeFn merge_function(Strategy s) {
  if (s == Strategy::kAgarwal) return agarwal_merge_step;
  return [](const Summary& a, const Summary& b, std::uint32_t k) {
    return merge_step(a, b, k).first;
  };
}

Summary reduce_tree(std::span<const Summary> summaries, std::uint32_t k, const MergeFn& step,
                    ReductionTrace* trace) {
  if (summaries.empty()) throw std::invalid_argument("nothing to reduce");
  for (const Summary& s : summaries) {
    if (s.capacity() != k) {
      throw std::invalid_argument("summary capacity " + std::to_string(s.capacity()) +
                                  " does not match k=" + std::to_string(k));
    }
  }
  std::vector<Summary> held(summaries.begin(), summaries.end());
  const ReductionPlan plan = make_reduction_plan(static_cast<std::uint32_t>(held.size()));
  for (const auto& round : plan.rounds) {
    for (const auto& t : round) {
      const Bytes payload = serialize(held[t.sender]);
      record(trace, held[t.sender], payload.size());
      held[t.receiver] = step(held[t.receiver], deserialize(payload), k);
    }
  }
  return std::move(held.front());
}

std::vector<Summary> local_summaries(std::span<const Item> stream, std::uint32_t p,
                                     std::uint32_t k, Execution execution) {
  require_workers(p, stream.size());
  auto block = [&](std::uint32_t rank) {
    const BlockAssignment b = block_bounds(rank, p, stream.size());
    return process(stream.subspan(b.left, b.size()), k);
  };
  std::vector<std::optional<Summary>> out(p);
  if (execution == Execution::kSimulated) {
    for (std::uint32_t rank = 0; rank < p; ++rank) out[rank].emplace(block(rank));
  } else {
    std::vector<std::exception_ptr> errors(p);
    {
      std::vector<std::jthread> threads;
      for (std::uint32_t rank = 0; rank < p; ++rank) {
        threads.emplace_back([&, rank] {
          try {
            out[rank].emplace(block(rank));
          } catch (...) {
            errors[rank] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<Summary> result;
  result.reserve(p);
  for (auto& s : out) result.push_back(std::move(*s));
  return result;
}

ParallelResult reduce_locals(std::vector<Summary> locals, std::uint64_t n, std::uint32_t k,
                             const RunOptions& options) {
  if (locals.empty()) throw std::invalid_argument("nothing to reduce");
  const auto p = static_cast<std::uint32_t>(locals.size());
  return run_workers(p, n, k, options,
                     [&](std::uint32_t rank) { return std::move(locals[rank]); });
}

ParallelResult run_parallel(std::span<const Item> stream, std::uint32_t p, std::uint32_t k,
                            const RunOptions& options) {
  return run_workers(p, stream.size(), k, options, [&](std::uint32_t rank) {
    const BlockAssignment b = block_bounds(rank, p, stream.size());
    return process(stream.subspan(b.left, b.size()), k);
  });
}

}  // namespace pss
