// Command-line front end: stream generation, single runs and experiment
// sweeps.
//
//   pss gen --family zipf --rho 1.5 --universe 1000 --n 100000 --seed 7 --out s.u32
//   pss run --input s.u32 --k 50 --p 4 --strategy paper --oracle s.manifest.csv
//   pss experiment --preset exp3 --runs-out runs.csv --aggregate-out agg.csv

#include <zlib.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "pss/datagen.hpp"
#include "pss/driver.hpp"
#include "pss/eval.hpp"
#include "pss/experiment.hpp"
#include "pss/stream_io.hpp"
#include "pss/wire.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kUsage = 2;

// Bad flags or unreadable inputs; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GeneratorFlags {
  std::string family = "zipf";
  std::string skew_form = "rho+1";
  double rho = 0.0;
  double a = 0.5;
  std::uint64_t universe = 1'000'000;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;

  void add_to(CLI::App& cmd, bool required) {
    auto* r = cmd.add_option("--rho", rho, "Skew parameter (> 0)");
    auto* n_opt = cmd.add_option("--n", n, "Stream length");
    if (required) {
      r->required();
      n_opt->required();
    }
    cmd.add_option("--family", family, "zipf or hurwitz")->capture_default_str();
    cmd.add_option("--skew-form", skew_form, "Rank exponent: rho+1 or rho")->capture_default_str();
    cmd.add_option("--a", a, "Hurwitz shift (> 0)")->capture_default_str();
    cmd.add_option("--universe", universe, "Number of distinct ranks")->capture_default_str();
    cmd.add_option("--seed", seed, "PRNG seed")->capture_default_str();
  }

  pss::DistSpec spec() const {
    pss::DistSpec s;
    s.family = pss::parse_family(family);
    s.form = pss::parse_skew_form(skew_form);
    s.rho = rho;
    s.a = a;
    s.universe = universe;
    s.seed = seed;
    pss::validate(s);
    return s;
  }
};

std::uint32_t file_crc32(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::vector<char> buf(1 << 16);
  uLong crc = crc32(0L, Z_NULL, 0);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(buf.data()), static_cast<uInt>(in.gcount()));
  }
  return static_cast<std::uint32_t>(crc);
}

fs::path default_manifest_path(const fs::path& stream) {
  fs::path out = stream;
  out.replace_extension(".manifest.csv");
  return out;
}

template <typename F>
auto as_input(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw UsageError(what + ": " + e.what());
  }
}

int cmd_gen(const GeneratorFlags& flags, const std::string& out, const std::string& manifest,
            bool no_manifest) {
  const pss::DistSpec spec = as_input("invalid generator flags", [&] { return flags.spec(); });
  const fs::path out_path(out);
  if (out_path.extension() != ".u32" && out_path.extension() != ".txt") {
    throw UsageError("--out must end in .u32 or .txt");
  }
  const std::vector<pss::Item> stream = pss::sample_stream(spec, flags.n);
  pss::write_stream(out_path, stream);
  std::cout << "stream " << out_path.string() << '\n';
  if (!no_manifest) {
    const fs::path m = manifest.empty() ? default_manifest_path(out_path) : fs::path(manifest);
    pss::write_manifest(m, pss::exact_frequencies(stream));
    std::cout << "manifest " << m.string() << '\n';
  }
  char crc[16];
  std::snprintf(crc, sizeof(crc), "%08x", file_crc32(out_path));
  std::cout << "items " << stream.size() << '\n' << "crc32 " << crc << '\n';
  return kOk;
}

struct RunFlags {
  std::string input;
  GeneratorFlags gen;
  std::uint32_t k = 0;
  std::uint32_t p = 1;
  std::string strategy = "paper";
  std::string oracle;
  std::string metrics_out;
  std::string summary_out;
  bool agarwal_threshold = false;
  bool simulate = false;
};

void print_report(std::ostream& out, const pss::FrequentReport& report, std::uint64_t n,
                  std::uint32_t k, std::uint32_t p) {
  std::vector<pss::ReportEntry> rows = report.entries;
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.est_freq != b.est_freq) return a.est_freq > b.est_freq;
    return a.item < b.item;
  });
  out << "# n=" << n << " k=" << k << " p=" << p << " threshold=" << report.threshold
      << " reported=" << rows.size() << '\n';
  out << "item,est_freq,err,guaranteed\n";
  for (const auto& e : rows) {
    out << e.item << ',' << e.est_freq << ',' << e.err << ',' << (e.guaranteed ? 1 : 0) << '\n';
  }
}

int cmd_run(const RunFlags& f, bool generator_given) {
  if (f.input.empty() == !generator_given) {
    throw UsageError("give exactly one of --input or the generator flags (--rho, --n, ...)");
  }
  if (f.k < 2) throw UsageError("--k must be at least 2");
  if (f.p < 1) throw UsageError("--p must be at least 1");
  const bool sequential = f.strategy == "sequential";
  std::optional<pss::Strategy> strategy;
  if (!sequential) strategy = as_input("invalid --strategy", [&] { return pss::parse_strategy(f.strategy); });
  if (sequential && f.p != 1) throw UsageError("the sequential strategy runs with --p 1");

  std::vector<pss::Item> stream;
  std::optional<pss::FrequencyTable> oracle;
  std::optional<pss::DistSpec> spec;
  if (generator_given) {
    if (f.gen.rho <= 0.0 || f.gen.n == 0) throw UsageError("generator needs --rho > 0 and --n > 0");
    spec = as_input("invalid generator flags", [&] { return f.gen.spec(); });
    stream = pss::sample_stream(*spec, f.gen.n);
    oracle = pss::exact_frequencies(stream);
  } else {
    stream = as_input("cannot read input", [&] { return pss::read_stream(f.input); });
  }
  if (!f.oracle.empty()) {
    oracle = as_input("cannot read oracle", [&] { return pss::read_manifest(f.oracle); });
    if (oracle->total() != stream.size()) {
      throw UsageError("oracle covers " + std::to_string(oracle->total()) +
                       " items but the stream has " + std::to_string(stream.size()));
    }
  }
  if (stream.empty()) throw UsageError("input stream is empty");
  if (f.p > stream.size()) throw UsageError("--p exceeds the stream length");

  pss::FrequentReport report;
  std::optional<pss::Summary> global;
  if (sequential) {
    global = pss::process(stream, f.k);
    report = pss::prune(*global, stream.size(), f.k);
  } else {
    pss::RunOptions options;
    options.strategy = *strategy;
    options.execution = f.simulate ? pss::Execution::kSimulated : pss::Execution::kThreads;
    options.agarwal_output =
        f.agarwal_threshold ? pss::AgarwalOutput::kThresholded : pss::AgarwalOutput::kCandidates;
    pss::ParallelResult r = pss::run_parallel(stream, f.p, f.k, options);
    report = std::move(r.report);
    global = std::move(r.global);
  }

  print_report(std::cout, report, stream.size(), f.k, f.p);

  if (!f.summary_out.empty()) {
    const auto bytes = pss::serialize(*global);
    std::ofstream out(f.summary_out, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing " + f.summary_out);
  }

  if (oracle) {
    const pss::MetricsReport m = pss::score(report, *oracle, f.k);
    std::ostringstream csv;
    csv << "run_id,strategy,p,n,k,rho,a,total_error,precision,recall,are\n";
    csv << 0 << ',' << f.strategy << ',' << f.p << ',' << stream.size() << ',' << f.k << ',';
    if (spec) {
      csv << spec->rho << ',' << (spec->family == pss::Family::kHurwitz ? spec->a : 0.0);
    } else {
      csv << ',';
    }
    csv << ',' << m.total_error << ',' << m.precision << ',' << m.recall << ',' << m.are << '\n';
    if (f.metrics_out.empty()) {
      std::cout << '\n' << csv.str();
    } else {
      std::ofstream out(f.metrics_out, std::ios::trunc);
      out << csv.str();
      if (!out) throw std::runtime_error("failed writing " + f.metrics_out);
    }
  }
  return kOk;
}

struct ExperimentFlags {
  std::string preset;
  std::optional<double> scale;
  double k_scale = 10.0;
  std::vector<std::string> strategies{"paper", "agarwal"};
  std::uint32_t p = 8;
  std::uint32_t seeds = 20;
  std::uint64_t seed_base = 1;
  std::string family = "zipf";
  std::string skew_form = "rho";
  double a = 0.5;
  std::uint64_t universe = 1'000'000;
  unsigned jobs = 0;
  std::vector<std::uint64_t> n_values;
  std::vector<std::uint32_t> k_values;
  std::vector<double> rho_values;
  std::string runs_out;
  std::string aggregate_out;
  bool agarwal_threshold = false;
};

double scale_from_env() {
  const char* env = std::getenv("SS_DEFAULT_SCALE");
  if (env == nullptr || *env == '\0') return 100.0;
  try {
    std::size_t used = 0;
    const double v = std::stod(env, &used);
    if (used != std::string(env).size() || !(v > 0.0)) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("SS_DEFAULT_SCALE must be a positive number, got '") + env + "'");
  }
}

template <typename T>
std::vector<T> distinct_in_order(std::vector<T> values) {
  std::vector<T> out;
  for (const T& v : values) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

int cmd_experiment(const ExperimentFlags& f) {
  pss::ExperimentScale scale;
  scale.n_divisor = f.scale ? *f.scale : scale_from_env();
  scale.k_divisor = f.k_scale;
  pss::ExperimentConfig config =
      as_input("invalid preset", [&] { return pss::make_preset(f.preset, scale); });

  // Overrides replace the matching axis; presets sweep one axis at a time,
  // so the product of distinct values reproduces the original grid.
  std::vector<std::uint64_t> ns;
  std::vector<std::uint32_t> ks;
  std::vector<double> rhos;
  for (const auto& c : config.cells) {
    ns.push_back(c.n);
    ks.push_back(c.k);
    rhos.push_back(c.rho);
  }
  ns = distinct_in_order(f.n_values.empty() ? ns : f.n_values);
  ks = distinct_in_order(f.k_values.empty() ? ks : f.k_values);
  rhos = distinct_in_order(f.rho_values.empty() ? rhos : f.rho_values);
  config.cells.clear();
  for (double rho : rhos) {
    for (auto n : ns) {
      for (auto k : ks) {
        if (k < 2 || n == 0 || rho <= 0.0) throw UsageError("grid values need k >= 2, n >= 1, rho > 0");
        if (n < f.p) throw UsageError("n must be at least --p");
        config.cells.push_back({n, k, rho});
      }
    }
  }

  config.strategies.clear();
  for (const auto& s : f.strategies) {
    config.strategies.push_back(as_input("invalid --strategies", [&] { return pss::parse_strategy(s); }));
  }
  config.family = as_input("invalid --family", [&] { return pss::parse_family(f.family); });
  config.form = as_input("invalid --skew-form", [&] { return pss::parse_skew_form(f.skew_form); });
  config.a = f.a;
  config.universe = f.universe;
  config.p = f.p;
  config.seeds = f.seeds;
  config.seed_base = f.seed_base;
  config.jobs = f.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : f.jobs;
  config.agarwal_output =
      f.agarwal_threshold ? pss::AgarwalOutput::kThresholded : pss::AgarwalOutput::kCandidates;
  if (config.p < 1 || config.seeds < 1) throw UsageError("--p and --seeds must be positive");
  as_input("invalid distribution", [&] {
    pss::DistSpec probe;
    probe.family = config.family;
    probe.a = config.a;
    probe.universe = config.universe;
    probe.rho = 1.0;
    pss::validate(probe);
    return 0;
  });

  std::cerr << "experiment " << config.preset << ": " << config.cells.size() << " cells x "
            << config.strategies.size() << " strategies x " << config.seeds << " seeds = "
            << config.cells.size() * config.strategies.size() * config.seeds << " runs\n";
  const pss::ExperimentResult result = pss::run_experiment(config);

  if (!f.runs_out.empty()) {
    std::ofstream out(f.runs_out, std::ios::trunc);
    pss::write_runs_csv(out, config, result);
    if (!out) throw std::runtime_error("failed writing " + f.runs_out);
  }
  if (f.aggregate_out.empty()) {
    pss::write_aggregate_csv(std::cout, config, result);
  } else {
    std::ofstream out(f.aggregate_out, std::ios::trunc);
    pss::write_aggregate_csv(out, config, result);
    if (!out) throw std::runtime_error("failed writing " + f.aggregate_out);
  }
  bool failed = false;
  for (const auto& c : result.cells) {
    if (c.failed) {
      std::cerr << "cell n=" << c.cell.n << " k=" << c.cell.k << " rho=" << c.cell.rho
                << " failed: " << c.error << '\n';
      failed = true;
    }
  }
  return failed ? kInternal : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel Space Saving heavy hitters toolkit"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate a synthetic stream and its manifest");
  GeneratorFlags gen_flags;
  gen_flags.add_to(*gen, true);
  std::string gen_out, gen_manifest;
  bool no_manifest = false;
  gen->add_option("--out", gen_out, "Stream file (.u32 or .txt)")->required();
  gen->add_option("--manifest", gen_manifest, "Manifest path (default <stem>.manifest.csv beside the stream)");
  gen->add_flag("--no-manifest", no_manifest, "Skip the manifest");

  auto* run = app.add_subcommand("run", "Find frequent items in a stream");
  RunFlags run_flags;
  run->add_option("--input", run_flags.input, "Stream file (.u32 or .txt)");
  run_flags.gen.add_to(*run, false);
  run->add_option("--k", run_flags.k, "k-majority parameter (>= 2)")->required();
  run->add_option("--p", run_flags.p, "Logical workers")->capture_default_str();
  run->add_option("--strategy", run_flags.strategy, "sequential, paper or agarwal")
      ->capture_default_str();
  run->add_option("--oracle", run_flags.oracle, "Manifest with exact counts");
  run->add_option("--metrics-out", run_flags.metrics_out, "Metrics CSV path");
  run->add_option("--summary-out", run_flags.summary_out, "Write the global summary (SSS1)");
  run->add_flag("--agarwal-threshold", run_flags.agarwal_threshold,
                "Filter the baseline report at floor(n/k)+1");
  run->add_flag("--simulate", run_flags.simulate, "Single-threaded reduction simulator");

  auto* exp = app.add_subcommand("experiment", "Run a scaled error-experiment sweep");
  ExperimentFlags exp_flags;
  exp->add_option("--preset", exp_flags.preset, "exp1, exp2 or exp3")->required();
  exp->add_option("--scale", exp_flags.scale, "Divisor for n (default $SS_DEFAULT_SCALE or 100)");
  exp->add_option("--k-scale", exp_flags.k_scale, "Divisor for k")->capture_default_str();
  exp->add_option("--strategies", exp_flags.strategies, "Strategies to compare")
      ->delimiter(',')
      ->capture_default_str();
  exp->add_option("--p", exp_flags.p, "Logical workers")->capture_default_str();
  exp->add_option("--seeds", exp_flags.seeds, "Runs per cell")->capture_default_str();
  exp->add_option("--seed-base", exp_flags.seed_base, "First seed")->capture_default_str();
  exp->add_option("--family", exp_flags.family, "zipf or hurwitz")->capture_default_str();
  exp->add_option("--skew-form", exp_flags.skew_form, "Rank exponent: rho or rho+1")
      ->capture_default_str();
  exp->add_option("--a", exp_flags.a, "Hurwitz shift")->capture_default_str();
  exp->add_option("--universe", exp_flags.universe, "Distinct ranks")->capture_default_str();
  exp->add_option("--jobs", exp_flags.jobs, "Concurrent seeds (0 = all cores)");
  exp->add_option("--n", exp_flags.n_values, "Override the n axis")->delimiter(',');
  exp->add_option("--k", exp_flags.k_values, "Override the k axis")->delimiter(',');
  exp->add_option("--rho", exp_flags.rho_values, "Override the rho axis")->delimiter(',');
  exp->add_option("--runs-out", exp_flags.runs_out, "Per-run CSV path");
  exp->add_option("--aggregate-out", exp_flags.aggregate_out, "Aggregate CSV (default stdout)");
  exp->add_flag("--agarwal-threshold", exp_flags.agarwal_threshold,
                "Filter the baseline report at floor(n/k)+1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_flags, gen_out, gen_manifest, no_manifest);
    if (run->parsed()) {
      const bool generator_given = run->count("--rho") > 0 || run->count("--n") > 0;
      return cmd_run(run_flags, generator_given);
    }
    if (exp->parsed()) return cmd_experiment(exp_flags);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
