// Benchmark CLI: factorize a dataset with a grid of initializers and one
// solver, tracing per-iteration error into CSV (and optionally an SVG plot).

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nmf/bench.hpp"
#include "nmf/dataset.hpp"
#include "nmf/errors.hpp"
#include "nmf/initializers.hpp"
#include "nmf/solvers.hpp"

namespace {

nmf::Dataset load_data(const std::string& arg) {
  const auto colon = arg.find(':');
  const std::string scheme = colon == std::string::npos ? "" : arg.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : arg.substr(colon + 1);
  nmf::Dataset dataset;
  if (scheme == "csv") {
    dataset.matrix = nmf::load_csv_matrix(rest);
  } else if (scheme == "pgm") {
    dataset = nmf::load_pgm_dir(rest);
  } else if (scheme == "synth") {
    unsigned long m = 0, n = 0, r = 0;
    double density = 0.0, noise = 0.0;
    char tail = '\0';
    if (std::sscanf(rest.c_str(), "%lu,%lu,%lu,%lf,%lf%c", &m, &n, &r,
                    &density, &noise, &tail) != 5) {
      throw nmf::Error("synth spec must be m,n,r,density,noise, got '" + rest +
                       "'");
    }
    dataset = nmf::synth_dataset(m, n, r, density, noise, /*seed=*/0);
  } else {
    throw nmf::Error("data must start with csv:, pgm: or synth:, got '" + arg +
                     "'");
  }
  if (scheme != "synth") dataset.name = arg;  // synth names itself
  // The label is a CSV column; keep it comma-free.
  for (char& c : dataset.name) {
    if (c == ',') c = '_';
  }
  return dataset;
}

// Flat key=value config file mirroring the long flags (data=..., max-iter=10).
// Keys already on the command line are skipped, so explicit flags win; the
// rest are injected as --key=value tokens and validated like ordinary flags.
std::vector<std::string> config_tokens(const std::string& path,
                                       const std::vector<std::string>& args) {
  std::ifstream file(path);
  if (!file) throw nmf::Error("cannot read config file '" + path + "'");
  const auto trim = [](const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return std::string();
    return s.substr(begin, s.find_last_not_of(" \t\r") - begin + 1);
  };
  std::vector<std::string> tokens;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw nmf::Error(path + " line " + std::to_string(line_no) +
                       ": expected key=value, got '" + stripped + "'");
    }
    const std::string flag = "--" + trim(stripped.substr(0, eq));
    const auto on_cli = [&flag](const std::string& arg) {
      return arg == flag || arg.rfind(flag + "=", 0) == 0;
    };
    if (std::none_of(args.begin(), args.end(), on_cli)) {
      tokens.push_back(flag + "=" + trim(stripped.substr(eq + 1)));
    }
  }
  return tokens;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NMF initialization benchmark"};
  app.require_subcommand(1);

  CLI::App* list = app.add_subcommand("list-inits",
                                      "print the initializer catalog");
  CLI::App* run = app.add_subcommand("run", "run a benchmark grid");

  std::string data;
  std::size_t rank = 0;
  std::vector<std::string> inits{"random"};
  std::string solver = "sed-mu";
  std::size_t seeds = 10;
  std::uint64_t master_seed = 0;
  std::size_t max_iter = 200;
  double tol = 1e-10;
  std::optional<std::size_t> train_count;
  std::string out_path = "results.csv";
  std::string plot_path;
  std::size_t jobs = 1;
  bool real_timings = false;

  run->add_option("--data", data,
                  "dataset: csv:PATH, pgm:DIR or synth:m,n,r,density,noise")
      ->required();
  run->add_option("--rank", rank,
                  "factorization rank (default: generating rank for synth, "
                  "else 90% spectrum share)");
  run->add_option("--init", inits, "initializers, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  run->add_option("--solver", solver, "sed-mu, kl-mu or anls")
      ->capture_default_str();
  run->add_option("--seeds", seeds, "replicates per seeded initializer")
      ->capture_default_str();
  run->add_option("--master-seed", master_seed, "seed the grid derives from")
      ->capture_default_str();
  run->add_option("--max-iter", max_iter, "iteration cap")
      ->capture_default_str();
  run->add_option("--tol", tol, "successive-product stopping threshold")
      ->capture_default_str();
  run->add_option("--train-count", train_count,
                  "factorize only the first C columns");
  run->add_option("--out", out_path, "CSV output path")->capture_default_str();
  run->add_option("--plot", plot_path, "also write an SVG error plot");
  run->add_option("--jobs", jobs, "concurrent grid cells")
      ->envname("NMFBENCH_JOBS")
      ->capture_default_str();
  run->add_flag("--real-timings", real_timings,
                "record measured elapsed_ms instead of canonical zeros");
  std::string config_path;
  run->add_option("--config", config_path,
                  "flat key=value file mirroring the flags; explicit flags "
                  "override it");

  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    }
  }
  if (!config_path.empty()) {
    try {
      const std::vector<std::string> extra = config_tokens(config_path, args);
      args.insert(args.end(), extra.begin(), extra.end());
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
  }
  try {
    std::reverse(args.begin(), args.end());  // CLI11 consumes back to front
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the failure message
    return code == 0 ? 0 : 1;     // usage errors exit 1
  }

  if (list->parsed()) {
    for (const nmf::Initializer& init : nmf::initializer_registry()) {
      std::printf("%-12s %-13s %s\n", init.name.c_str(),
                  init.deterministic ? "deterministic" : "seeded",
                  init.description.c_str());
    }
    return 0;
  }

  try {
    nmf::RunSpec spec;
    spec.dataset = load_data(data);
    spec.rank = rank == 0 ? nmf::default_rank(spec.dataset) : rank;
    spec.inits = inits;
    spec.solver.kind = nmf::solver_from_name(solver);
    spec.solver.max_iter = max_iter;
    spec.solver.tol = tol;
    spec.seeds = seeds;
    spec.master_seed = master_seed;
    spec.train_count = train_count;
    spec.real_timings = real_timings;
    spec.jobs = jobs;

    const nmf::BenchResult result = nmf::run_benchmark(spec);
    nmf::emit_csv(result.records, out_path);
    if (!plot_path.empty()) nmf::emit_svg_plot(result.records, plot_path);

    for (const nmf::CellFailure& failure : result.failures) {
      std::fprintf(stderr, "cell failed: init=%s seed=%s: %s\n",
                   failure.init.c_str(), failure.seed.c_str(),
                   failure.message.c_str());
    }
    return result.failures.empty() ? 0 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
