#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nmf/dataset.hpp"
#include "nmf/solvers.hpp"

namespace nmf {

// One benchmark request: a grid of (initializer x replicate) cells over a
// single dataset and solver.
struct RunSpec {
  Dataset dataset;
  std::size_t rank = 0;
  std::vector<std::string> inits;
  SolverConfig solver;
  std::size_t seeds = 10;         // replicates for seeded initializers
  std::uint64_t master_seed = 0;
  std::optional<std::size_t> train_count;  // factorize only the first C columns
  bool real_timings = false;      // measured ms instead of canonical zeros
  std::size_t jobs = 1;           // concurrent cells
};

// One traced iteration of one run. `seed` is a label: the replicate index
// for seeded initializers, "-" for deterministic ones, "mean" for the
// per-iteration average over replicates.
struct RunRecord {
  std::string dataset;
  std::string init;
  std::string solver;
  std::string seed;
  std::size_t iteration = 0;
  double objective = 0.0;
  double rel_error = 0.0;
  double elapsed_ms = 0.0;
  std::string stop_reason;
};

struct CellFailure {
  std::string init;
  std::string seed;
  std::string message;
};

struct BenchResult {
  std::vector<RunRecord> records;
  std::vector<CellFailure> failures;
};

// Rank to use when none is requested: the generating rank for synthetic
// data, otherwise the spectrum prefix covering kSpectrumShare of the
// singular-value mass.
std::size_t default_rank(const Dataset& dataset);

// Runs every cell, isolating failures (a failing cell is recorded and
// skipped, the rest of the grid proceeds). Cells may execute concurrently
// up to spec.jobs; output order is canonical (initializers as listed, then
// replicate index, then iteration, with the mean rows after each seeded
// initializer's replicates) regardless of scheduling. Each cell's RNG seed
// derives from (master seed, dataset name, init, solver, replicate).
BenchResult run_benchmark(const RunSpec& spec);

// Header exactly: dataset,init,solver,seed,iteration,objective,rel_error,
// elapsed_ms,stop_reason. Floats carry 10 significant digits.
void emit_csv(const std::vector<RunRecord>& records, const std::string& path);

// Inverse of emit_csv (used by the round-trip tests).
std::vector<RunRecord> parse_csv(const std::string& path);

// Static self-contained plot: relative error vs iteration, one polyline per
// initializer (mean rows when present, the single run otherwise), legend,
// optionally log-scale y.
void emit_svg_plot(const std::vector<RunRecord>& records,
                   const std::string& path, bool log_y = true);

}  // namespace nmf
