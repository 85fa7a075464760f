#include "nmf/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "nmf/errors.hpp"
#include "nmf/init_lowrank.hpp"
#include "nmf/initializers.hpp"
#include "nmf/linalg.hpp"
#include "nmf/rng.hpp"

namespace nmf {
namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

const char* stop_label(StopReason reason) {
  return reason == StopReason::Converged ? "tol" : "max-iter";
}

Dataset training_slice(const Dataset& dataset, std::size_t count) {
  if (count == 0 || count > dataset.matrix.cols()) {
    throw DomainError("training count " + std::to_string(count) +
                      " out of range [1, " +
                      std::to_string(dataset.matrix.cols()) + "]");
  }
  Dataset out;
  out.matrix = DenseMatrix(dataset.matrix.rows(), count);
  for (std::size_t j = 0; j < count; ++j) {
    out.matrix.set_column(j, dataset.matrix.column(j));
  }
  out.name = dataset.name;
  out.image_shape = dataset.image_shape;
  return out;
}

struct Cell {
  std::size_t init_index = 0;  // position in spec.inits
  std::size_t replicate = 0;
  bool deterministic = false;
};

}  // namespace

std::size_t default_rank(const Dataset& dataset) {
  if (dataset.truth) return dataset.truth->first.cols();
  const std::size_t full =
      std::min(dataset.matrix.rows(), dataset.matrix.cols());
  const TruncatedSvd svd = truncated_svd(dataset.matrix, full);
  return select_rank_90(svd.sigma);
}

BenchResult run_benchmark(const RunSpec& spec) {
  if (spec.seeds == 0) throw DomainError("need at least one replicate seed");
  if (spec.inits.empty()) throw DomainError("no initializers requested");
  std::vector<const Initializer*> inits;
  for (const std::string& name : spec.inits) {
    inits.push_back(&find_initializer(name));
  }
  const Dataset working = spec.train_count
                              ? training_slice(spec.dataset, *spec.train_count)
                              : spec.dataset;
  const std::size_t max_rank =
      std::min(working.matrix.rows(), working.matrix.cols());
  if (spec.rank == 0 || spec.rank > max_rank) {
    throw BadRank("rank " + std::to_string(spec.rank) +
                  " out of range [1, " + std::to_string(max_rank) + "]");
  }
  const std::string solver = solver_name(spec.solver.kind);

  std::vector<Cell> cells;
  for (std::size_t i = 0; i < inits.size(); ++i) {
    const std::size_t reps = inits[i]->deterministic ? 1 : spec.seeds;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      cells.push_back({i, rep, inits[i]->deterministic});
    }
  }

  std::vector<std::vector<RunRecord>> slots(cells.size());
  std::vector<std::optional<CellFailure>> failed(cells.size());

  const auto run_cell = [&](std::size_t c) {
    const Cell& cell = cells[c];
    const Initializer& init = *inits[cell.init_index];
    const std::uint64_t seed = derive_seed(
        spec.master_seed, {working.name, init.name, solver}, cell.replicate);
    const std::string label =
        cell.deterministic ? "-" : std::to_string(cell.replicate);
    try {
      const FactorPair start = init.build(working, spec.rank, seed);
      const NmfResult result = run_nmf(working.matrix, start, spec.solver);
      const char* reason = stop_label(result.trace.stop_reason);
      for (const IterationPoint& point : result.trace.points) {
        slots[c].push_back({working.name, init.name, solver, label,
                            point.iteration, point.objective, point.rel_error,
                            spec.real_timings ? point.elapsed_ms : 0.0,
                            reason});
      }
    } catch (const std::exception& e) {
      failed[c] = CellFailure{init.name, label, e.what()};
    }
  };

  if (spec.jobs > 1) {
#pragma omp parallel for schedule(dynamic) \
    num_threads(static_cast<int>(spec.jobs))
    for (std::size_t c = 0; c < cells.size(); ++c) run_cell(c);
  } else {
    for (std::size_t c = 0; c < cells.size(); ++c) run_cell(c);
  }

  BenchResult out;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < inits.size(); ++i) {
    const std::size_t reps = inits[i]->deterministic ? 1 : spec.seeds;
    const std::size_t begin = cursor;
    cursor += reps;
    for (std::size_t c = begin; c < cursor; ++c) {
      if (failed[c]) {
        out.failures.push_back(*failed[c]);
      } else {
        out.records.insert(out.records.end(), slots[c].begin(),
                           slots[c].end());
      }
    }
    if (inits[i]->deterministic) continue;

    // Paper-style summary: arithmetic mean over replicates per iteration.
    std::size_t longest = 0;
    for (std::size_t c = begin; c < cursor; ++c) {
      if (!failed[c]) longest = std::max(longest, slots[c].size());
    }
    for (std::size_t it = 0; it < longest; ++it) {
      double objective = 0.0, rel = 0.0, elapsed = 0.0;
      std::size_t count = 0;
      for (std::size_t c = begin; c < cursor; ++c) {
        if (failed[c] || it >= slots[c].size()) continue;
        objective += slots[c][it].objective;
        rel += slots[c][it].rel_error;
        elapsed += slots[c][it].elapsed_ms;
        ++count;
      }
      if (count == 0) continue;
      out.records.push_back({working.name, inits[i]->name, solver, "mean", it,
                             objective / static_cast<double>(count),
                             rel / static_cast<double>(count),
                             elapsed / static_cast<double>(count), "-"});
    }
  }
  return out;
}

void emit_csv(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "dataset,init,solver,seed,iteration,objective,rel_error,elapsed_ms,"
         "stop_reason\n";
  for (const RunRecord& r : records) {
    out << r.dataset << ',' << r.init << ',' << r.solver << ',' << r.seed
        << ',' << r.iteration << ',' << format_double(r.objective) << ','
        << format_double(r.rel_error) << ',' << format_double(r.elapsed_ms)
        << ',' << r.stop_reason << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

std::vector<RunRecord> parse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line != "dataset,init,solver,seed,iteration,objective,rel_error,"
              "elapsed_ms,stop_reason") {
    throw ParseError("line 1: bad results header");
  }
  std::vector<RunRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 9) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 9 fields");
    }
    RunRecord r;
    r.dataset = fields[0];
    r.init = fields[1];
    r.solver = fields[2];
    r.seed = fields[3];
    try {
      r.iteration = static_cast<std::size_t>(std::stoull(fields[4]));
      r.objective = std::stod(fields[5]);
      r.rel_error = std::stod(fields[6]);
      r.elapsed_ms = std::stod(fields[7]);
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(lineno) + ": bad numeric field");
    }
    r.stop_reason = fields[8];
    records.push_back(std::move(r));
  }
  return records;
}

namespace {

const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
    "#8c6d31", "#843c39", "#7b4173", "#3182bd", "#e6550d"};

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (iteration, rel_error)
};

// One curve per initializer: mean rows when present, otherwise the single
// deterministic (or sole-seed) run.
std::vector<Series> collect_series(const std::vector<RunRecord>& records) {
  std::vector<std::string> order;
  std::map<std::string, std::map<std::string, std::vector<std::pair<double, double>>>> by_init;
  for (const RunRecord& r : records) {
    if (by_init.find(r.init) == by_init.end()) order.push_back(r.init);
    by_init[r.init][r.seed].emplace_back(static_cast<double>(r.iteration),
                                         r.rel_error);
  }
  std::vector<Series> series;
  for (const std::string& name : order) {
    auto& seeds = by_init[name];
    const std::vector<std::pair<double, double>>* pick = nullptr;
    if (auto it = seeds.find("mean"); it != seeds.end()) {
      pick = &it->second;
    } else if (auto dash = seeds.find("-"); dash != seeds.end()) {
      pick = &dash->second;
    } else if (!seeds.empty()) {
      pick = &seeds.begin()->second;
    }
    if (pick == nullptr || pick->empty()) continue;
    series.push_back({name, *pick});
  }
  return series;
}

}  // namespace

void emit_svg_plot(const std::vector<RunRecord>& records,
                   const std::string& path, bool log_y) {
  const std::vector<Series> series = collect_series(records);

  constexpr double kWidth = 960, kHeight = 600;
  constexpr double kLeft = 70, kTop = 40, kPlotW = 620, kPlotH = 500;
  constexpr double kFloor = 1e-16;  // log-scale stand-in for exact zeros

  double x_max = 1.0, y_min = 1e300, y_max = -1e300;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      x_max = std::max(x_max, x);
      const double yv = log_y ? std::max(y, kFloor) : y;
      y_min = std::min(y_min, yv);
      y_max = std::max(y_max, yv);
    }
  }
  if (series.empty()) {
    y_min = log_y ? 1e-2 : 0.0;
    y_max = 1.0;
  }
  double lo, hi;
  if (log_y) {
    lo = std::floor(std::log10(y_min));
    hi = std::ceil(std::log10(y_max));
    if (hi - lo < 1.0) hi = lo + 1.0;
  } else {
    lo = std::min(0.0, y_min);
    hi = y_max > lo ? y_max : lo + 1.0;
  }
  const auto x_at = [&](double x) { return kLeft + kPlotW * x / x_max; };
  const auto y_at = [&](double y) {
    const double t = log_y ? (std::log10(std::max(y, kFloor)) - lo) / (hi - lo)
                           : (y - lo) / (hi - lo);
    return kTop + kPlotH * (1.0 - t);
  };

  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<g font-family=\"monospace\" font-size=\"12\">\n";

  // Gridlines and tick labels.
  const int x_ticks = 5;
  for (int t = 0; t <= x_ticks; ++t) {
    const double xv = x_max * t / x_ticks;
    const double px = x_at(xv);
    out << "<line x1=\"" << px << "\" y1=\"" << kTop << "\" x2=\"" << px
        << "\" y2=\"" << kTop + kPlotH << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << px << "\" y=\"" << kTop + kPlotH + 18
        << "\" text-anchor=\"middle\">" << static_cast<long>(xv + 0.5)
        << "</text>\n";
  }
  const int y_ticks = log_y ? static_cast<int>(hi - lo) : 5;
  for (int t = 0; t <= y_ticks; ++t) {
    const double yv = log_y ? std::pow(10.0, lo + t)
                            : lo + (hi - lo) * t / y_ticks;
    const double py = y_at(yv);
    out << "<line x1=\"" << kLeft << "\" y1=\"" << py << "\" x2=\""
        << kLeft + kPlotW << "\" y2=\"" << py << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << py + 4
        << "\" text-anchor=\"end\">" << format_double(yv) << "</text>\n";
  }
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kPlotW
      << "\" height=\"" << kPlotH
      << "\" fill=\"none\" stroke=\"#333333\"/>\n"
      << "<text x=\"" << kLeft + kPlotW / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\">iteration</text>\n"
      << "<text x=\"18\" y=\"" << kTop + kPlotH / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << kTop + kPlotH / 2 << ")\">relative error</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : series[s].points) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", x_at(x), y_at(y));
      out << buf;
    }
    out << "\"/>\n";
    const double ly = kTop + 16.0 + 18.0 * static_cast<double>(s);
    out << "<line x1=\"" << kLeft + kPlotW + 20 << "\" y1=\"" << ly - 4
        << "\" x2=\"" << kLeft + kPlotW + 44 << "\" y2=\"" << ly - 4
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kLeft + kPlotW + 50 << "\" y=\"" << ly << "\">"
        << series[s].name << "</text>\n";
  }
  out << "</g>\n</svg>\n";
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace nmf
