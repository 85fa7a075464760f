#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "nmf/matrix.hpp"

namespace nmf {

// A loaded problem instance. `image_shape` (rows, cols) is set when columns
// are vectorized images; `truth` carries the generating factors of
// synthetic data.
struct Dataset {
  DenseMatrix matrix;
  std::string name;
  std::optional<std::pair<std::size_t, std::size_t>> image_shape;
  std::optional<std::pair<DenseMatrix, DenseMatrix>> truth;
};

// Comma-separated numeric rows, all of equal length. Throws ParseError with
// the 1-based line number on malformed input and NegativeEntry with the
// 0-based (row, col) on negative values.
DenseMatrix load_csv_matrix(const std::string& path);

// All *.pgm files in a directory (lexicographic filename order), one image
// per column, pixels scaled to [0, 1] by maxval and vectorized column-major
// (pixel (r, c) lands at index c*rows + r). Handles P2 and P5, maxval up to
// 65535 (two-byte big-endian samples above 255).
Dataset load_pgm_dir(const std::string& path);

// x = w* h* + noise * |gaussian| with w*, h* uniform on (0, 1] and entries
// of both factors zeroed independently with probability 1 - density. The
// generating pair is kept in `truth`.
Dataset synth_dataset(std::size_t m, std::size_t n, std::size_t r,
                      double density, double noise, std::uint64_t seed);

}  // namespace nmf
