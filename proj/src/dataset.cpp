#include "nmf/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "nmf/errors.hpp"
#include "nmf/kernels.hpp"
#include "nmf/rng.hpp"

namespace nmf {
namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// PGM token reader: skips whitespace and '#' comments in the header.
std::string next_pgm_token(std::istream& in) {
  std::string token;
  int c;
  while ((c = in.get()) != EOF) {
    if (std::isspace(c)) continue;
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {}
      continue;
    }
    break;
  }
  while (c != EOF && !std::isspace(c)) {
    token.push_back(static_cast<char>(c));
    c = in.get();
  }
  return token;
}

std::size_t parse_pgm_size(std::istream& in, const std::string& file,
                           const char* what) {
  const std::string token = next_pgm_token(in);
  try {
    const long v = std::stol(token);
    if (v <= 0) throw std::invalid_argument("non-positive");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw UnsupportedFormat(file + ": bad " + what + " field '" + token + "'");
  }
}

DenseMatrix load_pgm(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open " + file);
  const std::string magic = next_pgm_token(in);
  if (magic != "P2" && magic != "P5") {
    throw UnsupportedFormat(file + ": magic '" + magic +
                            "' is not a supported grayscale format");
  }
  const std::size_t cols = parse_pgm_size(in, file, "width");
  const std::size_t rows = parse_pgm_size(in, file, "height");
  const std::size_t maxval = parse_pgm_size(in, file, "maxval");
  if (maxval > 65535) {
    throw UnsupportedFormat(file + ": maxval " + std::to_string(maxval) +
                            " exceeds 65535");
  }

  DenseMatrix image(rows, cols);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (magic == "P2") {
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        const std::string token = next_pgm_token(in);
        try {
          const long v = std::stol(token);
          if (v < 0 || static_cast<std::size_t>(v) > maxval) {
            throw std::invalid_argument("range");
          }
          image(r, c) = static_cast<double>(v) * scale;
        } catch (const std::exception&) {
          throw UnsupportedFormat(file + ": bad sample '" + token + "'");
        }
      }
    }
  } else {
    // Binary samples follow a single whitespace byte after maxval.
    const std::size_t bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> buf(rows * cols * bytes);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size()) {
      throw UnsupportedFormat(file + ": truncated pixel data");
    }
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        const std::size_t at = (r * cols + c) * bytes;
        const std::size_t v = bytes == 2
                              ? (static_cast<std::size_t>(buf[at]) << 8) | buf[at + 1]
                              : buf[at];
        if (v > maxval) {
          throw UnsupportedFormat(file + ": sample exceeds maxval");
        }
        image(r, c) = static_cast<double>(v) * scale;
      }
    }
  }
  return image;
}

}  // namespace

DenseMatrix load_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trimmed(line).empty()) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      const std::string t = trimmed(field);
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(t, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (t.empty() || used != t.size() || !std::isfinite(value)) {
        throw ParseError("line " + std::to_string(lineno) + ": bad field '" +
                         t + "'");
      }
      row.push_back(value);
    }
    if (width == 0) {
      width = row.size();
    } else if (row.size() != width) {
      throw ParseError("line " + std::to_string(lineno) + ": expected " +
                       std::to_string(width) + " fields, got " +
                       std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("line 1: no data rows");

  DenseMatrix x(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      if (rows[i][j] < 0.0) {
        throw NegativeEntry("entry (" + std::to_string(i) + ", " +
                            std::to_string(j) + ") is negative");
      }
      x(i, j) = rows[i][j];
    }
  }
  return x;
}

Dataset load_pgm_dir(const std::string& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(path, ec)) {
    throw IoError(path + " is not a directory");
  }
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() == ".pgm") {
      files.push_back(entry.path().string());
    }
  }
  if (files.empty()) throw IoError("no .pgm files under " + path);
  std::sort(files.begin(), files.end());

  std::size_t rows = 0;
  std::size_t cols = 0;
  DenseMatrix x;
  for (std::size_t f = 0; f < files.size(); ++f) {
    const DenseMatrix image = load_pgm(files[f]);
    if (f == 0) {
      rows = image.rows();
      cols = image.cols();
      x = DenseMatrix(rows * cols, files.size());
    } else if (image.rows() != rows || image.cols() != cols) {
      throw MixedDimensions(files[f] + ": " + std::to_string(image.rows()) +
                            "x" + std::to_string(image.cols()) +
                            " differs from " + std::to_string(rows) + "x" +
                            std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      for (std::size_t r = 0; r < rows; ++r) {
        x(c * rows + r, f) = image(r, c);
      }
    }
  }
  Dataset out;
  out.matrix = std::move(x);
  out.name = path;
  out.image_shape = {rows, cols};
  return out;
}

Dataset synth_dataset(std::size_t m, std::size_t n, std::size_t r,
                      double density, double noise, std::uint64_t seed) {
  if (r == 0 || r > std::min(m, n)) {
    throw BadRank("rank " + std::to_string(r) + " out of range for " +
                  std::to_string(m) + "x" + std::to_string(n) + " data");
  }
  if (!(density > 0.0 && density <= 1.0)) {
    throw DomainError("density must lie in (0, 1]");
  }
  if (noise < 0.0 || !std::isfinite(noise)) {
    throw DomainError("noise level must be finite and non-negative");
  }
  Rng rng(seed);
  DenseMatrix w(m, r);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      const double value = rng.uniform01();
      w(i, j) = rng.uniform01() <= density ? value : 0.0;
    }
  }
  DenseMatrix h(r, n);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double value = rng.uniform01();
      h(i, j) = rng.uniform01() <= density ? value : 0.0;
    }
  }
  DenseMatrix x = matmul(w, h);
  if (noise > 0.0) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        x(i, j) += noise * std::fabs(rng.normal());
      }
    }
  }
  // No commas: the label lands in a comma-separated results column.
  std::ostringstream name;
  name << "synth-" << m << "x" << n << "-r" << r << "-d" << density << "-n"
       << noise;
  Dataset out;
  out.matrix = std::move(x);
  out.name = name.str();
  out.truth = {std::move(w), std::move(h)};
  return out;
}

}  // namespace nmf
