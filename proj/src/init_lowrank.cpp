#include "nmf/init_lowrank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nmf/errors.hpp"
#include "nmf/kernels.hpp"
#include "nmf/linalg.hpp"
#include "nmf/rng.hpp"

namespace nmf {
namespace {

void check_rank(const DenseMatrix& x, std::size_t r) {
  if (r == 0 || r > std::min(x.rows(), x.cols())) {
    throw BadRank("rank " + std::to_string(r) + " out of range for " +
                  std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                  " data");
  }
}

DenseMatrix centered(const DenseMatrix& x, const std::vector<double>& mean) {
  DenseMatrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(i, j) - mean[i];
  }
  return out;
}

std::vector<double> row_means(const DenseMatrix& x) {
  std::vector<double> mean(x.rows(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) acc += x(i, j);
    mean[i] = acc / static_cast<double>(x.cols());
  }
  return mean;
}

// Full spectrum of the centered matrix plus its leading singular vectors.
PcaModel fit_pca_impl(const DenseMatrix& x, std::size_t r) {
  if (x.cols() < 2) {
    throw DegenerateData("need at least two observations to center");
  }
  PcaModel model;
  model.mean = row_means(x);
  const DenseMatrix xc = centered(x, model.mean);
  const double total = frobenius_norm(xc);
  if (total <= 1e-12 * std::max(1.0, frobenius_norm(x))) {
    throw DegenerateData("centered data is numerically zero");
  }
  const std::size_t full = std::min(x.rows(), x.cols());
  const TruncatedSvd svd = truncated_svd(xc, full);
  model.eigenvalues.resize(full);
  for (std::size_t i = 0; i < full; ++i) {
    model.eigenvalues[i] = svd.sigma[i] * svd.sigma[i];
  }
  model.components = DenseMatrix(x.rows(), r);
  for (std::size_t c = 0; c < r; ++c) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
      model.components(i, c) = svd.u(i, c);
    }
  }
  return model;
}

}  // namespace

FactorPair init_svd_abs(const DenseMatrix& x, std::size_t r) {
  check_rank(x, r);
  const TruncatedSvd svd = truncated_svd(x, r);
  FactorPair pair;
  pair.w = DenseMatrix(x.rows(), r);
  pair.h = DenseMatrix(r, x.cols());
  for (std::size_t c = 0; c < r; ++c) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
      pair.w(i, c) = std::fabs(svd.u(i, c));
    }
    for (std::size_t j = 0; j < x.cols(); ++j) {
      pair.h(c, j) = svd.sigma[c] * std::fabs(svd.v(j, c));
    }
  }
  pair.rank = r;
  pair.origin = "svd-abs";
  return pair;
}

std::size_t select_rank_90(const std::vector<double>& sigma, double share,
                           bool use_squares) {
  if (share <= 0.0 || share > 1.0) {
    throw DomainError("retained share must lie in (0, 1]");
  }
  double total = 0.0;
  for (double s : sigma) total += use_squares ? s * s : s;
  if (sigma.empty() || total <= 0.0) {
    throw ZeroSpectrum("cannot select a rank from an empty spectrum");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    acc += use_squares ? sigma[i] * sigma[i] : sigma[i];
    if (acc >= share * total) return i + 1;
  }
  return sigma.size();  // float round-off on the last partial sum
}

FactorPair init_nndsvd(const DenseMatrix& x, std::size_t r) {
  check_rank(x, r);
  const TruncatedSvd svd = truncated_svd(x, r);
  const std::size_t m = x.rows();
  const std::size_t n = x.cols();
  FactorPair pair;
  pair.w = DenseMatrix(m, r);
  pair.h = DenseMatrix(r, n);

  const double lead = std::sqrt(svd.sigma[0]);
  for (std::size_t i = 0; i < m; ++i) pair.w(i, 0) = lead * std::fabs(svd.u(i, 0));
  for (std::size_t j = 0; j < n; ++j) pair.h(0, j) = lead * std::fabs(svd.v(j, 0));

  for (std::size_t c = 1; c < r; ++c) {
    std::vector<double> up(m, 0.0), un(m, 0.0), vp(n, 0.0), vn(n, 0.0);
    double up_norm = 0.0, un_norm = 0.0, vp_norm = 0.0, vn_norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double u = svd.u(i, c);
      if (u > 0.0) { up[i] = u; up_norm += u * u; }
      else if (u < 0.0) { un[i] = -u; un_norm += u * u; }
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double v = svd.v(j, c);
      if (v > 0.0) { vp[j] = v; vp_norm += v * v; }
      else if (v < 0.0) { vn[j] = -v; vn_norm += v * v; }
    }
    up_norm = std::sqrt(up_norm);
    un_norm = std::sqrt(un_norm);
    vp_norm = std::sqrt(vp_norm);
    vn_norm = std::sqrt(vn_norm);

    const double mp = up_norm * vp_norm;
    const double mn = un_norm * vn_norm;
    const bool positive = mp >= mn;  // tie keeps the positive section
    const double mass = positive ? mp : mn;
    if (mass <= 0.0) continue;  // degenerate split leaves the column zero
    const double scale = std::sqrt(svd.sigma[c] * mass);
    const std::vector<double>& u_part = positive ? up : un;
    const std::vector<double>& v_part = positive ? vp : vn;
    const double u_norm = positive ? up_norm : un_norm;
    const double v_norm = positive ? vp_norm : vn_norm;
    for (std::size_t i = 0; i < m; ++i) {
      pair.w(i, c) = scale * u_part[i] / u_norm;
    }
    for (std::size_t j = 0; j < n; ++j) {
      pair.h(c, j) = scale * v_part[j] / v_norm;
    }
  }
  pair.rank = r;
  pair.origin = "nndsvd";
  return pair;
}

LrcFactors lrc_factors(const DenseMatrix& x, std::size_t r) {
  check_rank(x, r);
  if (r < 2) {
    throw BadRank("low-rank-corrected scheme needs rank >= 2");
  }
  const std::size_t p = lrc_truncation_rank(r);
  const TruncatedSvd svd = truncated_svd(x, p);
  LrcFactors out;
  out.y = DenseMatrix(x.rows(), p);
  out.z = DenseMatrix(p, x.cols());
  for (std::size_t c = 0; c < p; ++c) {
    const double root = std::sqrt(svd.sigma[c]);
    for (std::size_t i = 0; i < x.rows(); ++i) out.y(i, c) = root * svd.u(i, c);
    for (std::size_t j = 0; j < x.cols(); ++j) out.z(c, j) = root * svd.v(j, c);
  }
  return out;
}

FactorPair nnsvd_lrc_base(const DenseMatrix& x, std::size_t r) {
  const LrcFactors lrc = lrc_factors(x, r);
  const std::size_t m = x.rows();
  const std::size_t n = x.cols();
  FactorPair pair;
  pair.w = DenseMatrix(m, r);
  pair.h = DenseMatrix(r, n);
  for (std::size_t i = 0; i < m; ++i) pair.w(i, 0) = std::fabs(lrc.y(i, 0));
  for (std::size_t j = 0; j < n; ++j) pair.h(0, j) = std::fabs(lrc.z(0, j));
  for (std::size_t c = 1; c < r; ++c) {
    const std::size_t src = (c + 1) / 2;  // columns 1,2 -> 1; 3,4 -> 2; ...
    const bool positive = (c % 2) == 1;
    for (std::size_t i = 0; i < m; ++i) {
      const double y = lrc.y(i, src);
      pair.w(i, c) = positive ? std::max(y, 0.0) : std::max(-y, 0.0);
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double z = lrc.z(src, j);
      pair.h(c, j) = positive ? std::max(z, 0.0) : std::max(-z, 0.0);
    }
  }
  pair.rank = r;
  pair.origin = "nnsvd-lrc";
  return pair;
}

FactorPair init_nnsvd_lrc(const DenseMatrix& x, std::size_t r,
                          std::size_t refine_steps) {
  const LrcFactors lrc = lrc_factors(x, r);
  FactorPair pair = nnsvd_lrc_base(x, r);
  constexpr double kGuard = 1e-12;
  for (std::size_t step = 0; step < refine_steps; ++step) {
    // W <- W .* max(y (z h^T), 0) ./ (w (h h^T) + eps)
    {
      const DenseMatrix zht = matmul_nt(lrc.z, pair.h);   // p x r
      const DenseMatrix num = matmul(lrc.y, zht);         // m x r
      const DenseMatrix hht = matmul_nt(pair.h, pair.h);  // r x r
      const DenseMatrix den = matmul(pair.w, hht);        // m x r
      for (std::size_t i = 0; i < pair.w.rows(); ++i) {
        for (std::size_t j = 0; j < pair.w.cols(); ++j) {
          pair.w(i, j) *= std::max(num(i, j), 0.0) / (den(i, j) + kGuard);
        }
      }
    }
    // H <- H .* max((w^T y) z, 0) ./ ((w^T w) h + eps)
    {
      const DenseMatrix wty = matmul_tn(pair.w, lrc.y);   // r x p
      const DenseMatrix num = matmul(wty, lrc.z);         // r x n
      const DenseMatrix wtw = matmul_tn(pair.w, pair.w);  // r x r
      const DenseMatrix den = matmul(wtw, pair.h);        // r x n
      for (std::size_t i = 0; i < pair.h.rows(); ++i) {
        for (std::size_t j = 0; j < pair.h.cols(); ++j) {
          pair.h(i, j) *= std::max(num(i, j), 0.0) / (den(i, j) + kGuard);
        }
      }
    }
  }
  return pair;
}

PcaModel fit_pca(const DenseMatrix& x, std::size_t r) {
  check_rank(x, r);
  return fit_pca_impl(x, r);
}

PcaModel fit_pca_auto(const DenseMatrix& x, double share) {
  PcaModel probe = fit_pca_impl(x, 1);
  std::vector<double> sigma(probe.eigenvalues.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    sigma[i] = std::sqrt(std::max(probe.eigenvalues[i], 0.0));
  }
  const std::size_t r = select_rank_90(sigma, share, false);
  return fit_pca_impl(x, r);
}

FactorPair init_npca(const DenseMatrix& x, std::size_t r, std::uint64_t seed) {
  check_rank(x, r);
  const PcaModel model = fit_pca(x, r);
  const DenseMatrix xc = centered(x, model.mean);
  const DenseMatrix proj = matmul_tn(model.components, xc);  // r x n

  FactorPair pair;
  pair.w = DenseMatrix(x.rows(), r);
  pair.h = DenseMatrix(r, x.cols());
  for (std::size_t c = 0; c < r; ++c) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
      pair.w(i, c) = std::max(model.components(i, c), 0.0);
    }
    for (std::size_t j = 0; j < x.cols(); ++j) {
      pair.h(c, j) = std::max(proj(c, j), 0.0);
    }
  }
  Rng rng(seed);
  for (std::size_t c = 0; c < r; ++c) {
    double col_sum = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) col_sum += pair.w(i, c);
    if (col_sum > 0.0) continue;
    // A component with no positive entries clips to zero; reseed it.
    for (std::size_t i = 0; i < x.rows(); ++i) pair.w(i, c) = rng.uniform01();
  }
  pair.rank = r;
  pair.origin = "npca";
  pair.seed = seed;
  return pair;
}

FactorPair init_nica(const DenseMatrix& x, std::size_t r, std::uint64_t seed) {
  check_rank(x, r);
  const PcaModel model = fit_pca(x, r);
  if (model.eigenvalues[r - 1] <= 1e-12 * model.eigenvalues[0]) {
    throw DegenerateData("centered data has rank below the requested one");
  }
  const std::size_t m = x.rows();
  const std::size_t n = x.cols();
  const DenseMatrix xc = centered(x, model.mean);

  // Whitened coordinates: y = D^-1 U^T xc with D = sigma / sqrt(n), so the
  // sample covariance (1/n) y y^T is the identity.
  std::vector<double> d(r);
  for (std::size_t c = 0; c < r; ++c) {
    d[c] = std::sqrt(model.eigenvalues[c] / static_cast<double>(n));
  }
  DenseMatrix y = matmul_tn(model.components, xc);  // r x n
  for (std::size_t c = 0; c < r; ++c) {
    for (std::size_t j = 0; j < n; ++j) y(c, j) /= d[c];
  }

  // Symmetric fixed-point iteration with g = tanh (log-cosh contrast).
  Rng rng(seed);
  DenseMatrix b(r, r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) b(i, j) = rng.normal();
  }
  auto decorrelate = [&](DenseMatrix& rows) {
    const DenseMatrix gram = matmul_nt(rows, rows);
    std::vector<double> values;
    DenseMatrix vectors;
    jacobi_eigh(gram, values, vectors);
    DenseMatrix root_inv(r, r);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < r; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < r; ++k) {
          const double lam = std::max(values[k], 1e-300);
          acc += vectors(i, k) * vectors(j, k) / std::sqrt(lam);
        }
        root_inv(i, j) = acc;
      }
    }
    rows = matmul(root_inv, rows);
  };
  decorrelate(b);

  constexpr std::size_t kMaxSweeps = 200;
  for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
    DenseMatrix next(r, r);
    for (std::size_t c = 0; c < r; ++c) {
      std::vector<double> mean_yg(r, 0.0);
      double mean_gp = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < r; ++k) s += b(c, k) * y(k, j);
        const double g = std::tanh(s);
        mean_gp += 1.0 - g * g;
        for (std::size_t k = 0; k < r; ++k) mean_yg[k] += y(k, j) * g;
      }
      for (std::size_t k = 0; k < r; ++k) {
        next(c, k) = mean_yg[k] / static_cast<double>(n) -
                     (mean_gp / static_cast<double>(n)) * b(c, k);
      }
    }
    decorrelate(next);
    double drift = 0.0;
    for (std::size_t c = 0; c < r; ++c) {
      double dot = 0.0;
      for (std::size_t k = 0; k < r; ++k) dot += next(c, k) * b(c, k);
      drift = std::max(drift, std::fabs(1.0 - std::fabs(dot)));
    }
    b = next;
    if (drift < 1e-10) break;
  }

  // Sources and mixing in original coordinates: xc ~ (U D B^T)(B y).
  const DenseMatrix s = matmul(b, y);  // r x n
  DenseMatrix a(m, r);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t c = 0; c < r; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < r; ++k) {
        acc += model.components(i, k) * d[k] * b(c, k);
      }
      a(i, c) = acc;
    }
  }

  FactorPair pair;
  pair.w = DenseMatrix(m, r);
  pair.h = DenseMatrix(r, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t c = 0; c < r; ++c) pair.w(i, c) = std::fabs(a(i, c));
  }
  for (std::size_t c = 0; c < r; ++c) {
    for (std::size_t j = 0; j < n; ++j) pair.h(c, j) = std::fabs(s(c, j));
  }
  // Magnitudes drop the centering, so fold the mean back in through a
  // least-squares scale on H against the raw data.
  const DenseMatrix approx = matmul(pair.w, pair.h);
  const double denom = dot_all(approx, approx);
  const double scale = denom > 0.0 ? std::max(dot_all(x, approx) / denom, 0.0) : 0.0;
  for (std::size_t c = 0; c < r; ++c) {
    for (std::size_t j = 0; j < n; ++j) pair.h(c, j) *= scale;
  }
  pair.rank = r;
  pair.origin = "nica";
  pair.seed = seed;
  return pair;
}

}  // namespace nmf
