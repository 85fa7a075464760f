#include "nmf/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "nmf/errors.hpp"
#include "nmf/kernels.hpp"

namespace nmf {

void FactorPair::validate(std::size_t m, std::size_t n) const {
  if (w.rows() != m || w.cols() != rank || h.rows() != rank || h.cols() != n)
    throw Error("FactorPair: shapes do not conform");
  if (!w.all_nonnegative() || !h.all_nonnegative())
    throw Error("FactorPair: negative entry");
}

SolverKind solver_from_name(const std::string& name) {
  if (name == "sed-mu") return SolverKind::SedMu;
  if (name == "kl-mu") return SolverKind::KlMu;
  if (name == "anls") return SolverKind::Anls;
  throw Error("unknown solver: " + name);
}

std::string solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::SedMu: return "sed-mu";
    case SolverKind::KlMu: return "kl-mu";
    case SolverKind::Anls: return "anls";
  }
  return "?";
}

double sed_objective(const DenseMatrix& x, const DenseMatrix& w,
                     const DenseMatrix& h) {
  const double r = frobenius_diff_norm(x, matmul(w, h));
  return 0.5 * r * r;
}

double kl_divergence(const DenseMatrix& x, const DenseMatrix& w,
                     const DenseMatrix& h) {
  const DenseMatrix wh = matmul(w, h);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const double xv = x(i, j), pv = wh(i, j);
      if (xv > 0.0) {
        if (pv <= 0.0)
          throw DomainError("kl_divergence: x > 0 where wh = 0");
        acc += xv * std::log(xv / pv) - xv + pv;
      } else {
        acc += pv;  // 0*log 0 = 0 convention leaves only the +wh term
      }
    }
  return acc;
}

FactorPair mu_sed_step(const DenseMatrix& x, const FactorPair& pair,
                       double epsilon_guard) {
  FactorPair out = pair;
  const std::size_t m = x.rows(), n = x.cols(), r = pair.rank;

  // W <- W .* (X H^T) ./ (W H H^T)
  const DenseMatrix xht = matmul_nt(x, pair.h);
  const DenseMatrix hht = matmul_nt(pair.h, pair.h);
  const DenseMatrix whht = matmul(pair.w, hht);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t a = 0; a < r; ++a)
      out.w(i, a) = pair.w(i, a) * xht(i, a) / (whht(i, a) + epsilon_guard);

  // H <- H .* (W^T X) ./ (W^T W H) with the updated W
  const DenseMatrix wtx = matmul_tn(out.w, x);
  const DenseMatrix wtw = matmul_tn(out.w, out.w);
  const DenseMatrix wtwh = matmul(wtw, pair.h);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t j = 0; j < n; ++j)
      out.h(a, j) = pair.h(a, j) * wtx(a, j) / (wtwh(a, j) + epsilon_guard);
  return out;
}

FactorPair mu_kl_step(const DenseMatrix& x, const FactorPair& pair,
                      double epsilon_guard) {
  FactorPair out = pair;
  const std::size_t m = x.rows(), n = x.cols(), r = pair.rank;

  // W_ia <- W_ia * sum_j H_aj X_ij / (WH)_ij
  DenseMatrix wh = matmul(pair.w, pair.h);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t a = 0; a < r; ++a) {
      double factor = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        factor += pair.h(a, j) * x(i, j) / (wh(i, j) + epsilon_guard);
      out.w(i, a) = pair.w(i, a) * factor;
    }

  // Column normalization W_ia <- W_ia / sum_i W_ia. All-zero columns have no
  // scale to fix and are left untouched.
  for (std::size_t a = 0; a < r; ++a) {
    double colsum = 0.0;
    for (std::size_t i = 0; i < m; ++i) colsum += out.w(i, a);
    if (colsum > 0.0)
      for (std::size_t i = 0; i < m; ++i) out.w(i, a) /= colsum;
  }

  // H_aj <- H_aj * sum_i W_ia X_ij / (WH)_ij with the normalized W
  wh = matmul(out.w, pair.h);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t j = 0; j < n; ++j) {
      double factor = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        factor += out.w(i, a) * x(i, j) / (wh(i, j) + epsilon_guard);
      out.h(a, j) = pair.h(a, j) * factor;
    }
  return out;
}

std::vector<double> nnls_solve(const DenseMatrix& a,
                               const std::vector<double>& b) {
  const std::size_t m = a.rows(), k = a.cols();
  if (b.size() != m) throw Error("nnls_solve: rhs length mismatch");

  // Lawson-Hanson on the normal equations. The passive-set system is solved
  // by Gaussian elimination with partial pivoting; k is small here (= rank).
  std::vector<double> ata(k * k, 0.0), atb(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < m; ++l) s += a(l, i) * a(l, j);
      ata[i * k + j] = s;
    }
    double s = 0.0;
    for (std::size_t l = 0; l < m; ++l) s += a(l, i) * b[l];
    atb[i] = s;
  }

  std::vector<double> x(k, 0.0);
  std::vector<bool> passive(k, false);
  const std::size_t max_iter = 10 * k;

  auto solve_passive = [&](std::vector<double>& z) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < k; ++i)
      if (passive[i]) idx.push_back(i);
    const std::size_t q = idx.size();
    std::fill(z.begin(), z.end(), 0.0);
    if (q == 0) return;
    std::vector<double> mat(q * (q + 1));
    for (std::size_t i = 0; i < q; ++i) {
      for (std::size_t j = 0; j < q; ++j) mat[i * (q + 1) + j] = ata[idx[i] * k + idx[j]];
      mat[i * (q + 1) + q] = atb[idx[i]];
    }
    for (std::size_t col = 0; col < q; ++col) {
      std::size_t piv = col;
      for (std::size_t row = col + 1; row < q; ++row)
        if (std::fabs(mat[row * (q + 1) + col]) > std::fabs(mat[piv * (q + 1) + col]))
          piv = row;
      if (piv != col)
        for (std::size_t c = 0; c <= q; ++c)
          std::swap(mat[col * (q + 1) + c], mat[piv * (q + 1) + c]);
      const double d = mat[col * (q + 1) + col];
      if (std::fabs(d) < 1e-300) continue;  // singular block: leave zeros
      for (std::size_t row = col + 1; row < q; ++row) {
        const double f = mat[row * (q + 1) + col] / d;
        for (std::size_t c = col; c <= q; ++c)
          mat[row * (q + 1) + c] -= f * mat[col * (q + 1) + c];
      }
    }
    std::vector<double> sol(q, 0.0);
    for (std::size_t row = q; row-- > 0;) {
      double rhs = mat[row * (q + 1) + q];
      for (std::size_t c = row + 1; c < q; ++c)
        rhs -= mat[row * (q + 1) + c] * sol[c];
      const double d = mat[row * (q + 1) + row];
      sol[row] = std::fabs(d) < 1e-300 ? 0.0 : rhs / d;
    }
    for (std::size_t i = 0; i < q; ++i) z[idx[i]] = sol[i];
  };

  double scale = 1.0;
  for (std::size_t i = 0; i < k; ++i) scale = std::max(scale, std::fabs(atb[i]));
  const double grad_tol = 1e-12 * scale;

  std::vector<double> z(k, 0.0);
  for (std::size_t iter = 0; iter <= max_iter; ++iter) {
    // Negative gradient of 1/2||Ax-b||^2 is A^T b - A^T A x.
    double wmax = 0.0;
    std::size_t arg = k;
    for (std::size_t i = 0; i < k; ++i) {
      if (passive[i]) continue;
      double g = atb[i];
      for (std::size_t j = 0; j < k; ++j) g -= ata[i * k + j] * x[j];
      if (g > wmax) {
        wmax = g;
        arg = i;
      }
    }
    if (arg == k || wmax <= grad_tol) return x;  // KKT satisfied
    passive[arg] = true;

    solve_passive(z);
    std::size_t inner = 0;
    while (true) {
      bool feasible = true;
      for (std::size_t i = 0; i < k; ++i)
        if (passive[i] && z[i] <= 0.0) feasible = false;
      if (feasible) break;
      if (++inner > max_iter)
        throw ConvergenceFailure("nnls_solve: iteration cap exceeded");
      double alpha = 1.0;
      for (std::size_t i = 0; i < k; ++i)
        if (passive[i] && z[i] <= 0.0)
          alpha = std::min(alpha, x[i] / (x[i] - z[i]));
      for (std::size_t i = 0; i < k; ++i)
        if (passive[i]) x[i] += alpha * (z[i] - x[i]);
      for (std::size_t i = 0; i < k; ++i)
        if (passive[i] && x[i] <= 1e-14) {
          x[i] = 0.0;
          passive[i] = false;
        }
      solve_passive(z);
    }
    for (std::size_t i = 0; i < k; ++i) x[i] = passive[i] ? z[i] : 0.0;
  }
  throw ConvergenceFailure("nnls_solve: iteration cap exceeded");
}

FactorPair anls_step(const DenseMatrix& x, const FactorPair& pair) {
  FactorPair out = pair;
  const std::size_t m = x.rows(), n = x.cols();

  // Rows of W: min ||x_i - H^T w_i||. The same H^T serves every row.
  const DenseMatrix ht = pair.h.transposed();
  for (std::size_t i = 0; i < m; ++i) {
    const std::vector<double> wrow = nnls_solve(ht, x.row(i));
    out.w.set_row(i, wrow);
  }
  // Columns of H: min ||x_j - W h_j|| with the updated W.
  for (std::size_t j = 0; j < n; ++j) {
    const std::vector<double> hcol = nnls_solve(out.w, x.column(j));
    out.h.set_column(j, hcol);
  }
  return out;
}

NmfResult run_nmf(const DenseMatrix& x, const FactorPair& init,
                  const SolverConfig& cfg) {
  init.validate(x.rows(), x.cols());
  if (cfg.max_iter < 1) throw Error("run_nmf: max_iter must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&start] {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  };

  // KL traces evaluate the divergence with the product floored at the
  // epsilon guard so zero-support initializers stay in-domain.
  auto objective = [&](const FactorPair& pair) {
    if (cfg.kind != SolverKind::KlMu) return sed_objective(x, pair.w, pair.h);
    const DenseMatrix wh = matmul(pair.w, pair.h);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) {
        const double xv = x(i, j);
        const double pv = std::max(wh(i, j), cfg.epsilon_guard);
        acc += xv > 0.0 ? xv * std::log(xv / pv) - xv + pv : pv;
      }
    return acc;
  };

  NmfResult result;
  result.factors = init;
  result.trace.points.push_back(
      {0, objective(init), relative_error(x, init.w, init.h), elapsed_ms()});
  result.trace.stop_reason = StopReason::MaxIter;

  DenseMatrix prev_product = matmul(init.w, init.h);
  for (std::size_t iter = 1; iter <= cfg.max_iter; ++iter) {
    switch (cfg.kind) {
      case SolverKind::SedMu:
        result.factors = mu_sed_step(x, result.factors, cfg.epsilon_guard);
        break;
      case SolverKind::KlMu:
        result.factors = mu_kl_step(x, result.factors, cfg.epsilon_guard);
        break;
      case SolverKind::Anls:
        result.factors = anls_step(x, result.factors);
        break;
    }
    const DenseMatrix product = matmul(result.factors.w, result.factors.h);
    const double diff = frobenius_diff_norm(product, prev_product);
    result.trace.points.push_back({iter, objective(result.factors),
                                   relative_error(x, result.factors.w,
                                                  result.factors.h),
                                   elapsed_ms()});
    if (diff <= cfg.tol) {
      result.trace.stop_reason = StopReason::Converged;
      break;
    }
    prev_product = product;
  }
  return result;
}

}  // namespace nmf
