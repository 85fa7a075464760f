#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nmf/linalg.hpp"
#include "nmf/matrix.hpp"

namespace nmf {

// Candidate factorization X ~= W * H with provenance.
struct FactorPair {
  DenseMatrix w;  // m x r, entries >= 0
  DenseMatrix h;  // r x n, entries >= 0
  std::size_t rank = 0;
  std::string origin;                 // initializer name
  std::optional<std::uint64_t> seed;  // unset for deterministic initializers

  // Shape and non-negativity check; throws on violation.
  void validate(std::size_t m, std::size_t n) const;
};

enum class SolverKind { SedMu, KlMu, Anls };

SolverKind solver_from_name(const std::string& name);  // sed-mu|kl-mu|anls
std::string solver_name(SolverKind kind);

struct SolverConfig {
  SolverKind kind = SolverKind::SedMu;
  std::size_t max_iter = 200;
  double tol = 1e-10;            // on ||W^k H^k - W^{k-1} H^{k-1}||_F
  double epsilon_guard = 1e-12;  // added inside update denominators only
};

enum class StopReason { Converged, MaxIter };

struct IterationPoint {
  std::size_t iteration;  // 0 = untouched initializer output
  double objective;
  double rel_error;
  double elapsed_ms;
};

struct IterationTrace {
  std::vector<IterationPoint> points;
  StopReason stop_reason = StopReason::MaxIter;
};

struct NmfResult {
  FactorPair factors;
  IterationTrace trace;
};

// 1/2 * ||x - w*h||_F^2
double sed_objective(const DenseMatrix& x, const DenseMatrix& w,
                     const DenseMatrix& h);

// sum_ij x*log(x/(wh)) - x + (wh) with 0*log 0 = 0.
// Throws DomainError where x_ij > 0 and (wh)_ij = 0.
double kl_divergence(const DenseMatrix& x, const DenseMatrix& w,
                     const DenseMatrix& h);

// One multiplicative update for the squared-error objective: W first from
// the current H, then H from the updated W. Non-increasing objective.
FactorPair mu_sed_step(const DenseMatrix& x, const FactorPair& pair,
                       double epsilon_guard = 1e-12);

// One multiplicative update for the divergence objective: W update, column
// normalization of W to unit sum, then H update from the recomputed product.
FactorPair mu_kl_step(const DenseMatrix& x, const FactorPair& pair,
                      double epsilon_guard = 1e-12);

// argmin_{y>=0} ||b - a*y||_2 by an active-set method (iteration cap
// 10 * cols, then ConvergenceFailure). Exact on small well-posed systems.
std::vector<double> nnls_solve(const DenseMatrix& a,
                               const std::vector<double>& b);

// One alternating pass of exact non-negative least squares: every W row
// against the current H, then every H column against the updated W.
FactorPair anls_step(const DenseMatrix& x, const FactorPair& pair);

// Generic driver: applies the configured step until the Frobenius norm of
// the successive-product difference falls to cfg.tol or max_iter is reached.
// The trace starts at iteration 0 with the untouched initializer's quality.
NmfResult run_nmf(const DenseMatrix& x, const FactorPair& init,
                  const SolverConfig& cfg);

}  // namespace nmf
