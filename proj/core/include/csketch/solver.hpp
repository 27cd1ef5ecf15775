#pragma once

#include "csketch/basis.hpp"
#include "csketch/data.hpp"
#include "csketch/types.hpp"

namespace csketch {

/// sign(t) * min(|t|, M)
double truncate(double t, double M);

enum class SolveRoute { automatic, primal, gram };

struct FitOptions {
  double lambda = 0.0;     ///< ridge weight on |a|^2; 0 gives the minimum-norm solution
  double rank_tol = 1e-10; ///< pivots below rank_tol * largest pivot count as zero
  double gram_ratio = 1.5; ///< automatic route uses the p x p Gram system when q > gram_ratio * p
  SolveRoute route = SolveRoute::automatic;
};

struct LeastSquaresResult {
  Vector coefficients;
  Index rank = 0;
  double residual_norm = 0.0;
  SolveRoute route = SolveRoute::primal;
};

/// Minimiser of |Phi a - y|^2 + lambda |a|^2; for lambda == 0 the one of
/// least Euclidean norm.
///
/// The primal route factors Phi directly (complete orthogonal decomposition
/// for lambda == 0, QR of the stacked system [Phi; sqrt(lambda) I] otherwise). The Gram route
/// solves (Phi Phi^T + lambda I) c = y and returns Phi^T c; for lambda == 0 it
/// uses an eigen-decomposition with eigenvalues below
/// max(rank_tol^2, p eps) * w_max discarded.
LeastSquaresResult fit(const Matrix& phi, const Vector& y, const FitOptions& options = {});

struct MultiFitResult {
  Matrix coefficients;  ///< one column per right-hand side
  Index rank = 0;
  SolveRoute route = SolveRoute::primal;
};

/// Same minimiser for every column of Y, sharing one factorisation of Phi.
MultiFitResult fit_columns(const Matrix& phi, const Matrix& Y, const FitOptions& options = {});

struct FitDiagnostics {
  double residual_norm = 0.0;
  double train_rmse = 0.0;
  Index effective_rank = 0;
  SolveRoute route = SolveRoute::primal;
  double basis_seconds = 0.0;  ///< design-matrix assembly
  double solve_seconds = 0.0;
  double fit_seconds = 0.0;    ///< assembly + solve
};

struct FittedModel {
  SketchSpec spec;
  Vector coefficients;
  double M = 0.0;  ///< max |y_i| over the training targets
  double lambda = 0.0;
  PreprocessRecord prep;
  FitDiagnostics diagnostics;
};

FittedModel fit_model(const Dataset& train, const SketchSpec& spec, const FitOptions& options = {});

/// Fits from an already assembled design matrix whose rows match `train`.
FittedModel fit_model(const Dataset& train, const SketchSpec& spec, const Matrix& phi, const FitOptions& options);

/// Truncated predictions; inputs may exceed the ball by at most 1e-9.
Vector predict(const FittedModel& model, const RowMatrix& X);
/// Truncated predictions from precomputed feature rows.
Vector predict_from_design(const FittedModel& model, const Matrix& phi);

double rmse(const Vector& predicted, const Vector& truth);

}  // namespace csketch
