#include "csketch/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "csketch/errors.hpp"

namespace csketch {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Solved {
  Matrix coefficients;
  Index rank = 0;
  SolveRoute route = SolveRoute::primal;
};

Solved solve_primal(const Matrix& phi, const Matrix& Y, const FitOptions& options) {
  const Index p = phi.rows();
  const Index q = phi.cols();
  Solved out;
  out.route = SolveRoute::primal;
  if (options.lambda == 0.0) {
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
    cod.setThreshold(options.rank_tol);
    cod.compute(phi);
    out.coefficients = cod.solve(Y);
    out.rank = cod.rank();
  } else {
    Matrix a = Matrix::Zero(p + q, q);
    a.topRows(p) = phi;
    a.bottomRows(q).diagonal().setConstant(std::sqrt(options.lambda));
    Matrix b = Matrix::Zero(p + q, Y.cols());
    b.topRows(p) = Y;
    out.coefficients = a.householderQr().solve(b);
    out.rank = q;
  }
  return out;
}

Solved solve_gram(const Matrix& phi, const Matrix& Y, const FitOptions& options) {
  const Index p = phi.rows();
  Matrix gram = Matrix::Zero(p, p);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(phi);
  Solved out;
  out.route = SolveRoute::gram;
  Matrix c;
  if (options.lambda == 0.0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    if (eig.info() != Eigen::Success) throw NumericalError("Gram eigen-decomposition did not converge");
    const Vector& w = eig.eigenvalues();
    const Matrix& v = eig.eigenvectors();
    const double w_max = w.size() ? w.maxCoeff() : 0.0;
    const double cutoff = std::max(options.rank_tol * options.rank_tol,
                                   static_cast<double>(p) * std::numeric_limits<double>::epsilon()) *
                          w_max;
    Matrix proj = v.transpose() * Y;
    for (Index i = 0; i < p; ++i) {
      if (w_max > 0.0 && w(i) > cutoff) {
        proj.row(i) /= w(i);
        ++out.rank;
      } else {
        proj.row(i).setZero();
      }
    }
    c = v * proj;
  } else {
    gram.diagonal().array() += options.lambda;
    Eigen::LLT<Matrix> llt(gram);
    if (llt.info() != Eigen::Success) throw NumericalError("regularised Gram matrix is not positive definite");
    c = llt.solve(Y);
    out.rank = p;
  }
  out.coefficients = phi.transpose() * c;
  return out;
}

Solved solve_any(const Matrix& phi, const Matrix& Y, const FitOptions& options) {
  const Index p = phi.rows();
  const Index q = phi.cols();
  if (p < 1 || q < 1) throw std::invalid_argument("fit needs a non-empty design matrix");
  if (Y.rows() != p) {
    throw std::invalid_argument("design matrix has " + std::to_string(p) + " rows but target has " +
                                std::to_string(Y.rows()) + " entries");
  }
  if (!(options.lambda >= 0.0)) throw std::invalid_argument("ridge weight lambda must be >= 0");
  if (!(options.rank_tol > 0.0)) throw std::invalid_argument("rank tolerance must be > 0");
  if (!phi.allFinite()) throw NumericalError("design matrix contains non-finite entries");
  if (!Y.allFinite()) throw DataError("targets contain non-finite entries");

  SolveRoute route = options.route;
  if (route == SolveRoute::automatic) {
    route = static_cast<double>(q) > options.gram_ratio * static_cast<double>(p) ? SolveRoute::gram : SolveRoute::primal;
  }
  Solved out = route == SolveRoute::gram ? solve_gram(phi, Y, options) : solve_primal(phi, Y, options);
  if (!out.coefficients.allFinite()) throw NumericalError("least-squares solve produced non-finite coefficients");
  return out;
}

}  // namespace

double truncate(double t, double M) {
  if (!(M > 0.0)) throw std::invalid_argument("truncation bound M must be > 0");
  if (t > M) return M;
  if (t < -M) return -M;
  return t;
}

LeastSquaresResult fit(const Matrix& phi, const Vector& y, const FitOptions& options) {
  Solved solved = solve_any(phi, y, options);
  LeastSquaresResult out;
  out.coefficients = solved.coefficients.col(0);
  out.rank = solved.rank;
  out.route = solved.route;
  out.residual_norm = (phi * out.coefficients - y).norm();
  return out;
}

MultiFitResult fit_columns(const Matrix& phi, const Matrix& Y, const FitOptions& options) {
  if (Y.cols() < 1) throw std::invalid_argument("fit_columns needs at least one right-hand side");
  Solved solved = solve_any(phi, Y, options);
  MultiFitResult out;
  out.coefficients = std::move(solved.coefficients);
  out.rank = solved.rank;
  out.route = solved.route;
  return out;
}

FittedModel fit_model(const Dataset& train, const SketchSpec& spec, const FitOptions& options) {
  if (train.size() < 1) throw DataError("training set is empty");
  const auto start = Clock::now();
  const Matrix phi = design_matrix(train.X, spec);
  const double basis_seconds = seconds_since(start);
  FittedModel model = fit_model(train, spec, phi, options);
  model.diagnostics.basis_seconds = basis_seconds;
  model.diagnostics.fit_seconds += basis_seconds;
  return model;
}

FittedModel fit_model(const Dataset& train, const SketchSpec& spec, const Matrix& phi, const FitOptions& options) {
  if (train.size() < 1) throw DataError("training set is empty");
  if (phi.rows() != train.size() || phi.cols() != spec.dimension()) {
    throw std::invalid_argument("design matrix shape does not match training set and sketch");
  }
  const auto start = Clock::now();
  LeastSquaresResult solved = fit(phi, train.y, options);
  FittedModel model;
  model.spec = spec;
  model.coefficients = std::move(solved.coefficients);
  model.M = train.y.cwiseAbs().maxCoeff();
  model.lambda = options.lambda;
  model.prep = train.prep;
  model.diagnostics.residual_norm = solved.residual_norm;
  model.diagnostics.effective_rank = solved.rank;
  model.diagnostics.route = solved.route;
  model.diagnostics.solve_seconds = seconds_since(start);
  model.diagnostics.fit_seconds = model.diagnostics.solve_seconds;
  model.diagnostics.train_rmse = solved.residual_norm / std::sqrt(static_cast<double>(train.size()));
  return model;
}

Vector predict_from_design(const FittedModel& model, const Matrix& phi) {
  if (phi.cols() != model.coefficients.size()) throw std::invalid_argument("design matrix width mismatch");
  Vector raw = phi * model.coefficients;
  if (model.M > 0.0) {
    for (Index i = 0; i < raw.size(); ++i) raw(i) = truncate(raw(i), model.M);
  } else {
    raw.setZero();
  }
  return raw;
}

Vector predict(const FittedModel& model, const RowMatrix& X) {
  if (X.rows() > 0 && X.cols() != model.spec.dim()) {
    throw DataError("input has " + std::to_string(X.cols()) + " columns, model expects " +
                    std::to_string(model.spec.dim()));
  }
  return predict_from_design(model, design_matrix(X, model.spec, 1e-9));
}

double rmse(const Vector& predicted, const Vector& truth) {
  if (predicted.size() != truth.size()) throw std::invalid_argument("rmse needs vectors of equal length");
  if (predicted.size() < 1) throw std::invalid_argument("rmse needs at least one value");
  return std::sqrt((predicted - truth).squaredNorm() / static_cast<double>(predicted.size()));
}

}  // namespace csketch
