#include "gw/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gw/errors.hpp"

namespace gw {

namespace {

constexpr double kExpClamp = 700.0;

void ensure_finite(const DenseMatrix& m, const char* op) {
  if (!all_finite(m)) {
    throw DomainError(std::string(op) + ": result contains non-finite entries");
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw ShapeError("DenseMatrix: entry count does not equal rows*cols");
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  DenseMatrix m(r, c, 0.0);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("from_rows: ragged row lengths");
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

DenseMatrix gemm(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("gemm: inner dimensions differ (" + std::to_string(a.cols()) + " vs " +
                     std::to_string(b.rows()) + ")");
  }
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  DenseMatrix c(n, m, 0.0);
  const double* pa = a.entries().data();
  const double* pb = b.entries().data();
  double* pc = c.mutable_entries().data();
  // i-k-j loop: each c(i,j) accumulates over k in ascending order.
  for (std::size_t i = 0; i < n; ++i) {
    double* crow = pc + i * m;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double aik = pa[i * k + kk];
      const double* brow = pb + kk * m;
      for (std::size_t j = 0; j < m; ++j) crow[j] += aik * brow[j];
    }
  }
  ensure_finite(c, "gemm");
  return c;
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) throw ShapeError("hadamard: shapes differ");
  DenseMatrix c(a.rows(), a.cols());
  for (std::size_t idx = 0; idx < a.size(); ++idx) {
    c.mutable_entries()[idx] = a.entries()[idx] * b.entries()[idx];
  }
  ensure_finite(c, "hadamard");
  return c;
}

DenseMatrix exp_map(const DenseMatrix& a, double scale, bool* saturated) {
  if (scale == 0.0) throw ParameterError("exp_map: scale must be nonzero");
  DenseMatrix c(a.rows(), a.cols());
  bool clamped = false;
  for (std::size_t idx = 0; idx < a.size(); ++idx) {
    double x = a.entries()[idx] / scale;
    if (x > kExpClamp) {
      x = kExpClamp;
      clamped = true;
    } else if (x < -kExpClamp) {
      x = -kExpClamp;
      clamped = true;
    }
    c.mutable_entries()[idx] = std::exp(x);
  }
  if (saturated != nullptr) *saturated = clamped;
  ensure_finite(c, "exp_map");
  return c;
}

double asymmetry(const DenseMatrix& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      worst = std::max(worst, std::abs(a(i, j) - a(j, i)));
    }
  }
  return worst;
}

SymEigDecomposition sym_eig(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw ParameterError("sym_eig: matrix must be square");
  const std::size_t n = a.rows();
  if (asymmetry(a) > 1e-12 * std::max(1.0, max_abs(a))) {
    throw ParameterError("sym_eig: matrix asymmetric beyond tolerance");
  }

  DenseMatrix w = a;
  // Exact symmetrization so rotations see w(p,q) == w(q,p).
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (w(i, j) + w(j, i));
      w(i, j) = v;
      w(j, i) = v;
    }
  }
  DenseMatrix q = DenseMatrix::identity(n);

  const double scale = std::max(1.0, max_abs(w));
  const double stop = 1e-15 * scale;
  const std::size_t max_sweeps = 64;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t r = p + 1; r < n; ++r) off = std::max(off, std::abs(w(p, r)));
    }
    if (off <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t r = p + 1; r < n; ++r) {
        const double apq = w(p, r);
        if (std::abs(apq) <= stop * 1e-2) continue;
        const double theta = (w(r, r) - w(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double wip = w(i, p), wiq = w(i, r);
          w(i, p) = c * wip - s * wiq;
          w(i, r) = s * wip + c * wiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const double wpj = w(p, j), wqj = w(r, j);
          w(p, j) = c * wpj - s * wqj;
          w(r, j) = s * wpj + c * wqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double qip = q(i, p), qiq = q(i, r);
          q(i, p) = c * qip - s * qiq;
          q(i, r) = s * qip + c * qiq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return w(x, x) < w(y, y); });

  SymEigDecomposition dec;
  dec.eigenvalues.resize(n);
  dec.eigenvectors = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    dec.eigenvalues[j] = w(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) dec.eigenvectors(i, j) = q(i, order[j]);
  }
  return dec;
}

DenseMatrix expm_neg_sym(const DenseMatrix& a) {
  const SymEigDecomposition dec = sym_eig(a);
  const std::size_t n = a.rows();
  DenseMatrix scaled_q(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double f = std::exp(-dec.eigenvalues[j]);
    for (std::size_t i = 0; i < n; ++i) scaled_q(i, j) = dec.eigenvectors(i, j) * f;
  }
  DenseMatrix res = gemm(scaled_q, transpose(dec.eigenvectors));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (res(i, j) + res(j, i));
      res(i, j) = v;
      res(j, i) = v;
    }
  }
  ensure_finite(res, "expm_neg_sym");
  return res;
}

double spectral_norm(const DenseMatrix& a) {
  if (a.size() == 0) return 0.0;
  const DenseMatrix b = gemm(transpose(a), a);
  const std::size_t m = b.rows();
  std::vector<double> v(m, 1.0);
  double lambda = 0.0;
  const std::size_t max_iters = 100000;
  for (std::size_t it = 0; it < max_iters; ++it) {
    std::vector<double> y(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) acc += b(i, j) * v[j];
      y[i] = acc;
    }
    double ynorm = 0.0;
    for (double x : y) ynorm += x * x;
    ynorm = std::sqrt(ynorm);
    if (ynorm == 0.0) return 0.0;
    double vy = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      vy += v[i] * y[i];
      vv += v[i] * v[i];
    }
    const double next = vy / vv;
    for (std::size_t i = 0; i < m; ++i) v[i] = y[i] / ynorm;
    if (it > 0 && std::abs(next - lambda) <= 1e-10 * std::max(std::abs(next), 1e-300)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) throw ShapeError("add: shapes differ");
  DenseMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) {
    c.mutable_entries()[i] = a.entries()[i] + b.entries()[i];
  }
  return c;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) throw ShapeError("subtract: shapes differ");
  DenseMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) {
    c.mutable_entries()[i] = a.entries()[i] - b.entries()[i];
  }
  return c;
}

DenseMatrix scaled(const DenseMatrix& a, double factor) {
  DenseMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) c.mutable_entries()[i] = a.entries()[i] * factor;
  return c;
}

double frobenius_norm(const DenseMatrix& a) {
  double acc = 0.0;
  for (double v : a.entries()) acc += v * v;
  return std::sqrt(acc);
}

double max_abs(const DenseMatrix& a) {
  double worst = 0.0;
  for (double v : a.entries()) worst = std::max(worst, std::abs(v));
  return worst;
}

double max_entry(const DenseMatrix& a) {
  double best = -std::numeric_limits<double>::infinity();
  for (double v : a.entries()) best = std::max(best, v);
  return best;
}

double entry_sum(const DenseMatrix& a) {
  double acc = 0.0;
  for (double v : a.entries()) acc += v;
  return acc;
}

bool all_finite(const DenseMatrix& a) {
  for (double v : a.entries()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::vector<double> row_sums(const DenseMatrix& a) {
  std::vector<double> sums(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j);
    sums[i] = acc;
  }
  return sums;
}

std::vector<double> col_sums(const DenseMatrix& a) {
  std::vector<double> sums(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) sums[j] += a(i, j);
  }
  return sums;
}

}  // namespace gw
