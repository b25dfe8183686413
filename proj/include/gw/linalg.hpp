#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gw {

/// Row-major dense matrix of 64-bit reals.
///
/// Values are treated as immutable once produced by the exported kernels;
/// every kernel is a pure function with a fixed sequential reduction order,
/// so identical inputs give bit-identical outputs. No internal threading.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return entries_.size(); }

  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

  std::span<const double> entries() const noexcept { return entries_; }
  std::span<double> mutable_entries() noexcept { return entries_; }

  bool same_shape(const DenseMatrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

/// Full spectral decomposition of a symmetric matrix: eigenvalues ascending,
/// eigenvectors as orthonormal columns so that Q diag(values) Q^T = input.
struct SymEigDecomposition {
  std::vector<double> eigenvalues;
  DenseMatrix eigenvectors;
};

/// Matrix product a*b with sequential accumulation over the inner index.
DenseMatrix gemm(const DenseMatrix& a, const DenseMatrix& b);

/// Entrywise product; shapes must match.
DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);

/// Entrywise exp(a_ij / scale). Exponent arguments are clamped to [-700, 700];
/// when any clamp engages, *saturated (if given) is set to true.
DenseMatrix exp_map(const DenseMatrix& a, double scale, bool* saturated = nullptr);

/// Spectral decomposition via cyclic Jacobi rotations.
SymEigDecomposition sym_eig(const DenseMatrix& a);

/// exp(-a) for symmetric a, computed as Q exp(-lambda) Q^T.
DenseMatrix expm_neg_sym(const DenseMatrix& a);

/// Largest singular value via power iteration on a^T a with the all-ones
/// start vector; relative tolerance 1e-10. Zero matrix maps to 0.
double spectral_norm(const DenseMatrix& a);

DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scaled(const DenseMatrix& a, double factor);

double frobenius_norm(const DenseMatrix& a);
double max_abs(const DenseMatrix& a);
double max_entry(const DenseMatrix& a);
double entry_sum(const DenseMatrix& a);
bool all_finite(const DenseMatrix& a);

std::vector<double> row_sums(const DenseMatrix& a);
std::vector<double> col_sums(const DenseMatrix& a);

/// Max absolute asymmetry |a - a^T|, 0 for non-square input treated as error upstream.
double asymmetry(const DenseMatrix& a);

}  // namespace gw
