#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sqh/complex.hpp"

namespace sqh {

struct MatrixEntry {
  std::uint32_t row;
  std::uint32_t col;
  std::int64_t value;
};

/// Sparse integer matrix in coordinate form, entries sorted by (col, row),
/// no explicit zeros.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<MatrixEntry> entries);

  static SparseMatrix from_dense(const std::vector<std::vector<std::int64_t>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<MatrixEntry>& entries() const noexcept { return entries_; }
  std::size_t nonzeros() const noexcept { return entries_.size(); }
  bool is_zero() const noexcept { return entries_.empty(); }

  /// Column j occupies entries()[col_begin(j) .. col_begin(j+1)).
  std::size_t col_begin(std::size_t j) const { return col_start_[j]; }

  std::vector<std::vector<std::int64_t>> to_dense() const;
  SparseMatrix transpose() const;
  /// Keeps the listed rows and columns, renumbered in the given order.
  SparseMatrix submatrix(std::span<const std::uint32_t> rows, std::span<const std::uint32_t> cols) const;

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);
  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<MatrixEntry> entries_;
  std::vector<std::size_t> col_start_{0};
};

inline bool operator==(const MatrixEntry& a, const MatrixEntry& b) {
  return a.row == b.row && a.col == b.col && a.value == b.value;
}

/// Free chain complex C_0 .. C_d with integer boundary matrices.
///
/// boundaries[k] maps C_k to C_{k-1}; boundaries[0] is the 0 x ranks[0]
/// matrix. basis_labels[k][i] names the i-th basis element of C_k by a
/// sorted vertex list (the simplex, or an orbit representative).
struct ChainComplex {
  std::vector<std::size_t> ranks;
  std::vector<SparseMatrix> boundaries;
  std::vector<std::vector<Simplex>> basis_labels;

  int top_degree() const noexcept { return static_cast<int>(ranks.size()) - 1; }

  /// Checks shapes and that consecutive boundaries compose to zero.
  /// Throws corrupt-complex otherwise.
  void validate() const;

  /// Quotient complex C / C', where C' is spanned by the marked basis
  /// elements. Throws invalid-parameter if C' is not closed under the
  /// boundary.
  ChainComplex relative_to(const std::vector<std::vector<bool>>& in_subcomplex) const;
};

using OrientedChainComplex = ChainComplex;

/// Simplicial chains with ascending-vertex orientation; deleting vertex i
/// contributes sign (-1)^i.
ChainComplex chain_complex(const SimplicialComplex& complex);
ChainComplex chain_complex(const SimplexTable& table);

}  // namespace sqh
