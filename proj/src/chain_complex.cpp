#include "sqh/chain_complex.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "sqh/error.hpp"

namespace sqh {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<MatrixEntry> entries)
    : rows_(rows), cols_(cols) {
  std::sort(entries.begin(), entries.end(), [](const MatrixEntry& a, const MatrixEntry& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  for (const auto& e : entries) {
    if (e.row >= rows || e.col >= cols) {
      throw Error(ErrorKind::InvalidParameter, "matrix entry out of range");
    }
    if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col) {
      entries_.back().value += e.value;
    } else {
      entries_.push_back(e);
    }
  }
  std::erase_if(entries_, [](const MatrixEntry& e) { return e.value == 0; });
  col_start_.assign(cols_ + 1, 0);
  for (const auto& e : entries_) ++col_start_[e.col + 1];
  for (std::size_t j = 0; j < cols_; ++j) col_start_[j + 1] += col_start_[j];
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<std::int64_t>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  std::vector<MatrixEntry> entries;
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw Error(ErrorKind::InvalidParameter, "ragged dense matrix");
    for (std::size_t j = 0; j < c; ++j) {
      if (rows[i][j] != 0) {
        entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), rows[i][j]});
      }
    }
  }
  return SparseMatrix(r, c, std::move(entries));
}

std::vector<std::vector<std::int64_t>> SparseMatrix::to_dense() const {
  std::vector<std::vector<std::int64_t>> d(rows_, std::vector<std::int64_t>(cols_, 0));
  for (const auto& e : entries_) d[e.row][e.col] = e.value;
  return d;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<MatrixEntry> t;
  t.reserve(entries_.size());
  for (const auto& e : entries_) t.push_back({e.col, e.row, e.value});
  return SparseMatrix(cols_, rows_, std::move(t));
}

SparseMatrix SparseMatrix::submatrix(std::span<const std::uint32_t> rows,
                                     std::span<const std::uint32_t> cols) const {
  std::vector<std::int64_t> row_map(rows_, -1);
  for (std::size_t i = 0; i < rows.size(); ++i) row_map[rows[i]] = static_cast<std::int64_t>(i);
  std::vector<MatrixEntry> out;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t e = col_start_[cols[j]]; e < col_start_[cols[j] + 1]; ++e) {
      const auto r = row_map[entries_[e].row];
      if (r >= 0) {
        out.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(j), entries_[e].value});
      }
    }
  }
  return SparseMatrix(rows.size(), cols.size(), std::move(out));
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::InvalidParameter, "shape mismatch in product");
  std::vector<MatrixEntry> out;
  std::map<std::uint32_t, std::int64_t> acc;
  for (std::size_t j = 0; j < b.cols(); ++j) {
    acc.clear();
    for (std::size_t e = b.col_begin(j); e < b.col_begin(j + 1); ++e) {
      const auto& be = b.entries()[e];
      for (std::size_t f = a.col_begin(be.row); f < a.col_begin(be.row + 1); ++f) {
        acc[a.entries()[f].row] += a.entries()[f].value * be.value;
      }
    }
    for (const auto& [r, v] : acc) {
      if (v != 0) out.push_back({r, static_cast<std::uint32_t>(j), v});
    }
  }
  return SparseMatrix(a.rows(), b.cols(), std::move(out));
}

void ChainComplex::validate() const {
  if (boundaries.size() != ranks.size()) {
    throw Error(ErrorKind::CorruptComplex, "boundary count does not match degree count");
  }
  for (std::size_t k = 0; k < ranks.size(); ++k) {
    const std::size_t expected_rows = k == 0 ? 0 : ranks[k - 1];
    if (boundaries[k].cols() != ranks[k] || boundaries[k].rows() != expected_rows) {
      throw Error(ErrorKind::CorruptComplex, "boundary " + std::to_string(k) + " has wrong shape");
    }
  }
  for (std::size_t k = 2; k < ranks.size(); ++k) {
    if (!(boundaries[k - 1] * boundaries[k]).is_zero()) {
      throw Error(ErrorKind::CorruptComplex, "boundary composition nonzero at degree " + std::to_string(k));
    }
  }
}

ChainComplex ChainComplex::relative_to(const std::vector<std::vector<bool>>& in_sub) const {
  if (in_sub.size() > ranks.size()) {
    throw Error(ErrorKind::InvalidParameter, "subcomplex has more degrees than the complex");
  }
  auto marked = [&](std::size_t k, std::size_t i) {
    return k < in_sub.size() && i < in_sub[k].size() && in_sub[k][i];
  };
  std::vector<std::vector<std::uint32_t>> keep(ranks.size());
  for (std::size_t k = 0; k < ranks.size(); ++k) {
    if (k < in_sub.size() && in_sub[k].size() != ranks[k]) {
      throw Error(ErrorKind::InvalidParameter, "subcomplex mask has wrong length");
    }
    for (std::uint32_t i = 0; i < ranks[k]; ++i) {
      if (!marked(k, i)) keep[k].push_back(i);
    }
  }
  for (std::size_t k = 1; k < ranks.size(); ++k) {
    for (const auto& e : boundaries[k].entries()) {
      if (marked(k, e.col) && !marked(k - 1, e.row)) {
        throw Error(ErrorKind::InvalidParameter, "marked cells are not closed under the boundary");
      }
    }
  }
  ChainComplex rel;
  for (std::size_t k = 0; k < ranks.size(); ++k) {
    rel.ranks.push_back(keep[k].size());
    std::vector<Simplex> labels;
    for (auto i : keep[k]) labels.push_back(basis_labels.at(k).at(i));
    rel.basis_labels.push_back(std::move(labels));
    if (k == 0) {
      rel.boundaries.emplace_back(0, keep[0].size(), std::vector<MatrixEntry>{});
    } else {
      rel.boundaries.push_back(boundaries[k].submatrix(keep[k - 1], keep[k]));
    }
  }
  return rel;
}

ChainComplex chain_complex(const SimplexTable& table) {
  ChainComplex c;
  const int dim = table.dimension();
  for (int k = 0; k <= dim; ++k) {
    const auto& simplices = table.simplices(k);
    c.ranks.push_back(simplices.size());
    c.basis_labels.push_back(simplices);
    if (k == 0) {
      c.boundaries.emplace_back(0, simplices.size(), std::vector<MatrixEntry>{});
      continue;
    }
    std::vector<MatrixEntry> entries;
    entries.reserve(simplices.size() * (k + 1));
    Simplex face(k);
    for (std::uint32_t j = 0; j < simplices.size(); ++j) {
      const auto& s = simplices[j];
      for (int i = 0; i <= k; ++i) {
        std::copy(s.begin(), s.begin() + i, face.begin());
        std::copy(s.begin() + i + 1, s.end(), face.begin() + i);
        entries.push_back({*table.index_of(face), j, (i % 2 == 0) ? 1 : -1});
      }
    }
    c.boundaries.emplace_back(table.count(k - 1), simplices.size(), std::move(entries));
  }
  return c;
}

ChainComplex chain_complex(const SimplicialComplex& complex) {
  return chain_complex(SimplexTable(complex));
}

}  // namespace sqh
