#pragma once

// Test-side reference implementations. They share no code with the engine:
// faces are enumerated with std::set, matrices are dense, and the Smith form
// is the textbook pivot-and-clear loop over arbitrary-precision integers.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Big = boost::multiprecision::cpp_int;
using Face = std::vector<std::uint32_t>;
using Dense = std::vector<std::vector<std::int64_t>>;

inline std::vector<std::vector<Face>> faces_by_dim(const std::vector<Face>& facets) {
  std::set<Face> all;
  for (const auto& f : facets) {
    Face s = f;
    std::sort(s.begin(), s.end());
    const std::size_t k = s.size();
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
      Face sub;
      for (std::size_t i = 0; i < k; ++i) {
        if (mask >> i & 1u) sub.push_back(s[i]);
      }
      all.insert(sub);
    }
  }
  std::vector<std::vector<Face>> out;
  for (const auto& s : all) {
    if (out.size() < s.size()) out.resize(s.size());
    out[s.size() - 1].push_back(s);
  }
  return out;
}

/// Dense boundary matrix from dimension k to k-1 (k >= 1).
inline Dense boundary(const std::vector<std::vector<Face>>& faces, std::size_t k) {
  std::map<Face, std::size_t> row;
  for (std::size_t i = 0; i < faces[k - 1].size(); ++i) row[faces[k - 1][i]] = i;
  Dense m(faces[k - 1].size(), std::vector<std::int64_t>(faces[k].size(), 0));
  for (std::size_t j = 0; j < faces[k].size(); ++j) {
    const Face& s = faces[k][j];
    for (std::size_t i = 0; i < s.size(); ++i) {
      Face f = s;
      f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
      m[row.at(f)][j] += (i % 2 == 0) ? 1 : -1;
    }
  }
  return m;
}

inline std::size_t rank_mod_p(Dense m, std::int64_t p) {
  std::size_t rank = 0;
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  for (auto& r : m) {
    for (auto& x : r) x = ((x % p) + p) % p;
  }
  auto inv = [p](std::int64_t a) {
    std::int64_t r = 1, e = p - 2;
    while (e) {
      if (e & 1) r = r * a % p;
      a = a * a % p;
      e >>= 1;
    }
    return r;
  };
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    const std::int64_t iv = inv(m[rank][c]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][c] == 0) continue;
      const std::int64_t f = m[r][c] * iv % p;
      for (std::size_t cc = c; cc < cols; ++cc) m[r][cc] = ((m[r][cc] - f * m[rank][cc]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

/// Nonzero invariant factors, d_1 | d_2 | ...
inline std::vector<Big> smith(const Dense& in) {
  std::vector<std::vector<Big>> a;
  for (const auto& r : in) a.emplace_back(r.begin(), r.end());
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<Big> diag;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // smallest nonzero entry in the trailing block
    std::size_t pr = rows, pc = cols;
    for (std::size_t i = t; i < rows; ++i) {
      for (std::size_t j = t; j < cols; ++j) {
        if (a[i][j] != 0 && (pr == rows || abs(a[i][j]) < abs(a[pr][pc]))) {
          pr = i;
          pc = j;
        }
      }
    }
    if (pr == rows) break;
    std::swap(a[t], a[pr]);
    for (auto& r : a) std::swap(r[t], r[pc]);
    bool clean = true;
    for (std::size_t i = t + 1; i < rows; ++i) {
      const Big q = a[i][t] / a[t][t];
      if (q != 0) {
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
      }
      if (a[i][t] != 0) clean = false;
    }
    for (std::size_t j = t + 1; j < cols; ++j) {
      const Big q = a[t][j] / a[t][t];
      if (q != 0) {
        for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
      }
      if (a[t][j] != 0) clean = false;
    }
    if (!clean) continue;
    // pivot must divide the rest of the block
    bool divides = true;
    for (std::size_t i = t + 1; i < rows && divides; ++i) {
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[i][j] % a[t][t] != 0) {
          for (std::size_t jj = t; jj < cols; ++jj) a[t][jj] += a[i][jj];
          divides = false;
          break;
        }
      }
    }
    if (!divides) continue;
    diag.push_back(abs(a[t][t]));
    ++t;
  }
  return diag;
}

struct Homology {
  std::vector<std::int64_t> betti;
  std::vector<std::vector<std::int64_t>> torsion;
};

/// p = 0 means the rationals. Torsion from the Smith form of each boundary.
inline Homology homology(const std::vector<Face>& facets, std::int64_t p) {
  const auto faces = faces_by_dim(facets);
  const std::size_t top = faces.size();
  std::vector<std::size_t> rank(top + 1, 0);
  std::vector<std::vector<std::int64_t>> tors(top);
  for (std::size_t k = 1; k < top; ++k) {
    const Dense d = boundary(faces, k);
    if (p > 0) {
      rank[k] = rank_mod_p(d, p);
    } else {
      const auto s = smith(d);
      rank[k] = s.size();
      for (const auto& x : s) {
        if (x > 1) tors[k - 1].push_back(static_cast<std::int64_t>(x));
      }
    }
  }
  Homology h;
  for (std::size_t k = 0; k < top; ++k) {
    h.betti.push_back(static_cast<std::int64_t>(faces[k].size() - rank[k] - rank[k + 1]));
  }
  h.torsion = tors;
  return h;
}

}  // namespace oracle
