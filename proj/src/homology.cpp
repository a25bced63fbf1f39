#include "sqh/homology.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <random>
#include <utility>

#include "sqh/error.hpp"
#include "sqh/primes.hpp"

namespace sqh {

namespace {

using Pos = std::uint32_t;
using MinHeap = std::priority_queue<std::pair<std::uint32_t, Pos>, std::vector<std::pair<std::uint32_t, Pos>>,
                                    std::greater<>>;

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, new_t = 1, r = p, new_r = a;
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  return static_cast<std::uint32_t>(t < 0 ? t + p : t);
}

// Columns in order of increasing weight; ties by index.
std::vector<std::uint32_t> column_order(const SparseMatrix& m) {
  std::vector<std::uint32_t> order(m.cols());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return m.col_begin(a + 1) - m.col_begin(a) < m.col_begin(b + 1) - m.col_begin(b);
  });
  return order;
}

std::vector<std::uint32_t> row_weights(const SparseMatrix& m) {
  std::vector<std::uint32_t> w(m.rows(), 0);
  for (const auto& e : m.entries()) ++w[e.row];
  return w;
}

// Incremental echelon basis of column vectors over the integers. Each pivot
// vector is zero at the pivot positions of all earlier pivots, so a vector
// is reduced by visiting its pivot positions in increasing pivot order.
class IntegerEchelon {
 public:
  using Vec = std::vector<std::pair<Pos, BigInt>>;

  IntegerEchelon(std::size_t positions, std::vector<std::uint32_t> weights)
      : pivot_of_(positions, -1), acc_(positions), touched_flag_(positions, 0),
        queued_(positions, 0), weights_(std::move(weights)) {}

  std::size_t size() const { return pivots_.size(); }

  /// Reduces v against every pivot. When all pivot leads are units this is
  /// a sequence of integer column operations; otherwise v is also rescaled.
  Vec reduce(const Vec& v) {
    MinHeap heap;
    for (const auto& [pos, val] : v) {
      touch(pos);
      acc_[pos] += val;
    }
    for (Pos pos : touched_) {
      if (pivot_of_[pos] >= 0 && !acc_[pos].is_zero() && !queued_[pos]) {
        queued_[pos] = 1;
        heap.emplace(pivot_of_[pos], pos);
      }
    }
    while (!heap.empty()) {
      const auto [k, pos] = heap.top();
      heap.pop();
      queued_[pos] = 0;
      const BigInt f = acc_[pos];
      if (f.is_zero()) continue;
      const auto& piv = pivots_[k];
      const BigInt& lead = leads_[k];
      BigInt scale_acc = 1;
      BigInt scale_piv;
      if (lead == 1 || lead == -1) {
        scale_piv = f * lead;
      } else {
        const BigInt g = boost::multiprecision::gcd(lead, f);
        scale_acc = lead / g;
        scale_piv = f / g;
        for (Pos t : touched_) acc_[t] *= scale_acc;
      }
      for (const auto& [q, val] : piv) {
        touch(q);
        acc_[q] -= scale_piv * val;
        if (pivot_of_[q] > static_cast<std::int64_t>(k) && !queued_[q] && !acc_[q].is_zero()) {
          queued_[q] = 1;
          heap.emplace(static_cast<std::uint32_t>(pivot_of_[q]), q);
        }
      }
    }
    Vec out;
    std::sort(touched_.begin(), touched_.end());
    for (Pos t : touched_) {
      if (!acc_[t].is_zero()) out.emplace_back(t, std::move(acc_[t]));
      acc_[t] = 0;
      touched_flag_[t] = 0;
    }
    touched_.clear();
    return out;
  }

  static void make_primitive(Vec& v) {
    BigInt g = 0;
    for (const auto& [_, val] : v) {
      g = boost::multiprecision::gcd(g, val);
      if (g == 1) return;
    }
    if (g > 1) {
      for (auto& [_, val] : v) val /= g;
    }
  }

  /// Position to pivot on: a unit entry if any, then the lightest row.
  std::optional<Pos> choose_pivot(const Vec& v, bool require_unit) const {
    std::optional<Pos> best;
    bool best_unit = false;
    for (const auto& [pos, val] : v) {
      const bool unit = val == 1 || val == -1;
      if (require_unit && !unit) continue;
      if (!best || (unit && !best_unit) ||
          (unit == best_unit && weights_[pos] < weights_[*best])) {
        best = pos;
        best_unit = unit;
      }
    }
    return best;
  }

  void add_pivot(Vec v, Pos pos) {
    const auto it = std::find_if(v.begin(), v.end(), [&](const auto& e) { return e.first == pos; });
    leads_.push_back(it->second);
    pivot_of_[pos] = static_cast<std::int64_t>(pivots_.size());
    pivots_.push_back(std::move(v));
  }

  bool is_pivot_position(Pos pos) const { return pivot_of_[pos] >= 0; }

 private:
  void touch(Pos pos) {
    if (!touched_flag_[pos]) {
      touched_flag_[pos] = 1;
      touched_.push_back(pos);
    }
  }

  std::vector<Vec> pivots_;
  std::vector<BigInt> leads_;
  std::vector<std::int64_t> pivot_of_;
  std::vector<BigInt> acc_;
  std::vector<char> touched_flag_;
  std::vector<char> queued_;
  std::vector<Pos> touched_;
  std::vector<std::uint32_t> weights_;
};

IntegerEchelon::Vec column_vec(const SparseMatrix& m, std::uint32_t j) {
  IntegerEchelon::Vec v;
  for (std::size_t e = m.col_begin(j); e < m.col_begin(j + 1); ++e) {
    v.emplace_back(m.entries()[e].row, BigInt(m.entries()[e].value));
  }
  return v;
}

// Diagonalizes a dense integer matrix by unimodular row and column
// operations and returns the nonzero diagonal entries (absolute values).
std::vector<BigInt> dense_diagonalize(std::vector<std::vector<BigInt>> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  std::vector<BigInt> diag;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block moves to (t, t).
      std::size_t bi = rows, bj = cols;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (!a[i][j].is_zero() && (bi == rows || abs(a[i][j]) < abs(a[bi][bj]))) {
            bi = i;
            bj = j;
          }
        }
      }
      if (bi == rows) return diag;
      std::swap(a[t], a[bi]);
      for (auto& row : a) std::swap(row[t], row[bj]);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t].is_zero()) continue;
        const BigInt q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (!a[i][t].is_zero()) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j].is_zero()) continue;
        const BigInt q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        if (!a[t][j].is_zero()) clean = false;
      }
      if (clean) break;
    }
    diag.push_back(abs(a[t][t]));
  }
  return diag;
}

// Turns any multiset of positive diagonal entries into the divisibility
// chain of the equivalent Smith form.
std::vector<BigInt> normalize_divisors(std::vector<BigInt> d) {
  std::sort(d.begin(), d.end());
  const auto first_nonunit = std::find_if(d.begin(), d.end(), [](const BigInt& x) { return x != 1; });
  const std::size_t start = static_cast<std::size_t>(first_nonunit - d.begin());
  for (std::size_t i = start; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      const BigInt g = boost::multiprecision::gcd(d[i], d[j]);
      const BigInt l = d[i] / g * d[j];
      d[i] = g;
      d[j] = l;
    }
  }
  return d;
}

std::int64_t to_int64(const BigInt& x) {
  if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min()) {
    throw Error(ErrorKind::Inconsistency, "integer does not fit in 64 bits");
  }
  return x.convert_to<std::int64_t>();
}

}  // namespace

FieldSpec FieldSpec::prime(std::uint64_t p) {
  if (p > (std::uint64_t{1} << 31) || !is_prime(p)) {
    throw Error(ErrorKind::InvalidParameter, "field characteristic " + std::to_string(p) + " is not a prime <= 2^31");
  }
  return FieldSpec(static_cast<std::uint32_t>(p));
}

FieldSpec FieldSpec::parse(std::string_view name) {
  if (name == "Q") return rationals();
  if (name.starts_with("Fp:")) {
    const std::string digits(name.substr(3));
    if (digits.empty() || digits.size() > 12 ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw Error(ErrorKind::ParseError, "bad field name '" + std::string(name) + "'");
    }
    return prime(std::stoull(digits));
  }
  throw Error(ErrorKind::ParseError, "bad field name '" + std::string(name) + "'");
}

std::string FieldSpec::name() const {
  return is_rational() ? "Q" : "Fp:" + std::to_string(characteristic_);
}

std::size_t ElementaryDivisors::rank_mod(std::uint64_t p) const {
  return static_cast<std::size_t>(std::count_if(divisors.begin(), divisors.end(),
                                                [&](const BigInt& d) { return d % p != 0; }));
}

std::vector<std::int64_t> ElementaryDivisors::torsion() const {
  std::vector<std::int64_t> t;
  for (const auto& d : divisors) {
    if (d > 1) t.push_back(to_int64(d));
  }
  return t;
}

std::size_t rank_mod_p(const SparseMatrix& m, std::uint32_t p) {
  if (p < 2) throw Error(ErrorKind::InvalidParameter, "modulus must be a prime");
  const std::size_t n = m.rows();
  const auto weights = row_weights(m);
  std::vector<std::vector<std::pair<Pos, std::uint32_t>>> pivots;
  std::vector<std::int64_t> pivot_of(n, -1);
  std::vector<std::uint64_t> acc(n, 0);
  std::vector<char> touched_flag(n, 0), queued(n, 0);
  std::vector<Pos> touched;
  auto touch = [&](Pos pos) {
    if (!touched_flag[pos]) {
      touched_flag[pos] = 1;
      touched.push_back(pos);
    }
  };

  for (std::uint32_t j : column_order(m)) {
    MinHeap heap;
    for (std::size_t e = m.col_begin(j); e < m.col_begin(j + 1); ++e) {
      const auto& entry = m.entries()[e];
      std::int64_t v = entry.value % static_cast<std::int64_t>(p);
      if (v < 0) v += p;
      touch(entry.row);
      acc[entry.row] = (acc[entry.row] + static_cast<std::uint64_t>(v)) % p;
    }
    for (Pos pos : touched) {
      if (pivot_of[pos] >= 0 && acc[pos] != 0 && !queued[pos]) {
        queued[pos] = 1;
        heap.emplace(static_cast<std::uint32_t>(pivot_of[pos]), pos);
      }
    }
    while (!heap.empty()) {
      const auto [k, pos] = heap.top();
      heap.pop();
      queued[pos] = 0;
      const std::uint64_t f = acc[pos];
      if (f == 0) continue;
      const std::uint64_t neg = p - f;
      for (const auto& [q, val] : pivots[k]) {
        touch(q);
        acc[q] = (acc[q] + neg * val) % p;
        if (pivot_of[q] > static_cast<std::int64_t>(k) && acc[q] != 0 && !queued[q]) {
          queued[q] = 1;
          heap.emplace(static_cast<std::uint32_t>(pivot_of[q]), q);
        }
      }
    }
    std::vector<std::pair<Pos, std::uint32_t>> row;
    std::sort(touched.begin(), touched.end());
    std::optional<Pos> lead;
    for (Pos t : touched) {
      if (acc[t] != 0) {
        row.emplace_back(t, static_cast<std::uint32_t>(acc[t]));
        if (!lead || weights[t] < weights[*lead]) lead = t;
      }
      acc[t] = 0;
      touched_flag[t] = 0;
    }
    touched.clear();
    if (row.empty()) continue;
    std::uint64_t lead_val = 0;
    for (const auto& [q, v] : row) {
      if (q == *lead) lead_val = v;
    }
    const std::uint64_t inv = inverse_mod(static_cast<std::uint32_t>(lead_val), p);
    for (auto& [q, v] : row) v = static_cast<std::uint32_t>(v * inv % p);
    pivot_of[*lead] = static_cast<std::int64_t>(pivots.size());
    pivots.push_back(std::move(row));
  }
  return pivots.size();
}

std::size_t fraction_free_rank(const SparseMatrix& m) {
  IntegerEchelon ech(m.rows(), row_weights(m));
  for (std::uint32_t j : column_order(m)) {
    auto v = ech.reduce(column_vec(m, j));
    if (v.empty()) continue;
    IntegerEchelon::make_primitive(v);
    const Pos pos = *ech.choose_pivot(v, false);
    ech.add_pivot(std::move(v), pos);
  }
  return ech.size();
}

std::size_t bareiss_rank(const SparseMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::vector<BigInt>> a(rows, std::vector<BigInt>(cols));
  for (const auto& e : m.entries()) a[e.row][e.col] = e.value;
  std::size_t rank = 0;
  BigInt prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = (a[rank][c] * a[i][j] - a[i][c] * a[rank][j]) / prev;
      }
      a[i][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

RankResult rank_over_q(const SparseMatrix& m, bool certified, std::uint64_t seed) {
  if (m.is_zero()) return {0, true};
  if (certified) {
    // Dense Bareiss is quicker on small blocks; both routes are exact.
    const bool small = m.rows() * m.cols() <= 40000;
    return {small ? bareiss_rank(m) : fraction_free_rank(m), true};
  }
  std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
  const auto p1 = random_prime(rng, 30);
  auto p2 = random_prime(rng, 30);
  while (p2 == p1) p2 = random_prime(rng, 30);
  const auto r = std::max(rank_mod_p(m, static_cast<std::uint32_t>(p1)), rank_mod_p(m, static_cast<std::uint32_t>(p2)));
  return {r, false};
}

ElementaryDivisors smith_normal_form(const SparseMatrix& m, std::size_t cap) {
  if (m.rows() > cap || m.cols() > cap) {
    throw Error(ErrorKind::SnfTooLarge, std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                            " exceeds cap " + std::to_string(cap));
  }
  // Unit pivots split off a 1 x 1 block by unimodular operations; whatever
  // has no unit entry left is diagonalized densely.
  IntegerEchelon ech(m.rows(), row_weights(m));
  std::vector<IntegerEchelon::Vec> residual;
  for (std::uint32_t j : column_order(m)) {
    auto v = ech.reduce(column_vec(m, j));
    if (v.empty()) continue;
    if (auto pos = ech.choose_pivot(v, true)) {
      ech.add_pivot(std::move(v), *pos);
    } else {
      residual.push_back(std::move(v));
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<IntegerEchelon::Vec> next;
    for (auto& r : residual) {
      auto v = ech.reduce(r);
      if (v.empty()) continue;
      if (auto pos = ech.choose_pivot(v, true)) {
        ech.add_pivot(std::move(v), *pos);
        changed = true;
      } else {
        next.push_back(std::move(v));
      }
    }
    residual = std::move(next);
  }

  std::vector<BigInt> diag(ech.size(), BigInt(1));
  if (!residual.empty()) {
    std::vector<Pos> rows_used;
    for (const auto& r : residual) {
      for (const auto& [pos, _] : r) rows_used.push_back(pos);
    }
    std::sort(rows_used.begin(), rows_used.end());
    rows_used.erase(std::unique(rows_used.begin(), rows_used.end()), rows_used.end());
    std::vector<std::vector<BigInt>> dense(rows_used.size(), std::vector<BigInt>(residual.size()));
    for (std::size_t c = 0; c < residual.size(); ++c) {
      for (const auto& [pos, val] : residual[c]) {
        const auto r = std::lower_bound(rows_used.begin(), rows_used.end(), pos) - rows_used.begin();
        dense[r][c] = val;
      }
    }
    for (auto& d : dense_diagonalize(std::move(dense))) diag.push_back(std::move(d));
  }
  return ElementaryDivisors{normalize_divisors(std::move(diag))};
}

std::int64_t FieldBetti::total() const { return std::accumulate(betti.begin(), betti.end(), std::int64_t{0}); }

std::int64_t FieldBetti::max() const {
  return betti.empty() ? 0 : *std::max_element(betti.begin(), betti.end());
}

const FieldBetti& BettiTable::for_field(FieldSpec field) const {
  for (const auto& r : rows) {
    if (r.field == field) return r;
  }
  throw Error(ErrorKind::InvalidParameter, "no Betti row for field " + field.name());
}

BettiTable betti(const ChainComplex& c, std::span<const FieldSpec> fields, const BettiOptions& options) {
  c.validate();
  const std::size_t degrees = c.ranks.size();

  // ranks[f][k] = rank of boundary k over field f; index 0 is zero.
  std::vector<std::vector<std::size_t>> ranks(fields.size(), std::vector<std::size_t>(degrees + 1, 0));
  std::vector<bool> certified(fields.size(), true);
  for (std::size_t f = 0; f < fields.size(); ++f) {
    for (std::size_t k = 1; k < degrees; ++k) {
      const auto& d = c.boundaries[k];
      if (fields[f].is_rational()) {
        const auto r = rank_over_q(d, options.certified, options.seed + k);
        ranks[f][k] = r.rank;
        certified[f] = certified[f] && r.certified;
      } else {
        ranks[f][k] = rank_mod_p(d, fields[f].characteristic());
      }
    }
  }

  BettiTable table;
  std::optional<std::vector<ElementaryDivisors>> snf;
  if (options.torsion) {
    try {
      std::vector<ElementaryDivisors> eds(degrees + 1);
      for (std::size_t k = 1; k < degrees; ++k) eds[k] = smith_normal_form(c.boundaries[k], options.snf_cap);
      snf = std::move(eds);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SnfTooLarge) throw;
    }
  }
  if (snf) {
    std::vector<std::vector<std::int64_t>> torsion(degrees);
    for (std::size_t k = 0; k < degrees; ++k) torsion[k] = (*snf)[k + 1].torsion();
    table.torsion = std::move(torsion);
    for (std::size_t f = 0; f < fields.size(); ++f) {
      for (std::size_t k = 1; k < degrees; ++k) {
        const auto& ed = (*snf)[k];
        const std::size_t from_snf =
            fields[f].is_rational() ? ed.rank() : ed.rank_mod(fields[f].characteristic());
        // A probabilistic rank is only a lower bound; the Smith form is exact.
        if (from_snf != ranks[f][k]) {
          if (!certified[f] && from_snf > ranks[f][k]) {
            ranks[f][k] = from_snf;
            continue;
          }
          throw Error(ErrorKind::Inconsistency, "Smith form and elimination disagree on rank of boundary " +
                                                    std::to_string(k) + " over " + fields[f].name());
        }
      }
      if (fields[f].is_rational()) certified[f] = true;
    }
  }

  std::int64_t chi = 0;
  for (std::size_t k = 0; k < degrees; ++k) {
    chi += (k % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(c.ranks[k]);
  }
  for (std::size_t f = 0; f < fields.size(); ++f) {
    FieldBetti row{fields[f], {}, certified[f]};
    std::int64_t alt = 0;
    for (std::size_t k = 0; k < degrees; ++k) {
      const auto b = static_cast<std::int64_t>(c.ranks[k]) - static_cast<std::int64_t>(ranks[f][k]) -
                     static_cast<std::int64_t>(k + 1 < degrees ? ranks[f][k + 1] : 0);
      if (b < 0) throw Error(ErrorKind::Inconsistency, "negative Betti number");
      row.betti.push_back(b);
      alt += (k % 2 == 0 ? 1 : -1) * b;
    }
    if (alt != chi) {
      throw Error(ErrorKind::Inconsistency, "Euler characteristic mismatch over " + fields[f].name());
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

BettiTable relative_betti(const ChainComplex& c, const SimplicialComplex& sub, std::span<const FieldSpec> fields,
                          const BettiOptions& options) {
  std::vector<std::vector<bool>> mask(c.ranks.size());
  std::size_t marked = 0;
  for (std::size_t k = 0; k < c.ranks.size(); ++k) {
    mask[k].resize(c.ranks[k], false);
    for (std::size_t i = 0; i < c.ranks[k]; ++i) {
      if (sub.contains(c.basis_labels.at(k).at(i))) {
        mask[k][i] = true;
        ++marked;
      }
    }
  }
  if (!sub.empty()) {
    SimplexTable sub_table(sub);
    if (sub_table.total() != marked) {
      throw Error(ErrorKind::InvalidParameter, "relative pair: not a subcomplex of the chain complex's labels");
    }
  }
  return betti(c.relative_to(mask), fields, options);
}

nlohmann::json to_json(const FieldBetti& row, const std::optional<std::vector<std::vector<std::int64_t>>>& torsion) {
  nlohmann::json j;
  j["field"] = row.field.name();
  j["betti"] = row.betti;
  j["torsion"] = torsion ? nlohmann::json(*torsion) : nlohmann::json(nullptr);
  j["certified"] = row.certified;
  return j;
}

nlohmann::json to_json(const BettiTable& table) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : table.rows) out.push_back(to_json(row, table.torsion));
  return out;
}

}  // namespace sqh
