#pragma once

// Exact Betti numbers over the rationals and prime fields.
//
// Ranks mod p come from sparse elimination; certified rational ranks from
// fraction-free elimination; torsion from the Smith normal form. Whenever
// the Smith form is computed, the Betti numbers it implies are compared
// against the elimination ranks and any mismatch is an error.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "sqh/chain_complex.hpp"

namespace sqh {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::size_t kDefaultSnfCap = 5000;

class FieldSpec {
 public:
  static FieldSpec rationals() { return FieldSpec(0); }
  /// Throws invalid-parameter unless p is a prime no larger than 2^31.
  static FieldSpec prime(std::uint64_t p);
  /// Accepts "Q" or "Fp:<p>".
  static FieldSpec parse(std::string_view name);

  bool is_rational() const noexcept { return characteristic_ == 0; }
  std::uint32_t characteristic() const noexcept { return characteristic_; }
  std::string name() const;

  auto operator<=>(const FieldSpec&) const = default;

 private:
  explicit FieldSpec(std::uint32_t c) : characteristic_(c) {}
  std::uint32_t characteristic_ = 0;
};

struct ElementaryDivisors {
  /// d_1 | d_2 | ... | d_r, all positive; r is the rank over Q.
  std::vector<BigInt> divisors;

  std::size_t rank() const noexcept { return divisors.size(); }
  /// Rank over F_p: the divisors not divisible by p.
  std::size_t rank_mod(std::uint64_t p) const;
  /// The divisors greater than one.
  std::vector<std::int64_t> torsion() const;
};

struct RankResult {
  std::size_t rank = 0;
  bool certified = false;
};

std::size_t rank_mod_p(const SparseMatrix& m, std::uint32_t p);

/// Certified: exact rank by fraction-free elimination. Otherwise the larger
/// of the ranks modulo two distinct 30-bit primes drawn from `seed`.
RankResult rank_over_q(const SparseMatrix& m, bool certified, std::uint64_t seed = 0);

/// Dense Bareiss elimination.
std::size_t bareiss_rank(const SparseMatrix& m);

/// Sparse integer elimination with content normalization.
std::size_t fraction_free_rank(const SparseMatrix& m);

/// Throws snf-too-large if either dimension exceeds `cap`.
ElementaryDivisors smith_normal_form(const SparseMatrix& m, std::size_t cap = kDefaultSnfCap);

struct FieldBetti {
  FieldSpec field = FieldSpec::rationals();
  std::vector<std::int64_t> betti;
  bool certified = true;

  std::int64_t at(int k) const {
    return k >= 0 && k < static_cast<int>(betti.size()) ? betti[k] : 0;
  }
  std::int64_t total() const;
  std::int64_t max() const;
};

struct BettiTable {
  std::vector<FieldBetti> rows;
  /// torsion[k] lists the divisors > 1 of H_k(-; Z), when the Smith form
  /// was within its size cap for every boundary.
  std::optional<std::vector<std::vector<std::int64_t>>> torsion;

  const FieldBetti& for_field(FieldSpec field) const;
};

struct BettiOptions {
  bool certified = true;
  bool torsion = true;
  std::size_t snf_cap = kDefaultSnfCap;
  std::uint64_t seed = 0;
};

/// Throws corrupt-complex when the boundaries do not compose to zero.
BettiTable betti(const ChainComplex& complex, std::span<const FieldSpec> fields,
                 const BettiOptions& options = {});

/// Homology of C(K) / C(L). Throws invalid-parameter when a simplex of L
/// is not a basis label of the complex.
BettiTable relative_betti(const ChainComplex& complex, const SimplicialComplex& sub,
                          std::span<const FieldSpec> fields, const BettiOptions& options = {});

nlohmann::json to_json(const FieldBetti& row, const std::optional<std::vector<std::vector<std::int64_t>>>& torsion);
nlohmann::json to_json(const BettiTable& table);

}  // namespace sqh
