#pragma once

// Finite permutation groups stored by their full element list.
//
// Elements are ordered breadth-first over words in the generators, with
// element 0 the identity, so "least index" tie-breaks are reproducible.
// All subgroup algorithms are exhaustive over this list.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace sqh {

using Permutation = std::vector<std::uint32_t>;
using ElementIndex = std::uint32_t;

inline constexpr std::size_t kDefaultGroupCap = 20000;

/// (a * b)(v) = a(b(v)).
Permutation compose(const Permutation& a, const Permutation& b);
Permutation inverse(const Permutation& a);
Permutation identity_permutation(std::size_t degree);
bool is_identity(const Permutation& a);

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept;
};

class PermutationGroup {
 public:
  /// Breadth-first closure of the generators. Throws group-too-large when
  /// the closure exceeds `cap` elements.
  static PermutationGroup generate(std::size_t degree, std::span<const Permutation> generators,
                                   std::size_t cap = kDefaultGroupCap);

  std::size_t order() const noexcept { return elements_.size(); }
  std::size_t degree() const noexcept { return degree_; }
  const Permutation& element(ElementIndex i) const { return elements_.at(i); }
  const std::vector<Permutation>& elements() const noexcept { return elements_; }
  /// Indices of the (distinct, non-identity) generators.
  const std::vector<ElementIndex>& generator_indices() const noexcept { return generators_; }

  std::optional<ElementIndex> index_of(const Permutation& p) const;
  ElementIndex multiply(ElementIndex a, ElementIndex b) const;
  ElementIndex inverse_of(ElementIndex a) const { return inverses_[a]; }
  ElementIndex power(ElementIndex a, std::uint64_t e) const;
  std::size_t element_order(ElementIndex a) const;
  bool commute(ElementIndex a, ElementIndex b) const { return multiply(a, b) == multiply(b, a); }
  bool is_abelian() const;

 private:
  std::size_t degree_ = 0;
  std::vector<Permutation> elements_;
  std::vector<ElementIndex> generators_;
  std::vector<ElementIndex> inverses_;
  std::unordered_map<Permutation, ElementIndex, PermutationHash> index_;
  std::vector<ElementIndex> table_;  // order^2 products when small
};

struct SubgroupHandle {
  std::vector<ElementIndex> elements;  // sorted, contains 0
  bool is_normal = false;
  bool is_abelian = false;

  std::size_t order() const noexcept { return elements.size(); }
  bool contains(ElementIndex e) const;
  friend bool operator==(const SubgroupHandle& a, const SubgroupHandle& b) { return a.elements == b.elements; }
};

/// Wraps an element set known to be a subgroup; computes the flags.
SubgroupHandle make_subgroup(const PermutationGroup& g, std::vector<ElementIndex> elements);
SubgroupHandle generated_subgroup(const PermutationGroup& g, std::span<const ElementIndex> generators);
SubgroupHandle whole_group(const PermutationGroup& g);
SubgroupHandle trivial_subgroup(const PermutationGroup& g);

/// A small generating set: greedily adds the least element not yet covered.
std::vector<ElementIndex> subgroup_generators(const PermutationGroup& g, const SubgroupHandle& h);

SubgroupHandle center(const PermutationGroup& g, const SubgroupHandle& h);

/// Grows a p-subgroup P of h one step at a time: the least-index x in h that
/// normalizes P, lies outside P and has x^p in P extends P to <P, x>.
/// Stops at the p-part of |h|.
SubgroupHandle sylow(const PermutationGroup& g, const SubgroupHandle& h, std::uint64_t p);

/// 1 = P_0 < P_1 < ... < P_r = P with each P_i / P_{i-1} of order p, built
/// from the least-index element of order p in Z(P / P_{i-1}). Throws
/// invalid-parameter if P is not a p-group.
std::vector<SubgroupHandle> central_series_cp(const PermutationGroup& g, const SubgroupHandle& p_group);

/// Prime p with |P| = p^r, or nullopt when |P| is not a prime power (1 maps to nullopt).
std::optional<std::uint64_t> p_group_prime(std::size_t order);

std::vector<std::vector<ElementIndex>> conjugacy_classes(const PermutationGroup& g);

struct AbelianNormalResult {
  SubgroupHandle subgroup;
  bool exhaustive = true;      // every abelian normal subgroup was examined
  bool fallback_center = false;
};

/// A normal abelian subgroup of maximal order; ties go to the least sorted
/// element-index set. Exhaustive up to `exhaustive_limit`; above it only
/// subgroups generated by at most two conjugacy classes and the center are
/// examined.
AbelianNormalResult best_abelian_normal_subgroup(const PermutationGroup& g, std::size_t exhaustive_limit = 2000);

/// Every subgroup of prime-power order p^j, j >= 1, sorted by (order, elements).
std::vector<SubgroupHandle> p_subgroups(const PermutationGroup& g, std::uint64_t p);

/// The distinct subgroups of order p.
std::vector<SubgroupHandle> subgroups_of_order_p(const PermutationGroup& g, std::uint64_t p);

}  // namespace sqh
