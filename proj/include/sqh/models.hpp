#pragma once

// Group-invariant triangulations of spheres.
//
// Cross-polytope vertices: 2(i-1) is +e_i and 2(i-1)+1 is -e_i, so the
// n-fold join of zero spheres is cross_polytope(n) verbatim.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqh/action.hpp"

namespace sqh {

SimplicialComplex cross_polytope(int n);

/// M e_i = signs[perm[i]-1] * e_{perm[i]}; perm is 1-based.
struct SignedPermutation {
  std::vector<int> perm;
  std::vector<int> signs;

  int n() const { return static_cast<int>(perm.size()); }
  /// Throws invalid-parameter unless perm is a permutation and signs are +-1.
  void validate() const;
  Permutation vertex_permutation() const;
};

SignedPermutation signed_permutation_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SignedPermutation& s);

VertexAction signed_permutation_action(int n, const std::vector<SignedPermutation>& generators,
                                       std::size_t cap = kDefaultGroupCap);

inline constexpr std::int64_t kMaxInvariantFactor = 64;
inline constexpr int kMaxBlocks = 8;

/// A = Z/m_1 x ... x Z/m_t with characters on rotation and sign blocks.
/// Rotation block j rotates by 2*pi*sum_i a_i g_i / m_i; sign block k
/// flips when sum_i e_i g_i is odd.
struct AbelianCharacterData {
  std::vector<std::int64_t> invariant_factors;
  std::vector<std::vector<std::int64_t>> rotation_characters;
  std::vector<std::vector<std::int64_t>> sign_characters;

  int r() const { return static_cast<int>(rotation_characters.size()); }
  int s() const { return static_cast<int>(sign_characters.size()); }
  int blocks() const { return r() + s(); }
  int n() const { return 2 * r() + s(); }
  std::uint64_t group_order() const;

  /// Reduces rotation entries mod m_i. Throws invalid-parameter on shape
  /// errors, caps, or a sign character that is not a homomorphism.
  void validate();
};

AbelianCharacterData character_data_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AbelianCharacterData& d);

struct CharacterJoinModel {
  VertexAction action;
  std::vector<int> polygon_sizes;       // L_j per rotation block
  std::vector<std::int64_t> character_orders;  // d_j per rotation block
  std::uint64_t kernel_order = 1;        // |A| / |effective group|
};

/// Join of polygon(L_j) over rotation blocks then zero_sphere() over sign
/// blocks. Throws invalid-parameter when there are no blocks.
CharacterJoinModel character_join_model(AbelianCharacterData data, std::size_t cap = kDefaultGroupCap);

struct JoinOrbitCells {
  ChainComplex chains;
  std::uint64_t effective_order = 1;  // image of A in the symmetry group of the join
  std::uint64_t sphere_cells = 0;     // simplices of the join itself
};

/// Orbit-cell complex of the character join built from the block data
/// alone; the join is never materialized. A cell picks, per block, nothing,
/// a vertex or (rotation blocks) an edge; it is oriented by listing blocks in
/// order with edges along the rotation, an orientation every group element
/// preserves. Cells with a common support and type form a torsor whose
/// orbits are cosets of the image of A, so stabilizers act trivially and no
/// subdivision is needed. Throws resource-cap above `cap` join simplices.
JoinOrbitCells join_orbit_cells(const AbelianCharacterData& data, std::size_t cap = kDefaultSimplexCap * 16);

/// Order of the rotation character of block j in the dual group.
std::int64_t character_order(const AbelianCharacterData& data, int j);

struct LocalModel {
  int a = 0;                  // rotation blocks in J
  int b = 0;                  // sign blocks in J
  std::uint64_t components = 1;  // c_J
  std::vector<std::uint64_t> betti;  // c_J * C(a, q)
};

/// Blocks are indexed 0..r-1 for rotations, r..r+s-1 for signs. Throws
/// invalid-parameter on an empty or out-of-range J.
LocalModel local_model_betti(const AbelianCharacterData& data, const std::vector<int>& J);

struct CoverTotal {
  std::uint64_t total = 0;
  std::vector<std::pair<std::vector<int>, std::uint64_t>> per_J;
};

CoverTotal cover_e1_total(const AbelianCharacterData& data);

}  // namespace sqh
