#pragma once

// Simplicial group actions given by vertex permutations.
//
// A VertexAction pairs a complex with the permutation of its vertices
// induced by each element of an abstract group. Subdivisions share the
// abstract group, so element indices and subgroup handles stay valid.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqh/chain_complex.hpp"
#include "sqh/complex.hpp"
#include "sqh/group.hpp"

namespace sqh {

inline constexpr std::size_t kDefaultSimplexCap = 2'000'000;

class VertexAction {
 public:
  /// vertex_perms[i] is the action of group element i on the vertices.
  VertexAction(std::shared_ptr<const SimplicialComplex> complex, std::shared_ptr<const PermutationGroup> group,
               std::vector<Permutation> vertex_perms);

  const SimplicialComplex& complex() const noexcept { return *complex_; }
  const PermutationGroup& group() const noexcept { return *group_; }
  std::shared_ptr<const PermutationGroup> group_ptr() const noexcept { return group_; }
  std::size_t order() const noexcept { return group_->order(); }
  const Permutation& vertex_perm(ElementIndex g) const { return perms_.at(g); }
  const std::vector<Permutation>& vertex_perms() const noexcept { return perms_; }
  const std::vector<ElementIndex>& generator_indices() const noexcept { return group_->generator_indices(); }

  /// Vertex permutations of a small generating set of h.
  std::vector<Permutation> generator_perms(const SubgroupHandle& h) const;

 private:
  std::shared_ptr<const SimplicialComplex> complex_;
  std::shared_ptr<const PermutationGroup> group_;
  std::vector<Permutation> perms_;
};

/// Throws action-invalid when a generator is not a bijection mapping
/// simplices to simplices, group-too-large past the cap.
VertexAction close_generators(const SimplicialComplex& complex, std::span<const Permutation> generators,
                              std::size_t cap = kDefaultGroupCap);

/// No element preserves a simplex setwise without fixing it pointwise.
bool is_admissible(const VertexAction& action);
bool is_admissible(const VertexAction& action, const SubgroupHandle& h);

/// Throws invalid-parameter unless sd subdivides the action's complex.
VertexAction induced_action_on_subdivision(const VertexAction& action, const Subdivision& sd);
VertexAction subdivide(const VertexAction& action);

struct Quotient {
  SimplicialComplex complex;
  /// Vertex of the action's complex to quotient vertex.
  std::vector<std::uint32_t> projection;
};

/// Quotient vertices are vertex orbits numbered by least member. Throws
/// needs-subdivision when the orbit space is not a simplicial complex.
Quotient quotient_complex(const VertexAction& action);
Quotient quotient_complex(const VertexAction& action, const SubgroupHandle& h);

struct AdmissibleModel {
  VertexAction action;
  int subdivisions = 0;
};

/// Subdivides until the action is admissible. Throws resource-cap when the
/// next subdivision would exceed simplex_cap, needs-subdivision past
/// max_subdivisions.
AdmissibleModel make_admissible(const VertexAction& action, int max_subdivisions = 3,
                                std::size_t simplex_cap = kDefaultSimplexCap);

struct AdmissibleQuotient {
  Quotient quotient;
  int subdivisions = 0;
  VertexAction action;
};

AdmissibleQuotient make_admissible_and_quotient(const VertexAction& action, int max_subdivisions = 3,
                                                std::size_t simplex_cap = kDefaultSimplexCap);

/// Full subcomplex on the vertices fixed by h; keeps the vertex numbering.
SimplicialComplex fixed_subcomplex(const VertexAction& action, const SubgroupHandle& h);

/// Cellular chains of K/H for an admissible action: one cell per simplex
/// orbit, labelled by its least simplex. This is the coinvariant complex
/// C_*(K)_H.
struct OrbitCells {
  ChainComplex chains;
  /// fixed[k][i]: cell i of dimension k is a single simplex fixed by H.
  std::vector<std::vector<bool>> fixed;
  std::vector<std::vector<std::uint32_t>> orbit_sizes;

  /// Chains of (K/H, K^H).
  ChainComplex relative_to_fixed() const { return chains.relative_to(fixed); }
  /// Chains of K^H as a subcomplex of K/H.
  ChainComplex fixed_part() const;
};

/// Throws needs-subdivision when orientations are not compatible, which
/// happens only for non-admissible actions.
OrbitCells orbit_cell_complex(const SimplexTable& table, std::span<const Permutation> generators);
OrbitCells orbit_cell_complex(const VertexAction& action, const SubgroupHandle& h);

/// Simplex count of sd^rounds(K), estimated from the f-vector.
double projected_simplex_count(const SimplicialComplex& complex, int rounds);

nlohmann::json to_json(const VertexAction& action);
/// {"complex": ..., "generators": [[image of vertex 0, ...], ...]}.
VertexAction action_from_json(const nlohmann::json& j, std::size_t cap = kDefaultGroupCap);

}  // namespace sqh
