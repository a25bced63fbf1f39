#include "sqh/action.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "sqh/error.hpp"

namespace sqh {

VertexAction::VertexAction(std::shared_ptr<const SimplicialComplex> complex,
                           std::shared_ptr<const PermutationGroup> group, std::vector<Permutation> vertex_perms)
    : complex_(std::move(complex)), group_(std::move(group)), perms_(std::move(vertex_perms)) {
  if (perms_.size() != group_->order()) {
    throw Error(ErrorKind::InvalidParameter, "one vertex permutation per group element required");
  }
  for (const auto& p : perms_) {
    if (p.size() != complex_->vertex_count()) {
      throw Error(ErrorKind::InvalidParameter, "vertex permutation has wrong degree");
    }
  }
}

std::vector<Permutation> VertexAction::generator_perms(const SubgroupHandle& h) const {
  std::vector<Permutation> out;
  for (ElementIndex g : subgroup_generators(*group_, h)) out.push_back(perms_.at(g));
  return out;
}

namespace {

Simplex image(const Permutation& g, const Simplex& s) {
  Simplex t(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) t[i] = g[s[i]];
  std::sort(t.begin(), t.end());
  return t;
}

// Sorts s in place and returns the sign of the sorting permutation.
int sort_with_sign(Simplex& s) {
  int sign = 1;
  for (std::size_t i = 1; i < s.size(); ++i) {
    for (std::size_t j = i; j > 0 && s[j - 1] > s[j]; --j) {
      std::swap(s[j - 1], s[j]);
      sign = -sign;
    }
  }
  return sign;
}

bool element_admissible(const SimplicialComplex& k, const Permutation& g) {
  std::vector<char> seen(g.size(), 0);
  for (Vertex v = 0; v < g.size(); ++v) {
    if (seen[v] || g[v] == v) continue;
    Simplex cycle;
    for (Vertex w = v; !seen[w]; w = g[w]) {
      seen[w] = 1;
      cycle.push_back(w);
    }
    std::sort(cycle.begin(), cycle.end());
    if (k.contains(cycle)) return false;
  }
  return true;
}

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Per dimension: orbit id of every simplex (ids ordered by least member)
// and, when signs is non-null, the orientation of each simplex relative to
// its orbit representative.
struct SimplexOrbits {
  std::vector<std::vector<std::uint32_t>> orbit_of;
  std::vector<std::vector<std::uint32_t>> representative;  // orbit id -> least simplex index
  std::vector<std::vector<int>> sign;
};

SimplexOrbits simplex_orbits(const SimplexTable& table, std::span<const Permutation> gens, bool with_signs) {
  SimplexOrbits out;
  const int dim = table.dimension();
  out.orbit_of.resize(dim + 1);
  out.representative.resize(dim + 1);
  out.sign.resize(dim + 1);
  for (int k = 0; k <= dim; ++k) {
    const auto& simplices = table.simplices(k);
    constexpr std::uint32_t kUnset = ~0u;
    out.orbit_of[k].assign(simplices.size(), kUnset);
    out.sign[k].assign(simplices.size(), 0);
    std::vector<std::uint32_t> queue;
    for (std::uint32_t start = 0; start < simplices.size(); ++start) {
      if (out.orbit_of[k][start] != kUnset) continue;
      const auto orbit = static_cast<std::uint32_t>(out.representative[k].size());
      out.representative[k].push_back(start);
      out.orbit_of[k][start] = orbit;
      out.sign[k][start] = 1;
      queue.assign(1, start);
      for (std::size_t q = 0; q < queue.size(); ++q) {
        const Simplex& s = simplices[queue[q]];
        const int s_sign = out.sign[k][queue[q]];
        for (const auto& g : gens) {
          Simplex t(s.size());
          for (std::size_t i = 0; i < s.size(); ++i) t[i] = g[s[i]];
          const int eps = with_signs ? sort_with_sign(t) : (std::sort(t.begin(), t.end()), 1);
          const auto idx = table.index_of(t);
          if (!idx) throw Error(ErrorKind::ActionInvalid, "a generator maps a simplex to a non-simplex");
          const int t_sign = eps * s_sign;
          if (out.orbit_of[k][*idx] == kUnset) {
            out.orbit_of[k][*idx] = orbit;
            out.sign[k][*idx] = t_sign;
            queue.push_back(*idx);
          } else if (with_signs && out.sign[k][*idx] != t_sign) {
            throw Error(ErrorKind::NeedsSubdivision, "an element reverses the orientation of a simplex it preserves");
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

VertexAction close_generators(const SimplicialComplex& complex, std::span<const Permutation> generators,
                              std::size_t cap) {
  const std::size_t n = complex.vertex_count();
  for (const auto& g : generators) {
    if (g.size() != n) throw Error(ErrorKind::ActionInvalid, "generator has wrong number of vertices");
    std::vector<char> hit(n, 0);
    for (auto v : g) {
      if (v >= n || hit[v]) throw Error(ErrorKind::ActionInvalid, "generator is not a bijection of vertices");
      hit[v] = 1;
    }
    // Facets go to simplices of equal size; with finitely many simplices a
    // bijection mapping simplices into simplices is an automorphism.
    for (const auto& f : complex.facets()) {
      if (!complex.contains(image(g, f))) {
        throw Error(ErrorKind::ActionInvalid, "generator maps a simplex to a non-simplex");
      }
    }
  }
  auto group = std::make_shared<const PermutationGroup>(PermutationGroup::generate(n, generators, cap));
  std::vector<Permutation> perms = group->elements();
  return VertexAction(std::make_shared<const SimplicialComplex>(complex), std::move(group), std::move(perms));
}

bool is_admissible(const VertexAction& action) {
  for (const auto& g : action.vertex_perms()) {
    if (!element_admissible(action.complex(), g)) return false;
  }
  return true;
}

bool is_admissible(const VertexAction& action, const SubgroupHandle& h) {
  for (ElementIndex e : h.elements) {
    if (!element_admissible(action.complex(), action.vertex_perm(e))) return false;
  }
  return true;
}

VertexAction induced_action_on_subdivision(const VertexAction& action, const Subdivision& sd) {
  if (!(sd.source == action.complex())) {
    throw Error(ErrorKind::InvalidParameter, "subdivision was not produced from the action's complex");
  }
  std::unordered_map<Simplex, std::uint32_t, SimplexHash> vertex_of;
  vertex_of.reserve(sd.vertex_simplex.size());
  for (std::uint32_t v = 0; v < sd.vertex_simplex.size(); ++v) vertex_of.emplace(sd.vertex_simplex[v], v);
  std::vector<Permutation> perms;
  perms.reserve(action.order());
  for (const auto& g : action.vertex_perms()) {
    Permutation p(sd.vertex_simplex.size());
    for (std::uint32_t v = 0; v < p.size(); ++v) p[v] = vertex_of.at(image(g, sd.vertex_simplex[v]));
    perms.push_back(std::move(p));
  }
  return VertexAction(std::make_shared<const SimplicialComplex>(sd.complex), action.group_ptr(), std::move(perms));
}

VertexAction subdivide(const VertexAction& action) {
  return induced_action_on_subdivision(action, barycentric_subdivision(action.complex()));
}

Quotient quotient_complex(const VertexAction& action) {
  return quotient_complex(action, whole_group(action.group()));
}

Quotient quotient_complex(const VertexAction& action, const SubgroupHandle& h) {
  if (!is_admissible(action, h)) throw Error(ErrorKind::NeedsSubdivision, "action is not admissible");
  const auto gens = action.generator_perms(h);
  const SimplicialComplex& k = action.complex();
  UnionFind uf(k.vertex_count());
  for (const auto& g : gens) {
    for (Vertex v = 0; v < g.size(); ++v) uf.unite(v, g[v]);
  }
  std::vector<std::uint32_t> projection(k.vertex_count());
  std::unordered_map<std::uint32_t, std::uint32_t> number;
  for (Vertex v = 0; v < k.vertex_count(); ++v) {
    const auto root = uf.find(v);
    auto [it, inserted] = number.emplace(root, static_cast<std::uint32_t>(number.size()));
    projection[v] = it->second;
  }

  const SimplexTable table(k);
  const SimplexOrbits orbits = simplex_orbits(table, gens, false);
  for (int d = 0; d <= table.dimension(); ++d) {
    std::unordered_map<Simplex, std::uint32_t, SimplexHash> orbit_of_set;
    const auto& simplices = table.simplices(d);
    for (std::uint32_t i = 0; i < simplices.size(); ++i) {
      Simplex set = simplices[i];
      for (auto& v : set) v = projection[v];
      std::sort(set.begin(), set.end());
      if (std::adjacent_find(set.begin(), set.end()) != set.end()) {
        throw Error(ErrorKind::NeedsSubdivision, "a simplex has two vertices in one orbit");
      }
      auto [it, inserted] = orbit_of_set.emplace(std::move(set), orbits.orbit_of[d][i]);
      if (!inserted && it->second != orbits.orbit_of[d][i]) {
        throw Error(ErrorKind::NeedsSubdivision, "two simplex orbits share a vertex-orbit set");
      }
    }
  }
  std::vector<Simplex> facets;
  facets.reserve(k.facets().size());
  for (const auto& f : k.facets()) {
    Simplex q(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) q[i] = projection[f[i]];
    facets.push_back(std::move(q));
  }
  return {SimplicialComplex(number.size(), std::move(facets)), std::move(projection)};
}

double projected_simplex_count(const SimplicialComplex& complex, int rounds) {
  const auto f = SimplexTable(complex).f_vector();
  const auto g = subdivided_f_vector(f, rounds);
  return std::accumulate(g.begin(), g.end(), 0.0);
}

namespace {

VertexAction checked_subdivide(const VertexAction& action, std::size_t simplex_cap) {
  const double next = projected_simplex_count(action.complex(), 1);
  if (next > static_cast<double>(simplex_cap)) {
    throw Error(ErrorKind::ResourceCap, "subdivision would have " + std::to_string(static_cast<long long>(next)) +
                                            " simplices, cap " + std::to_string(simplex_cap));
  }
  return subdivide(action);
}

}  // namespace

AdmissibleModel make_admissible(const VertexAction& action, int max_subdivisions, std::size_t simplex_cap) {
  AdmissibleModel m{action, 0};
  while (!is_admissible(m.action)) {
    if (m.subdivisions >= max_subdivisions) {
      throw Error(ErrorKind::NeedsSubdivision,
                  "not admissible after " + std::to_string(max_subdivisions) + " subdivisions");
    }
    m.action = checked_subdivide(m.action, simplex_cap);
    ++m.subdivisions;
  }
  return m;
}

AdmissibleQuotient make_admissible_and_quotient(const VertexAction& action, int max_subdivisions,
                                                std::size_t simplex_cap) {
  VertexAction current = action;
  for (int rounds = 0;; ++rounds) {
    try {
      Quotient q = quotient_complex(current);
      return {std::move(q), rounds, std::move(current)};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NeedsSubdivision) throw;
      if (rounds >= max_subdivisions) {
        throw Error(ErrorKind::NeedsSubdivision,
                    "quotient not simplicial after " + std::to_string(max_subdivisions) + " subdivisions");
      }
    }
    current = checked_subdivide(current, simplex_cap);
  }
}

SimplicialComplex fixed_subcomplex(const VertexAction& action, const SubgroupHandle& h) {
  if (!is_admissible(action, h)) throw Error(ErrorKind::NeedsSubdivision, "restricted action is not admissible");
  const auto gens = action.generator_perms(h);
  std::vector<Vertex> fixed;
  for (Vertex v = 0; v < action.complex().vertex_count(); ++v) {
    if (std::all_of(gens.begin(), gens.end(), [&](const Permutation& g) { return g[v] == v; })) fixed.push_back(v);
  }
  return full_subcomplex(action.complex(), fixed);
}

OrbitCells orbit_cell_complex(const SimplexTable& table, std::span<const Permutation> generators) {
  const SimplexOrbits orbits = simplex_orbits(table, generators, true);
  const int dim = table.dimension();
  OrbitCells out;
  out.fixed.resize(dim + 1);
  out.orbit_sizes.resize(dim + 1);
  for (int k = 0; k <= dim; ++k) {
    const std::size_t cells = orbits.representative[k].size();
    out.orbit_sizes[k].assign(cells, 0);
    for (auto o : orbits.orbit_of[k]) ++out.orbit_sizes[k][o];
    out.fixed[k].resize(cells);
    std::vector<Simplex> labels;
    labels.reserve(cells);
    for (std::size_t c = 0; c < cells; ++c) {
      out.fixed[k][c] = out.orbit_sizes[k][c] == 1;
      labels.push_back(table.simplices(k)[orbits.representative[k][c]]);
    }
    out.chains.ranks.push_back(cells);
    if (k == 0) {
      out.chains.boundaries.emplace_back(0, cells, std::vector<MatrixEntry>{});
    } else {
      std::vector<MatrixEntry> entries;
      for (std::uint32_t c = 0; c < cells; ++c) {
        const Simplex& s = labels[c];
        for (std::size_t i = 0; i < s.size(); ++i) {
          Simplex face;
          face.reserve(s.size() - 1);
          for (std::size_t j = 0; j < s.size(); ++j) {
            if (j != i) face.push_back(s[j]);
          }
          const auto fi = *table.index_of(face);
          const std::int64_t coeff = (i % 2 == 0 ? 1 : -1) * orbits.sign[k - 1][fi];
          entries.push_back({orbits.orbit_of[k - 1][fi], c, coeff});
        }
      }
      out.chains.boundaries.emplace_back(out.chains.ranks[k - 1], cells, std::move(entries));
    }
    out.chains.basis_labels.push_back(std::move(labels));
  }
  return out;
}

OrbitCells orbit_cell_complex(const VertexAction& action, const SubgroupHandle& h) {
  if (!is_admissible(action, h)) throw Error(ErrorKind::NeedsSubdivision, "action is not admissible");
  const auto gens = action.generator_perms(h);
  return orbit_cell_complex(SimplexTable(action.complex()), gens);
}

ChainComplex OrbitCells::fixed_part() const {
  ChainComplex sub;
  std::vector<std::vector<std::uint32_t>> keep(chains.ranks.size());
  for (std::size_t k = 0; k < chains.ranks.size(); ++k) {
    for (std::uint32_t i = 0; i < chains.ranks[k]; ++i) {
      if (fixed[k][i]) keep[k].push_back(i);
    }
  }
  while (!keep.empty() && keep.back().empty()) keep.pop_back();
  for (std::size_t k = 0; k < keep.size(); ++k) {
    sub.ranks.push_back(keep[k].size());
    std::vector<Simplex> labels;
    for (auto i : keep[k]) labels.push_back(chains.basis_labels[k][i]);
    sub.basis_labels.push_back(std::move(labels));
    if (k == 0) {
      sub.boundaries.emplace_back(0, keep[0].size(), std::vector<MatrixEntry>{});
    } else {
      sub.boundaries.push_back(chains.boundaries[k].submatrix(keep[k - 1], keep[k]));
    }
  }
  return sub;
}

nlohmann::json to_json(const VertexAction& action) {
  nlohmann::json gens = nlohmann::json::array();
  for (ElementIndex g : action.generator_indices()) gens.push_back(action.vertex_perm(g));
  return {{"complex", to_json(action.complex())}, {"generators", gens}};
}

VertexAction action_from_json(const nlohmann::json& j, std::size_t cap) {
  try {
    SimplicialComplex k = complex_from_json(j.at("complex"));
    std::vector<Permutation> gens;
    for (const auto& g : j.at("generators")) gens.push_back(g.get<Permutation>());
    return close_generators(k, gens, cap);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("action: ") + e.what());
  }
}

}  // namespace sqh
