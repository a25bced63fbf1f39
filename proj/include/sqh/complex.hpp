#pragma once

// Finite abstract simplicial complexes and their basic constructions.
//
// A complex is stored by its facets. Each facet is a strictly increasing
// vertex sequence; the face lattice is implied. `vertex_count` is the index
// universe, so a full subcomplex keeps the numbering of its parent.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace sqh {

using Vertex = std::uint32_t;
using Simplex = std::vector<Vertex>;

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ s.size();
    for (Vertex v : s) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Sorts each facet, drops duplicates and non-maximal faces. Throws
  /// invalid-parameter on repeated or out-of-range vertices.
  SimplicialComplex(std::size_t vertex_count, std::vector<Simplex> facets);

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  const std::vector<Simplex>& facets() const noexcept { return facets_; }
  int dimension() const noexcept { return dimension_; }
  bool empty() const noexcept { return facets_.empty(); }

  /// True when the sorted vertex set is a face of some facet.
  bool contains(std::span<const Vertex> sorted_simplex) const;

  friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
    return a.vertex_count_ == b.vertex_count_ && a.facets_ == b.facets_;
  }

 private:
  std::size_t vertex_count_ = 0;
  std::vector<Simplex> facets_;
  int dimension_ = -1;
  std::vector<std::vector<std::uint32_t>> incidence_;
};

/// All simplices of a complex, grouped by dimension and sorted
/// lexicographically inside each dimension.
class SimplexTable {
 public:
  explicit SimplexTable(const SimplicialComplex& complex);

  int dimension() const noexcept { return static_cast<int>(by_dim_.size()) - 1; }
  const std::vector<Simplex>& simplices(int dim) const { return by_dim_.at(dim); }
  std::size_t count(int dim) const {
    return dim >= 0 && dim <= dimension() ? by_dim_[dim].size() : 0;
  }
  std::size_t total() const;
  std::vector<std::size_t> f_vector() const;
  std::optional<std::uint32_t> index_of(const Simplex& sorted_simplex) const;

 private:
  std::vector<std::vector<Simplex>> by_dim_;
  std::vector<std::unordered_map<Simplex, std::uint32_t, SimplexHash>> lookup_;
};

struct Subdivision {
  SimplicialComplex complex;
  /// vertex_simplex[v] is the simplex of the source whose barycenter is v.
  std::vector<Simplex> vertex_simplex;
  SimplicialComplex source;
};

SimplicialComplex polygon(int vertices);
SimplicialComplex zero_sphere();
SimplicialComplex join(const SimplicialComplex& first, const SimplicialComplex& second);
Subdivision barycentric_subdivision(const SimplicialComplex& complex);
std::int64_t euler_characteristic(const SimplicialComplex& complex);
SimplicialComplex full_subcomplex(const SimplicialComplex& complex, std::span<const Vertex> vertices);

/// f-vector of the k-th barycentric subdivision, computed from the f-vector
/// alone (each i-simplex contributes (j+1)! * S(i+1, j+1) j-simplices).
std::vector<double> subdivided_f_vector(std::span<const std::size_t> f_vector, int rounds);

nlohmann::json to_json(const SimplicialComplex& complex);
SimplicialComplex complex_from_json(const nlohmann::json& j);

}  // namespace sqh
