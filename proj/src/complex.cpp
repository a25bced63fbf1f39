#include "sqh/complex.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "sqh/error.hpp"

namespace sqh {

namespace {

bool is_subset(const Simplex& small, const Simplex& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

SimplicialComplex::SimplicialComplex(std::size_t vertex_count, std::vector<Simplex> facets)
    : vertex_count_(vertex_count) {
  for (auto& f : facets) {
    if (f.empty()) {
      throw Error(ErrorKind::InvalidParameter, "empty facet");
    }
    std::sort(f.begin(), f.end());
    if (std::adjacent_find(f.begin(), f.end()) != f.end()) {
      throw Error(ErrorKind::InvalidParameter, "facet repeats a vertex");
    }
    if (f.back() >= vertex_count) {
      throw Error(ErrorKind::InvalidParameter,
                  "facet vertex " + std::to_string(f.back()) + " out of range");
    }
  }
  std::sort(facets.begin(), facets.end());
  facets.erase(std::unique(facets.begin(), facets.end()), facets.end());

  std::size_t min_size = SIZE_MAX, max_size = 0;
  for (const auto& f : facets) {
    min_size = std::min(min_size, f.size());
    max_size = std::max(max_size, f.size());
  }
  if (!facets.empty() && min_size != max_size) {
    // Larger facets first, then keep a face only if no kept facet through
    // its first vertex contains it.
    std::vector<std::size_t> order(facets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return facets[a].size() > facets[b].size();
    });
    std::vector<std::vector<std::size_t>> through(vertex_count);
    std::vector<bool> keep(facets.size(), false);
    for (std::size_t idx : order) {
      const Simplex& f = facets[idx];
      bool covered = false;
      for (std::size_t other : through[f.front()]) {
        if (facets[other].size() > f.size() && is_subset(f, facets[other])) {
          covered = true;
          break;
        }
      }
      if (!covered) {
        keep[idx] = true;
        for (Vertex v : f) through[v].push_back(idx);
      }
    }
    std::vector<Simplex> kept;
    for (std::size_t i = 0; i < facets.size(); ++i) {
      if (keep[i]) kept.push_back(std::move(facets[i]));
    }
    facets = std::move(kept);
  }
  facets_ = std::move(facets);

  incidence_.assign(vertex_count_, {});
  for (std::uint32_t i = 0; i < facets_.size(); ++i) {
    dimension_ = std::max(dimension_, static_cast<int>(facets_[i].size()) - 1);
    for (Vertex v : facets_[i]) incidence_[v].push_back(i);
  }
}

bool SimplicialComplex::contains(std::span<const Vertex> s) const {
  if (s.empty()) return !facets_.empty();
  if (s.back() >= vertex_count_) return false;
  for (std::uint32_t f : incidence_[s.front()]) {
    const Simplex& facet = facets_[f];
    if (std::includes(facet.begin(), facet.end(), s.begin(), s.end())) return true;
  }
  return false;
}

SimplexTable::SimplexTable(const SimplicialComplex& complex) {
  const int dim = complex.dimension();
  by_dim_.resize(dim + 1);
  lookup_.resize(dim + 1);
  for (const auto& facet : complex.facets()) {
    const std::size_t n = facet.size();
    const std::uint64_t subsets = std::uint64_t{1} << n;
    for (std::uint64_t mask = 1; mask < subsets; ++mask) {
      Simplex face;
      face.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (std::uint64_t{1} << i)) face.push_back(facet[i]);
      }
      const int k = static_cast<int>(face.size()) - 1;
      lookup_[k].try_emplace(std::move(face), 0);
    }
  }
  for (int k = 0; k <= dim; ++k) {
    auto& list = by_dim_[k];
    list.reserve(lookup_[k].size());
    for (const auto& [s, _] : lookup_[k]) list.push_back(s);
    std::sort(list.begin(), list.end());
    for (std::uint32_t i = 0; i < list.size(); ++i) lookup_[k][list[i]] = i;
  }
}

std::size_t SimplexTable::total() const {
  std::size_t t = 0;
  for (const auto& l : by_dim_) t += l.size();
  return t;
}

std::vector<std::size_t> SimplexTable::f_vector() const {
  std::vector<std::size_t> f;
  for (const auto& l : by_dim_) f.push_back(l.size());
  return f;
}

std::optional<std::uint32_t> SimplexTable::index_of(const Simplex& s) const {
  const int k = static_cast<int>(s.size()) - 1;
  if (k < 0 || k > dimension()) return std::nullopt;
  auto it = lookup_[k].find(s);
  if (it == lookup_[k].end()) return std::nullopt;
  return it->second;
}

SimplicialComplex polygon(int vertices) {
  if (vertices < 3) {
    throw Error(ErrorKind::InvalidParameter, "polygon needs at least 3 vertices");
  }
  std::vector<Simplex> edges;
  for (int i = 0; i < vertices; ++i) {
    edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % vertices)});
  }
  return SimplicialComplex(vertices, std::move(edges));
}

SimplicialComplex zero_sphere() { return SimplicialComplex(2, {{0}, {1}}); }

SimplicialComplex join(const SimplicialComplex& first, const SimplicialComplex& second) {
  if (first.empty()) return second;
  if (second.empty()) return first;
  const auto offset = static_cast<Vertex>(first.vertex_count());
  std::vector<Simplex> facets;
  facets.reserve(first.facets().size() * second.facets().size());
  for (const auto& a : first.facets()) {
    for (const auto& b : second.facets()) {
      Simplex s = a;
      for (Vertex v : b) s.push_back(v + offset);
      facets.push_back(std::move(s));
    }
  }
  return SimplicialComplex(first.vertex_count() + second.vertex_count(), std::move(facets));
}

Subdivision barycentric_subdivision(const SimplicialComplex& complex) {
  SimplexTable table(complex);
  std::vector<Simplex> vertex_simplex;
  std::vector<std::uint32_t> offset(table.dimension() + 2, 0);
  for (int k = 0; k <= table.dimension(); ++k) {
    offset[k + 1] = offset[k] + static_cast<std::uint32_t>(table.count(k));
    for (const auto& s : table.simplices(k)) vertex_simplex.push_back(s);
  }

  std::vector<Simplex> facets;
  for (const auto& facet : complex.facets()) {
    // Each ordering of the facet's vertices is one maximal chain.
    Simplex order = facet;
    do {
      Simplex chain;
      Simplex prefix;
      for (Vertex v : order) {
        prefix.insert(std::upper_bound(prefix.begin(), prefix.end(), v), v);
        const int k = static_cast<int>(prefix.size()) - 1;
        chain.push_back(offset[k] + *table.index_of(prefix));
      }
      std::sort(chain.begin(), chain.end());
      facets.push_back(std::move(chain));
    } while (std::next_permutation(order.begin(), order.end()));
  }
  const std::size_t n = vertex_simplex.size();
  return Subdivision{SimplicialComplex(n, std::move(facets)), std::move(vertex_simplex), complex};
}

std::int64_t euler_characteristic(const SimplicialComplex& complex) {
  SimplexTable table(complex);
  std::int64_t chi = 0;
  for (int k = 0; k <= table.dimension(); ++k) {
    chi += (k % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(table.count(k));
  }
  return chi;
}

SimplicialComplex full_subcomplex(const SimplicialComplex& complex, std::span<const Vertex> vertices) {
  std::vector<bool> in(complex.vertex_count(), false);
  for (Vertex v : vertices) {
    if (v >= complex.vertex_count()) {
      throw Error(ErrorKind::InvalidParameter, "vertex " + std::to_string(v) + " out of range");
    }
    in[v] = true;
  }
  std::vector<Simplex> faces;
  for (const auto& facet : complex.facets()) {
    Simplex kept;
    for (Vertex v : facet) {
      if (in[v]) kept.push_back(v);
    }
    if (!kept.empty()) faces.push_back(std::move(kept));
  }
  return SimplicialComplex(complex.vertex_count(), std::move(faces));
}

std::vector<double> subdivided_f_vector(std::span<const std::size_t> f_vector, int rounds) {
  std::vector<double> f(f_vector.begin(), f_vector.end());
  const std::size_t d = f.size();
  // surj[i][j] = number of surjections from an (i+1)-set onto j+1 ordered blocks.
  std::vector<std::vector<double>> surj(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double total = 0.0;
      double binom = 1.0;
      for (std::size_t t = 0; t <= j + 1; ++t) {
        if (t > 0) binom = binom * static_cast<double>(j + 2 - t) / static_cast<double>(t);
        const double term = binom * std::pow(static_cast<double>(j + 1 - t), static_cast<double>(i + 1));
        total += (t % 2 == 0 ? term : -term);
      }
      surj[i][j] = total;
    }
  }
  for (int r = 0; r < rounds; ++r) {
    std::vector<double> next(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j <= i; ++j) next[j] += f[i] * surj[i][j];
    }
    f = std::move(next);
  }
  return f;
}

nlohmann::json to_json(const SimplicialComplex& complex) {
  nlohmann::json facets = nlohmann::json::array();
  for (const auto& f : complex.facets()) facets.push_back(f);
  return nlohmann::json{{"vertex_count", complex.vertex_count()}, {"facets", std::move(facets)}};
}

SimplicialComplex complex_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("vertex_count").get<std::int64_t>();
    if (n < 0) throw Error(ErrorKind::ParseError, "negative vertex_count");
    std::vector<Simplex> facets;
    for (const auto& f : j.at("facets")) {
      Simplex s;
      for (const auto& v : f) {
        const auto x = v.get<std::int64_t>();
        if (x < 0) throw Error(ErrorKind::InvalidParameter, "negative vertex index");
        s.push_back(static_cast<Vertex>(x));
      }
      facets.push_back(std::move(s));
    }
    return SimplicialComplex(static_cast<std::size_t>(n), std::move(facets));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("complex: ") + e.what());
  }
}

}  // namespace sqh
