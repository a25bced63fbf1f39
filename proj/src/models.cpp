#include "sqh/models.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <cstdint>
#include <set>
#include <numeric>
#include <string>

#include "sqh/error.hpp"

namespace sqh {

SimplicialComplex cross_polytope(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "cross_polytope needs n >= 1");
  if (n > 20) throw Error(ErrorKind::InvalidParameter, "cross_polytope limited to n <= 20");
  std::vector<Simplex> facets;
  facets.reserve(std::size_t{1} << n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Simplex f(n);
    for (int i = 0; i < n; ++i) f[i] = 2 * i + ((mask >> i) & 1u);
    facets.push_back(std::move(f));
  }
  return SimplicialComplex(2 * static_cast<std::size_t>(n), std::move(facets));
}

void SignedPermutation::validate() const {
  const int k = n();
  if (k < 1) throw Error(ErrorKind::InvalidParameter, "signed permutation is empty");
  if (static_cast<int>(signs.size()) != k) {
    throw Error(ErrorKind::InvalidParameter, "signed permutation: perm and signs differ in length");
  }
  std::vector<char> hit(k, 0);
  for (int p : perm) {
    if (p < 1 || p > k || hit[p - 1]) {
      throw Error(ErrorKind::InvalidParameter, "signed permutation: perm is not a permutation of 1..n");
    }
    hit[p - 1] = 1;
  }
  for (int s : signs) {
    if (s != 1 && s != -1) throw Error(ErrorKind::InvalidParameter, "signed permutation: signs must be +-1");
  }
}

Permutation SignedPermutation::vertex_permutation() const {
  validate();
  Permutation p(2 * perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    const std::uint32_t target = static_cast<std::uint32_t>(perm[i] - 1);
    const std::uint32_t flip = signs[target] < 0 ? 1 : 0;
    p[2 * i] = 2 * target + flip;
    p[2 * i + 1] = 2 * target + (1 - flip);
  }
  return p;
}

SignedPermutation signed_permutation_from_json(const nlohmann::json& j) {
  try {
    SignedPermutation s{j.at("perm").get<std::vector<int>>(), j.at("signs").get<std::vector<int>>()};
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("signed permutation: ") + e.what());
  }
}

nlohmann::json to_json(const SignedPermutation& s) { return {{"perm", s.perm}, {"signs", s.signs}}; }

VertexAction signed_permutation_action(int n, const std::vector<SignedPermutation>& generators, std::size_t cap) {
  std::vector<Permutation> perms;
  for (const auto& g : generators) {
    if (g.n() != n) throw Error(ErrorKind::InvalidParameter, "signed permutation has wrong size");
    perms.push_back(g.vertex_permutation());
  }
  return close_generators(cross_polytope(n), perms, cap);
}

std::uint64_t AbelianCharacterData::group_order() const {
  std::uint64_t order = 1;
  for (auto m : invariant_factors) order *= static_cast<std::uint64_t>(m);
  return order;
}

void AbelianCharacterData::validate() {
  const std::size_t t = invariant_factors.size();
  if (t == 0) throw Error(ErrorKind::InvalidParameter, "character data needs at least one invariant factor");
  for (auto m : invariant_factors) {
    if (m < 1 || m > kMaxInvariantFactor) {
      throw Error(ErrorKind::InvalidParameter,
                  "invariant factors must lie in 1.." + std::to_string(kMaxInvariantFactor));
    }
  }
  if (blocks() < 1) throw Error(ErrorKind::InvalidParameter, "character data has no blocks");
  if (blocks() > kMaxBlocks) {
    throw Error(ErrorKind::InvalidParameter, "at most " + std::to_string(kMaxBlocks) + " blocks supported");
  }
  for (auto& chi : rotation_characters) {
    if (chi.size() != t) throw Error(ErrorKind::InvalidParameter, "rotation character has wrong length");
    for (std::size_t i = 0; i < t; ++i) chi[i] = ((chi[i] % invariant_factors[i]) + invariant_factors[i]) % invariant_factors[i];
  }
  for (const auto& eps : sign_characters) {
    if (eps.size() != t) throw Error(ErrorKind::InvalidParameter, "sign character has wrong length");
    for (std::size_t i = 0; i < t; ++i) {
      if (eps[i] != 0 && eps[i] != 1) throw Error(ErrorKind::InvalidParameter, "sign character entries must be 0 or 1");
      if (eps[i] == 1 && invariant_factors[i] % 2 != 0) {
        throw Error(ErrorKind::InvalidParameter, "sign character is nontrivial on a factor of odd order");
      }
    }
  }
}

AbelianCharacterData character_data_from_json(const nlohmann::json& j) {
  try {
    AbelianCharacterData d;
    d.invariant_factors = j.at("invariant_factors").get<std::vector<std::int64_t>>();
    d.rotation_characters = j.value("rotation_characters", std::vector<std::vector<std::int64_t>>{});
    d.sign_characters = j.value("sign_characters", std::vector<std::vector<std::int64_t>>{});
    d.validate();
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("character data: ") + e.what());
  }
}

nlohmann::json to_json(const AbelianCharacterData& d) {
  return {{"invariant_factors", d.invariant_factors},
          {"rotation_characters", d.rotation_characters},
          {"sign_characters", d.sign_characters}};
}

std::int64_t character_order(const AbelianCharacterData& data, int j) {
  std::int64_t d = 1;
  const auto& chi = data.rotation_characters.at(j);
  for (std::size_t i = 0; i < chi.size(); ++i) {
    const std::int64_t m = data.invariant_factors[i];
    d = std::lcm(d, m / std::gcd(chi[i] % m, m));
  }
  return d;
}

CharacterJoinModel character_join_model(AbelianCharacterData data, std::size_t cap) {
  data.validate();
  const std::size_t t = data.invariant_factors.size();
  std::vector<int> polygon_sizes;
  std::vector<std::int64_t> character_orders;
  SimplicialComplex sphere;
  std::vector<std::uint32_t> offsets;
  for (int j = 0; j < data.r(); ++j) {
    const std::int64_t d = character_order(data, j);
    const std::int64_t L = d >= 3 ? d : (d == 1 ? 3 : 4);
    character_orders.push_back(d);
    polygon_sizes.push_back(static_cast<int>(L));
    offsets.push_back(static_cast<std::uint32_t>(sphere.vertex_count()));
    sphere = join(sphere, polygon(static_cast<int>(L)));
  }
  for (int k = 0; k < data.s(); ++k) {
    offsets.push_back(static_cast<std::uint32_t>(sphere.vertex_count()));
    sphere = join(sphere, zero_sphere());
  }

  std::vector<Permutation> generators;
  for (std::size_t i = 0; i < t; ++i) {
    Permutation g = identity_permutation(sphere.vertex_count());
    for (int j = 0; j < data.r(); ++j) {
      const std::int64_t d = character_orders[j];
      const std::int64_t L = polygon_sizes[j];
      const std::int64_t m = data.invariant_factors[i];
      const std::int64_t steps = ((data.rotation_characters[j][i] * d / m) % d) * (L / d);
      for (std::int64_t v = 0; v < L; ++v) g[offsets[j] + v] = offsets[j] + static_cast<std::uint32_t>((v + steps) % L);
    }
    for (int k = 0; k < data.s(); ++k) {
      if (data.sign_characters[k][i] % 2 == 1) {
        const auto o = offsets[data.r() + k];
        g[o] = o + 1;
        g[o + 1] = o;
      }
    }
    generators.push_back(std::move(g));
  }
  VertexAction action = close_generators(sphere, generators, cap);
  const std::uint64_t kernel = data.group_order() / action.order();
  return {std::move(action), std::move(polygon_sizes), std::move(character_orders), kernel};
}

namespace {

// Shift of generator i on block b: rotation steps on polygon b, or the sign flip.
std::vector<std::vector<std::uint32_t>> block_shifts(const AbelianCharacterData& data, const std::vector<int>& sizes) {
  const std::size_t t = data.invariant_factors.size();
  std::vector<std::vector<std::uint32_t>> shifts(t, std::vector<std::uint32_t>(sizes.size(), 0));
  for (std::size_t i = 0; i < t; ++i) {
    const std::int64_t m = data.invariant_factors[i];
    for (int j = 0; j < data.r(); ++j) {
      const std::int64_t d = character_order(data, j);
      shifts[i][j] = static_cast<std::uint32_t>(((data.rotation_characters[j][i] * d / m) % d) * (sizes[j] / d));
    }
    for (int k = 0; k < data.s(); ++k) shifts[i][data.r() + k] = static_cast<std::uint32_t>(data.sign_characters[k][i] % 2);
  }
  return shifts;
}

}  // namespace

JoinOrbitCells join_orbit_cells(const AbelianCharacterData& input, std::size_t cap) {
  AbelianCharacterData data = input;
  data.validate();
  const int r = data.r();
  const int N = data.blocks();
  std::vector<int> sizes;
  std::vector<std::uint32_t> offsets;
  std::uint32_t next_vertex = 0;
  for (int j = 0; j < r; ++j) {
    const std::int64_t d = character_order(data, j);
    sizes.push_back(static_cast<int>(d >= 3 ? d : (d == 1 ? 3 : 4)));
  }
  for (int k = 0; k < data.s(); ++k) sizes.push_back(2);
  for (int b = 0; b < N; ++b) {
    offsets.push_back(next_vertex);
    next_vertex += static_cast<std::uint32_t>(sizes[b]);
  }

  // Image of A in the product of the block groups.
  using Shift = std::vector<std::uint32_t>;
  const auto gens = block_shifts(data, sizes);
  std::set<Shift> image{Shift(N, 0)};
  std::vector<Shift> frontier{Shift(N, 0)};
  while (!frontier.empty()) {
    std::vector<Shift> next;
    for (const auto& h : frontier) {
      for (const auto& g : gens) {
        Shift x(N);
        for (int b = 0; b < N; ++b) x[b] = (h[b] + g[b]) % static_cast<std::uint32_t>(sizes[b]);
        if (image.insert(x).second) next.push_back(std::move(x));
      }
    }
    frontier = std::move(next);
  }

  JoinOrbitCells out;
  out.effective_order = image.size();
  ChainComplex& C = out.chains;
  const int top = r * 2 + data.s() - 1;
  C.ranks.assign(top + 1, 0);
  C.basis_labels.assign(top + 1, {});

  // A cell is (J, T, positions): support mask, edge mask within the
  // rotation blocks of J, and one position per block of J in block order.
  struct Family {
    std::vector<int> blocks;
    std::vector<std::uint32_t> orbit;  // position index -> basis index in its degree
  };
  const std::uint32_t rotation_mask = (1u << r) - 1;
  std::vector<Family> families(std::size_t{1} << (2 * N));
  auto key = [N](std::uint32_t J, std::uint32_t T) { return J | (T << N); };
  struct Rep {
    std::uint32_t J, T;
    std::vector<std::uint32_t> pos;
  };
  std::vector<std::vector<Rep>> reps(top + 1);

  for (std::uint32_t J = 1; J < (1u << N); ++J) {
    std::vector<int> blocks;
    std::size_t count = 1;
    for (int b = 0; b < N; ++b) {
      if ((J >> b) & 1u) {
        blocks.push_back(b);
        count *= static_cast<std::size_t>(sizes[b]);
      }
    }
    std::set<Shift> projected;
    for (const auto& h : image) {
      Shift x;
      for (int b : blocks) x.push_back(h[b]);
      projected.insert(std::move(x));
    }
    const std::uint32_t edge_choices = J & rotation_mask;
    for (std::uint32_t T = edge_choices;; T = (T - 1) & edge_choices) {
      out.sphere_cells += count;
      if (out.sphere_cells > cap) {
        throw Error(ErrorKind::ResourceCap, "character join has more than " + std::to_string(cap) + " simplices");
      }
      const int dim = static_cast<int>(blocks.size()) + std::popcount(T) - 1;
      Family& fam = families[key(J, T)];
      fam.blocks = blocks;
      fam.orbit.assign(count, UINT32_MAX);
      std::vector<std::uint32_t> pos(blocks.size()), moved(blocks.size());
      for (std::size_t idx = 0; idx < count; ++idx) {
        if (fam.orbit[idx] != UINT32_MAX) continue;
        std::size_t rest = idx;
        for (std::size_t q = blocks.size(); q-- > 0;) {
          pos[q] = static_cast<std::uint32_t>(rest % sizes[blocks[q]]);
          rest /= sizes[blocks[q]];
        }
        const auto id = static_cast<std::uint32_t>(C.ranks[dim]++);
        for (const auto& h : projected) {
          std::size_t at = 0;
          for (std::size_t q = 0; q < blocks.size(); ++q) {
            const auto L = static_cast<std::uint32_t>(sizes[blocks[q]]);
            at = at * L + (pos[q] + h[q]) % L;
          }
          fam.orbit[at] = id;
        }
        Simplex label;
        for (std::size_t q = 0; q < blocks.size(); ++q) {
          const int b = blocks[q];
          label.push_back(offsets[b] + pos[q]);
          if ((T >> b) & 1u) label.push_back(offsets[b] + (pos[q] + 1) % static_cast<std::uint32_t>(sizes[b]));
        }
        std::sort(label.begin(), label.end());
        C.basis_labels[dim].push_back(std::move(label));
        reps[dim].push_back({J, T, pos});
      }
      if (T == 0) break;
    }
  }

  auto locate = [&](std::uint32_t J, std::uint32_t T, const std::vector<std::uint32_t>& pos) {
    const Family& fam = families[key(J, T)];
    std::size_t at = 0;
    for (std::size_t q = 0; q < fam.blocks.size(); ++q) at = at * static_cast<std::size_t>(sizes[fam.blocks[q]]) + pos[q];
    return fam.orbit[at];
  };

  C.boundaries.resize(top + 1);
  C.boundaries[0] = SparseMatrix(0, C.ranks[0], {});
  for (int k = 1; k <= top; ++k) {
    std::vector<MatrixEntry> entries;
    for (std::size_t col = 0; col < reps[k].size(); ++col) {
      const Rep& c = reps[k][col];
      std::int64_t sign = 1;  // (-1)^(index of the deleted vertex in the ordered list)
      std::size_t q = 0;
      for (int b = 0; b < N; ++b) {
        if (!((c.J >> b) & 1u)) continue;
        const auto L = static_cast<std::uint32_t>(sizes[b]);
        if ((c.T >> b) & 1u) {
          // edge (p, p+1): dropping p leaves p+1, dropping p+1 leaves p
          auto pos = c.pos;
          pos[q] = (c.pos[q] + 1) % L;
          entries.push_back({locate(c.J, c.T & ~(1u << b), pos), static_cast<std::uint32_t>(col), sign});
          entries.push_back({locate(c.J, c.T & ~(1u << b), c.pos), static_cast<std::uint32_t>(col), -sign});
        } else {
          std::vector<std::uint32_t> pos;
          for (std::size_t x = 0; x < c.pos.size(); ++x) {
            if (x != q) pos.push_back(c.pos[x]);
          }
          entries.push_back({locate(c.J & ~(1u << b), c.T, pos), static_cast<std::uint32_t>(col), sign});
          sign = -sign;
        }
        ++q;
      }
    }
    C.boundaries[k] = SparseMatrix(C.ranks[k - 1], C.ranks[k], std::move(entries));
  }
  return out;
}

namespace {

// Rank over F_2 of rows given as bit masks.
int rank_f2(std::vector<std::uint64_t> rows) {
  int rank = 0;
  for (int bit = 0; bit < 64; ++bit) {
    auto pivot = std::find_if(rows.begin() + rank, rows.end(), [&](std::uint64_t r) { return (r >> bit) & 1u; });
    if (pivot == rows.end()) continue;
    std::iter_swap(rows.begin() + rank, pivot);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != static_cast<std::size_t>(rank) && ((rows[i] >> bit) & 1u)) rows[i] ^= rows[rank];
    }
    ++rank;
  }
  return rank;
}

std::uint64_t binomial(int n, int k) {
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return c;
}

}  // namespace

LocalModel local_model_betti(const AbelianCharacterData& data, const std::vector<int>& J) {
  if (J.empty()) throw Error(ErrorKind::InvalidParameter, "cover index J must be nonempty");
  LocalModel out;
  std::vector<std::uint64_t> sign_rows;
  for (int idx : J) {
    if (idx < 0 || idx >= data.blocks()) throw Error(ErrorKind::InvalidParameter, "cover index out of range");
    if (idx < data.r()) {
      ++out.a;
    } else {
      ++out.b;
      std::uint64_t mask = 0;
      const auto& eps = data.sign_characters[idx - data.r()];
      for (std::size_t i = 0; i < eps.size(); ++i) {
        if (eps[i] % 2 == 1) mask |= std::uint64_t{1} << i;
      }
      sign_rows.push_back(mask);
    }
  }
  out.components = (std::uint64_t{1} << out.b) >> rank_f2(sign_rows);
  for (int q = 0; q <= out.a; ++q) out.betti.push_back(out.components * binomial(out.a, q));
  return out;
}

CoverTotal cover_e1_total(const AbelianCharacterData& data) {
  CoverTotal out;
  const int N = data.blocks();
  for (std::uint32_t mask = 1; mask < (1u << N); ++mask) {
    std::vector<int> J;
    for (int i = 0; i < N; ++i) {
      if ((mask >> i) & 1u) J.push_back(i);
    }
    const LocalModel m = local_model_betti(data, J);
    const std::uint64_t sum = std::accumulate(m.betti.begin(), m.betti.end(), std::uint64_t{0});
    out.total += sum;
    out.per_J.emplace_back(std::move(J), sum);
  }
  return out;
}

}  // namespace sqh
