#include "sqh/group.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <string>

#include "sqh/error.hpp"
#include "sqh/primes.hpp"

namespace sqh {

Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation c(b.size());
  for (std::size_t v = 0; v < b.size(); ++v) c[v] = a[b[v]];
  return c;
}

Permutation inverse(const Permutation& a) {
  Permutation inv(a.size());
  for (std::uint32_t v = 0; v < a.size(); ++v) inv[a[v]] = v;
  return inv;
}

Permutation identity_permutation(std::size_t degree) {
  Permutation p(degree);
  for (std::uint32_t v = 0; v < degree; ++v) p[v] = v;
  return p;
}

bool is_identity(const Permutation& a) {
  for (std::uint32_t v = 0; v < a.size(); ++v) {
    if (a[v] != v) return false;
  }
  return true;
}

std::size_t PermutationHash::operator()(const Permutation& p) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (auto v : p) {
    h ^= v;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

PermutationGroup PermutationGroup::generate(std::size_t degree, std::span<const Permutation> generators,
                                            std::size_t cap) {
  PermutationGroup g;
  g.degree_ = degree;
  for (const auto& s : generators) {
    if (s.size() != degree) throw Error(ErrorKind::InvalidParameter, "generator has wrong degree");
    std::vector<bool> seen(degree, false);
    for (auto v : s) {
      if (v >= degree || seen[v]) throw Error(ErrorKind::InvalidParameter, "generator is not a bijection");
      seen[v] = true;
    }
  }
  g.elements_.push_back(identity_permutation(degree));
  g.index_.emplace(g.elements_[0], 0);
  for (std::size_t i = 0; i < g.elements_.size(); ++i) {
    for (const auto& s : generators) {
      Permutation next = compose(g.elements_[i], s);
      if (g.index_.contains(next)) continue;
      if (g.elements_.size() >= cap) {
        throw Error(ErrorKind::GroupTooLarge, "closure exceeds " + std::to_string(cap) + " elements");
      }
      g.index_.emplace(next, static_cast<ElementIndex>(g.elements_.size()));
      g.elements_.push_back(std::move(next));
    }
  }
  for (const auto& s : generators) {
    const ElementIndex i = g.index_.at(s);
    if (i != 0 && std::find(g.generators_.begin(), g.generators_.end(), i) == g.generators_.end()) {
      g.generators_.push_back(i);
    }
  }
  const std::size_t n = g.elements_.size();
  g.inverses_.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.inverses_[i] = g.index_.at(inverse(g.elements_[i]));
  if (n <= 1024) {
    g.table_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        g.table_[a * n + b] = g.index_.at(compose(g.elements_[a], g.elements_[b]));
      }
    }
  }
  return g;
}

std::optional<ElementIndex> PermutationGroup::index_of(const Permutation& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ElementIndex PermutationGroup::multiply(ElementIndex a, ElementIndex b) const {
  if (!table_.empty()) return table_[static_cast<std::size_t>(a) * elements_.size() + b];
  return index_.at(compose(elements_[a], elements_[b]));
}

ElementIndex PermutationGroup::power(ElementIndex a, std::uint64_t e) const {
  ElementIndex r = 0;
  ElementIndex base = a;
  while (e) {
    if (e & 1) r = multiply(r, base);
    base = multiply(base, base);
    e >>= 1;
  }
  return r;
}

std::size_t PermutationGroup::element_order(ElementIndex a) const {
  std::size_t k = 1;
  ElementIndex x = a;
  while (x != 0) {
    x = multiply(x, a);
    ++k;
  }
  return k;
}

bool PermutationGroup::is_abelian() const {
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    for (std::size_t j = i + 1; j < generators_.size(); ++j) {
      if (!commute(generators_[i], generators_[j])) return false;
    }
  }
  return true;
}

bool SubgroupHandle::contains(ElementIndex e) const {
  return std::binary_search(elements.begin(), elements.end(), e);
}

namespace {

std::vector<ElementIndex> closure(const PermutationGroup& g, std::span<const ElementIndex> gens) {
  std::vector<char> in(g.order(), 0);
  std::vector<ElementIndex> out{0};
  in[0] = 1;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (ElementIndex s : gens) {
      const ElementIndex x = g.multiply(out[i], s);
      if (!in[x]) {
        in[x] = 1;
        out.push_back(x);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool normalized_by(const PermutationGroup& g, const SubgroupHandle& h, std::span<const ElementIndex> conjugators) {
  const auto gens = subgroup_generators(g, h);
  for (ElementIndex c : conjugators) {
    const ElementIndex ci = g.inverse_of(c);
    for (ElementIndex x : gens) {
      if (!h.contains(g.multiply(g.multiply(c, x), ci))) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<ElementIndex> subgroup_generators(const PermutationGroup& g, const SubgroupHandle& h) {
  std::vector<ElementIndex> gens;
  std::vector<ElementIndex> covered{0};
  for (ElementIndex x : h.elements) {
    if (std::binary_search(covered.begin(), covered.end(), x)) continue;
    gens.push_back(x);
    covered = closure(g, gens);
    if (covered.size() == h.order()) break;
  }
  return gens;
}

SubgroupHandle make_subgroup(const PermutationGroup& g, std::vector<ElementIndex> elements) {
  std::sort(elements.begin(), elements.end());
  SubgroupHandle h{std::move(elements), false, false};
  const auto gens = subgroup_generators(g, h);
  h.is_abelian = true;
  for (std::size_t i = 0; i < gens.size() && h.is_abelian; ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      if (!g.commute(gens[i], gens[j])) {
        h.is_abelian = false;
        break;
      }
    }
  }
  h.is_normal = normalized_by(g, h, g.generator_indices());
  return h;
}

SubgroupHandle generated_subgroup(const PermutationGroup& g, std::span<const ElementIndex> generators) {
  return make_subgroup(g, closure(g, generators));
}

SubgroupHandle whole_group(const PermutationGroup& g) {
  std::vector<ElementIndex> all(g.order());
  for (ElementIndex i = 0; i < all.size(); ++i) all[i] = i;
  return make_subgroup(g, std::move(all));
}

SubgroupHandle trivial_subgroup(const PermutationGroup& g) { return make_subgroup(g, {0}); }

SubgroupHandle center(const PermutationGroup& g, const SubgroupHandle& h) {
  const auto gens = subgroup_generators(g, h);
  std::vector<ElementIndex> z;
  for (ElementIndex x : h.elements) {
    if (std::all_of(gens.begin(), gens.end(), [&](ElementIndex s) { return g.commute(x, s); })) z.push_back(x);
  }
  return make_subgroup(g, std::move(z));
}

SubgroupHandle sylow(const PermutationGroup& g, const SubgroupHandle& h, std::uint64_t p) {
  if (!is_prime(p)) throw Error(ErrorKind::InvalidParameter, "sylow: p must be prime");
  const std::uint64_t target = p_part(h.order(), p);
  SubgroupHandle P = trivial_subgroup(g);
  while (P.order() < target) {
    bool grew = false;
    const auto p_gens = subgroup_generators(g, P);
    for (ElementIndex x : h.elements) {
      if (P.contains(x) || !P.contains(g.power(x, p))) continue;
      const ElementIndex single[] = {x};
      if (!normalized_by(g, P, single)) continue;
      std::vector<ElementIndex> gens = p_gens;
      gens.push_back(x);
      P = generated_subgroup(g, gens);
      grew = true;
      break;
    }
    if (!grew) throw Error(ErrorKind::Inconsistency, "sylow search stalled");
  }
  return P;
}

std::optional<std::uint64_t> p_group_prime(std::size_t order) {
  const auto f = factorize(order);
  if (f.size() != 1) return std::nullopt;
  return f.front().first;
}

std::vector<SubgroupHandle> central_series_cp(const PermutationGroup& g, const SubgroupHandle& P) {
  std::vector<SubgroupHandle> series{trivial_subgroup(g)};
  if (P.order() == 1) return series;
  const auto prime = p_group_prime(P.order());
  if (!prime) {
    throw Error(ErrorKind::InvalidParameter, "central series: order " + std::to_string(P.order()) +
                                                 " is not a prime power");
  }
  const std::uint64_t p = *prime;
  const auto p_gens = subgroup_generators(g, P);
  while (series.back().order() < P.order()) {
    const SubgroupHandle& prev = series.back();
    std::optional<ElementIndex> pick;
    for (ElementIndex x : P.elements) {
      if (prev.contains(x) || !prev.contains(g.power(x, p))) continue;
      const bool central = std::all_of(p_gens.begin(), p_gens.end(), [&](ElementIndex y) {
        const ElementIndex comm =
            g.multiply(g.multiply(x, y), g.multiply(g.inverse_of(x), g.inverse_of(y)));
        return prev.contains(comm);
      });
      if (central) {
        pick = x;
        break;
      }
    }
    if (!pick) throw Error(ErrorKind::Inconsistency, "central series: no central element of order p");
    std::vector<ElementIndex> gens = subgroup_generators(g, prev);
    gens.push_back(*pick);
    series.push_back(generated_subgroup(g, gens));
  }
  return series;
}

std::vector<std::vector<ElementIndex>> conjugacy_classes(const PermutationGroup& g) {
  std::vector<char> seen(g.order(), 0);
  std::vector<std::vector<ElementIndex>> classes;
  const auto& gens = g.generator_indices();
  for (ElementIndex x = 0; x < g.order(); ++x) {
    if (seen[x]) continue;
    std::vector<ElementIndex> cls{x};
    seen[x] = 1;
    for (std::size_t i = 0; i < cls.size(); ++i) {
      for (ElementIndex s : gens) {
        const ElementIndex y = g.multiply(g.multiply(s, cls[i]), g.inverse_of(s));
        if (!seen[y]) {
          seen[y] = 1;
          cls.push_back(y);
        }
      }
    }
    std::sort(cls.begin(), cls.end());
    classes.push_back(std::move(cls));
  }
  return classes;
}

AbelianNormalResult best_abelian_normal_subgroup(const PermutationGroup& g, std::size_t exhaustive_limit) {
  if (g.is_abelian()) return {whole_group(g), true, false};

  const auto classes = conjugacy_classes(g);
  // Only classes whose elements commute pairwise can lie in an abelian subgroup.
  std::vector<std::size_t> usable;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c].front() == 0) continue;
    bool ok = true;
    for (std::size_t i = 0; i < classes[c].size() && ok; ++i) {
      for (std::size_t j = i + 1; j < classes[c].size(); ++j) {
        if (!g.commute(classes[c][i], classes[c][j])) {
          ok = false;
          break;
        }
      }
    }
    if (ok) usable.push_back(c);
  }

  auto better = [](const SubgroupHandle& a, const SubgroupHandle& b) {
    return a.order() != b.order() ? a.order() > b.order() : a.elements < b.elements;
  };
  auto try_extend = [&](const std::vector<ElementIndex>& base_gens, const SubgroupHandle& base,
                        std::size_t c) -> std::optional<SubgroupHandle> {
    const auto& cls = classes[c];
    if (std::all_of(cls.begin(), cls.end(), [&](ElementIndex x) { return base.contains(x); })) return std::nullopt;
    for (ElementIndex x : cls) {
      for (ElementIndex y : base_gens) {
        if (!g.commute(x, y)) return std::nullopt;
      }
    }
    std::vector<ElementIndex> gens = base_gens;
    gens.insert(gens.end(), cls.begin(), cls.end());
    return generated_subgroup(g, gens);
  };

  SubgroupHandle best = trivial_subgroup(g);
  if (g.order() <= exhaustive_limit) {
    std::set<std::vector<ElementIndex>> visited{best.elements};
    std::deque<std::pair<SubgroupHandle, std::vector<ElementIndex>>> queue{{best, {}}};
    while (!queue.empty()) {
      auto [n, gens] = std::move(queue.front());
      queue.pop_front();
      if (better(n, best)) best = n;
      for (std::size_t c : usable) {
        auto m = try_extend(gens, n, c);
        if (!m || !visited.insert(m->elements).second) continue;
        auto m_gens = subgroup_generators(g, *m);
        queue.emplace_back(std::move(*m), std::move(m_gens));
      }
    }
    return {best, true, false};
  }

  const SubgroupHandle z = center(g, whole_group(g));
  best = z;
  bool from_center = true;
  for (std::size_t a = 0; a < usable.size(); ++a) {
    auto one = try_extend({}, trivial_subgroup(g), usable[a]);
    if (!one || !one->is_abelian) continue;
    if (better(*one, best)) {
      best = *one;
      from_center = false;
    }
    const auto one_gens = subgroup_generators(g, *one);
    for (std::size_t b = a + 1; b < usable.size(); ++b) {
      auto two = try_extend(one_gens, *one, usable[b]);
      if (two && two->is_abelian && better(*two, best)) {
        best = *two;
        from_center = false;
      }
    }
  }
  return {best, false, from_center};
}

std::vector<SubgroupHandle> p_subgroups(const PermutationGroup& g, std::uint64_t p) {
  std::vector<ElementIndex> p_elements;
  for (ElementIndex x = 1; x < g.order(); ++x) {
    const auto q = p_group_prime(g.element_order(x));
    if (q && *q == p) p_elements.push_back(x);
  }
  std::set<std::vector<ElementIndex>> seen;
  std::vector<SubgroupHandle> found;
  std::deque<SubgroupHandle> queue{trivial_subgroup(g)};
  while (!queue.empty()) {
    SubgroupHandle h = std::move(queue.front());
    queue.pop_front();
    const auto gens = subgroup_generators(g, h);
    for (ElementIndex x : p_elements) {
      if (h.contains(x)) continue;
      std::vector<ElementIndex> ext = gens;
      ext.push_back(x);
      auto m = generated_subgroup(g, ext);
      const auto q = p_group_prime(m.order());
      if (!q || *q != p || !seen.insert(m.elements).second) continue;
      found.push_back(m);
      queue.push_back(std::move(m));
    }
  }
  std::sort(found.begin(), found.end(), [](const SubgroupHandle& a, const SubgroupHandle& b) {
    return a.order() != b.order() ? a.order() < b.order() : a.elements < b.elements;
  });
  return found;
}

std::vector<SubgroupHandle> subgroups_of_order_p(const PermutationGroup& g, std::uint64_t p) {
  std::set<std::vector<ElementIndex>> seen;
  std::vector<SubgroupHandle> out;
  for (ElementIndex x = 1; x < g.order(); ++x) {
    if (g.element_order(x) != p) continue;
    const ElementIndex gen[] = {x};
    auto h = generated_subgroup(g, gen);
    if (seen.insert(h.elements).second) out.push_back(std::move(h));
  }
  return out;
}

}  // namespace sqh
