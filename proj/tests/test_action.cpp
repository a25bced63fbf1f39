#include <doctest.h>

#include "oracle.hpp"
#include "sqh/action.hpp"
#include "sqh/error.hpp"
#include "sqh/homology.hpp"
#include "sqh/models.hpp"

using namespace sqh;

namespace {

Permutation rotation(std::uint32_t m, std::uint32_t steps = 1) {
  Permutation r(m);
  for (std::uint32_t v = 0; v < m; ++v) r[v] = (v + steps) % m;
  return r;
}

VertexAction antipodal(int n) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i + 1;
  return signed_permutation_action(n, {{perm, std::vector<int>(n, -1)}});
}

VertexAction q8_action() {
  return signed_permutation_action(4, {{{2, 1, 4, 3}, {-1, 1, -1, 1}}, {{3, 4, 1, 2}, {-1, 1, 1, -1}}});
}

std::vector<FieldSpec> qf2() { return {FieldSpec::rationals(), FieldSpec::prime(2), FieldSpec::prime(3)}; }

// Every simplex of every dimension, checked against every element.
bool admissible_brute(const VertexAction& a) {
  const auto faces = oracle::faces_by_dim(a.complex().facets());
  for (const auto& g : a.vertex_perms()) {
    for (const auto& dim : faces) {
      for (const auto& s : dim) {
        Simplex t;
        for (auto v : s) t.push_back(g[v]);
        std::sort(t.begin(), t.end());
        if (t != s) continue;
        for (auto v : s) {
          if (g[v] != v) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("close_generators") {
  const Permutation r4[] = {rotation(4)};
  CHECK(close_generators(polygon(4), r4).order() == 4);
  CHECK(antipodal(3).order() == 2);
  // 0->0, 1->2, 2->1, 3->3 sends edge {0,1} to the non-edge {0,2}
  const Permutation bad[] = {{0, 2, 1, 3}};
  CHECK_THROWS_AS(close_generators(polygon(4), bad), Error);
}

TEST_CASE("admissibility") {
  const Permutation refl[] = {{1, 0, 2}};
  CHECK_FALSE(is_admissible(close_generators(polygon(3), refl)));
  CHECK(is_admissible(antipodal(3)));
  const Permutation r3[] = {rotation(3)};
  const auto c3 = close_generators(polygon(3), r3);
  // admissible, yet every edge has both ends in one orbit
  CHECK(is_admissible(c3));
  CHECK_THROWS_AS(quotient_complex(c3), Error);
  CHECK_THROWS_AS(quotient_complex(subdivide(c3)), Error);
  const auto q = make_admissible_and_quotient(c3);
  CHECK(q.subdivisions == 2);
  CHECK(q.quotient.complex.vertex_count() == 4);
  for (const auto& a : {c3, close_generators(polygon(3), refl), antipodal(3), q8_action()}) {
    CHECK(is_admissible(a) == admissible_brute(a));
    const auto sd = subdivide(a);
    CHECK(is_admissible(sd) == admissible_brute(sd));
    CHECK(admissible_brute(subdivide(sd)));
  }
}

TEST_CASE("induced action on a subdivision") {
  const Permutation r4[] = {rotation(4)};
  const auto a = close_generators(polygon(4), r4);
  const auto sd = subdivide(a);
  CHECK(sd.complex().vertex_count() == 8);
  CHECK(sd.order() == 4);
  CHECK(sd.group_ptr() == a.group_ptr());

  const auto anti = subdivide(antipodal(3));
  CHECK(anti.complex().vertex_count() == 26);
  const auto& g = anti.vertex_perm(1);
  for (Vertex v = 0; v < 26; ++v) CHECK(g[v] != v);

  const Permutation id[] = {identity_permutation(5)};
  CHECK(subdivide(close_generators(polygon(5), id)).order() == 1);

  const auto other = barycentric_subdivision(polygon(5));
  CHECK_THROWS_AS(induced_action_on_subdivision(a, other), Error);
}

TEST_CASE("quotients") {
  const Permutation r3[] = {rotation(3)};
  CHECK_THROWS_AS(quotient_complex(close_generators(polygon(3), r3)), Error);

  const Permutation r5[] = {rotation(5)};
  const auto c5 = make_admissible_and_quotient(close_generators(polygon(5), r5));
  const auto t = betti(chain_complex(c5.quotient.complex), qf2());
  for (const auto& row : t.rows) CHECK(row.betti == std::vector<std::int64_t>{1, 1});

  const auto rp2 = make_admissible_and_quotient(antipodal(3));
  CHECK(euler_characteristic(rp2.quotient.complex) == 1);
  CHECK(rp2.subdivisions <= 2);

  const auto c3 = make_admissible_and_quotient(close_generators(polygon(3), r3));
  CHECK(c3.subdivisions <= 2);
  CHECK(make_admissible_and_quotient(q8_action()).subdivisions <= 2);

  const Permutation id[] = {identity_permutation(6)};
  const auto triv = make_admissible_and_quotient(close_generators(cross_polytope(3), id));
  CHECK(triv.subdivisions == 0);
  CHECK(triv.quotient.complex == cross_polytope(3));
}

TEST_CASE("projection is simplicial") {
  const auto q = make_admissible_and_quotient(q8_action());
  for (const auto& f : q.action.complex().facets()) {
    Simplex image;
    for (auto v : f) image.push_back(q.quotient.projection[v]);
    std::sort(image.begin(), image.end());
    CHECK(q.quotient.complex.contains(image));
  }
}

TEST_CASE("orbit cells compute the same homology as the simplicial quotient") {
  for (const auto& a : {antipodal(3), antipodal(4), q8_action(),
                        signed_permutation_action(3, {{{2, 1, 3}, {1, 1, 1}}, {{2, 3, 1}, {1, 1, 1}}})}) {
    const auto model = make_admissible(a);
    const auto cells = orbit_cell_complex(model.action, whole_group(model.action.group()));
    const auto q = make_admissible_and_quotient(a);
    const auto lhs = betti(cells.chains, qf2());
    const auto rhs = betti(chain_complex(q.quotient.complex), qf2());
    for (std::size_t i = 0; i < lhs.rows.size(); ++i) CHECK(lhs.rows[i].betti == rhs.rows[i].betti);
    REQUIRE(lhs.torsion);
    REQUIRE(rhs.torsion);
    CHECK(*lhs.torsion == *rhs.torsion);

    // Euler characteristic equals the alternating orbit count
    std::int64_t chi = 0;
    for (std::size_t k = 0; k < cells.chains.ranks.size(); ++k) {
      chi += (k % 2 ? -1 : 1) * static_cast<std::int64_t>(cells.chains.ranks[k]);
    }
    CHECK(chi == euler_characteristic(q.quotient.complex));
  }
}

TEST_CASE("free actions divide the Euler characteristic") {
  for (const auto& a : {antipodal(3), antipodal(5), q8_action()}) {
    const auto q = make_admissible_and_quotient(a);
    bool free = true;
    for (ElementIndex g = 1; g < q.action.order(); ++g) {
      for (Vertex v = 0; v < q.action.complex().vertex_count(); ++v) free &= q.action.vertex_perm(g)[v] != v;
    }
    REQUIRE(free);
    CHECK(static_cast<std::int64_t>(a.order()) * euler_characteristic(q.quotient.complex) ==
          euler_characteristic(q.action.complex()));
  }
}

TEST_CASE("fixed subcomplexes") {
  const auto refl = signed_permutation_action(3, {{{1, 2, 3}, {1, 1, -1}}});
  const auto fixed = fixed_subcomplex(refl, whole_group(refl.group()));
  CHECK(fixed.facets() == std::vector<Simplex>{{0, 2}, {0, 3}, {1, 2}, {1, 3}});

  CHECK(fixed_subcomplex(antipodal(3), whole_group(antipodal(3).group())).empty());
  CHECK(fixed_subcomplex(refl, trivial_subgroup(refl.group())) == refl.complex());

  // monotone: larger subgroups fix less
  const auto d4 = make_admissible(signed_permutation_action(3, {{{2, 1, 3}, {-1, 1, 1}}, {{1, 2, 3}, {1, -1, 1}}})).action;
  const auto G = whole_group(d4.group());
  for (ElementIndex x = 0; x < d4.order(); ++x) {
    const ElementIndex gen[] = {x};
    const auto H = generated_subgroup(d4.group(), gen);
    const auto big = fixed_subcomplex(d4, H);
    const auto small = fixed_subcomplex(d4, G);
    for (const auto& f : small.facets()) CHECK(big.contains(f));
  }

  const Permutation r3[] = {rotation(3)};
  const auto c3 = close_generators(polygon(3), r3);
  CHECK(fixed_subcomplex(c3, whole_group(c3.group())).facets().empty());
  const Permutation swap01[] = {{1, 0, 2}};
  const auto r = close_generators(polygon(3), swap01);
  CHECK_THROWS_AS(fixed_subcomplex(r, whole_group(r.group())), Error);
}

TEST_CASE("action json round trip") {
  const auto a = antipodal(3);
  const auto j = to_json(a);
  const auto b = action_from_json(j);
  CHECK(b.order() == 2);
  CHECK(b.complex() == a.complex());
  CHECK_THROWS_AS(action_from_json(nlohmann::json::parse(R"({"complex": 1})")), Error);
}
