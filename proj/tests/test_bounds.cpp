#include <doctest.h>

#include <cmath>

#include "sqh/bounds.hpp"
#include "sqh/error.hpp"
#include "sqh/models.hpp"

using namespace sqh;

namespace {

VertexAction admissible(const VertexAction& a) { return make_admissible(a).action; }

VertexAction antipodal(int n) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i + 1;
  return admissible(signed_permutation_action(n, {{perm, std::vector<int>(n, -1)}}));
}

VertexAction sym3() {
  return admissible(signed_permutation_action(3, {{{2, 1, 3}, {1, 1, 1}}, {{2, 3, 1}, {1, 1, 1}}}));
}

const Inequality* find(const CheckResult& r, const std::string& family, int degree) {
  for (const auto& q : r.inequalities) {
    if (q.family == family && q.degree == degree) return &q;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("integer bound formulas") {
  CHECK(abelian_bound(3) == 27);
  CHECK(abelian_bound(1) == 3);
  CHECK(abelian_bound(6) == 729);
  CHECK(cyclic_bound(2, 2) == 18);
  CHECK(cyclic_bound(3, 1) == 12);
  CHECK(cyclic_bound(3, 0) == 0);
  CHECK(pgroup_bound(2, 1, 3) == 729);
  CHECK(pgroup_bound(5, 4, 0) == 4);
  CHECK(pgroup_bound(3, 2, 1) == 24);
  CHECK(abelian_bound(60) == BigInt("42391158275216203514294433201"));
  CHECK(jordan_constant(3) == 24);
}

TEST_CASE("finite bound forms") {
  auto b = finite_bound(2, 1, 8, 2);
  CHECK(b.exponent == 3);
  CHECK(b.integer_form == 729);
  CHECK(b.real_form == doctest::Approx(729.0));
  b = finite_bound(4, 3, 1, 5);
  CHECK(b.integer_form == 3);
  CHECK(b.real_form == doctest::Approx(3.0));
  b = finite_bound(3, 1, 6, 3);
  CHECK(b.exponent == 1);
  CHECK(b.integer_form == 12);
  CHECK_THROWS_AS(finite_bound(2, 1, 8, 4), Error);
}

TEST_CASE("integer form never exceeds the real form") {
  for (int d = 0; d <= 6; ++d) {
    for (std::uint64_t order = 1; order <= 400; order += 7) {
      for (std::uint64_t p : {2, 3, 5, 7, 11}) {
        const auto b = finite_bound(d, 2, order, p);
        CHECK(b.integer_form.convert_to<double>() <= b.real_form * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("combined bound") {
  CHECK(jordan_combined_bound(2, 1) == doctest::Approx(18));
  CHECK(jordan_combined_bound(3, 2) == doctest::Approx(729));
  CHECK(jordan_combined_bound(4, 1) == doctest::Approx(324));
  for (int n = 1; n < 6; ++n) {
    for (std::uint64_t q = 1; q < 50; ++q) {
      CHECK(jordan_combined_bound(n, q) <= jordan_combined_bound(n, q + 1));
      CHECK(jordan_combined_bound(n, q) <= jordan_combined_bound(n + 1, q));
    }
  }
}

TEST_CASE("sphere constant") {
  const auto c1 = sphere_constant(1);
  CHECK(c1.base2 == doctest::Approx(9.0));
  CHECK(c1.natural == doctest::Approx(3.0 * std::pow(2.0, std::log(3.0))));
  CHECK(format_real(c1.natural) == "6.424");
  // 9 * 6^{log2 6}
  const auto c2 = sphere_constant(2);
  CHECK(c2.base2 == doctest::Approx(9.0 * std::pow(6.0, std::log2(6.0))));
  CHECK(format_real(c2.base2) == "924.1");
  CHECK(sphere_constant_via_combined(1) == doctest::Approx(2 * 9 * std::pow(6.0, std::log2(6.0))));
  CHECK_THROWS_AS(sphere_constant(0), Error);
}

TEST_CASE("Smith-Floyd") {
  const auto anti = antipodal(3);
  auto r = smith_floyd_check(anti, whole_group(anti.group()), 2);
  CHECK(r.pass());
  CHECK(r.inequalities[0].lhs == 0);
  CHECK(r.inequalities[0].rhs == 2);

  const auto refl = admissible(signed_permutation_action(3, {{{1, 2, 3}, {1, 1, -1}}}));
  r = smith_floyd_check(refl, whole_group(refl.group()), 2);
  CHECK(r.pass());
  CHECK(r.inequalities[0].lhs == 2);
  CHECK(r.inequalities[0].rhs == 2);

  r = smith_floyd_check(refl, trivial_subgroup(refl.group()), 2);
  CHECK(r.inequalities[0].lhs == r.inequalities[0].rhs);
  CHECK_THROWS_AS(smith_floyd_check(sym3(), whole_group(sym3().group()), 2), Error);
}

TEST_CASE("cyclic chain") {
  const auto anti = antipodal(3);
  const auto r = cyclic_chain_check(anti, whole_group(anti.group()), 2);
  CHECK(r.pass());
  for (int t = 0; t <= 2; ++t) {
    const auto* h = find(r, "headline", t);
    REQUIRE(h);
    CHECK(h->lhs == 1);
    CHECK(h->rhs == 9);
  }
  const auto lens = make_admissible(character_join_model({{5}, {{1}, {1}}, {}}).action).action;
  const auto l = cyclic_chain_check(lens, whole_group(lens.group()), 5);
  CHECK(l.pass());
  CHECK(find(l, "headline", 3)->rhs == 12);

  const auto triv = cyclic_chain_check(anti, trivial_subgroup(anti.group()), 2);
  CHECK(triv.pass());
  CHECK(find(triv, "quotient_sequence", 2)->lhs == 1);

  const auto s = sym3();
  for (const auto& C : subgroups_of_order_p(s.group(), 2)) CHECK(cyclic_chain_check(s, C, 2).pass());
}

TEST_CASE("transfer") {
  const auto s = sym3();
  for (std::uint64_t p : {2, 3, 5}) {
    const auto r = transfer_check(s, p);
    CHECK(r.pass());
  }
  const auto r3 = transfer_check(s, 3);
  CHECK(r3.context["sylow_quotient_betti"] == nlohmann::json({1, 0, 1}));
  CHECK(transfer_check(s, 5).context["sylow_order"] == 1);
}

TEST_CASE("p-group series") {
  const auto q8 = admissible(signed_permutation_action(4, {{{2, 1, 4, 3}, {-1, 1, -1, 1}}, {{3, 4, 1, 2}, {-1, 1, 1, -1}}}));
  const auto s = pgroup_series(q8, 2);
  CHECK(s.orders == std::vector<std::size_t>{1, 2, 4, 8});
  CHECK(s.K.front() == 1);
  for (std::size_t i = 1; i < s.K.size(); ++i) CHECK(s.K[i] <= 12 * s.K[i - 1]);
}

TEST_CASE("evaluate_all") {
  BoundInputs in;
  in.scenario_id = "lens";
  in.n = 4;
  in.d = 3;
  in.group_order = 5;
  in.abelian_normal_order = 5;
  FieldBetti f5{FieldSpec::prime(5), {1, 1, 1, 1}, true};
  FieldBetti s5{FieldSpec::prime(5), {1, 0, 0, 1}, true};
  in.quotient.rows = {f5};
  in.abelian_quotient.rows = {f5};
  in.quotient_mod_p[5] = f5;
  in.sphere_mod_p[5] = s5;
  const auto rep = evaluate_all(in);
  CHECK(rep.all_gating_pass());
  bool saw_abelian = false, saw_cyclic = false;
  for (const auto& e : rep.entries) {
    if (e.name == "abelian_3n") {
      saw_abelian = true;
      CHECK(e.exact == 81);
      CHECK(e.slack == doctest::Approx(20.25));
    }
    if (e.name == "cyclic") {
      saw_cyclic = true;
      CHECK(e.exact == 12);
    }
  }
  CHECK(saw_abelian);
  CHECK(saw_cyclic);
  const auto j = rep.to_json();
  CHECK(j["schema"] == "bound_report_v1");

  in.quotient.rows[0].betti = {1, 100, 1, 1};
  CHECK_FALSE(evaluate_all(in).all_gating_pass());
}
