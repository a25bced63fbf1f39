#include "sqh/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "sqh/error.hpp"
#include "sqh/primes.hpp"

namespace sqh {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ParseError, "at " + (path.empty() ? std::string("/") : path) + ": " + what);
}

const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) parse_fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) parse_fail(path, std::string("missing key \"") + key + "\"");
  return *it;
}

template <class T>
T as(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    parse_fail(path, e.what());
  }
}

// Runs f, rethrowing invalid-parameter and parse errors with the JSON path.
template <class F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidParameter || e.kind() == ErrorKind::ParseError ||
        e.kind() == ErrorKind::ActionInvalid) {
      parse_fail(path, e.what());
    }
    throw;
  }
}

}  // namespace

int Scenario::ambient() const {
  switch (kind) {
    case SpaceKind::CharacterJoin:
      return characters.n();
    case SpaceKind::SignedPermutation:
      return n;
    case SpaceKind::Explicit:
      return ambient_dimension.value_or(complex.dimension() + 1);
  }
  return 0;
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) parse_fail("", "scenario must be an object");
  if (auto it = j.find("schema"); it != j.end() && *it != "scenario_v1") {
    parse_fail("/schema", "unsupported schema (expected \"scenario_v1\")");
  }
  Scenario s;
  s.name = as<std::string>(member(j, "name", ""), "/name");
  const json& space = member(j, "space", "");
  if (!space.is_object() || space.size() != 1) parse_fail("/space", "expected exactly one space variant");
  const std::string variant = space.begin().key();
  const json& body = space.begin().value();
  const std::string base = "/space/" + variant;
  if (variant == "character_join") {
    s.kind = SpaceKind::CharacterJoin;
    s.characters = at_path(base, [&] { return character_data_from_json(body); });
  } else if (variant == "signed_permutation") {
    s.kind = SpaceKind::SignedPermutation;
    s.n = as<int>(member(body, "n", base), base + "/n");
    if (s.n < 1 || s.n > 8) parse_fail(base + "/n", "n must lie in 1..8");
    const json& gens = member(body, "generators", base);
    if (!gens.is_array()) parse_fail(base + "/generators", "expected an array");
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const std::string p = base + "/generators/" + std::to_string(i);
      SignedPermutation g = at_path(p, [&] { return signed_permutation_from_json(gens[i]); });
      if (g.n() != s.n) parse_fail(p, "generator size differs from n");
      s.signed_generators.push_back(std::move(g));
    }
  } else if (variant == "explicit") {
    s.kind = SpaceKind::Explicit;
    s.complex = at_path(base + "/complex", [&] { return complex_from_json(member(body, "complex", base)); });
    const json& gens = member(body, "generators", base);
    if (!gens.is_array()) parse_fail(base + "/generators", "expected an array");
    for (std::size_t i = 0; i < gens.size(); ++i) {
      s.generators.push_back(as<Permutation>(gens[i], base + "/generators/" + std::to_string(i)));
    }
    if (auto it = body.find("ambient_dimension"); it != body.end()) {
      s.ambient_dimension = as<int>(*it, base + "/ambient_dimension");
      if (*s.ambient_dimension < 1) parse_fail(base + "/ambient_dimension", "must be >= 1");
    }
  } else {
    parse_fail("/space", "unknown space variant \"" + variant + "\"");
  }

  const json& fields = member(j, "fields", "");
  if (!fields.is_array() || fields.empty()) parse_fail("/fields", "expected a nonempty array");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const std::string p = "/fields/" + std::to_string(i);
    const auto name = as<std::string>(fields[i], p);
    FieldSpec f = at_path(p, [&] { return FieldSpec::parse(name); });
    if (std::find(s.fields.begin(), s.fields.end(), f) == s.fields.end()) s.fields.push_back(f);
  }
  if (auto it = j.find("subdivisions"); it != j.end()) {
    if (it->is_string()) {
      if (*it != "auto") parse_fail("/subdivisions", "expected \"auto\" or an integer");
    } else {
      s.subdivisions = as<int>(*it, "/subdivisions");
      if (*s.subdivisions < 0 || *s.subdivisions > 3) parse_fail("/subdivisions", "must lie in 0..3");
    }
  }
  if (auto it = j.find("checks"); it != j.end()) {
    const auto list = as<std::vector<std::string>>(*it, "/checks");
    for (const auto& c : list) {
      if (std::find(all_checks().begin(), all_checks().end(), c) == all_checks().end()) {
        parse_fail("/checks", "unknown check \"" + c + "\"");
      }
      if (std::find(s.checks.begin(), s.checks.end(), c) == s.checks.end()) s.checks.push_back(c);
    }
  } else {
    s.checks = all_checks();
  }
  if (auto it = j.find("certified"); it != j.end()) s.certified = as<bool>(*it, "/certified");
  if (auto it = j.find("seed"); it != j.end()) s.seed = as<std::uint64_t>(*it, "/seed");
  return s;
}

json to_json(const Scenario& s) {
  json space;
  switch (s.kind) {
    case SpaceKind::CharacterJoin:
      space["character_join"] = to_json(s.characters);
      break;
    case SpaceKind::SignedPermutation: {
      json gens = json::array();
      for (const auto& g : s.signed_generators) gens.push_back(to_json(g));
      space["signed_permutation"] = {{"n", s.n}, {"generators", gens}};
      break;
    }
    case SpaceKind::Explicit: {
      json body = {{"complex", to_json(s.complex)}, {"generators", s.generators}};
      if (s.ambient_dimension) body["ambient_dimension"] = *s.ambient_dimension;
      space["explicit"] = body;
      break;
    }
  }
  json fields = json::array();
  for (const auto& f : s.fields) fields.push_back(f.name());
  json j = {{"schema", "scenario_v1"}, {"name", s.name},     {"space", space},       {"fields", fields},
            {"checks", s.checks},      {"certified", s.certified}, {"seed", s.seed}};
  if (s.subdivisions) {
    j["subdivisions"] = *s.subdivisions;
  } else {
    j["subdivisions"] = "auto";
  }
  return j;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
  return scenario_from_json(j);
}

namespace {

std::vector<FieldSpec> parse_fields(std::initializer_list<const char*> names) {
  std::vector<FieldSpec> out;
  for (const char* n : names) out.push_back(FieldSpec::parse(n));
  return out;
}

Scenario signed_scenario(std::string name, int n, std::vector<SignedPermutation> gens, std::vector<FieldSpec> fields) {
  Scenario s;
  s.name = std::move(name);
  s.kind = SpaceKind::SignedPermutation;
  s.n = n;
  s.signed_generators = std::move(gens);
  for (const auto& g : s.signed_generators) g.validate();
  s.fields = std::move(fields);
  s.checks = all_checks();
  return s;
}

void expect_params(const std::string& name, const std::vector<std::int64_t>& params, std::size_t count) {
  if (params.size() != count) {
    throw Error(ErrorKind::InvalidParameter,
                "builtin " + name + " takes " + std::to_string(count) + " parameter(s), got " + std::to_string(params.size()));
  }
}

void expect_range(const std::string& what, std::int64_t v, std::int64_t lo, std::int64_t hi) {
  if (v < lo || v > hi) {
    throw Error(ErrorKind::InvalidParameter,
                what + " must lie in " + std::to_string(lo) + ".." + std::to_string(hi));
  }
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"rp", "lens", "quaternion_q8", "sym3_on_s2", "dihedral_on_s1", "trivial_sphere"};
}

Scenario builtin(const std::string& name, const std::vector<std::int64_t>& params) {
  if (name == "rp") {
    expect_params(name, params, 1);
    expect_range("rp: n", params[0], 1, 4);
    const int n = static_cast<int>(params[0]) + 1;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    return signed_scenario("rp(" + std::to_string(params[0]) + ")", n, {{perm, std::vector<int>(n, -1)}},
                           parse_fields({"Q", "Fp:2", "Fp:3"}));
  }
  if (name == "lens") {
    expect_params(name, params, 2);
    expect_range("lens: p", params[0], 2, 13);
    const std::int64_t p = params[0];
    const std::int64_t q = ((params[1] % p) + p) % p;
    if (std::gcd(p, q) != 1) throw Error(ErrorKind::InvalidParameter, "lens: q must be coprime to p");
    Scenario s;
    s.name = "lens(" + std::to_string(p) + "," + std::to_string(params[1]) + ")";
    s.kind = SpaceKind::CharacterJoin;
    s.characters.invariant_factors = {p};
    s.characters.rotation_characters = {{1}, {q}};
    s.characters.validate();
    s.fields = {FieldSpec::rationals()};
    for (auto r : prime_divisors(static_cast<std::uint64_t>(p))) s.fields.push_back(FieldSpec::prime(r));
    std::uint64_t ell = 2;
    while (p % static_cast<std::int64_t>(ell) == 0) ell = ell == 2 ? 3 : ell + 2;
    s.fields.push_back(FieldSpec::prime(ell));
    s.checks = all_checks();
    return s;
  }
  if (name == "quaternion_q8") {
    expect_params(name, params, 0);
    return signed_scenario("quaternion_q8", 4,
                           {{{2, 1, 4, 3}, {-1, 1, -1, 1}}, {{3, 4, 1, 2}, {-1, 1, 1, -1}}},
                           parse_fields({"Q", "Fp:2", "Fp:3"}));
  }
  if (name == "sym3_on_s2") {
    expect_params(name, params, 0);
    return signed_scenario("sym3_on_s2", 3, {{{2, 1, 3}, {1, 1, 1}}, {{2, 3, 1}, {1, 1, 1}}},
                           parse_fields({"Q", "Fp:2", "Fp:3"}));
  }
  if (name == "dihedral_on_s1") {
    expect_params(name, params, 1);
    expect_range("dihedral_on_s1: m", params[0], 3, 64);
    const auto m = static_cast<std::uint32_t>(params[0]);
    Scenario s;
    s.name = "dihedral_on_s1(" + std::to_string(m) + ")";
    s.kind = SpaceKind::Explicit;
    s.complex = polygon(static_cast<int>(m));
    Permutation rot(m), refl(m);
    for (std::uint32_t v = 0; v < m; ++v) {
      rot[v] = (v + 1) % m;
      refl[v] = (m - v) % m;
    }
    s.generators = {rot, refl};
    s.ambient_dimension = 2;
    s.fields = parse_fields({"Q", "Fp:2", "Fp:3"});
    s.checks = all_checks();
    return s;
  }
  if (name == "trivial_sphere") {
    expect_params(name, params, 1);
    expect_range("trivial_sphere: n", params[0], 1, 6);
    return signed_scenario("trivial_sphere(" + std::to_string(params[0]) + ")", static_cast<int>(params[0]), {},
                           parse_fields({"Q", "Fp:2"}));
  }
  throw Error(ErrorKind::InvalidParameter, "unknown builtin \"" + name + "\"");
}

std::vector<Scenario> corpus() {
  std::vector<Scenario> out;
  for (int n = 2; n <= 4; ++n) out.push_back(builtin("rp", {n}));
  for (std::int64_t p : {3, 5, 7}) {
    for (std::int64_t q : {1, 2}) out.push_back(builtin("lens", {p, q}));
  }
  out.push_back(builtin("quaternion_q8"));
  out.push_back(builtin("sym3_on_s2"));
  out.push_back(builtin("dihedral_on_s1", {4}));
  out.push_back(builtin("dihedral_on_s1", {5}));
  out.push_back(builtin("trivial_sphere", {3}));

  const auto f23 = parse_fields({"Q", "Fp:2", "Fp:3"});
  const SignedPermutation rot4{{2, 1, 3}, {-1, 1, 1}};      // e1 -> e2 -> -e1
  const SignedPermutation cyc3{{2, 3, 1}, {1, 1, 1}};
  const SignedPermutation swap12{{2, 1, 3}, {1, 1, 1}};
  const SignedPermutation half_turn{{1, 2, 3}, {1, -1, -1}};
  const SignedPermutation antipode3{{1, 2, 3}, {-1, -1, -1}};
  out.push_back(signed_scenario("reflection_on_s2", 3, {{{1, 2, 3}, {1, 1, -1}}}, f23));
  out.push_back(signed_scenario("rotation_c4_on_s2", 3, {rot4}, f23));
  out.push_back(signed_scenario("klein_four_on_s2", 3, {{{1, 2, 3}, {-1, 1, 1}}, {{1, 2, 3}, {1, -1, 1}}}, f23));
  out.push_back(signed_scenario("dihedral_d4_on_s2", 3, {rot4, {{1, 2, 3}, {1, -1, 1}}}, f23));
  out.push_back(signed_scenario("alternating_a4_on_s2", 3, {cyc3, half_turn}, f23));
  out.push_back(signed_scenario("octahedral_rotations_on_s2", 3, {rot4, cyc3}, f23));
  out.push_back(signed_scenario("hyperoctahedral_b3_on_s2", 3, {rot4, cyc3, antipode3}, f23));
  out.push_back(signed_scenario("sym3_times_c2_on_s2", 3, {swap12, cyc3, antipode3}, f23));
  out.push_back(signed_scenario("sym4_on_s3", 4, {{{2, 1, 3, 4}, {1, 1, 1, 1}}, {{2, 3, 4, 1}, {1, 1, 1, 1}}}, f23));
  out.push_back(signed_scenario("dihedral_d4_on_s3", 4, {{{2, 3, 4, 1}, {1, 1, 1, 1}}, {{4, 3, 2, 1}, {1, 1, 1, 1}}}, f23));
  return out;
}

std::size_t simplex_cap_from_env() {
  const char* v = std::getenv("SQH_MAX_SIMPLICES");
  if (v == nullptr || *v == '\0') return kDefaultSimplexCap;
  char* end = nullptr;
  const unsigned long long cap = std::strtoull(v, &end, 10);
  if (*end != '\0' || cap == 0) return kDefaultSimplexCap;
  return static_cast<std::size_t>(cap);
}

namespace {

class Clock {
 public:
  Clock(double budget, bool record) : budget_(budget), record_(record), start_(now()), last_(start_) {}

  void stage(const std::string& name) {
    const auto t = now();
    if (record_) timings_[name] = std::chrono::duration<double, std::milli>(t - last_).count();
    last_ = t;
    const double elapsed = std::chrono::duration<double>(t - start_).count();
    if (budget_ > 0 && elapsed > budget_) {
      throw Error(ErrorKind::ResourceCap, "wall-clock budget of " + format_real(budget_) + " s exceeded after " + name);
    }
  }
  json timings() const {
    json j = json::object();
    for (const auto& [k, v] : timings_) j[k] = v;
    return j;
  }

 private:
  static std::chrono::steady_clock::time_point now() { return std::chrono::steady_clock::now(); }
  double budget_;
  bool record_;
  std::chrono::steady_clock::time_point start_, last_;
  std::map<std::string, double> timings_;
};

json size_json(const SimplicialComplex& k) {
  const auto f = SimplexTable(k).f_vector();
  return {{"vertices", k.vertex_count()}, {"facets", k.facets().size()}, {"f_vector", f},
          {"simplices", std::accumulate(f.begin(), f.end(), std::size_t{0})}};
}

VertexAction build_action(const Scenario& s, std::size_t group_cap, std::optional<CharacterJoinModel>& cj) {
  switch (s.kind) {
    case SpaceKind::CharacterJoin: {
      cj = character_join_model(s.characters, group_cap);
      return cj->action;
    }
    case SpaceKind::SignedPermutation:
      return signed_permutation_action(s.n, s.signed_generators, group_cap);
    case SpaceKind::Explicit:
      return close_generators(s.complex, s.generators, group_cap);
  }
  throw Error(ErrorKind::InvalidParameter, "unknown space kind");
}

void compare_tables(const BettiTable& a, const BettiTable& b, const std::string& what) {
  for (const auto& row : a.rows) {
    const auto& other = b.for_field(row.field).betti;
    auto x = row.betti, y = other;
    while (!x.empty() && x.back() == 0) x.pop_back();
    while (!y.empty() && y.back() == 0) y.pop_back();
    if (x != y) {
      throw Error(ErrorKind::Inconsistency, what + ": Betti numbers over " + row.field.name() + " disagree (" +
                                                json(row.betti).dump() + " vs " + json(other).dump() + ")");
    }
  }
  if (a.torsion && b.torsion) {
    auto x = *a.torsion, y = *b.torsion;
    while (!x.empty() && x.back().empty()) x.pop_back();
    while (!y.empty() && y.back().empty()) y.pop_back();
    if (x != y) throw Error(ErrorKind::Inconsistency, what + ": torsion disagrees");
  }
}

std::int64_t alternating_sum(const std::vector<std::size_t>& ranks) {
  std::int64_t chi = 0;
  for (std::size_t k = 0; k < ranks.size(); ++k) chi += (k % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(ranks[k]);
  return chi;
}

json simplicial_crosscheck(const VertexAction& base, const BettiTable& orbit_table,
                           const std::vector<std::size_t>& orbit_ranks, const std::vector<FieldSpec>& fields,
                           const BettiOptions& bo, const RunOptions& opt) {
  VertexAction current = base;
  int rounds = 0;
  for (;;) {
    try {
      Quotient q = quotient_complex(current);
      const ChainComplex qc = chain_complex(q.complex);
      qc.validate();
      const BettiTable table = betti(qc, fields, bo);
      compare_tables(orbit_table, table, "simplicial quotient");
      const std::int64_t chi = euler_characteristic(q.complex);
      if (chi != alternating_sum(orbit_ranks)) {
        throw Error(ErrorKind::Inconsistency, "Euler characteristic of the simplicial quotient differs from the orbit count");
      }
      json j = size_json(q.complex);
      j["status"] = "agrees";
      j["subdivisions"] = rounds;
      j["euler_characteristic"] = chi;
      j["torsion_compared"] = orbit_table.torsion.has_value() && table.torsion.has_value();
      return j;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NeedsSubdivision) throw;
      if (rounds >= 3) throw Error(ErrorKind::NeedsSubdivision, "quotient not simplicial after 3 subdivisions");
    }
    const double next = projected_simplex_count(current.complex(), 1);
    if (next > static_cast<double>(std::min(opt.crosscheck_cap, opt.simplex_cap))) {
      return {{"status", "skipped"}, {"reason", "next subdivision exceeds the cross-check size cap"},
              {"subdivisions_tried", rounds}, {"projected_simplices", static_cast<std::uint64_t>(next)}};
    }
    current = subdivide(current);
    ++rounds;
  }
}

bool wants(const Scenario& s, const char* check) {
  return std::find(s.checks.begin(), s.checks.end(), check) != s.checks.end();
}

std::int64_t to_i64(const BigInt& x) { return static_cast<std::int64_t>(x); }

}  // namespace

RunResult run_scenario(const Scenario& sc, const RunOptions& opt) {
  Clock clock(opt.budget_seconds, opt.timings);
  const bool certified = opt.certified.value_or(sc.certified);
  const int n = sc.ambient();
  if (sc.fields.empty()) throw Error(ErrorKind::InvalidParameter, "scenario needs at least one field");
  const BettiOptions bo{certified, true, opt.snf_cap, sc.seed};
  const BettiOptions bo_light{certified, false, opt.snf_cap, sc.seed};

  // Character joins get their quotient straight from the block data; the
  // explicit sphere only serves cross-checks and is built under their cap.
  std::optional<JoinOrbitCells> direct;
  if (sc.kind == SpaceKind::CharacterJoin) {
    direct = join_orbit_cells(sc.characters);
    direct->chains.validate();
  }
  const bool explicit_model = !direct || direct->sphere_cells <= std::min(opt.crosscheck_cap, opt.simplex_cap);

  std::optional<CharacterJoinModel> cj;
  std::optional<VertexAction> base;
  std::optional<AdmissibleModel> model;
  if (explicit_model) {
    base = build_action(sc, opt.group_cap, cj);
    if (SimplexTable(base->complex()).total() > opt.simplex_cap) {
      throw Error(ErrorKind::ResourceCap, "model exceeds the simplex cap");
    }
  } else if (sc.subdivisions && *sc.subdivisions > 0) {
    throw Error(ErrorKind::ResourceCap, "character join too large to subdivide explicitly");
  }
  clock.stage("build");

  if (base) {
    model.emplace(AdmissibleModel{*base, 0});
    if (sc.subdivisions) {
      for (int i = 0; i < *sc.subdivisions; ++i) {
        if (projected_simplex_count(model->action.complex(), 1) > static_cast<double>(opt.simplex_cap)) {
          throw Error(ErrorKind::ResourceCap, "subdivision would exceed the simplex cap");
        }
        model->action = subdivide(model->action);
        ++model->subdivisions;
      }
      if (!is_admissible(model->action)) {
        throw Error(ErrorKind::NeedsSubdivision, "action is not admissible after the requested subdivisions");
      }
    } else {
      model = make_admissible(*base, 3, opt.simplex_cap);
    }
  }
  const VertexAction* Y = model ? &model->action : nullptr;
  std::optional<SimplexTable> table;
  std::optional<ChainComplex> y_chains;
  if (Y) {
    table.emplace(Y->complex());
    y_chains = chain_complex(*table);
    y_chains->validate();
  }
  clock.stage("subdivide");

  const PermutationGroup* G = Y ? &Y->group() : nullptr;
  std::optional<SubgroupHandle> whole;
  std::optional<AbelianNormalResult> A;
  if (G) {
    whole = whole_group(*G);
    A = best_abelian_normal_subgroup(*G);
  }
  const std::uint64_t group_order = G ? G->order() : direct->effective_order;
  const bool group_abelian = G ? G->is_abelian() : true;
  // An abelian group is its own best abelian normal subgroup.
  const std::uint64_t abelian_normal_order = A ? A->subgroup.order() : group_order;
  clock.stage("group");

  std::optional<OrbitCells> cells;
  if (Y) {
    cells = orbit_cell_complex(*table, Y->generator_perms(*whole));
    cells->chains.validate();
  }
  const ChainComplex& primary = direct ? direct->chains : cells->chains;
  const BettiTable quotient = betti(primary, sc.fields, bo);
  ChainComplex sphere_chains;
  if (y_chains) {
    sphere_chains = *y_chains;
  } else {
    // Same block shapes with trivial characters: a small triangulation of the same sphere.
    AbelianCharacterData trivial = sc.characters;
    for (auto& chi : trivial.rotation_characters) std::fill(chi.begin(), chi.end(), 0);
    for (auto& eps : trivial.sign_characters) std::fill(eps.begin(), eps.end(), 0);
    sphere_chains = join_orbit_cells(trivial).chains;
  }
  const BettiTable sphere = betti(sphere_chains, sc.fields, bo_light);
  clock.stage("quotient");

  json orbit_cross = {{"status", "not-applicable"}};
  if (direct && cells) {
    const BettiTable generic = betti(cells->chains, sc.fields, bo);
    compare_tables(quotient, generic, "orbit cells of the explicit join");
    if (alternating_sum(cells->chains.ranks) != alternating_sum(direct->chains.ranks)) {
      throw Error(ErrorKind::Inconsistency, "explicit and block-data orbit cells differ in Euler characteristic");
    }
    orbit_cross = {{"status", "agrees"}, {"cells", cells->chains.ranks}};
  } else if (direct) {
    orbit_cross = {{"status", "skipped"}, {"reason", "explicit join exceeds the cross-check cap"},
                   {"sphere_simplices", direct->sphere_cells}};
  }
  const json cross = base ? simplicial_crosscheck(*base, quotient, primary.ranks, sc.fields, bo, opt)
                          : json{{"status", "skipped"}, {"reason", "explicit join exceeds the cross-check cap"}};
  clock.stage("crosscheck");

  std::vector<std::uint64_t> group_primes = prime_divisors(group_order);
  std::vector<std::uint64_t> all_primes = group_primes;
  for (const auto& f : sc.fields) {
    if (!f.is_rational()) all_primes.push_back(f.characteristic());
  }
  std::sort(all_primes.begin(), all_primes.end());
  all_primes.erase(std::unique(all_primes.begin(), all_primes.end()), all_primes.end());

  std::vector<CheckResult> checks;
  std::optional<CoverTotal> cover;
  if (sc.kind == SpaceKind::CharacterJoin) cover = cover_e1_total(sc.characters);

  if (wants(sc, "abelian_bound")) {
    CheckResult r;
    r.check = "abelian_bound";
    r.context = {{"n", n}, {"abelian", group_abelian}};
    if (group_abelian) {
      const std::int64_t bound = to_i64(abelian_bound(n));
      for (const auto& row : quotient.rows) r.inequalities.push_back({row.field.name() + " total", -1, row.total(), bound});
    } else {
      r.context["applicable"] = false;
    }
    checks.push_back(std::move(r));
  }
  if (wants(sc, "cover_e1")) {
    CheckResult r;
    r.check = "cover_e1";
    if (cover) {
      const int N = sc.characters.blocks();
      const std::int64_t three_N = to_i64(abelian_bound(N)) - 1;
      json per_J = json::array();
      for (const auto& [J, v] : cover->per_J) per_J.push_back({{"J", J}, {"sum", v}});
      r.context = {{"N", N}, {"n", n}, {"cover_e1_total", cover->total}, {"per_J", per_J}};
      for (const auto& row : quotient.rows) {
        r.inequalities.push_back({row.field.name() + " total", -1, row.total(), static_cast<std::int64_t>(cover->total)});
      }
      r.inequalities.push_back({"cover_total", -1, static_cast<std::int64_t>(cover->total), three_N});
      r.inequalities.push_back({"blocks", -1, three_N, to_i64(abelian_bound(n))});
    } else {
      r.context = {{"applicable", false}};
    }
    checks.push_back(std::move(r));
  }
  auto skipped = [&](const char* name) {
    CheckResult r;
    r.check = name;
    r.context = {{"applicable", false}, {"reason", "explicit join exceeds the cross-check cap"}};
    checks.push_back(std::move(r));
  };
  if (wants(sc, "smith_floyd")) {
    if (!Y) {
      skipped("smith_floyd");
    } else {
      if (group_primes.empty()) checks.push_back(smith_floyd_check(*Y, trivial_subgroup(*G), 2));
      for (auto p : group_primes) {
        std::vector<SubgroupHandle> subs;
        if (G->order() <= 1000) {
          subs = p_subgroups(*G, p);
        } else {
          subs = central_series_cp(*G, sylow(*G, *whole, p));
          subs.erase(subs.begin());
        }
        for (const auto& P : subs) checks.push_back(smith_floyd_check(*Y, P, p));
      }
    }
  }
  if (wants(sc, "cyclic_chain")) {
    if (!Y) {
      skipped("cyclic_chain");
    } else {
      if (group_primes.empty()) checks.push_back(cyclic_chain_check(*Y, trivial_subgroup(*G), 2));
      for (auto p : group_primes) {
        auto subs = subgroups_of_order_p(*G, p);
        if (subs.size() > 16) subs.resize(16);
        for (const auto& C : subs) checks.push_back(cyclic_chain_check(*Y, C, p));
      }
    }
  }
  if (wants(sc, "transfer")) {
    if (!Y) {
      skipped("transfer");
    } else {
      for (auto p : all_primes) checks.push_back(transfer_check(*Y, p));
    }
  }
  clock.stage("checks");

  std::optional<BoundReport> bounds;
  if (wants(sc, "evaluate_all")) {
    BoundInputs in;
    in.scenario_id = sc.name;
    in.n = n;
    in.d = n - 1;
    in.group_order = group_order;
    in.group_abelian = group_abelian;
    in.abelian_normal_order = abelian_normal_order;
    in.abelian_normal_exhaustive = A ? A->exhaustive : true;
    in.quotient = quotient;
    in.abelian_quotient =
        Y ? betti(orbit_cell_complex(*table, Y->generator_perms(A->subgroup)).chains, sc.fields, bo_light) : quotient;
    for (auto p : all_primes) {
      const FieldSpec f[] = {FieldSpec::prime(p)};
      in.quotient_mod_p[p] = betti(primary, f, bo_light).rows.front();
      in.sphere_mod_p[p] = betti(sphere_chains, f, bo_light).rows.front();
    }
    if (Y) {
      for (auto p : group_primes) in.series.push_back(pgroup_series(*Y, p));
    }
    bounds = evaluate_all(in);
  }
  clock.stage("bounds");

  RunResult result;
  json check_list = json::array();
  for (const auto& c : checks) {
    for (const auto& q : c.inequalities) {
      if (!q.pass()) {
        result.failures.push_back(c.check + "/" + q.family + (q.degree >= 0 ? "[" + std::to_string(q.degree) + "]" : "") +
                                  ": " + std::to_string(q.lhs) + " > " + std::to_string(q.rhs));
      }
    }
    check_list.push_back(c.to_json());
  }
  if (bounds) {
    for (const auto& e : bounds->entries) {
      if (e.gating && !e.pass) {
        result.failures.push_back("bound/" + e.name + " over " + e.field + ": observed " + std::to_string(e.observed) +
                                  " exceeds " + (e.integral ? e.exact.str() : format_real(e.value)));
      }
    }
  }

  json group = {{"order", group_order},
                {"abelian", group_abelian},
                {"abelian_normal_subgroup",
                 {{"order", abelian_normal_order},
                  {"index", group_order / abelian_normal_order},
                  {"exhaustive", A ? A->exhaustive : true},
                  {"fallback_center", A ? A->fallback_center : false}}}};
  if (G) group["generators"] = G->generator_indices().size();
  if (direct) {
    group["kernel_order"] = sc.characters.group_order() / direct->effective_order;
    std::vector<std::int64_t> sizes;
    for (int j = 0; j < sc.characters.r(); ++j) {
      const auto d = character_order(sc.characters, j);
      sizes.push_back(d >= 3 ? d : (d == 1 ? 3 : 4));
    }
    group["polygon_sizes"] = sizes;
  }
  json& rep = result.report;
  rep["schema"] = "run_report_v1";
  rep["engine"] = kEngineVersion;
  rep["scenario"] = to_json(sc);
  rep["certified"] = certified;
  rep["ambient_dimension"] = n;
  rep["group"] = group;
  if (Y) {
    rep["model"] = {{"explicit", true},
                    {"base", size_json(base->complex())},
                    {"subdivided", size_json(Y->complex())},
                    {"subdivisions", model->subdivisions},
                    {"admissible", true}};
  } else {
    rep["model"] = {{"explicit", false}, {"sphere_simplices", direct->sphere_cells}, {"subdivisions", 0},
                    {"admissible", true}};
  }
  rep["sphere_betti"] = to_json(sphere);
  rep["quotient"] = {{"route", direct ? "join_blocks" : "orbit_cells"},
                     {"cells", primary.ranks},
                     {"euler_characteristic", alternating_sum(primary.ranks)},
                     {"betti", to_json(quotient)}};
  rep["orbit_cell_crosscheck"] = orbit_cross;
  rep["simplicial_crosscheck"] = cross;
  rep["consistency"] = {{"boundary_squared_zero", true},
                        {"snf_ran", quotient.torsion.has_value()},
                        {"rank_snf_agree", true},
                        {"euler_identity", true}};
  if (cover) {
    json per_J = json::array();
    for (const auto& [J, v] : cover->per_J) per_J.push_back({{"J", J}, {"sum", v}});
    rep["cover_e1"] = {{"total", cover->total}, {"per_J", per_J}};
  }
  rep["checks"] = check_list;
  if (bounds) rep["bound_report"] = bounds->to_json();
  rep["failures"] = result.failures;
  rep["verdict"] = result.ok() ? "pass" : "fail";
  if (opt.timings) rep["timings_ms"] = clock.timings();
  return result;
}

AbelianCharacterData random_character_data(std::mt19937_64& rng, int n_max) {
  if (n_max < 1) throw Error(ErrorKind::InvalidParameter, "sweep needs n_max >= 1");
  auto uniform = [&](std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  AbelianCharacterData d;
  const int n = static_cast<int>(uniform(1, n_max));
  const int r = static_cast<int>(uniform(0, n / 2));
  const int s = n - 2 * r;
  const int t = static_cast<int>(uniform(1, 3));
  for (int i = 0; i < t; ++i) d.invariant_factors.push_back(uniform(2, 12));
  for (int j = 0; j < r; ++j) {
    std::vector<std::int64_t> chi;
    for (int i = 0; i < t; ++i) chi.push_back(uniform(0, d.invariant_factors[i] - 1));
    d.rotation_characters.push_back(std::move(chi));
  }
  for (int k = 0; k < s; ++k) {
    std::vector<std::int64_t> eps;
    for (int i = 0; i < t; ++i) eps.push_back(d.invariant_factors[i] % 2 == 0 ? uniform(0, 1) : 0);
    d.sign_characters.push_back(std::move(eps));
  }
  d.validate();
  return d;
}

namespace {

json spread(std::vector<double> v) {
  if (v.empty()) return nullptr;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  const double median = m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
  return {{"min", format_real(v.front())}, {"median", format_real(median)}, {"max", format_real(v.back())}};
}

}  // namespace

SweepResult sweep(const SweepOptions& options) {
  if (options.n_max < 1 || options.n_max > kMaxBlocks) {
    throw Error(ErrorKind::InvalidParameter, "sweep: n_max must lie in 1.." + std::to_string(kMaxBlocks));
  }
  std::mt19937_64 rng(options.seed);
  std::vector<Scenario> scenarios;
  for (std::size_t i = 0; i < options.samples; ++i) {
    Scenario s;
    s.name = "sweep-" + std::to_string(options.seed) + "-" + std::to_string(i);
    s.kind = SpaceKind::CharacterJoin;
    s.characters = random_character_data(rng, options.n_max);
    s.fields = options.fields;
    s.checks = {"abelian_bound", "cover_e1"};
    s.seed = options.seed;
    scenarios.push_back(std::move(s));
  }

  std::vector<json> rows(scenarios.size());
  std::vector<char> passed(scenarios.size(), 0);
  std::vector<double> abelian_slack(scenarios.size(), 0.0), cover_slack(scenarios.size(), 0.0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      const Scenario& s = scenarios[i];
      json row = {{"index", i}, {"name", s.name}, {"n", s.characters.n()}, {"N", s.characters.blocks()},
                  {"characters", to_json(s.characters)}};
      try {
        const RunResult r = run_scenario(s, options.run);
        const json& rep = r.report;
        std::int64_t worst = 0;
        json totals = json::object();
        for (const auto& f : rep["quotient"]["betti"]) {
          std::int64_t t = 0;
          for (const auto& b : f["betti"]) t += b.get<std::int64_t>();
          totals[f["field"].get<std::string>()] = t;
          worst = std::max(worst, t);
        }
        const auto cover_total = rep["cover_e1"]["total"].get<std::uint64_t>();
        row["group_order"] = rep["group"]["order"];
        row["kernel_order"] = rep["group"]["kernel_order"];
        row["observed_totals"] = totals;
        row["cover_e1_total"] = cover_total;
        row["pass"] = r.ok();
        if (!r.ok()) row["failures"] = r.failures;
        passed[i] = r.ok();
        abelian_slack[i] = abelian_bound(s.characters.n()).convert_to<double>() / std::max<std::int64_t>(1, worst);
        cover_slack[i] = static_cast<double>(cover_total) / std::max<std::int64_t>(1, worst);
      } catch (const Error& e) {
        row["pass"] = false;
        row["error"] = e.what();
      }
      rows[i] = std::move(row);
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, 64));
  std::vector<std::thread> threads;
  for (unsigned t = 1; t < jobs; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  SweepResult out;
  json failures = json::array();
  std::vector<double> as, cs;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    if (passed[i]) {
      as.push_back(abelian_slack[i]);
      cs.push_back(cover_slack[i]);
    } else {
      ++out.failed;
      failures.push_back(to_json(scenarios[i]));
    }
  }
  json fields = json::array();
  for (const auto& f : options.fields) fields.push_back(f.name());
  out.report = {{"schema", "sweep_report_v1"},
                {"engine", kEngineVersion},
                {"n_max", options.n_max},
                {"samples", options.samples},
                {"seed", options.seed},
                {"fields", fields},
                {"passed", options.samples - out.failed},
                {"failed", out.failed},
                {"slack", {{"abelian_3n", spread(as)}, {"cover_e1", spread(cs)}}},
                {"results", rows},
                {"failures", failures}};
  return out;
}

}  // namespace sqh
