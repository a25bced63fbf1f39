#include "sqh/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "sqh/error.hpp"
#include "sqh/primes.hpp"

namespace sqh {

namespace {

BigInt big_pow(std::int64_t base, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

double lgamma_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

FieldBetti betti_over(const ChainComplex& c, FieldSpec field) {
  BettiOptions opts;
  opts.torsion = false;
  const FieldSpec fields[] = {field};
  return betti(c, fields, opts).rows.front();
}

std::int64_t get(const std::vector<std::int64_t>& b, int k) {
  return k >= 0 && k < static_cast<int>(b.size()) ? b[k] : 0;
}

}  // namespace

BigInt abelian_bound(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "abelian_bound needs n >= 1");
  return big_pow(3, n);
}

BigInt cyclic_bound(int d, std::int64_t k) {
  if (d < 0 || k < 0) throw Error(ErrorKind::InvalidParameter, "cyclic_bound needs d, k >= 0");
  return BigInt(3) * (d + 1) * k;
}

BigInt pgroup_bound(int d, std::int64_t k, int r) {
  if (d < 0 || k < 0 || r < 0) throw Error(ErrorKind::InvalidParameter, "pgroup_bound needs d, k, r >= 0");
  return big_pow(3 * (d + 1), r) * k;
}

FiniteBound finite_bound(int d, std::int64_t k, std::uint64_t order, std::uint64_t p) {
  if (!is_prime(p) || order < 1 || d < 0 || k < 0) {
    throw Error(ErrorKind::InvalidParameter, "finite_bound needs p prime, order >= 1, d, k >= 0");
  }
  FiniteBound b;
  for (std::uint64_t q = p; q <= order; q *= p) {
    ++b.exponent;
    if (q > order / p) break;
  }
  b.integer_form = big_pow(3 * (d + 1), b.exponent) * k;
  const double base = 3.0 * (d + 1);
  b.real_form = std::exp(std::log(static_cast<double>(order)) * std::log(base) / std::log(static_cast<double>(p))) *
                static_cast<double>(k);
  return b;
}

double jordan_combined_bound(int n, std::uint64_t q_order) {
  if (n < 1 || q_order < 1) throw Error(ErrorKind::InvalidParameter, "jordan_combined_bound needs n, |Q| >= 1");
  return n * std::pow(3.0, n) * std::pow(static_cast<double>(q_order), std::log2(3.0 * n));
}

BigInt jordan_constant(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n + 1; ++i) f *= i;
  return f;
}

SphereConstant sphere_constant(int k) {
  if (k < 1) throw Error(ErrorKind::InvalidParameter, "sphere_constant needs k >= 1");
  const double log_fact = lgamma_factorial(k + 1);
  return {std::pow(3.0, k) * std::exp(log_fact * std::log2(3.0 * k)),
          std::pow(3.0, k) * std::exp(log_fact * std::log(3.0 * k))};
}

double sphere_constant_via_combined(int k) {
  if (k < 1) throw Error(ErrorKind::InvalidParameter, "sphere_constant_via_combined needs k >= 1");
  return (k + 1) * std::pow(3.0, k + 1) * std::exp(lgamma_factorial(k + 2) * std::log2(3.0 * k + 3.0));
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

nlohmann::json bigint_json(const BigInt& x) {
  if (x >= 0 && x <= BigInt(std::numeric_limits<std::int64_t>::max())) return static_cast<std::int64_t>(x);
  return x.str();
}

bool CheckResult::pass() const {
  return std::all_of(inequalities.begin(), inequalities.end(), [](const Inequality& q) { return q.pass(); });
}

nlohmann::json CheckResult::to_json() const {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& q : inequalities) {
    nlohmann::json item = {{"family", q.family}, {"lhs", q.lhs}, {"rhs", q.rhs}, {"pass", q.pass()}};
    if (q.degree >= 0) item["degree"] = q.degree;
    items.push_back(std::move(item));
  }
  return {{"check", check}, {"context", context}, {"pass", pass()}, {"inequalities", std::move(items)}};
}

CheckResult smith_floyd_check(const VertexAction& action, const SubgroupHandle& P, std::uint64_t p) {
  if (P.order() > 1) {
    const auto q = p_group_prime(P.order());
    if (!q || *q != p) throw Error(ErrorKind::InvalidParameter, "smith_floyd_check needs a p-subgroup");
  }
  const FieldSpec field = FieldSpec::prime(p);
  const FieldBetti y = betti_over(chain_complex(action.complex()), field);
  const FieldBetti fixed = betti_over(chain_complex(fixed_subcomplex(action, P)), field);
  CheckResult r;
  r.check = "smith_floyd";
  r.context = {{"p", p}, {"subgroup_order", P.order()}, {"fixed_betti", fixed.betti}, {"betti", y.betti}};
  r.inequalities.push_back({"fixed_total", -1, fixed.total(), y.total()});
  return r;
}

CheckResult cyclic_chain_check(const VertexAction& action, const SubgroupHandle& C, std::uint64_t p) {
  if (C.order() != 1 && C.order() != p) throw Error(ErrorKind::InvalidParameter, "cyclic_chain_check needs |C| = p");
  const FieldSpec field = FieldSpec::prime(p);
  const SimplexTable table(action.complex());
  const ChainComplex y_chains = chain_complex(table);
  const OrbitCells cells = orbit_cell_complex(action, C);
  const SimplicialComplex fixed = fixed_subcomplex(action, C);

  const auto bY = betti_over(y_chains, field).betti;
  const auto bF = betti_over(cells.fixed_part(), field).betti;
  const auto bPair = relative_betti(y_chains, fixed, std::span<const FieldSpec>(&field, 1), {true, false}).rows[0].betti;
  const auto bQ = betti_over(cells.chains, field).betti;
  const auto bQRel = betti_over(cells.relative_to_fixed(), field).betti;

  const int d = action.complex().dimension();
  const std::int64_t k = *std::max_element(bY.begin(), bY.end());
  const auto headline = static_cast<std::int64_t>(cyclic_bound(d, k));

  CheckResult r;
  r.check = "cyclic_chain";
  r.context = {{"p", p},       {"subgroup_order", C.order()}, {"d", d},          {"k", k},
               {"betti", bY}, {"fixed_betti", bF},           {"pair_betti", bPair}, {"quotient_betti", bQ},
               {"quotient_pair_betti", bQRel}};
  std::int64_t pair_prefix = 0;
  for (int t = 0; t <= d; ++t) {
    pair_prefix += get(bPair, t);
    r.inequalities.push_back({"pair_sequence", t, get(bPair, t), get(bY, t) + get(bF, t - 1)});
    r.inequalities.push_back({"cartan_leray", t, get(bQRel, t), pair_prefix});
    r.inequalities.push_back({"quotient_sequence", t, get(bQ, t), get(bF, t) + get(bQRel, t)});
    r.inequalities.push_back({"headline", t, get(bQ, t), headline});
  }
  return r;
}

CheckResult transfer_check(const VertexAction& action, std::uint64_t p) {
  const FieldSpec field = FieldSpec::prime(p);
  const SubgroupHandle G = whole_group(action.group());
  const SubgroupHandle P = sylow(action.group(), G, p);
  const auto bG = betti_over(orbit_cell_complex(action, G).chains, field).betti;
  const auto bP = betti_over(orbit_cell_complex(action, P).chains, field).betti;
  CheckResult r;
  r.check = "transfer";
  r.context = {{"p", p}, {"group_order", G.order()}, {"sylow_order", P.order()}, {"quotient_betti", bG},
               {"sylow_quotient_betti", bP}};
  for (int i = 0; i <= action.complex().dimension(); ++i) {
    r.inequalities.push_back({"sylow_injection", i, get(bG, i), get(bP, i)});
  }
  return r;
}

PGroupSeries pgroup_series(const VertexAction& action, std::uint64_t p) {
  const FieldSpec field = FieldSpec::prime(p);
  const SubgroupHandle P = sylow(action.group(), whole_group(action.group()), p);
  PGroupSeries s;
  s.p = p;
  const SimplexTable table(action.complex());
  for (const auto& Pi : central_series_cp(action.group(), P)) {
    const auto gens = action.generator_perms(Pi);
    s.orders.push_back(Pi.order());
    s.K.push_back(betti_over(orbit_cell_complex(table, gens).chains, field).max());
  }
  return s;
}

bool BoundReport::all_gating_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const BoundEntry& e) { return !e.gating || e.pass; });
}

nlohmann::json BoundReport::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json j = {{"name", e.name},
                        {"field", e.field},
                        {"inputs", e.inputs},
                        {"formula", e.formula},
                        {"value", e.integral ? bigint_json(e.exact) : nlohmann::json(format_real(e.value))},
                        {"integral", e.integral},
                        {"observed", e.observed},
                        {"observed_kind", e.observed_kind},
                        {"kind", e.gating ? "inequality" : "informational"},
                        {"verdict", e.pass ? "pass" : "fail"},
                        {"slack", format_real(e.slack)}};
    if (!e.note.empty()) j["note"] = e.note;
    list.push_back(std::move(j));
  }
  return {{"schema", "bound_report_v1"},
          {"scenario", scenario_id},
          {"observed", sqh::to_json(observed)},
          {"bounds", std::move(list)},
          {"all_pass", all_gating_pass()}};
}

namespace {

BoundEntry integral_entry(std::string name, std::string field, nlohmann::json inputs, std::string formula,
                          const BigInt& bound, std::int64_t observed, std::string kind, bool gating = true) {
  BoundEntry e;
  e.name = std::move(name);
  e.field = std::move(field);
  e.inputs = std::move(inputs);
  e.formula = std::move(formula);
  e.exact = bound;
  e.value = bound.convert_to<double>();
  e.integral = true;
  e.observed = observed;
  e.observed_kind = std::move(kind);
  e.gating = gating;
  e.pass = BigInt(observed) <= bound;
  e.slack = e.value / static_cast<double>(std::max<std::int64_t>(1, observed));
  return e;
}

BoundEntry real_entry(std::string name, std::string field, nlohmann::json inputs, std::string formula, double bound,
                      std::int64_t observed, std::string kind, bool gating = true) {
  BoundEntry e;
  e.name = std::move(name);
  e.field = std::move(field);
  e.inputs = std::move(inputs);
  e.formula = std::move(formula);
  e.value = bound;
  e.observed = observed;
  e.observed_kind = std::move(kind);
  e.gating = gating;
  e.pass = static_cast<double>(observed) <= bound * (1.0 + 1e-12);
  e.slack = bound / static_cast<double>(std::max<std::int64_t>(1, observed));
  return e;
}

}  // namespace

BoundReport evaluate_all(const BoundInputs& in) {
  BoundReport report;
  report.scenario_id = in.scenario_id;
  report.observed = in.quotient;
  const int n = in.n;
  const int d = in.d;
  const std::uint64_t q_order = in.group_order / std::max<std::uint64_t>(1, in.abelian_normal_order);
  const auto prime_power = p_group_prime(in.group_order);

  for (const auto& row : in.quotient.rows) {
    const std::string f = row.field.name();
    if (in.group_abelian) {
      report.entries.push_back(integral_entry("abelian_3n", f, {{"n", n}}, "3^n", abelian_bound(n), row.total(), "total"));
    }
    report.entries.push_back(real_entry("jordan_combined", f,
                                        {{"n", n}, {"q_order", q_order}, {"abelian_normal_order", in.abelian_normal_order},
                                         {"abelian_normal_exhaustive", in.abelian_normal_exhaustive}},
                                        "n * 3^n * |Q|^(log2(3n))", jordan_combined_bound(n, q_order), row.total(),
                                        "total"));
    const FieldBetti& x = in.abelian_quotient.for_field(row.field);
    report.entries.push_back(integral_entry("jordan_abelian_stage", f, {{"n", n}, {"abelian_normal_order", in.abelian_normal_order}},
                                            "3^n bounds the total Betti number of Y/A", abelian_bound(n), x.total(),
                                            "total"));
    {
      const BigInt J = jordan_constant(n);
      BoundEntry e = real_entry("jordan_combined_J", f, {{"n", n}, {"J", bigint_json(J)}}, "n * 3^n * J(n)^(log2(3n)), J(n) = (n+1)!",
                                jordan_combined_bound(n, 1) * std::pow(J.convert_to<double>(), std::log2(3.0 * n)),
                                row.total(), "total", false);
      e.note = "heuristic-for-small-n";
      report.entries.push_back(std::move(e));
    }
    if (n >= 2) {
      const int k = n - 1;
      const SphereConstant c = sphere_constant(k);
      report.entries.push_back(real_entry("sphere_constant", f, {{"k", k}, {"log", "base2"}}, "3^k * ((k+1)!)^(log2(3k))",
                                          c.base2, row.max(), "max_degree"));
      report.entries.push_back(real_entry("sphere_constant_natural_log", f, {{"k", k}, {"log", "natural"}},
                                          "3^k * ((k+1)!)^(ln(3k))", c.natural, row.max(), "max_degree", false));
      report.entries.push_back(real_entry("sphere_constant_via_combined", f, {{"k", k}},
                                          "(k+1) * 3^(k+1) * ((k+2)!)^(log2(3k+3))", sphere_constant_via_combined(k), row.max(),
                                          "max_degree", false));
    }
  }
  {
    const BigInt J = jordan_constant(n);
    BoundEntry e = integral_entry("jordan_index", "", {{"n", n}, {"q_order", q_order}}, "|Q| <= J(n) = (n+1)!", J,
                                  static_cast<std::int64_t>(q_order), "index", false);
    e.note = "heuristic-for-small-n";
    report.entries.push_back(std::move(e));
  }

  for (const auto& [p, q] : in.quotient_mod_p) {
    const auto it = in.sphere_mod_p.find(p);
    if (it == in.sphere_mod_p.end()) continue;
    const std::int64_t k = it->second.max();
    const std::string f = q.field.name();
    const FiniteBound fb = finite_bound(d, k, in.group_order, p);
    if (fb.integer_form.convert_to<double>() > fb.real_form * (1.0 + 1e-12)) {
      throw Error(ErrorKind::Inconsistency, "finite bound integer form exceeds its real form");
    }
    const nlohmann::json inputs = {{"d", d}, {"k", k}, {"order", in.group_order}, {"p", p}, {"exponent", fb.exponent}};
    report.entries.push_back(integral_entry("finite_transfer", f, inputs, "(3(d+1))^floor(log_p |H|) * k",
                                            fb.integer_form, q.max(), "max_degree"));
    report.entries.push_back(real_entry("finite_transfer_real", f, inputs, "|H|^(log_p(3(d+1))) * k", fb.real_form,
                                        q.max(), "max_degree"));
    if (in.group_order == p) {
      report.entries.push_back(integral_entry("cyclic", f, {{"d", d}, {"k", k}}, "3(d+1)k", cyclic_bound(d, k), q.max(),
                                              "max_degree"));
    }
    if (prime_power && *prime_power == p) {
      const int r = static_cast<int>(factorize(in.group_order).front().second);
      report.entries.push_back(integral_entry("pgroup", f, {{"d", d}, {"k", k}, {"r", r}}, "(3(d+1))^r * k",
                                              pgroup_bound(d, k, r), q.max(), "max_degree"));
    }
  }

  for (const auto& s : in.series) {
    const std::string f = FieldSpec::prime(s.p).name();
    for (std::size_t i = 1; i < s.K.size(); ++i) {
      report.entries.push_back(integral_entry("pgroup_step", f,
                                              {{"d", d}, {"i", i}, {"order", s.orders[i]}, {"K_prev", s.K[i - 1]}},
                                              "K_i <= 3(d+1) K_(i-1)", cyclic_bound(d, s.K[i - 1]), s.K[i], "max_degree"));
    }
    const int r = static_cast<int>(s.K.size()) - 1;
    report.entries.push_back(integral_entry("pgroup_series", f, {{"d", d}, {"k", s.K.front()}, {"r", r}, {"orders", s.orders}},
                                            "(3(d+1))^r * k", pgroup_bound(d, s.K.front(), r), s.K.back(),
                                            "max_degree"));
  }
  return report;
}

}  // namespace sqh
