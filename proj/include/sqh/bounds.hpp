#pragma once

// Bound formulas for Betti numbers of sphere quotients, and checks of the
// intermediate inequalities against computed homology.
//
// Integer-valued bounds are exact (BigInt). Real-valued bounds use double
// arithmetic; verdicts against them allow a relative tolerance of 1e-12.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqh/action.hpp"
#include "sqh/homology.hpp"

namespace sqh {

BigInt abelian_bound(int n);                                   // 3^n
BigInt cyclic_bound(int d, std::int64_t k);                     // 3(d+1)k
BigInt pgroup_bound(int d, std::int64_t k, int r);              // (3(d+1))^r k

struct FiniteBound {
  int exponent = 0;        // floor(log_p order)
  BigInt integer_form;     // (3(d+1))^exponent k
  double real_form = 0.0;  // order^{log_p(3(d+1))} k
};
FiniteBound finite_bound(int d, std::int64_t k, std::uint64_t order, std::uint64_t p);

double jordan_combined_bound(int n, std::uint64_t q_order);     // n 3^n q^{log2(3n)}
BigInt jordan_constant(int n);                                 // (n+1)!

struct SphereConstant {
  double base2 = 0.0;    // 3^k ((k+1)!)^{log2(3k)}
  double natural = 0.0;  // 3^k ((k+1)!)^{ln(3k)}
};
SphereConstant sphere_constant(int k);
/// The combined bound at n = k+1 with |Q| = (k+2)!.
double sphere_constant_via_combined(int k);

/// Four significant digits, or the exact integer when it has at most 15 digits.
std::string format_real(double x);
nlohmann::json bigint_json(const BigInt& x);

struct Inequality {
  std::string family;
  int degree = -1;  // -1 for totals
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
  bool pass() const { return lhs <= rhs; }
};

struct CheckResult {
  std::string check;
  nlohmann::json context = nlohmann::json::object();
  std::vector<Inequality> inequalities;

  bool pass() const;
  nlohmann::json to_json() const;
};

/// Total F_p Betti of Y^P against that of Y. P must be a p-group.
CheckResult smith_floyd_check(const VertexAction& action, const SubgroupHandle& P, std::uint64_t p);

/// The pair, Cartan-Leray and quotient inequalities in every degree, and
/// b_n(Y/C) <= 3(d+1)k with k = max_i b_i(Y; F_p). C has order p or 1.
CheckResult cyclic_chain_check(const VertexAction& action, const SubgroupHandle& C, std::uint64_t p);

/// b_i(Y/G; F_p) <= b_i(Y/P; F_p) with P the Sylow p-subgroup.
CheckResult transfer_check(const VertexAction& action, std::uint64_t p);

/// Along the central series 1 = P_0 < ... < P_r of the Sylow p-subgroup,
/// K_i = max_n b_n(Y/P_i; F_p) satisfies K_i <= 3(d+1) K_{i-1}.
struct PGroupSeries {
  std::uint64_t p = 0;
  std::vector<std::size_t> orders;
  std::vector<std::int64_t> K;
};
PGroupSeries pgroup_series(const VertexAction& action, std::uint64_t p);

/// Everything evaluate_all needs, gathered by the pipeline.
struct BoundInputs {
  std::string scenario_id;
  int n = 1;  // ambient dimension
  int d = 0;  // dimension of the sphere model
  std::uint64_t group_order = 1;
  bool group_abelian = true;
  std::uint64_t abelian_normal_order = 1;
  bool abelian_normal_exhaustive = true;
  BettiTable quotient;           // Y/G over the scenario fields
  BettiTable abelian_quotient;   // Y/A over the scenario fields
  std::map<std::uint64_t, FieldBetti> quotient_mod_p;  // Y/G
  std::map<std::uint64_t, FieldBetti> sphere_mod_p;    // Y
  std::vector<PGroupSeries> series;
};

struct BoundEntry {
  std::string name;
  std::string field;
  nlohmann::json inputs;
  std::string formula;
  BigInt exact;          // meaningful when integral
  double value = 0.0;
  bool integral = false;
  std::int64_t observed = 0;
  std::string observed_kind;  // "total" or "max_degree"
  bool gating = true;          // false: informational, never fatal
  bool pass = true;
  double slack = 0.0;
  std::string note;
};

struct BoundReport {
  std::string scenario_id;
  BettiTable observed;
  std::vector<BoundEntry> entries;

  bool all_gating_pass() const;
  nlohmann::json to_json() const;
};

BoundReport evaluate_all(const BoundInputs& in);

}  // namespace sqh
