#pragma once

// Scenario files, the builtin catalog, the end-to-end pipeline and sweeps.
//
// Reports contain no wall-clock data unless timings are requested, so a
// fixed scenario and engine version always produce identical bytes.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqh/bounds.hpp"
#include "sqh/models.hpp"

namespace sqh {

inline constexpr const char* kEngineVersion = "sqh 1.0.0";

enum class SpaceKind { CharacterJoin, SignedPermutation, Explicit };

struct Scenario {
  std::string name;
  SpaceKind kind = SpaceKind::SignedPermutation;
  AbelianCharacterData characters;                 // CharacterJoin
  int n = 0;                                       // SignedPermutation
  std::vector<SignedPermutation> signed_generators;
  SimplicialComplex complex;                       // Explicit
  std::vector<Permutation> generators;
  std::optional<int> ambient_dimension;
  std::vector<FieldSpec> fields;
  std::optional<int> subdivisions;                 // nullopt: auto
  std::vector<std::string> checks;
  bool certified = false;
  std::uint64_t seed = 0;

  /// Ambient dimension n of the sphere model S^{n-1}.
  int ambient() const;
};

inline const std::vector<std::string>& all_checks() {
  static const std::vector<std::string> names{"abelian_bound", "smith_floyd", "cyclic_chain",
                                              "transfer",      "cover_e1",    "evaluate_all"};
  return names;
}

/// Throws parse-error naming the offending JSON path.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Scenario& s);
/// Throws parse-error with line and column for malformed files.
Scenario load_scenario(const std::string& path);

/// Catalog: rp(n), lens(p,q), quaternion_q8, sym3_on_s2, dihedral_on_s1(m),
/// trivial_sphere(n). Throws invalid-parameter for unknown names or bad
/// parameters.
Scenario builtin(const std::string& name, const std::vector<std::int64_t>& params = {});
std::vector<std::string> builtin_names();

/// The builtins plus further signed-permutation groups on S^2 and S^3.
std::vector<Scenario> corpus();

struct RunOptions {
  std::optional<bool> certified;  // overrides the scenario
  std::size_t simplex_cap = kDefaultSimplexCap;
  /// The simplicial-quotient cross-check is skipped when it would build a
  /// complex larger than this.
  std::size_t crosscheck_cap = 500'000;
  std::size_t group_cap = kDefaultGroupCap;
  std::size_t snf_cap = kDefaultSnfCap;
  double budget_seconds = 600.0;
  bool timings = false;
};

/// SQH_MAX_SIMPLICES when set and valid, else the default cap.
std::size_t simplex_cap_from_env();

struct RunResult {
  nlohmann::json report;
  /// Failed inequalities; nonempty means a counterexample or a bug.
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Throws sqh::Error for resource caps, invalid input and internal
/// inconsistencies.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

/// n uniform in 1..n_max, r uniform in 0..n/2, s = n - 2r, one to three
/// invariant factors from 2..12, rotation entries uniform mod m_i, sign
/// entries uniform in {0,1} where m_i is even. Every draw is rng() % range.
AbelianCharacterData random_character_data(std::mt19937_64& rng, int n_max);

struct SweepOptions {
  int n_max = 4;
  std::size_t samples = 50;
  std::uint64_t seed = 7;
  std::vector<FieldSpec> fields{FieldSpec::rationals(), FieldSpec::prime(2), FieldSpec::prime(3), FieldSpec::prime(5)};
  unsigned jobs = 1;
  RunOptions run;
};

struct SweepResult {
  nlohmann::json report;
  std::size_t failed = 0;
  bool ok() const { return failed == 0; }
};

SweepResult sweep(const SweepOptions& options);

}  // namespace sqh
