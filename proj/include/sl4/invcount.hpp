#pragma once

// Multiplicity of the trivial representation in the restriction of a
// character to a subgroup, computed exactly in F_l, and the two group-level
// verdicts built on it.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sl4/dixon.hpp"
#include "sl4/grpstore.hpp"

namespace sl4 {

class LiftOutOfRange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (1/|H|) sum_{h in H} chi(h) from the class distribution of H, lifted to an
/// integer in [0, deg chi].
std::int64_t restriction_multiplicity(const CharacterTable& table, std::size_t chi,
                                      std::span<const std::size_t> subgroup_class_counts);

/// Same pairing for an arbitrary class function with values in F_l. The
/// result must lift to [0, bound].
std::int64_t class_function_multiplicity(const CharacterTable& table,
                                         std::span<const std::uint64_t> values_mod,
                                         std::span<const std::size_t> subgroup_class_counts,
                                         std::int64_t bound);

/// Floating route: evaluate the lifted complex character and round.
std::int64_t restriction_multiplicity_float(const CharacterTable& table, std::size_t chi,
                                            std::span<const std::size_t> subgroup_class_counts,
                                            double* rounding_error = nullptr);

/// Number of fixed points on (Z/N)^n \ {0} (or all of (Z/N)^n) per class, mod l.
std::vector<std::uint64_t> vector_permutation_character(const GroupStore& store,
                                                        const ClassData& classes,
                                                        const CharacterTable& table,
                                                        bool nonzero_only);

struct RestrictionRow {
  std::int64_t degree = 0;
  std::int64_t multiplicity = 0;
  bool has_invariant() const { return multiplicity > 0; }
};

struct RestrictionReport {
  std::string group;
  std::string subgroup;
  std::uint64_t group_order = 0;
  std::size_t class_count = 0;
  std::uint64_t subgroup_order = 0;
  std::uint64_t prime = 0;
  int exponent = 1;
  std::uint64_t seed = kDefaultSeed;
  OrthogonalityCheck table_check;
  std::vector<RestrictionRow> rows;
  std::string verdict;  ///< PASS / FAIL or FOUND / NOT_FOUND
  bool ok = false;      ///< PASS or FOUND

  std::size_t zero_rows() const;
};

struct LevelOptions {
  std::size_t cap = kDefaultEnumerationCap;
  std::uint64_t seed = kDefaultSeed;
};

/// Every irreducible of SL4(Z/N) restricted to the upper-left SL2(Z/N).
/// PASS iff every multiplicity is at least one.
RestrictionReport verify_theorem_level(int level, const LevelOptions& options = {});

/// Irreducibles of SL3(Z/p) with no vector fixed by the upper-left SL2(Z/p).
/// FOUND iff at least one such irreducible exists.
RestrictionReport find_sl3_counterexample(int p, const LevelOptions& options = {});

nlohmann::json report_to_json(const RestrictionReport& report);

}  // namespace sl4
