#pragma once

// Constructive route to an SL2(Z/p^r)-invariant vector in a unitary
// representation of SL4(Z/p^r):
//   1. find an elementary congruence subgroup C_ij acting nontrivially and
//      move it to C_14 by a signed permutation;
//   2. pick a U1-character primitive mod p, normalize it to (0,0,1) inside
//      SL3, and produce v on which H acts by [x;y;z] -> exp(2 pi i y / p^r);
//   3. average the G2-orbit of v, check dim span = |G2|/|N|, and move the
//      result to the upper-left SL2 block.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sl4/grpstore.hpp"
#include "sl4/reps.hpp"

namespace sl4 {

inline constexpr double kNontrivialTol = 1e-6;
inline constexpr double kWitnessTol = 1e-8;
inline constexpr double kGramRankTol = 1e-6;

/// Exact check of the two step-1 matrix products mod p^r, plus the
/// conclusion that the diagonal generator lies in the normal closure of the
/// off-diagonal congruence elements.
bool verify_step1_identities(int p, int r);

struct Step1Result {
  bool old_rep = false;  ///< every C_ij acts trivially
  int i = 0;
  int j = 0;
  ModMatrix conjugator = ModMatrix::identity(4, 1);  ///< m with m e_14 m^{-1} = e_ij
};

Step1Result step1_find_Cij(const UnitaryRep& rep, int p, int r);

/// Signed permutation in SL4 conjugating e_14 to e_ij.
ModMatrix monomial_conjugator(int i, int j, int modulus);

/// g in SL3(Z/p^r) whose third row is xi, so that the dual action sends the
/// U1-character xi to (0,0,1). Throws when xi = 0 mod p.
ModMatrix sl3_dual_conjugator(const std::array<int, 3>& xi, int p, int r);

/// g in SL2(Z/p^r) with first row z (z primitive mod p).
ModMatrix sl2_row_completion(const std::array<int, 2>& z, int p, int r);

class NoPrimitiveLabel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PipelineAssertion : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Step2Case { Case1, Case2 };

struct Step2Result {
  CVector v;
  std::array<int, 3> xi_before{};
  std::array<int, 3> xi_after{};
  int dim_v_chi = 0;
  Step2Case case_tag = Step2Case::Case1;
  int R = 0;
  std::array<int, 2> zeta{};
  std::array<int, 2> z{};
  ModMatrix sl3_conjugator = ModMatrix::identity(4, 1);
  ModMatrix sl2_conjugator = ModMatrix::identity(4, 1);
  double h_residual = 0.0;       ///< max_h |rho(h)v - exp(2 pi i y/p^r) v|
  double kernel_residual = 0.0;  ///< max_z |rho([0;0;z])v - v|
};

/// Expects C_14 to act nontrivially (apply step 1's conjugation first).
Step2Result step2_find_v(const UnitaryRep& rep, int p, int r);

struct InvariantWitness {
  int level = 1;
  int p = 0;
  int r = 0;
  std::string rep;
  CVector w;
  double residual = 0.0;  ///< max over the upper-left SL2 of |rho(h)w - w|
  bool fallback = false;
  std::string fallback_reason;

  std::optional<Step1Result> step1;
  std::optional<Step2Result> step2;
  int dim_w = 0;
  int predicted_dim_w = 0;
  double n_fixed_residual = 0.0;
  bool coset_labels_distinct = false;
  ModMatrix block_conjugator = ModMatrix::identity(4, 1);

  int oracle_rank = 0;
  double oracle_distance = 0.0;  ///< |Pw - w|
};

/// Runs step 3 on a vector produced by step 2 for the same representation.
InvariantWitness step3_invariant(const UnitaryRep& rep, const CVector& v, int p, int r);

/// Steps 1-3 chained, falling back to the averaging projector when no
/// nontrivial C_ij or primitive U1-label exists. Always cross-checks the
/// final vector against the projector over SL2(Z/p^r).
InvariantWitness run_pipeline(const UnitaryRep& rep, int p, int r);

nlohmann::json witness_to_json(const InvariantWitness& w);

}  // namespace sl4
