#pragma once

// Concrete unitary representations of SL_n(Z/N): permutation actions, direct
// sums, tensor products and compressions, plus averaging projectors and
// simultaneous eigenspace decomposition for abelian subgroups.

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "sl4/grpstore.hpp"
#include "sl4/modring.hpp"

namespace sl4 {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr int kMaxRepDim = 4096;

/// A group action on {0, ..., size-1}.
struct FiniteAction {
  std::string name;
  int size = 0;
  int group_dim = 4;
  int level = 1;
  std::function<int(const ModMatrix&, int)> act;
};

/// Left multiplication on column vectors of (Z/M)^n, M dividing the level;
/// point k has base-M digits (v_1, ..., v_n), v_1 least significant.
FiniteAction vector_action(int n, int level, int vector_modulus, bool nonzero_only);

/// Left multiplication on the cosets gK of a subgroup of SL_n(Z/level),
/// enumerated by breadth-first search from K.
FiniteAction coset_action(const NamedSubgroup& subgroup, int level, int max_cosets = kMaxRepDim);

class UnitaryRep {
 public:
  using Evaluator = std::function<CMatrix(const ModMatrix&)>;

  UnitaryRep(int dim, int group_dim, int level, std::string descriptor, Evaluator eval);

  int dim() const { return dim_; }
  int group_dim() const { return group_dim_; }
  int level() const { return level_; }
  const std::string& descriptor() const { return descriptor_; }

  CMatrix operator()(const ModMatrix& g) const;
  CVector apply(const ModMatrix& g, const CVector& v) const { return (*this)(g) * v; }

 private:
  int dim_;
  int group_dim_;
  int level_;
  std::string descriptor_;
  std::shared_ptr<const Evaluator> eval_;
};

UnitaryRep trivial_rep(int dim, int group_dim, int level);
/// Throws std::domain_error when an evaluated action is not a bijection.
UnitaryRep perm_rep(FiniteAction action);
UnitaryRep direct_sum(std::span<const UnitaryRep> parts);
UnitaryRep tensor(const UnitaryRep& a, const UnitaryRep& b);
/// g -> Q* rho(g) Q for an orthonormal basis Q of an invariant subspace.
UnitaryRep compress(const UnitaryRep& rep, const CMatrix& basis);
/// g -> rho(m g m^{-1}).
UnitaryRep conjugated(const UnitaryRep& rep, const ModMatrix& m);

/// Entrywise max of |rho(g) rho(h) - rho(gh)|.
double homomorphism_defect(const UnitaryRep& rep, const ModMatrix& g, const ModMatrix& h);
double unitarity_defect(const UnitaryRep& rep, const ModMatrix& g);

struct Projector {
  CMatrix matrix;
  int rank = 0;
};

inline constexpr std::size_t kMaxProjectorGroup = 1'000'000;

/// P = |H|^{-1} sum_h rho(h), summed by pairwise reduction; rank counts
/// eigenvalues above 1/2.
Projector invariant_projector(const UnitaryRep& rep, std::span<const ModMatrix> elements);

struct CharacterLabel {
  std::string subgroup;
  int modulus = 1;
  std::vector<int> values;  ///< frequency per generator, in [0, modulus)

  bool operator==(const CharacterLabel&) const = default;
  auto operator<=>(const CharacterLabel& o) const { return values <=> o.values; }
  std::complex<double> eigenvalue(std::size_t generator) const;
};

struct IsotypicComponent {
  CharacterLabel label;
  CMatrix basis;  ///< orthonormal columns in the ambient space
};

struct IsotypicDecomposition {
  std::vector<IsotypicComponent> components;
  double max_residual = 0.0;
  double orthonormality_defect = 0.0;

  int total_dim() const;
  const IsotypicComponent* find(const std::vector<int>& values) const;
};

class NonCommutingGenerators : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Joint eigenspaces of the commuting unitaries rho(g_k), labelled by the
/// integer f_k with eigenvalue exp(2 pi i f_k / modulus). When `subspace`
/// is given the split is taken inside that invariant subspace.
IsotypicDecomposition isotypic_split(const UnitaryRep& rep, std::span<const ModMatrix> generators,
                                     int modulus, const std::string& subgroup,
                                     const CMatrix* subspace = nullptr);

struct TensorInvariantCheck {
  int rank_a = 0;
  int rank_b = 0;
  int rank_product = 0;
  bool holds() const { return rank_product == rank_a * rank_b; }
};

/// Brute-force projector of rep_a (x) rep_b over H_a x H_b against the
/// product of the individual ranks.
TensorInvariantCheck tensor_invariants_property(const UnitaryRep& rep_a, std::span<const ModMatrix> h_a,
                                                const UnitaryRep& rep_b, std::span<const ModMatrix> h_b);

class DescriptorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Representation of SL4(Z/level) from a descriptor. Accepted forms:
///   {"type":"perm","space":"Z4^4"|"nonzero:Z2^4"|"cosets:G1","level":4}
///   {"type":"trivial","dim":1}, {"sum":[...]}, {"tensor":[...]}
/// or the shorthand strings "Z4^4", "nonzero:Z2^4", "cosets:G1", "trivial".
UnitaryRep build_rep(const nlohmann::json& descriptor, int level);
UnitaryRep parse_rep(const std::string& text, int level);

}  // namespace sl4
