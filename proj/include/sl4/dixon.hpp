#pragma once

// Irreducible character tables by the Dixon-Schneider method: common
// eigenvectors of the class-sum matrices over a prime field F_l with
// l = 1 mod exponent, lifted to multiplicity vectors over the e-th roots of
// unity.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "sl4/grpstore.hpp"

namespace sl4 {

inline constexpr std::uint64_t kDefaultSeed = 20240521;

class SplittingFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense matrix over F_l, entries in [0, l).
using FieldMatrix = Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic>;

namespace fp {

std::uint64_t add(std::uint64_t a, std::uint64_t b, std::uint64_t l);
std::uint64_t sub(std::uint64_t a, std::uint64_t b, std::uint64_t l);
std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t l);
std::uint64_t inv(std::uint64_t a, std::uint64_t l);

FieldMatrix matmul(const FieldMatrix& a, const FieldMatrix& b, std::uint64_t l);
/// Columns spanning the right null space, in reduced column echelon form.
FieldMatrix nullspace(FieldMatrix a, std::uint64_t l);
/// Reduced column echelon form of the column span; drops dependent columns.
FieldMatrix column_echelon(const FieldMatrix& a, std::uint64_t l, std::vector<int>* pivots = nullptr);
/// Characteristic polynomial det(xI - A), coefficients low degree first.
std::vector<std::uint64_t> charpoly(FieldMatrix a, std::uint64_t l);
std::uint64_t eval_poly(const std::vector<std::uint64_t>& coeffs, std::uint64_t x, std::uint64_t l);
/// Least primitive root modulo a prime.
std::uint64_t primitive_root(std::uint64_t l);

}  // namespace fp

/// Least prime l with l = 1 (mod e) and l > 2 sqrt(order).
std::uint64_t choose_field(std::uint64_t e, std::uint64_t order);

struct IrreducibleCharacter {
  std::int64_t degree = 0;
  std::vector<std::uint64_t> values_mod;                ///< per class, in F_l
  std::vector<std::vector<std::int64_t>> multiplicity;  ///< per class, length e
};

struct CharacterTable {
  std::uint64_t group_order = 0;
  std::vector<std::size_t> class_sizes;
  std::vector<std::size_t> inverse_class;
  std::vector<int> class_orders;
  int exponent = 1;
  std::uint64_t prime = 0;
  std::uint64_t root = 0;  ///< primitive e-th root of unity in F_l
  std::uint64_t seed = kDefaultSeed;
  std::vector<IrreducibleCharacter> characters;

  std::size_t class_count() const { return class_sizes.size(); }
  std::size_t size() const { return characters.size(); }
};

/// Full table. Characters are returned sorted by degree, then by their
/// multiplicity vectors, so output is independent of the splitting order.
CharacterTable character_table(const GroupStore& store, const ClassData& classes,
                               std::uint64_t seed = kDefaultSeed);

/// sum_s m_s exp(2 pi i s / e).
std::complex<double> evaluate_char(const CharacterTable& table, std::size_t chi, std::size_t cls);

struct OrthogonalityCheck {
  bool rows_mod = false;
  bool columns_mod = false;
  bool rows_cyclotomic = false;
  bool degree_square_sum = false;
  bool lift_consistent = false;
  bool all() const {
    return rows_mod && columns_mod && rows_cyclotomic && degree_square_sum && lift_consistent;
  }
};

OrthogonalityCheck verify_table(const CharacterTable& table);

/// Integer coefficients of the e-th cyclotomic polynomial, low degree first.
std::vector<std::int64_t> cyclotomic_polynomial(int e);

/// True when sum_s c_s zeta_e^s equals the integer `target` in Z[zeta_e].
bool cyclotomic_equals(std::vector<std::int64_t> coeffs, int e, std::int64_t target);

std::string table_to_csv(const CharacterTable& table);
nlohmann::json table_to_json(const CharacterTable& table);

}  // namespace sl4
