#pragma once

// Finite matrix groups enumerated from generators, the named subgroups of
// SL4(Z/p^r), conjugacy classes with power maps, and class-algebra
// structure constants.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sl4/modring.hpp"

namespace sl4 {

inline constexpr std::size_t kDefaultEnumerationCap = 20'000'000;

class EnumerationCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fully enumerated group. Element 0 is the identity; the remaining
/// elements follow in increasing packed-encoding order.
class GroupStore {
 public:
  int dim() const { return n_; }
  int modulus() const { return modulus_; }
  std::size_t order() const { return codes_.size(); }

  ModMatrix element(std::size_t id) const { return decode(codes_[id], n_, modulus_); }
  std::uint64_t code(std::size_t id) const { return codes_[id]; }
  std::span<const std::uint64_t> codes() const { return codes_; }
  const std::vector<ModMatrix>& generators() const { return generators_; }

  std::optional<std::size_t> find(const ModMatrix& g) const;
  std::optional<std::size_t> find_code(std::uint64_t code) const;
  /// Throws std::out_of_range for non-members.
  std::size_t index_of(const ModMatrix& g) const;
  bool contains(const ModMatrix& g) const { return find(g).has_value(); }

  /// Rebuild from codes in canonical order (used by the binary cache).
  static GroupStore from_codes(int n, int modulus, std::vector<ModMatrix> generators,
                               std::vector<std::uint64_t> codes);

 private:
  friend GroupStore enumerate_group(std::span<const ModMatrix>, int, int, std::size_t);

  int n_ = 1;
  int modulus_ = 1;
  std::vector<ModMatrix> generators_;
  std::vector<std::uint64_t> codes_;
};

/// Breadth-first closure of the generators under right multiplication.
GroupStore enumerate_group(std::span<const ModMatrix> generators, int n, int modulus,
                           std::size_t cap = kDefaultEnumerationCap);

/// SL_n(Z/N) from its elementary generators.
GroupStore special_linear_group(int n, int modulus, std::size_t cap = kDefaultEnumerationCap);

/// Order of SL_n(Z/N) from the product formula over the prime factors of N.
std::uint64_t sl_order_formula(int n, int modulus);

enum class SubgroupName { SL2Block, SL3Block, U1, U2, H, G1, G2, NSub, GKer, Cij };

std::string subgroup_label(SubgroupName name);
std::optional<SubgroupName> parse_subgroup_name(std::string_view text);

struct NamedSubgroup {
  SubgroupName name;
  std::string label;
  int p = 0;
  int r = 0;
  int ambient_dim = 4;
  std::vector<ModMatrix> elements;
  /// Element ids in the parent store; empty when built without one.
  std::vector<std::size_t> ids;

  std::size_t order() const { return elements.size(); }
};

/// Members of a named subgroup of SL_n(Z/p^r), generated directly from the
/// coordinate pattern. Everything except SL2Block and SL3Block requires n = 4;
/// Cij uses the 1-based (i, j).
NamedSubgroup make_subgroup(SubgroupName name, int p, int r, int ambient_dim = 4, int i = 0,
                            int j = 0);

/// Same, with every member located in an enumerated store.
NamedSubgroup named_subgroup(const GroupStore& store, SubgroupName name, int p, int r, int i = 0,
                             int j = 0);

struct ClassData {
  std::vector<std::size_t> representatives;
  std::vector<std::size_t> sizes;
  std::vector<std::uint32_t> class_of;
  std::vector<int> orders;
  int exponent = 1;
  /// power_map[k][t] = class of g_k^t for 0 <= t < exponent.
  std::vector<std::vector<std::uint32_t>> power_map;

  std::size_t count() const { return representatives.size(); }
  std::size_t inverse_class(std::size_t k) const { return power_map[k][exponent - 1]; }
  std::size_t identity_class() const { return 0; }
};

/// Orbits under conjugation by the generators. Class 0 is the identity; the
/// others are ordered by their least-encoding representative.
ClassData conjugacy_classes(const GroupStore& store);

/// Structure constants a[i][j][k] = #{(x, y) : x in C_i, y in C_j, xy = g_k}.
class ClassAlgebra {
 public:
  ClassAlgebra(const GroupStore& store, const ClassData& classes);

  std::size_t count() const { return r_; }
  std::uint64_t operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return coeff_[(i * r_ + j) * r_ + k];
  }

 private:
  std::size_t r_;
  std::vector<std::uint64_t> coeff_;
};

/// Direct count of a single structure constant by scanning C_i.
std::uint64_t class_mult_coeff(const GroupStore& store, const ClassData& classes, std::size_t i,
                               std::size_t j, std::size_t k);

/// Number of elements of `ids` falling in each class.
std::vector<std::size_t> class_distribution(const ClassData& classes,
                                            std::span<const std::size_t> ids);

/// Result of checking that A -> I + p^{r-1} A maps trace-zero matrices mod p
/// bijectively and homomorphically onto the kernel of reduction mod p^{r-1}.
struct CongruenceKernelCheck {
  int p = 0;
  int r = 0;
  std::uint64_t trace_zero_count = 0;    ///< p^15
  std::uint64_t distinct_images = 0;     ///< images are pairwise distinct
  std::uint64_t kernel_count = 0;        ///< #{A mod p : det(I + p^{r-1}A) = 1}
  bool images_in_kernel = false;
  bool kernel_is_trace_zero = false;
  bool homomorphism = false;
  bool holds() const;
};

/// Exhaustive at the given level; requires r >= 2.
CongruenceKernelCheck check_congruence_kernel(int p, int r);

/// Binary cache: magic, n, N, count, packed codes in canonical order.
std::uint64_t generator_digest(std::span<const ModMatrix> generators);
std::filesystem::path cache_path(const std::filesystem::path& dir, std::span<const ModMatrix> generators);
std::filesystem::path cache_path(const std::filesystem::path& dir, const GroupStore& store);
void save_group(const GroupStore& store, const std::filesystem::path& path);
GroupStore load_group(const std::filesystem::path& path, std::vector<ModMatrix> generators);

}  // namespace sl4
