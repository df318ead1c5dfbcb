#pragma once

// Square matrices over Z/N (n <= 4, N <= 256), elementary matrices, CRT
// splitting and the block embeddings used by the rest of the library.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sl4 {

inline constexpr int kMaxDim = 4;
inline constexpr int kMaxModulus = 256;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotInvertible : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// n x n matrix over Z/N with entries kept as canonical representatives in
/// [0, N). Values are immutable once built except through set().
class ModMatrix {
 public:
  ModMatrix(int n, int modulus);

  static ModMatrix identity(int n, int modulus);
  static ModMatrix from_rows(int modulus,
                             std::initializer_list<std::initializer_list<long long>> rows);
  static ModMatrix from_values(int n, int modulus, std::span<const long long> row_major);

  int dim() const { return n_; }
  int modulus() const { return modulus_; }

  int operator()(int row, int col) const { return entries_[row * n_ + col]; }
  void set(int row, int col, long long value);

  bool is_identity() const;
  bool operator==(const ModMatrix&) const = default;

  /// Row-major integer rendering, e.g. [[1,0],[0,1]].
  std::string to_string() const;

 private:
  std::uint8_t n_ = 0;
  std::uint16_t modulus_ = 1;
  std::array<std::uint8_t, kMaxDim * kMaxDim> entries_{};
};

long long reduce_mod(long long value, long long modulus);
long long mod_pow(long long base, long long exp, long long modulus);
/// Inverse of x modulo m; throws NotInvertible when gcd(x, m) != 1.
long long mod_inverse(long long x, long long modulus);
bool is_prime(std::uint64_t n);

struct PrimePower {
  int prime;
  int exponent;
  int value() const;
};

/// Prime factorization in increasing prime order. factorize(1) is empty.
std::vector<PrimePower> factorize(int n);

ModMatrix mat_mul(const ModMatrix& a, const ModMatrix& b);
inline ModMatrix operator*(const ModMatrix& a, const ModMatrix& b) { return mat_mul(a, b); }
ModMatrix mat_add(const ModMatrix& a, const ModMatrix& b);
ModMatrix scale(const ModMatrix& a, long long s);
ModMatrix transpose(const ModMatrix& a);

/// Determinant of the integer lift of a, reduced mod N.
int det_mod(const ModMatrix& a);
long long trace_mod(const ModMatrix& a);

/// I + s * e_ij with 1-based (i, j), i != j.
ModMatrix elementary(int i, int j, long long s, int n, int modulus);

/// Adjugate times the inverse of the determinant.
ModMatrix invert(const ModMatrix& a);

ModMatrix power(const ModMatrix& a, long long k);

/// Reduce entries modulo a divisor of the current modulus.
ModMatrix reduce(const ModMatrix& a, int divisor);

/// Place `block` into an n x n identity, upper-left corner at (offset, offset).
ModMatrix embed_block(const ModMatrix& block, int n, int offset);

/// Upper-left SL2 copy inside SL4; rejects non-unimodular input.
ModMatrix embed_sl2(const ModMatrix& a);

/// The dimension-n generators I + e_ij for all i != j.
std::vector<ModMatrix> elementary_generators(int n, int modulus);

/// Bits per entry in the packed encoding of matrices mod N.
int bits_per_entry(int modulus);
/// Packed row-major encoding, first entry in the most significant bits.
/// Throws when n*n*bits exceeds 64.
std::uint64_t encode(const ModMatrix& a);
ModMatrix decode(std::uint64_t code, int n, int modulus);

class CrtSplitting {
 public:
  explicit CrtSplitting(int modulus);

  int modulus() const { return modulus_; }
  const std::vector<PrimePower>& factors() const { return factors_; }

  std::vector<ModMatrix> split(const ModMatrix& a) const;
  ModMatrix combine(std::span<const ModMatrix> parts) const;

 private:
  int modulus_;
  std::vector<PrimePower> factors_;
};

inline std::vector<ModMatrix> crt_split(const ModMatrix& a, const CrtSplitting& c) { return c.split(a); }
inline ModMatrix crt_combine(std::span<const ModMatrix> parts, const CrtSplitting& c) {
  return c.combine(parts);
}

}  // namespace sl4
