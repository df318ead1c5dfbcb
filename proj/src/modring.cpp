#include "sl4/modring.hpp"

#include <numeric>
#include <sstream>

namespace sl4 {

namespace {

void check_shape(int n, int modulus) {
  if (n < 1 || n > kMaxDim) {
    throw std::invalid_argument("matrix dimension must be in [1, 4], got " + std::to_string(n));
  }
  if (modulus < 1 || modulus > kMaxModulus) {
    throw std::invalid_argument("modulus must be in [1, 256], got " + std::to_string(modulus));
  }
}

void check_same_shape(const ModMatrix& a, const ModMatrix& b) {
  if (a.dim() != b.dim() || a.modulus() != b.modulus()) {
    throw DimensionMismatch("matrix shape mismatch: " + std::to_string(a.dim()) + " mod " +
                            std::to_string(a.modulus()) + " vs " + std::to_string(b.dim()) +
                            " mod " + std::to_string(b.modulus()));
  }
}

// Integer determinant of an m x m lifted block (m <= 4), Laplace expansion.
long long int_det(const std::array<long long, 16>& m, int n) {
  if (n == 1) return m[0];
  if (n == 2) return m[0] * m[3] - m[1] * m[2];
  long long total = 0;
  std::array<long long, 16> minor{};
  for (int col = 0; col < n; ++col) {
    int k = 0;
    for (int r = 1; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        if (c == col) continue;
        minor[k++] = m[r * n + c];
      }
    }
    long long sub = int_det(minor, n - 1);
    total += (col % 2 == 0 ? 1 : -1) * m[col] * sub;
  }
  return total;
}

std::array<long long, 16> lift(const ModMatrix& a) {
  std::array<long long, 16> m{};
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < a.dim(); ++c) m[r * a.dim() + c] = a(r, c);
  return m;
}

}  // namespace

long long reduce_mod(long long value, long long modulus) {
  long long r = value % modulus;
  return r < 0 ? r + modulus : r;
}

long long mod_pow(long long base, long long exp, long long modulus) {
  if (modulus == 1) return 0;
  unsigned __int128 result = 1;
  unsigned __int128 b = static_cast<unsigned long long>(reduce_mod(base, modulus));
  while (exp > 0) {
    if (exp & 1) result = result * b % static_cast<unsigned long long>(modulus);
    b = b * b % static_cast<unsigned long long>(modulus);
    exp >>= 1;
  }
  return static_cast<long long>(result);
}

long long mod_inverse(long long x, long long modulus) {
  long long a = reduce_mod(x, modulus), m = modulus;
  long long x0 = 1, x1 = 0;
  while (m != 0) {
    long long q = a / m;
    long long t = a - q * m;
    a = m;
    m = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
  }
  if (a != 1) {
    throw NotInvertible(std::to_string(x) + " is not a unit mod " + std::to_string(modulus));
  }
  return reduce_mod(x0, modulus);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

int PrimePower::value() const {
  int v = 1;
  for (int k = 0; k < exponent; ++k) v *= prime;
  return v;
}

std::vector<PrimePower> factorize(int n) {
  if (n < 1) throw std::invalid_argument("factorize expects a positive integer");
  std::vector<PrimePower> out;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

ModMatrix::ModMatrix(int n, int modulus) {
  check_shape(n, modulus);
  n_ = static_cast<std::uint8_t>(n);
  modulus_ = static_cast<std::uint16_t>(modulus);
}

ModMatrix ModMatrix::identity(int n, int modulus) {
  ModMatrix m(n, modulus);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

ModMatrix ModMatrix::from_rows(int modulus,
                               std::initializer_list<std::initializer_list<long long>> rows) {
  const int n = static_cast<int>(rows.size());
  ModMatrix m(n, modulus);
  int r = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n) throw DimensionMismatch("matrix literal is not square");
    int c = 0;
    for (long long v : row) m.set(r, c++, v);
    ++r;
  }
  return m;
}

ModMatrix ModMatrix::from_values(int n, int modulus, std::span<const long long> row_major) {
  if (static_cast<int>(row_major.size()) != n * n) {
    throw DimensionMismatch("expected " + std::to_string(n * n) + " entries");
  }
  ModMatrix m(n, modulus);
  for (int k = 0; k < n * n; ++k) m.set(k / n, k % n, row_major[k]);
  return m;
}

void ModMatrix::set(int row, int col, long long value) {
  entries_[row * n_ + col] = static_cast<std::uint8_t>(reduce_mod(value, modulus_));
}

bool ModMatrix::is_identity() const { return *this == identity(n_, modulus_); }

std::string ModMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (int r = 0; r < n_; ++r) {
    os << (r ? ",[" : "[");
    for (int c = 0; c < n_; ++c) os << (c ? "," : "") << (*this)(r, c);
    os << ']';
  }
  os << ']';
  return os.str();
}

ModMatrix mat_mul(const ModMatrix& a, const ModMatrix& b) {
  check_same_shape(a, b);
  const int n = a.dim();
  ModMatrix out(n, a.modulus());
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      long long s = 0;
      for (int k = 0; k < n; ++k) s += a(r, k) * b(k, c);
      out.set(r, c, s);
    }
  }
  return out;
}

ModMatrix mat_add(const ModMatrix& a, const ModMatrix& b) {
  check_same_shape(a, b);
  ModMatrix out(a.dim(), a.modulus());
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < a.dim(); ++c) out.set(r, c, a(r, c) + b(r, c));
  return out;
}

ModMatrix scale(const ModMatrix& a, long long s) {
  ModMatrix out(a.dim(), a.modulus());
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < a.dim(); ++c) out.set(r, c, a(r, c) * reduce_mod(s, a.modulus()));
  return out;
}

ModMatrix transpose(const ModMatrix& a) {
  ModMatrix out(a.dim(), a.modulus());
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < a.dim(); ++c) out.set(c, r, a(r, c));
  return out;
}

int det_mod(const ModMatrix& a) {
  return static_cast<int>(reduce_mod(int_det(lift(a), a.dim()), a.modulus()));
}

long long trace_mod(const ModMatrix& a) {
  long long t = 0;
  for (int i = 0; i < a.dim(); ++i) t += a(i, i);
  return reduce_mod(t, a.modulus());
}

ModMatrix elementary(int i, int j, long long s, int n, int modulus) {
  if (i == j) throw std::invalid_argument("elementary matrix needs i != j");
  if (i < 1 || j < 1 || i > n || j > n) throw std::out_of_range("elementary index out of range");
  ModMatrix m = ModMatrix::identity(n, modulus);
  m.set(i - 1, j - 1, s);
  return m;
}

ModMatrix invert(const ModMatrix& a) {
  const int n = a.dim();
  const long long det_inv = [&] {
    try {
      return mod_inverse(det_mod(a), a.modulus());
    } catch (const NotInvertible&) {
      throw NotInvertible("determinant " + std::to_string(det_mod(a)) + " is not a unit mod " +
                          std::to_string(a.modulus()));
    }
  }();
  ModMatrix out(n, a.modulus());
  if (n == 1) {
    out.set(0, 0, det_inv);
    return out;
  }
  const auto m = lift(a);
  std::array<long long, 16> minor{};
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      int k = 0;
      for (int rr = 0; rr < n; ++rr) {
        if (rr == r) continue;
        for (int cc = 0; cc < n; ++cc) {
          if (cc == c) continue;
          minor[k++] = m[rr * n + cc];
        }
      }
      const long long cof = ((r + c) % 2 == 0 ? 1 : -1) * int_det(minor, n - 1);
      // adjugate is the transposed cofactor matrix
      out.set(c, r, reduce_mod(cof, a.modulus()) * det_inv);
    }
  }
  return out;
}

ModMatrix power(const ModMatrix& a, long long k) {
  ModMatrix base = k < 0 ? invert(a) : a;
  if (k < 0) k = -k;
  ModMatrix result = ModMatrix::identity(a.dim(), a.modulus());
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

ModMatrix reduce(const ModMatrix& a, int divisor) {
  if (divisor < 1 || a.modulus() % divisor != 0) {
    throw std::invalid_argument(std::to_string(divisor) + " does not divide " +
                                std::to_string(a.modulus()));
  }
  ModMatrix out(a.dim(), divisor);
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < a.dim(); ++c) out.set(r, c, a(r, c));
  return out;
}

ModMatrix embed_block(const ModMatrix& block, int n, int offset) {
  if (offset < 0 || offset + block.dim() > n) throw std::out_of_range("block does not fit");
  ModMatrix out = ModMatrix::identity(n, block.modulus());
  for (int r = 0; r < block.dim(); ++r)
    for (int c = 0; c < block.dim(); ++c) out.set(offset + r, offset + c, block(r, c));
  return out;
}

ModMatrix embed_sl2(const ModMatrix& a) {
  if (a.dim() != 2) throw DimensionMismatch("embed_sl2 expects a 2x2 matrix");
  if (reduce_mod(det_mod(a) - 1, a.modulus()) != 0) {
    throw std::invalid_argument("embed_sl2: matrix " + a.to_string() + " is not unimodular");
  }
  return embed_block(a, 4, 0);
}

std::vector<ModMatrix> elementary_generators(int n, int modulus) {
  std::vector<ModMatrix> gens;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) gens.push_back(elementary(i, j, 1, n, modulus));
  return gens;
}

int bits_per_entry(int modulus) {
  int bits = 1;
  while ((1 << bits) < modulus) ++bits;
  return bits;
}

std::uint64_t encode(const ModMatrix& a) {
  const int bits = bits_per_entry(a.modulus());
  const int n = a.dim();
  if (n * n * bits > 64) {
    throw std::invalid_argument("matrix " + std::to_string(n) + "x" + std::to_string(n) +
                                " mod " + std::to_string(a.modulus()) +
                                " does not pack into 64 bits");
  }
  std::uint64_t code = 0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) code = (code << bits) | static_cast<std::uint64_t>(a(r, c));
  return code;
}

ModMatrix decode(std::uint64_t code, int n, int modulus) {
  const int bits = bits_per_entry(modulus);
  const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
  ModMatrix m(n, modulus);
  for (int k = n * n - 1; k >= 0; --k) {
    m.set(k / n, k % n, static_cast<long long>(code & mask));
    code >>= bits;
  }
  return m;
}

CrtSplitting::CrtSplitting(int modulus) : modulus_(modulus), factors_(factorize(modulus)) {}

std::vector<ModMatrix> CrtSplitting::split(const ModMatrix& a) const {
  if (a.modulus() != modulus_) {
    throw DimensionMismatch("crt_split: matrix modulus " + std::to_string(a.modulus()) +
                            " != " + std::to_string(modulus_));
  }
  std::vector<ModMatrix> parts;
  parts.reserve(factors_.size());
  for (const auto& f : factors_) parts.push_back(reduce(a, f.value()));
  return parts;
}

ModMatrix CrtSplitting::combine(std::span<const ModMatrix> parts) const {
  if (parts.size() != factors_.size()) throw DimensionMismatch("crt_combine: wrong number of parts");
  if (parts.empty()) return ModMatrix(1, modulus_);
  const int n = parts.front().dim();
  ModMatrix out(n, modulus_);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      long long x = 0;
      for (std::size_t k = 0; k < parts.size(); ++k) {
        const int q = factors_[k].value();
        if (parts[k].modulus() != q || parts[k].dim() != n) {
          throw DimensionMismatch("crt_combine: part " + std::to_string(k) + " has wrong shape");
        }
        const long long rest = modulus_ / q;
        x += parts[k](r, c) * rest % modulus_ * mod_inverse(rest, q);
      }
      out.set(r, c, x);
    }
  }
  return out;
}

}  // namespace sl4
