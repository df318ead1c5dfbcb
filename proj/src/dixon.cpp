#include "sl4/dixon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace sl4 {

namespace fp {

std::uint64_t add(std::uint64_t a, std::uint64_t b, std::uint64_t l) {
  const std::uint64_t s = a + b;
  return s >= l ? s - l : s;
}

std::uint64_t sub(std::uint64_t a, std::uint64_t b, std::uint64_t l) { return a >= b ? a - b : a + l - b; }

std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t l) { return a * b % l; }

std::uint64_t inv(std::uint64_t a, std::uint64_t l) {
  if (a % l == 0) throw std::domain_error("inverse of zero in F_l");
  return static_cast<std::uint64_t>(mod_pow(static_cast<long long>(a), static_cast<long long>(l - 2),
                                            static_cast<long long>(l)));
}

FieldMatrix matmul(const FieldMatrix& a, const FieldMatrix& b, std::uint64_t l) {
  FieldMatrix out = FieldMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      const std::uint64_t x = a(i, k);
      if (x == 0) continue;
      for (Eigen::Index j = 0; j < b.cols(); ++j) out(i, j) = (out(i, j) + x * b(k, j)) % l;
    }
  }
  return out;
}

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<int> rref(FieldMatrix& a, std::uint64_t l) {
  std::vector<int> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Eigen::Index piv = row;
    while (piv < a.rows() && a(piv, col) == 0) ++piv;
    if (piv == a.rows()) continue;
    a.row(piv).swap(a.row(row));
    const std::uint64_t s = inv(a(row, col), l);
    for (Eigen::Index c = 0; c < a.cols(); ++c) a(row, c) = mul(a(row, c), s, l);
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, col) == 0) continue;
      const std::uint64_t f = a(r, col);
      for (Eigen::Index c = 0; c < a.cols(); ++c) a(r, c) = sub(a(r, c), mul(f, a(row, c), l), l);
    }
    pivots.push_back(static_cast<int>(col));
    ++row;
  }
  return pivots;
}

}  // namespace

FieldMatrix column_echelon(const FieldMatrix& a, std::uint64_t l, std::vector<int>* pivots) {
  FieldMatrix t = a.transpose();
  const auto piv = rref(t, l);
  if (pivots) *pivots = piv;
  return t.topRows(static_cast<Eigen::Index>(piv.size())).transpose();
}

FieldMatrix nullspace(FieldMatrix a, std::uint64_t l) {
  const auto piv = rref(a, l);
  std::vector<bool> is_pivot(static_cast<std::size_t>(a.cols()), false);
  for (int c : piv) is_pivot[c] = true;
  FieldMatrix basis(a.cols(), a.cols() - static_cast<Eigen::Index>(piv.size()));
  Eigen::Index k = 0;
  for (Eigen::Index free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    basis.col(k).setZero();
    basis(free, k) = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) basis(piv[r], k) = sub(0, a(static_cast<Eigen::Index>(r), free), l);
    ++k;
  }
  return column_echelon(basis, l);
}

std::vector<std::uint64_t> charpoly(FieldMatrix h, std::uint64_t l) {
  const Eigen::Index n = h.rows();
  // Hessenberg reduction by similarity transforms.
  for (Eigen::Index m = 1; m + 1 < n; ++m) {
    Eigen::Index i = m;
    while (i < n && h(i, m - 1) == 0) ++i;
    if (i == n) continue;
    if (i != m) {
      h.row(i).swap(h.row(m));
      h.col(i).swap(h.col(m));
    }
    const std::uint64_t t = inv(h(m, m - 1), l);
    for (Eigen::Index k = m + 1; k < n; ++k) {
      const std::uint64_t u = mul(h(k, m - 1), t, l);
      if (u == 0) continue;
      for (Eigen::Index c = 0; c < n; ++c) h(k, c) = sub(h(k, c), mul(u, h(m, c), l), l);
      for (Eigen::Index r = 0; r < n; ++r) h(r, m) = add(h(r, m), mul(u, h(r, k), l), l);
    }
  }
  // p_{k+1}(x) = (x - h_kk) p_k(x) - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_i(x)
  std::vector<std::vector<std::uint64_t>> p(static_cast<std::size_t>(n) + 1);
  p[0] = {1};
  for (Eigen::Index k = 0; k < n; ++k) {
    std::vector<std::uint64_t> next(static_cast<std::size_t>(k) + 2, 0);
    const auto& pk = p[static_cast<std::size_t>(k)];
    for (std::size_t d = 0; d < pk.size(); ++d) {
      next[d + 1] = add(next[d + 1], pk[d], l);
      next[d] = sub(next[d], mul(h(k, k), pk[d], l), l);
    }
    std::uint64_t prod = 1;
    for (Eigen::Index i = k - 1; i >= 0; --i) {
      prod = mul(prod, h(i + 1, i), l);
      const std::uint64_t f = mul(h(i, k), prod, l);
      if (f == 0) continue;
      const auto& pi = p[static_cast<std::size_t>(i)];
      for (std::size_t d = 0; d < pi.size(); ++d) next[d] = sub(next[d], mul(f, pi[d], l), l);
    }
    p[static_cast<std::size_t>(k) + 1] = std::move(next);
  }
  return p[static_cast<std::size_t>(n)];
}

std::uint64_t eval_poly(const std::vector<std::uint64_t>& coeffs, std::uint64_t x, std::uint64_t l) {
  std::uint64_t v = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = add(mul(v, x, l), *it, l);
  return v;
}

std::uint64_t primitive_root(std::uint64_t l) {
  if (l == 2) return 1;
  const auto factors = factorize(static_cast<int>(l - 1));
  for (std::uint64_t g = 2; g < l; ++g) {
    bool ok = true;
    for (const auto& f : factors) {
      if (mod_pow(static_cast<long long>(g), static_cast<long long>((l - 1) / f.prime),
                  static_cast<long long>(l)) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw std::logic_error("no primitive root");
}

}  // namespace fp

std::uint64_t choose_field(std::uint64_t e, std::uint64_t order) {
  if (e == 0 || order == 0) throw std::invalid_argument("choose_field needs e, order >= 1");
  const double bound = 2.0 * std::sqrt(static_cast<double>(order));
  for (std::uint64_t l = e + 1; l < (std::uint64_t{1} << 31); l += e) {
    if (static_cast<double>(l) > bound && is_prime(l)) return l;
  }
  throw std::runtime_error("no suitable prime below 2^31");
}

namespace {

constexpr int kMaxSplitAttempts = 64;

std::size_t isqrt(std::uint64_t n) {
  auto s = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (s * s > n) --s;
  while ((s + 1) * (s + 1) <= n) ++s;
  return static_cast<std::size_t>(s);
}

}  // namespace

CharacterTable character_table(const GroupStore& store, const ClassData& classes,
                               std::uint64_t seed) {
  const std::size_t r = classes.count();
  const std::uint64_t order = store.order();
  CharacterTable table;
  table.group_order = order;
  table.class_sizes = classes.sizes;
  table.class_orders = classes.orders;
  table.exponent = classes.exponent;
  table.seed = seed;
  for (std::size_t k = 0; k < r; ++k) table.inverse_class.push_back(classes.inverse_class(k));
  const std::uint64_t l = choose_field(static_cast<std::uint64_t>(classes.exponent), order);
  const std::uint64_t e = static_cast<std::uint64_t>(classes.exponent);
  table.prime = l;
  table.root = static_cast<std::uint64_t>(mod_pow(static_cast<long long>(fp::primitive_root(l)),
                                                  static_cast<long long>((l - 1) / e),
                                                  static_cast<long long>(l)));

  const ClassAlgebra algebra(store, classes);
  std::vector<FieldMatrix> class_mats(r, FieldMatrix::Zero(r, r));
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < r; ++k) class_mats[j](i, k) = algebra(j, i, k) % l;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> coeff(0, l - 1);
  std::vector<FieldMatrix> pending{FieldMatrix::Identity(r, r)};
  std::vector<FieldMatrix> lines;
  while (!pending.empty()) {
    FieldMatrix space = std::move(pending.back());
    pending.pop_back();
    const Eigen::Index m = space.cols();
    if (m == 1) {
      lines.push_back(std::move(space));
      continue;
    }
    std::vector<int> piv;
    space = fp::column_echelon(space, l, &piv);
    bool split = false;
    for (int attempt = 0; attempt < kMaxSplitAttempts && !split; ++attempt) {
      FieldMatrix combo = FieldMatrix::Zero(r, r);
      for (std::size_t j = 0; j < r; ++j) {
        const std::uint64_t c = coeff(rng);
        for (Eigen::Index a = 0; a < combo.size(); ++a) {
          combo.data()[a] = fp::add(combo.data()[a], fp::mul(c, class_mats[j].data()[a], l), l);
        }
      }
      const FieldMatrix image = fp::matmul(combo, space, l);
      FieldMatrix restricted(m, m);
      for (Eigen::Index a = 0; a < m; ++a) restricted.row(a) = image.row(piv[a]);
      const auto poly = fp::charpoly(restricted, l);
      std::vector<std::uint64_t> roots;
      for (std::uint64_t x = 0; x < l; ++x)
        if (fp::eval_poly(poly, x, l) == 0) roots.push_back(x);
      if (roots.size() < 2) continue;
      std::vector<FieldMatrix> parts;
      Eigen::Index total = 0;
      for (std::uint64_t lambda : roots) {
        FieldMatrix shifted = restricted;
        for (Eigen::Index a = 0; a < m; ++a) shifted(a, a) = fp::sub(shifted(a, a), lambda, l);
        const FieldMatrix kernel = fp::nullspace(shifted, l);
        total += kernel.cols();
        parts.push_back(fp::matmul(space, kernel, l));
      }
      if (total != m) {
        throw SplittingFailure("class algebra is not diagonalizable over F_" + std::to_string(l));
      }
      for (auto& part : parts) pending.push_back(std::move(part));
      split = true;
    }
    if (!split) {
      throw SplittingFailure("eigenspace of dimension " + std::to_string(m) + " did not split after " +
                             std::to_string(kMaxSplitAttempts) + " attempts");
    }
  }
  if (lines.size() != r) throw SplittingFailure("number of characters differs from class count");

  const std::size_t max_degree = isqrt(order);
  const std::uint64_t order_mod = order % l;
  for (const auto& line : lines) {
    // Central character omega_k = |C_k| chi(g_k) / chi(1), normalized at the identity class.
    const std::uint64_t s0 = fp::inv(line(0, 0), l);
    std::vector<std::uint64_t> omega(r);
    for (std::size_t k = 0; k < r; ++k) omega[k] = fp::mul(line(static_cast<Eigen::Index>(k), 0), s0, l);
    std::uint64_t norm = 0;
    for (std::size_t k = 0; k < r; ++k) {
      norm = fp::add(norm,
                     fp::mul(fp::mul(omega[k], omega[table.inverse_class[k]], l),
                             fp::inv(table.class_sizes[k] % l, l), l),
                     l);
    }
    const std::uint64_t d2 = fp::mul(order_mod, fp::inv(norm, l), l);
    std::int64_t degree = 0;
    for (std::size_t d = 1; d <= max_degree; ++d) {
      if ((static_cast<std::uint64_t>(d) * d) % l == d2) {
        degree = static_cast<std::int64_t>(d);
        break;
      }
    }
    if (degree == 0) throw SplittingFailure("no integer degree matches d^2 = " + std::to_string(d2));

    IrreducibleCharacter chi;
    chi.degree = degree;
    chi.values_mod.resize(r);
    for (std::size_t k = 0; k < r; ++k) {
      chi.values_mod[k] = fp::mul(fp::mul(static_cast<std::uint64_t>(degree), omega[k], l),
                                  fp::inv(table.class_sizes[k] % l, l), l);
    }
    chi.multiplicity.assign(r, std::vector<std::int64_t>(e, 0));
    for (std::size_t k = 0; k < r; ++k) {
      const auto o = static_cast<std::uint64_t>(classes.orders[k]);
      const std::uint64_t step = e / o;
      const std::uint64_t root_o = static_cast<std::uint64_t>(
          mod_pow(static_cast<long long>(table.root), static_cast<long long>(step), static_cast<long long>(l)));
      const std::uint64_t root_o_inv = fp::inv(root_o, l);
      const std::uint64_t o_inv = fp::inv(o % l, l);
      std::int64_t total = 0;
      for (std::uint64_t s = 0; s < o; ++s) {
        // m_{s step} = o^{-1} sum_t chi(g^t) zeta_o^{-s t}
        const std::uint64_t w = static_cast<std::uint64_t>(
            mod_pow(static_cast<long long>(root_o_inv), static_cast<long long>(s), static_cast<long long>(l)));
        std::uint64_t acc = 0, wt = 1;
        for (std::uint64_t t = 0; t < o; ++t) {
          acc = fp::add(acc, fp::mul(chi.values_mod[classes.power_map[k][t]], wt, l), l);
          wt = fp::mul(wt, w, l);
        }
        const std::uint64_t ms = fp::mul(acc, o_inv, l);
        if (ms > static_cast<std::uint64_t>(degree)) {
          throw SplittingFailure("multiplicity lift out of range for a degree-" + std::to_string(degree) +
                                 " character");
        }
        chi.multiplicity[k][s * step] = static_cast<std::int64_t>(ms);
        total += static_cast<std::int64_t>(ms);
      }
      if (total != degree) throw SplittingFailure("multiplicities do not sum to the degree");
    }
    table.characters.push_back(std::move(chi));
  }
  std::sort(table.characters.begin(), table.characters.end(),
            [](const IrreducibleCharacter& a, const IrreducibleCharacter& b) {
              if (a.degree != b.degree) return a.degree < b.degree;
              return a.multiplicity > b.multiplicity;
            });
  return table;
}

std::complex<double> evaluate_char(const CharacterTable& table, std::size_t chi, std::size_t cls) {
  const auto& m = table.characters.at(chi).multiplicity.at(cls);
  std::complex<double> v = 0.0;
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (m[s] == 0) continue;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(s) / table.exponent;
    v += static_cast<double>(m[s]) * std::polar(1.0, angle);
  }
  return v;
}

std::vector<std::int64_t> cyclotomic_polynomial(int e) {
  if (e < 1) throw std::invalid_argument("cyclotomic index must be positive");
  // Phi_d for every divisor d of e in increasing order:
  // Phi_d = (x^d - 1) / prod_{c | d, c < d} Phi_c.
  std::map<int, std::vector<std::int64_t>> phi;
  for (int d = 1; d <= e; ++d) {
    if (e % d != 0) continue;
    std::vector<std::int64_t> poly(static_cast<std::size_t>(d) + 1, 0);
    poly[0] = -1;
    poly[static_cast<std::size_t>(d)] = 1;
    for (const auto& [c, div] : phi) {
      if (c >= d || d % c != 0) continue;
      const std::size_t dd = div.size() - 1;
      std::vector<std::int64_t> quot(poly.size() - dd, 0);
      for (std::size_t i = poly.size() - 1;; --i) {
        const std::int64_t lead = poly[i];
        quot[i - dd] = lead;
        if (lead != 0)
          for (std::size_t j = 0; j <= dd; ++j) poly[i - dd + j] -= lead * div[j];
        if (i == dd) break;
      }
      poly = std::move(quot);
    }
    phi.emplace(d, std::move(poly));
  }
  return phi.at(e);
}

namespace {

bool reduces_to(std::vector<std::int64_t> coeffs, const std::vector<std::int64_t>& phi,
                std::int64_t target) {
  if (coeffs.empty()) coeffs.assign(1, 0);
  coeffs[0] -= target;
  const std::size_t deg = phi.size() - 1;
  for (std::size_t i = coeffs.size(); i-- > deg;) {
    const std::int64_t c = coeffs[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= deg; ++j) {
      std::int64_t prod = 0;
      if (__builtin_mul_overflow(c, phi[j], &prod) ||
          __builtin_sub_overflow(coeffs[i - deg + j], prod, &coeffs[i - deg + j])) {
        throw std::overflow_error("cyclotomic reduction overflow");
      }
    }
  }
  for (std::size_t i = 0; i < std::min(deg, coeffs.size()); ++i)
    if (coeffs[i] != 0) return false;
  return true;
}

}  // namespace

bool cyclotomic_equals(std::vector<std::int64_t> coeffs, int e, std::int64_t target) {
  return reduces_to(std::move(coeffs), cyclotomic_polynomial(e), target);
}

OrthogonalityCheck verify_table(const CharacterTable& t) {
  const std::uint64_t l = t.prime;
  const std::size_t r = t.class_count();
  const std::size_t n = t.size();
  OrthogonalityCheck out;
  const std::uint64_t order_mod = t.group_order % l;

  const auto phi = cyclotomic_polynomial(t.exponent);
  out.rows_mod = n == r;
  out.rows_cyclotomic = n == r;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::uint64_t acc = 0;
      std::vector<std::int64_t> poly(static_cast<std::size_t>(t.exponent), 0);
      for (std::size_t k = 0; k < r; ++k) {
        const std::size_t kk = t.inverse_class[k];
        acc = fp::add(acc,
                      fp::mul(t.class_sizes[k] % l,
                              fp::mul(t.characters[i].values_mod[k], t.characters[j].values_mod[kk], l), l),
                      l);
        const auto& a = t.characters[i].multiplicity[k];
        const auto& b = t.characters[j].multiplicity[kk];
        const auto size = static_cast<std::int64_t>(t.class_sizes[k]);
        for (std::size_t s = 0; s < a.size(); ++s) {
          if (a[s] == 0) continue;
          for (std::size_t u = 0; u < b.size(); ++u) {
            if (b[u] == 0) continue;
            poly[(s + u) % poly.size()] += size * a[s] * b[u];
          }
        }
      }
      const std::uint64_t want = i == j ? order_mod : 0;
      if (acc != want) out.rows_mod = false;
      if (!reduces_to(poly, phi, i == j ? static_cast<std::int64_t>(t.group_order) : 0)) {
        out.rows_cyclotomic = false;
      }
    }
  }

  out.columns_mod = n == r;
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t m = 0; m < r; ++m) {
      std::uint64_t acc = 0;
      for (std::size_t i = 0; i < n; ++i) {
        acc = fp::add(acc, fp::mul(t.characters[i].values_mod[k], t.characters[i].values_mod[t.inverse_class[m]], l), l);
      }
      const std::uint64_t want = k == m ? fp::mul(order_mod, fp::inv(t.class_sizes[k] % l, l), l) : 0;
      if (acc != want) out.columns_mod = false;
    }
  }

  std::uint64_t squares = 0;
  for (const auto& chi : t.characters) squares += static_cast<std::uint64_t>(chi.degree * chi.degree);
  out.degree_square_sum = squares == t.group_order && n == r;

  out.lift_consistent = true;
  for (const auto& chi : t.characters) {
    for (std::size_t k = 0; k < r; ++k) {
      std::uint64_t v = 0, w = 1;
      for (const std::int64_t ms : chi.multiplicity[k]) {
        v = fp::add(v, fp::mul(static_cast<std::uint64_t>(ms) % l, w, l), l);
        w = fp::mul(w, t.root, l);
      }
      if (v != chi.values_mod[k]) out.lift_consistent = false;
    }
  }
  return out;
}

namespace {

std::string format_complex(std::complex<double> z) {
  double re = std::abs(z.real()) < 5e-7 ? 0.0 : z.real();
  double im = std::abs(z.imag()) < 5e-7 ? 0.0 : z.imag();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f%+.6fi", re, im);
  return buf;
}

}  // namespace

std::string table_to_csv(const CharacterTable& t) {
  std::ostringstream os;
  os << "irrep,degree";
  for (std::size_t k = 0; k < t.class_count(); ++k) os << ",class" << k;
  os << '\n';
  for (std::size_t i = 0; i < t.size(); ++i) {
    os << i << ',' << t.characters[i].degree;
    for (std::size_t k = 0; k < t.class_count(); ++k) os << ',' << format_complex(evaluate_char(t, i, k));
    os << '\n';
  }
  return os.str();
}

nlohmann::json table_to_json(const CharacterTable& t) {
  nlohmann::json j;
  j["group_order"] = t.group_order;
  j["exponent"] = t.exponent;
  j["prime"] = t.prime;
  j["root"] = t.root;
  j["seed"] = t.seed;
  auto& classes = j["classes"] = nlohmann::json::array();
  for (std::size_t k = 0; k < t.class_count(); ++k) {
    classes.push_back({{"size", t.class_sizes[k]}, {"order", t.class_orders[k]}, {"inverse", t.inverse_class[k]}});
  }
  auto& chars = j["characters"] = nlohmann::json::array();
  for (const auto& chi : t.characters) {
    nlohmann::json row;
    row["degree"] = chi.degree;
    row["values_mod"] = chi.values_mod;
    // sparse [s, m_s] pairs per class
    auto& mult = row["multiplicities"] = nlohmann::json::array();
    for (const auto& m : chi.multiplicity) {
      auto entries = nlohmann::json::array();
      for (std::size_t s = 0; s < m.size(); ++s)
        if (m[s] != 0) entries.push_back({s, m[s]});
      mult.push_back(std::move(entries));
    }
    chars.push_back(std::move(row));
  }
  return j;
}

}  // namespace sl4
