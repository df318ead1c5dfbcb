#include "sl4/grpstore.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <fstream>
#include <numeric>

namespace sl4 {

namespace {

// Open-addressing set of packed codes; ~0 marks an empty slot and is tracked
// separately in case it is itself a member.
class CodeSet {
 public:
  explicit CodeSet(std::size_t expected) { rehash(std::max<std::size_t>(64, expected * 2)); }

  bool insert(std::uint64_t code) {
    if (code == kEmpty) {
      if (has_empty_code_) return false;
      has_empty_code_ = true;
      ++size_;
      return true;
    }
    if ((size_ + 1) * 10 > slots_.size() * 7) rehash(slots_.size() * 2);
    std::size_t i = slot_for(code);
    while (slots_[i] != kEmpty) {
      if (slots_[i] == code) return false;
      i = (i + 1) & mask_;
    }
    slots_[i] = code;
    ++size_;
    return true;
  }

  std::size_t size() const { return size_; }

 private:
  static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};

  std::size_t slot_for(std::uint64_t code) const {
    code ^= code >> 33;
    code *= 0xff51afd7ed558ccdULL;
    code ^= code >> 33;
    return static_cast<std::size_t>(code) & mask_;
  }

  void rehash(std::size_t want) {
    std::size_t cap = 1;
    while (cap < want) cap <<= 1;
    std::vector<std::uint64_t> old = std::move(slots_);
    slots_.assign(cap, kEmpty);
    mask_ = cap - 1;
    for (std::uint64_t c : old) {
      if (c == kEmpty) continue;
      std::size_t i = slot_for(c);
      while (slots_[i] != kEmpty) i = (i + 1) & mask_;
      slots_[i] = c;
    }
  }

  std::vector<std::uint64_t> slots_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
  bool has_empty_code_ = false;
};

void canonicalize(std::vector<std::uint64_t>& codes, std::uint64_t identity_code) {
  auto it = std::find(codes.begin(), codes.end(), identity_code);
  if (it == codes.end()) throw std::logic_error("group store without identity");
  std::iter_swap(codes.begin(), it);
  std::sort(codes.begin() + 1, codes.end());
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t v = 1;
  for (int k = 0; k < e; ++k) v *= b;
  return v;
}

int level_of(int p, int r) {
  if (!is_prime(static_cast<std::uint64_t>(p)) || r < 1) {
    throw std::invalid_argument("level p^r needs a prime p and r >= 1");
  }
  return static_cast<int>(ipow(static_cast<std::uint64_t>(p), r));
}

std::vector<ModMatrix> sl_elements(int n, int q) {
  const GroupStore g = special_linear_group(n, q);
  std::vector<ModMatrix> out;
  out.reserve(g.order());
  for (std::size_t k = 0; k < g.order(); ++k) out.push_back(g.element(k));
  return out;
}

}  // namespace

std::optional<std::size_t> GroupStore::find_code(std::uint64_t code) const {
  if (codes_.empty()) return std::nullopt;
  if (codes_[0] == code) return 0;
  auto it = std::lower_bound(codes_.begin() + 1, codes_.end(), code);
  if (it == codes_.end() || *it != code) return std::nullopt;
  return static_cast<std::size_t>(it - codes_.begin());
}

std::optional<std::size_t> GroupStore::find(const ModMatrix& g) const {
  if (g.dim() != n_ || g.modulus() != modulus_) return std::nullopt;
  return find_code(encode(g));
}

std::size_t GroupStore::index_of(const ModMatrix& g) const {
  auto id = find(g);
  if (!id) throw std::out_of_range("element " + g.to_string() + " is not in the group");
  return *id;
}

GroupStore GroupStore::from_codes(int n, int modulus, std::vector<ModMatrix> generators,
                                  std::vector<std::uint64_t> codes) {
  GroupStore s;
  s.n_ = n;
  s.modulus_ = modulus;
  s.generators_ = std::move(generators);
  s.codes_ = std::move(codes);
  const std::uint64_t id = encode(ModMatrix::identity(n, modulus));
  if (s.codes_.empty() || s.codes_[0] != id || !std::is_sorted(s.codes_.begin() + 1, s.codes_.end())) {
    throw std::invalid_argument("codes are not in canonical group order");
  }
  return s;
}

GroupStore enumerate_group(std::span<const ModMatrix> generators, int n, int modulus,
                           std::size_t cap) {
  const ModMatrix identity = ModMatrix::identity(n, modulus);
  for (const auto& g : generators) {
    if (g.dim() != n || g.modulus() != modulus) {
      throw DimensionMismatch("generator " + g.to_string() + " has the wrong shape");
    }
    if (std::gcd(det_mod(g), modulus) != 1 && modulus > 1) {
      throw NotInvertible("generator " + g.to_string() + " is not invertible");
    }
  }
  GroupStore store;
  store.n_ = n;
  store.modulus_ = modulus;
  store.generators_.assign(generators.begin(), generators.end());

  CodeSet seen(1024);
  std::vector<std::uint64_t> codes;
  const std::uint64_t id_code = encode(identity);
  seen.insert(id_code);
  codes.push_back(id_code);
  for (std::size_t head = 0; head < codes.size(); ++head) {
    const ModMatrix x = decode(codes[head], n, modulus);
    for (const auto& g : generators) {
      const std::uint64_t c = encode(x * g);
      if (seen.insert(c)) {
        if (codes.size() >= cap) {
          throw EnumerationCapExceeded("group closure exceeds the enumeration cap of " +
                                       std::to_string(cap) + " elements");
        }
        codes.push_back(c);
      }
    }
  }
  canonicalize(codes, id_code);
  store.codes_ = std::move(codes);
  return store;
}

GroupStore special_linear_group(int n, int modulus, std::size_t cap) {
  const auto gens = elementary_generators(n, modulus);
  return enumerate_group(gens, n, modulus, cap);
}

std::uint64_t sl_order_formula(int n, int modulus) {
  std::uint64_t order = 1;
  for (const auto& f : factorize(modulus)) {
    const std::uint64_t p = static_cast<std::uint64_t>(f.prime);
    std::uint64_t local = ipow(p, n * (n - 1) / 2);
    for (int k = 2; k <= n; ++k) local *= ipow(p, k) - 1;
    local *= ipow(p, (f.exponent - 1) * (n * n - 1));
    order *= local;
  }
  return order;
}

std::string subgroup_label(SubgroupName name) {
  switch (name) {
    case SubgroupName::SL2Block: return "SL2_block";
    case SubgroupName::SL3Block: return "SL3_block";
    case SubgroupName::U1: return "U1";
    case SubgroupName::U2: return "U2";
    case SubgroupName::H: return "H";
    case SubgroupName::G1: return "G1";
    case SubgroupName::G2: return "G2";
    case SubgroupName::NSub: return "N_sub";
    case SubgroupName::GKer: return "G_ker";
    case SubgroupName::Cij: return "C_ij";
  }
  return "?";
}

std::optional<SubgroupName> parse_subgroup_name(std::string_view text) {
  for (auto n : {SubgroupName::SL2Block, SubgroupName::SL3Block, SubgroupName::U1,
                 SubgroupName::U2, SubgroupName::H, SubgroupName::G1, SubgroupName::G2,
                 SubgroupName::NSub, SubgroupName::GKer, SubgroupName::Cij}) {
    if (subgroup_label(n) == text) return n;
  }
  return std::nullopt;
}

NamedSubgroup make_subgroup(SubgroupName name, int p, int r, int ambient_dim, int i, int j) {
  const int q = level_of(p, r);
  NamedSubgroup sub{name, subgroup_label(name), p, r, ambient_dim, {}, {}};
  const bool block = name == SubgroupName::SL2Block || name == SubgroupName::SL3Block;
  if (!block && ambient_dim != 4) {
    throw std::invalid_argument(sub.label + " is only defined inside SL4");
  }
  auto unipotent = [&](std::initializer_list<std::pair<int, int>> slots) {
    // all I + sum_k t_k e_{slot_k}, 1-based slots
    const int m = static_cast<int>(slots.size());
    const std::uint64_t total = ipow(static_cast<std::uint64_t>(q), m);
    for (std::uint64_t t = 0; t < total; ++t) {
      ModMatrix g = ModMatrix::identity(4, q);
      std::uint64_t rest = t;
      for (const auto& [a, b] : slots) {
        g.set(a - 1, b - 1, static_cast<long long>(rest % q));
        rest /= q;
      }
      sub.elements.push_back(g);
    }
  };
  switch (name) {
    case SubgroupName::SL2Block:
    case SubgroupName::SL3Block: {
      const int k = name == SubgroupName::SL2Block ? 2 : 3;
      if (ambient_dim < k) throw std::invalid_argument("ambient dimension too small for block");
      for (const auto& g : sl_elements(k, q)) sub.elements.push_back(embed_block(g, ambient_dim, 0));
      break;
    }
    case SubgroupName::U1: unipotent({{1, 4}, {2, 4}, {3, 4}}); break;
    case SubgroupName::U2: unipotent({{1, 3}, {2, 3}}); break;
    case SubgroupName::H: unipotent({{2, 3}, {3, 4}, {2, 4}}); break;
    case SubgroupName::NSub: unipotent({{2, 3}}); break;
    case SubgroupName::G1: {
      for (const auto& h : sl_elements(2, q)) {
        for (int v1 = 0; v1 < q; ++v1) {
          for (int v2 = 0; v2 < q; ++v2) {
            ModMatrix g = embed_block(h, 4, 0);
            g.set(0, 2, v1);
            g.set(1, 2, v2);
            sub.elements.push_back(g);
          }
        }
      }
      break;
    }
    case SubgroupName::G2:
      for (const auto& h : sl_elements(2, q)) sub.elements.push_back(embed_block(h, 4, 1));
      break;
    case SubgroupName::GKer: {
      if (r < 2) throw std::invalid_argument("G_ker(p^{r-1}) needs r >= 2");
      const int step = q / p;
      const std::uint64_t total = ipow(static_cast<std::uint64_t>(p), 15);
      sub.elements.reserve(total);
      for (std::uint64_t t = 0; t < total; ++t) {
        ModMatrix g = ModMatrix::identity(4, q);
        std::uint64_t rest = t;
        long long diag = 0;
        for (int k = 0; k < 15; ++k) {
          const long long a = static_cast<long long>(rest % p);
          rest /= p;
          const int row = k / 4, col = k % 4;
          if (row == col) diag += a;
          g.set(row, col, (row == col ? 1 : 0) + step * a);
        }
        g.set(3, 3, 1 + step * reduce_mod(-diag, p));
        sub.elements.push_back(g);
      }
      break;
    }
    case SubgroupName::Cij: {
      const ModMatrix gen = elementary(i, j, q / p, 4, q);
      ModMatrix g = ModMatrix::identity(4, q);
      for (int k = 0; k < p; ++k) {
        sub.elements.push_back(g);
        g = g * gen;
      }
      sub.label = "C_" + std::to_string(i) + std::to_string(j);
      break;
    }
  }
  return sub;
}

NamedSubgroup named_subgroup(const GroupStore& store, SubgroupName name, int p, int r, int i,
                             int j) {
  if (store.modulus() != level_of(p, r)) {
    throw std::invalid_argument("store modulus does not match p^r");
  }
  NamedSubgroup sub = make_subgroup(name, p, r, store.dim(), i, j);
  sub.ids.reserve(sub.elements.size());
  for (const auto& g : sub.elements) sub.ids.push_back(store.index_of(g));
  return sub;
}

ClassData conjugacy_classes(const GroupStore& store) {
  const std::size_t n = store.order();
  constexpr std::uint32_t kUnassigned = ~std::uint32_t{0};
  std::vector<std::uint32_t> raw(n, kUnassigned);
  std::vector<ModMatrix> gens = store.generators();
  std::vector<ModMatrix> gens_inv;
  for (const auto& g : gens) gens_inv.push_back(invert(g));

  std::vector<std::size_t> reps;  // least id in orbit == least code (after identity)
  std::vector<std::size_t> sizes;
  std::deque<std::size_t> queue;
  for (std::size_t start = 0; start < n; ++start) {
    if (raw[start] != kUnassigned) continue;
    const auto cls = static_cast<std::uint32_t>(reps.size());
    reps.push_back(start);
    std::size_t size = 0;
    raw[start] = cls;
    queue.push_back(start);
    while (!queue.empty()) {
      const std::size_t x = queue.front();
      queue.pop_front();
      ++size;
      const ModMatrix m = store.element(x);
      for (std::size_t k = 0; k < gens.size(); ++k) {
        const std::size_t y = store.index_of(gens[k] * m * gens_inv[k]);
        if (raw[y] == kUnassigned) {
          raw[y] = cls;
          queue.push_back(y);
        }
      }
    }
    sizes.push_back(size);
  }

  // Scanning ids in order already yields the identity first and the
  // remaining classes by least code.
  ClassData cd;
  cd.representatives = std::move(reps);
  cd.sizes = std::move(sizes);
  cd.class_of = std::move(raw);

  const std::size_t r = cd.count();
  cd.orders.resize(r);
  long long exponent = 1;
  for (std::size_t k = 0; k < r; ++k) {
    const ModMatrix g = store.element(cd.representatives[k]);
    ModMatrix x = g;
    int order = 1;
    while (!x.is_identity()) {
      x = x * g;
      ++order;
    }
    cd.orders[k] = order;
    exponent = std::lcm(exponent, static_cast<long long>(order));
  }
  cd.exponent = static_cast<int>(exponent);
  cd.power_map.assign(r, std::vector<std::uint32_t>(cd.exponent));
  for (std::size_t k = 0; k < r; ++k) {
    const ModMatrix g = store.element(cd.representatives[k]);
    ModMatrix x = ModMatrix::identity(store.dim(), store.modulus());
    std::vector<std::uint32_t> cycle;
    for (int t = 0; t < cd.orders[k]; ++t) {
      cycle.push_back(cd.class_of[store.index_of(x)]);
      x = x * g;
    }
    for (int t = 0; t < cd.exponent; ++t) cd.power_map[k][t] = cycle[t % cd.orders[k]];
  }
  return cd;
}

ClassAlgebra::ClassAlgebra(const GroupStore& store, const ClassData& classes)
    : r_(classes.count()), coeff_(r_ * r_ * r_, 0) {
  std::vector<ModMatrix> reps;
  for (std::size_t k = 0; k < r_; ++k) reps.push_back(store.element(classes.representatives[k]));
  for (std::size_t x = 0; x < store.order(); ++x) {
    const ModMatrix xinv = invert(store.element(x));
    const std::size_t ci = classes.class_of[x];
    for (std::size_t k = 0; k < r_; ++k) {
      const std::size_t cj = classes.class_of[store.index_of(xinv * reps[k])];
      ++coeff_[(ci * r_ + cj) * r_ + k];
    }
  }
}

std::uint64_t class_mult_coeff(const GroupStore& store, const ClassData& classes, std::size_t i,
                               std::size_t j, std::size_t k) {
  const ModMatrix gk = store.element(classes.representatives[k]);
  std::uint64_t count = 0;
  for (std::size_t x = 0; x < store.order(); ++x) {
    if (classes.class_of[x] != i) continue;
    const std::size_t y = store.index_of(invert(store.element(x)) * gk);
    if (classes.class_of[y] == j) ++count;
  }
  return count;
}

std::vector<std::size_t> class_distribution(const ClassData& classes,
                                            std::span<const std::size_t> ids) {
  std::vector<std::size_t> counts(classes.count(), 0);
  for (std::size_t id : ids) ++counts[classes.class_of[id]];
  return counts;
}

bool CongruenceKernelCheck::holds() const {
  return trace_zero_count == distinct_images && trace_zero_count == kernel_count &&
         images_in_kernel && kernel_is_trace_zero && homomorphism;
}

CongruenceKernelCheck check_congruence_kernel(int p, int r) {
  if (r < 2) throw std::invalid_argument("congruence kernel check needs r >= 2");
  const int q = level_of(p, r);
  const int step = q / p;
  const std::uint64_t up = static_cast<std::uint64_t>(p);
  CongruenceKernelCheck out;
  out.p = p;
  out.r = r;

  // Raw row-major integer matrices keep the exhaustive loops cheap.
  using Raw = std::array<long long, 16>;
  auto lift = [&](const Raw& a) {
    Raw g{};
    for (int k = 0; k < 16; ++k) g[k] = ((k % 5 == 0 ? 1 : 0) + step * a[k]) % q;  // a[k] >= 0
    return g;
  };
  auto det4 = [](const Raw& m) {
    // Laplace expansion along the first two rows.
    auto minor_top = [&](int c0, int c1) { return m[c0] * m[4 + c1] - m[c1] * m[4 + c0]; };
    auto minor_bottom = [&](int c0, int c1) { return m[8 + c0] * m[12 + c1] - m[8 + c1] * m[12 + c0]; };
    return minor_top(0, 1) * minor_bottom(2, 3) - minor_top(0, 2) * minor_bottom(1, 3) +
           minor_top(0, 3) * minor_bottom(1, 2) + minor_top(1, 2) * minor_bottom(0, 3) -
           minor_top(1, 3) * minor_bottom(0, 2) + minor_top(2, 3) * minor_bottom(0, 1);
  };

  // Additive basis of trace-zero matrices: off-diagonal units and e_kk - e_44.
  std::vector<Raw> basis;
  for (int row = 0; row < 4; ++row) {
    for (int col = 0; col < 4; ++col) {
      if (row == col && row == 3) continue;
      Raw b{};
      b[row * 4 + col] = 1;
      if (row == col) b[15] = p - 1;
      basis.push_back(b);
    }
  }
  std::vector<Raw> basis_images;
  std::vector<std::vector<int>> support_columns;
  for (const auto& b : basis) {
    basis_images.push_back(lift(b));
    support_columns.emplace_back();
    for (int j = 0; j < 4; ++j) {
      if (b[j] || b[4 + j] || b[8 + j] || b[12 + j]) support_columns.back().push_back(j);
    }
  }

  const std::uint64_t total = ipow(up, 15);
  std::vector<std::uint64_t> image_codes;
  image_codes.reserve(total);
  bool in_kernel = true;
  bool hom = true;
  Raw a{};
  for (std::uint64_t t = 0; t < total; ++t) {
    std::uint64_t rest = t;
    long long diag = 0;
    for (int k = 0; k < 15; ++k) {
      a[k] = static_cast<long long>(rest % up);
      rest /= up;
      if (k % 5 == 0) diag += a[k];
    }
    a[15] = reduce_mod(-diag, p);
    const Raw g = lift(a);
    std::uint64_t code = 0;
    for (int k = 0; k < 16; ++k) code = code * static_cast<std::uint64_t>(q) + static_cast<std::uint64_t>(g[k]);
    image_codes.push_back(code);
    bool reduces_to_identity = true;
    for (int k = 0; k < 16; ++k) reduces_to_identity = reduces_to_identity && g[k] % step == (k % 5 == 0 ? 1 % step : 0);
    if (reduce_mod(det4(g), q) != 1 % q || !reduces_to_identity) in_kernel = false;
    // f(A) f(B) == f(A + B) for A arbitrary and B in a generating set implies
    // the homomorphism property on the whole group by induction on B.
    // Columns where B vanishes agree trivially on both sides, so only the
    // support columns of each basis element are compared.
    for (std::size_t b = 0; b < basis.size() && hom; ++b) {
      const Raw& h = basis_images[b];
      for (int j : support_columns[b]) {
        for (int i = 0; i < 4; ++i) {
          const long long prod = g[i * 4] * h[j] + g[i * 4 + 1] * h[4 + j] + g[i * 4 + 2] * h[8 + j] +
                                 g[i * 4 + 3] * h[12 + j];
          // step * ((a + b) mod p) = step * (a + b) mod q, so one reduction suffices
          const long long want = (i == j ? 1 : 0) + step * (a[i * 4 + j] + basis[b][i * 4 + j]);
          if ((prod - want) % q != 0) hom = false;
        }
      }
    }
  }
  std::sort(image_codes.begin(), image_codes.end());
  out.trace_zero_count = total;
  out.distinct_images = static_cast<std::uint64_t>(
      std::unique(image_codes.begin(), image_codes.end()) - image_codes.begin());
  out.images_in_kernel = in_kernel;
  out.homomorphism = hom;

  // Surjectivity: every I + p^{r-1}A of determinant 1 has trace(A) = 0 mod p.
  const std::uint64_t all = ipow(up, 16);
  std::uint64_t kernel = 0;
  bool trace_zero = true;
  // Odometer over the p^16 digit vectors of A.
  std::array<int, 16> digits{};
  Raw g{};
  for (int k = 0; k < 16; ++k) g[k] = k % 5 == 0 ? 1 : 0;
  for (std::uint64_t t = 0; t < all; ++t) {
    if (reduce_mod(det4(g), q) == 1 % q) {
      ++kernel;
      if ((digits[0] + digits[5] + digits[10] + digits[15]) % p != 0) trace_zero = false;
    }
    for (int k = 0; k < 16; ++k) {
      if (++digits[k] < p) {
        g[k] += step;
        break;
      }
      digits[k] = 0;
      g[k] = k % 5 == 0 ? 1 : 0;
    }
  }
  out.kernel_count = kernel;
  out.kernel_is_trace_zero = trace_zero;
  return out;
}

std::uint64_t generator_digest(std::span<const ModMatrix> generators) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t v) {
    for (int k = 0; k < 8; ++k) {
      h ^= (v >> (8 * k)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& g : generators) {
    mix(static_cast<std::uint64_t>(g.dim()));
    mix(static_cast<std::uint64_t>(g.modulus()));
    mix(encode(g));
  }
  return h;
}

std::filesystem::path cache_path(const std::filesystem::path& dir, std::span<const ModMatrix> generators) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx.grp", static_cast<unsigned long long>(generator_digest(generators)));
  return dir / buf;
}

std::filesystem::path cache_path(const std::filesystem::path& dir, const GroupStore& store) {
  return cache_path(dir, store.generators());
}

namespace {
constexpr char kMagic[4] = {'S', 'L', 'G', '1'};

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw std::runtime_error("truncated group cache");
  return v;
}
}  // namespace

void save_group(const GroupStore& store, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os.write(kMagic, 4);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(store.dim()));
  put<std::uint16_t>(os, static_cast<std::uint16_t>(store.modulus()));
  put<std::uint64_t>(os, store.order());
  for (std::uint64_t c : store.codes()) put<std::uint64_t>(os, c);
}

GroupStore load_group(const std::filesystem::path& path, std::vector<ModMatrix> generators) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || !std::equal(magic, magic + 4, kMagic)) {
    throw std::runtime_error(path.string() + " is not a group cache file");
  }
  const int n = get<std::uint8_t>(is);
  const int modulus = get<std::uint16_t>(is);
  const auto count = get<std::uint64_t>(is);
  std::vector<std::uint64_t> codes(count);
  for (auto& c : codes) c = get<std::uint64_t>(is);
  return GroupStore::from_codes(n, modulus, std::move(generators), std::move(codes));
}

}  // namespace sl4
