#include "sl4/reps.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <regex>
#include <unordered_map>

#include <Eigen/Eigenvalues>

namespace sl4 {

namespace {

constexpr double kCommuteTol = 1e-8;
constexpr double kLabelTol = 1e-6;
constexpr double kIsotypicResidualTol = 1e-8;

int ipow(int b, int e) {
  int v = 1;
  for (int k = 0; k < e; ++k) v *= b;
  return v;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

int hermitian_rank(const CMatrix& p) {
  const CMatrix h = 0.5 * (p + p.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return static_cast<int>((es.eigenvalues().array() > 0.5).count());
}

CMatrix pairwise_sum(const UnitaryRep& rep, std::span<const ModMatrix> elements) {
  if (elements.size() == 1) return rep(elements.front());
  const std::size_t mid = elements.size() / 2;
  return pairwise_sum(rep, elements.first(mid)) + pairwise_sum(rep, elements.subspan(mid));
}

}  // namespace

FiniteAction vector_action(int n, int level, int vector_modulus, bool nonzero_only) {
  if (vector_modulus < 1 || level % vector_modulus != 0) {
    throw DescriptorError("vector modulus " + std::to_string(vector_modulus) + " does not divide level " +
                          std::to_string(level));
  }
  const int total = ipow(vector_modulus, n);
  const int offset = nonzero_only ? 1 : 0;
  FiniteAction a;
  a.name = std::string(nonzero_only ? "nonzero:" : "") + "Z" + std::to_string(vector_modulus) + "^" +
           std::to_string(n);
  a.size = total - offset;
  a.group_dim = n;
  a.level = level;
  a.act = [n, vector_modulus, offset](const ModMatrix& g, int point) {
    std::array<long long, kMaxDim> v{};
    int rest = point + offset;
    for (int k = 0; k < n; ++k) {
      v[k] = rest % vector_modulus;
      rest /= vector_modulus;
    }
    int image = 0;
    for (int row = n - 1; row >= 0; --row) {
      long long s = 0;
      for (int col = 0; col < n; ++col) s += g(row, col) * v[col];
      image = image * vector_modulus + static_cast<int>(reduce_mod(s, vector_modulus));
    }
    return image - offset;
  };
  return a;
}

FiniteAction coset_action(const NamedSubgroup& subgroup, int level, int max_cosets) {
  struct Cosets {
    std::vector<ModMatrix> subgroup;
    std::vector<ModMatrix> reps;
    std::unordered_map<std::uint64_t, int> index;
    std::uint64_t key(const ModMatrix& g) const {
      std::uint64_t best = ~std::uint64_t{0};
      for (const auto& k : subgroup) best = std::min(best, encode(g * k));
      return best;
    }
  };
  auto state = std::make_shared<Cosets>();
  state->subgroup = subgroup.elements;
  const int n = subgroup.ambient_dim;
  const ModMatrix id = ModMatrix::identity(n, level);
  state->reps.push_back(id);
  state->index.emplace(state->key(id), 0);
  const auto gens = elementary_generators(n, level);
  for (std::size_t head = 0; head < state->reps.size(); ++head) {
    const ModMatrix x = state->reps[head];
    for (const auto& g : gens) {
      const ModMatrix y = g * x;
      if (state->index.emplace(state->key(y), static_cast<int>(state->reps.size())).second) {
        state->reps.push_back(y);
        if (static_cast<int>(state->reps.size()) > max_cosets) {
          throw DescriptorError("coset space of " + subgroup.label + " exceeds " + std::to_string(max_cosets) +
                                " points");
        }
      }
    }
  }
  FiniteAction a;
  a.name = "cosets:" + subgroup.label;
  a.size = static_cast<int>(state->reps.size());
  a.group_dim = n;
  a.level = level;
  a.act = [state](const ModMatrix& g, int point) {
    auto it = state->index.find(state->key(g * state->reps[point]));
    if (it == state->index.end()) throw std::domain_error("coset image outside the enumerated space");
    return it->second;
  };
  return a;
}

UnitaryRep::UnitaryRep(int dim, int group_dim, int level, std::string descriptor, Evaluator eval)
    : dim_(dim),
      group_dim_(group_dim),
      level_(level),
      descriptor_(std::move(descriptor)),
      eval_(std::make_shared<const Evaluator>(std::move(eval))) {
  if (dim < 1 || dim > kMaxRepDim) throw std::invalid_argument("representation dimension out of range");
}

CMatrix UnitaryRep::operator()(const ModMatrix& g) const {
  if (g.dim() != group_dim_ || g.modulus() != level_) {
    throw DimensionMismatch("element " + g.to_string() + " mod " + std::to_string(g.modulus()) +
                            " is not in the group of " + descriptor_);
  }
  return (*eval_)(g);
}

UnitaryRep trivial_rep(int dim, int group_dim, int level) {
  return UnitaryRep(dim, group_dim, level, dim == 1 ? "trivial" : "trivial:" + std::to_string(dim),
                    [dim](const ModMatrix&) { return CMatrix::Identity(dim, dim); });
}

UnitaryRep perm_rep(FiniteAction action) {
  const int d = action.size;
  auto act = action.act;
  return UnitaryRep(d, action.group_dim, action.level, action.name, [d, act](const ModMatrix& g) {
    CMatrix m = CMatrix::Zero(d, d);
    std::vector<char> hit(static_cast<std::size_t>(d), 0);
    for (int x = 0; x < d; ++x) {
      const int y = act(g, x);
      if (y < 0 || y >= d || hit[y]) throw std::domain_error("action is not a bijection");
      hit[y] = 1;
      m(y, x) = 1.0;
    }
    return m;
  });
}

UnitaryRep direct_sum(std::span<const UnitaryRep> parts) {
  if (parts.empty()) throw std::invalid_argument("direct sum of nothing");
  int dim = 0;
  std::string desc = "sum(";
  for (const auto& p : parts) {
    if (p.group_dim() != parts[0].group_dim() || p.level() != parts[0].level()) {
      throw DimensionMismatch("direct sum of representations of different groups");
    }
    desc += (dim ? "," : "") + p.descriptor();
    dim += p.dim();
  }
  desc += ")";
  std::vector<UnitaryRep> copy(parts.begin(), parts.end());
  return UnitaryRep(dim, parts[0].group_dim(), parts[0].level(), desc, [copy, dim](const ModMatrix& g) {
    CMatrix m = CMatrix::Zero(dim, dim);
    int at = 0;
    for (const auto& p : copy) {
      m.block(at, at, p.dim(), p.dim()) = p(g);
      at += p.dim();
    }
    return m;
  });
}

UnitaryRep tensor(const UnitaryRep& a, const UnitaryRep& b) {
  if (a.group_dim() != b.group_dim() || a.level() != b.level()) {
    throw DimensionMismatch("tensor product of representations of different groups");
  }
  return UnitaryRep(a.dim() * b.dim(), a.group_dim(), a.level(),
                    "tensor(" + a.descriptor() + "," + b.descriptor() + ")",
                    [a, b](const ModMatrix& g) { return kron(a(g), b(g)); });
}

UnitaryRep compress(const UnitaryRep& rep, const CMatrix& basis) {
  if (basis.rows() != rep.dim()) throw DimensionMismatch("compression basis has the wrong height");
  return UnitaryRep(static_cast<int>(basis.cols()), rep.group_dim(), rep.level(),
                    "compress(" + rep.descriptor() + ")",
                    [rep, basis](const ModMatrix& g) -> CMatrix { return basis.adjoint() * rep(g) * basis; });
}

UnitaryRep conjugated(const UnitaryRep& rep, const ModMatrix& m) {
  const ModMatrix m_inv = invert(m);
  return UnitaryRep(rep.dim(), rep.group_dim(), rep.level(), rep.descriptor(),
                    [rep, m, m_inv](const ModMatrix& g) { return rep(m * g * m_inv); });
}

double homomorphism_defect(const UnitaryRep& rep, const ModMatrix& g, const ModMatrix& h) {
  return (rep(g) * rep(h) - rep(g * h)).cwiseAbs().maxCoeff();
}

double unitarity_defect(const UnitaryRep& rep, const ModMatrix& g) {
  const CMatrix u = rep(g);
  return (u * u.adjoint() - CMatrix::Identity(rep.dim(), rep.dim())).cwiseAbs().maxCoeff();
}

Projector invariant_projector(const UnitaryRep& rep, std::span<const ModMatrix> elements) {
  if (elements.empty()) throw std::invalid_argument("projector over an empty set");
  if (elements.size() > kMaxProjectorGroup) throw std::invalid_argument("subgroup too large for averaging");
  Projector p;
  p.matrix = pairwise_sum(rep, elements) / static_cast<double>(elements.size());
  p.rank = hermitian_rank(p.matrix);
  return p;
}

std::complex<double> CharacterLabel::eigenvalue(std::size_t generator) const {
  return std::polar(1.0, 2.0 * std::numbers::pi * values.at(generator) / modulus);
}

int IsotypicDecomposition::total_dim() const {
  int d = 0;
  for (const auto& c : components) d += static_cast<int>(c.basis.cols());
  return d;
}

const IsotypicComponent* IsotypicDecomposition::find(const std::vector<int>& values) const {
  for (const auto& c : components)
    if (c.label.values == values) return &c;
  return nullptr;
}

IsotypicDecomposition isotypic_split(const UnitaryRep& rep, std::span<const ModMatrix> generators, int modulus,
                                     const std::string& subgroup, const CMatrix* subspace) {
  std::vector<CMatrix> images;
  for (const auto& g : generators) images.push_back(rep(g));
  for (std::size_t a = 0; a < images.size(); ++a) {
    for (std::size_t b = a + 1; b < images.size(); ++b) {
      if ((images[a] * images[b] - images[b] * images[a]).cwiseAbs().maxCoeff() > kCommuteTol) {
        throw NonCommutingGenerators("generators " + generators[a].to_string() + " and " +
                                     generators[b].to_string() + " do not commute under " + rep.descriptor());
      }
    }
  }

  struct Partial {
    std::vector<int> values;
    CMatrix basis;
  };
  std::vector<Partial> current{{{}, subspace ? *subspace : CMatrix::Identity(rep.dim(), rep.dim())}};
  if (current[0].basis.cols() == 0) current.clear();
  for (const auto& u : images) {
    std::vector<Partial> next;
    for (const auto& part : current) {
      const CMatrix b = part.basis.adjoint() * u * part.basis;
      Eigen::ComplexSchur<CMatrix> schur(b);
      const CMatrix& t = schur.matrixT();
      const CMatrix& vecs = schur.matrixU();
      std::map<int, std::vector<Eigen::Index>> groups;
      for (Eigen::Index i = 0; i < t.rows(); ++i) {
        const std::complex<double> lambda = t(i, i);
        const double turns = std::arg(lambda) * modulus / (2.0 * std::numbers::pi);
        const int f = static_cast<int>(reduce_mod(std::llround(turns), modulus));
        if (std::abs(lambda - std::polar(1.0, 2.0 * std::numbers::pi * f / modulus)) > kLabelTol) {
          throw std::runtime_error("eigenvalue is not a " + std::to_string(modulus) + "-th root of unity");
        }
        groups[f].push_back(i);
      }
      for (const auto& [f, cols] : groups) {
        CMatrix sel(vecs.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) sel.col(static_cast<Eigen::Index>(c)) = vecs.col(cols[c]);
        Partial p{part.values, part.basis * sel};
        p.values.push_back(f);
        next.push_back(std::move(p));
      }
    }
    current = std::move(next);
  }

  IsotypicDecomposition out;
  for (auto& part : current) {
    IsotypicComponent c{{subgroup, modulus, part.values}, std::move(part.basis)};
    for (std::size_t k = 0; k < images.size(); ++k) {
      const double res = (images[k] * c.basis - c.label.eigenvalue(k) * c.basis).cwiseAbs().maxCoeff();
      out.max_residual = std::max(out.max_residual, res);
    }
    out.components.push_back(std::move(c));
  }
  std::sort(out.components.begin(), out.components.end(),
            [](const IsotypicComponent& a, const IsotypicComponent& b) { return a.label < b.label; });
  if (!out.components.empty()) {
    CMatrix all(out.components.front().basis.rows(), out.total_dim());
    Eigen::Index at = 0;
    for (const auto& c : out.components) {
      all.middleCols(at, c.basis.cols()) = c.basis;
      at += c.basis.cols();
    }
    out.orthonormality_defect =
        (all.adjoint() * all - CMatrix::Identity(all.cols(), all.cols())).cwiseAbs().maxCoeff();
  }
  if (out.max_residual > kIsotypicResidualTol) {
    throw std::runtime_error("isotypic residual " + std::to_string(out.max_residual) + " exceeds tolerance");
  }
  return out;
}

TensorInvariantCheck tensor_invariants_property(const UnitaryRep& rep_a, std::span<const ModMatrix> h_a,
                                                const UnitaryRep& rep_b, std::span<const ModMatrix> h_b) {
  TensorInvariantCheck out;
  out.rank_a = invariant_projector(rep_a, h_a).rank;
  out.rank_b = invariant_projector(rep_b, h_b).rank;
  std::vector<CMatrix> images_b;
  for (const auto& b : h_b) images_b.push_back(rep_b(b));
  CMatrix sum = CMatrix::Zero(rep_a.dim() * rep_b.dim(), rep_a.dim() * rep_b.dim());
  for (const auto& a : h_a) {
    const CMatrix ia = rep_a(a);
    for (const auto& ib : images_b) sum += kron(ia, ib);
  }
  sum /= static_cast<double>(h_a.size() * h_b.size());
  out.rank_product = hermitian_rank(sum);
  return out;
}

namespace {

UnitaryRep perm_from_space(const std::string& space, int level) {
  static const std::regex vec_re(R"((nonzero:)?Z(\d+)\^(\d+))");
  std::smatch m;
  if (std::regex_match(space, m, vec_re)) {
    const int modulus = std::stoi(m[2]);
    const int n = std::stoi(m[3]);
    if (n < 1 || n > kMaxDim) throw DescriptorError("vector dimension out of range in " + space);
    if (ipow(modulus, n) > kMaxRepDim + 1) throw DescriptorError("space " + space + " is too large");
    return perm_rep(vector_action(n, level, modulus, m[1].matched));
  }
  if (space.rfind("cosets:", 0) == 0) {
    const auto name = parse_subgroup_name(space.substr(7));
    if (!name) throw DescriptorError("unknown subgroup in " + space);
    const auto factors = factorize(level);
    if (factors.size() != 1) throw DescriptorError("coset spaces need a prime-power level");
    const NamedSubgroup sub = make_subgroup(*name, factors[0].prime, factors[0].exponent);
    return perm_rep(coset_action(sub, level));
  }
  throw DescriptorError("unknown space '" + space + "'");
}

}  // namespace

UnitaryRep build_rep(const nlohmann::json& d, int level) {
  if (d.is_string()) return parse_rep(d.get<std::string>(), level);
  if (!d.is_object()) throw DescriptorError("representation descriptor must be an object or string");
  if (d.contains("level")) {
    if (!d["level"].is_number_integer()) throw DescriptorError("level must be an integer");
    level = d["level"].get<int>();
  }
  if (level < 1 || level > kMaxModulus) throw DescriptorError("level out of range");
  for (const char* key : {"sum", "tensor"}) {
    if (!d.contains(key)) continue;
    if (!d[key].is_array() || d[key].empty()) throw DescriptorError(std::string(key) + " needs a non-empty list");
    std::vector<UnitaryRep> parts;
    for (const auto& sub : d[key]) parts.push_back(build_rep(sub, level));
    if (std::string(key) == "sum") return direct_sum(parts);
    UnitaryRep acc = parts.front();
    for (std::size_t k = 1; k < parts.size(); ++k) acc = tensor(acc, parts[k]);
    return acc;
  }
  const std::string type = d.value("type", "");
  if (type == "trivial") {
    const int dim = d.value("dim", 1);
    if (dim < 1 || dim > kMaxRepDim) throw DescriptorError("trivial dimension out of range");
    return trivial_rep(dim, d.value("group_dim", 4), level);
  }
  if (type == "perm") {
    if (!d.contains("space") || !d["space"].is_string()) throw DescriptorError("perm descriptor needs a space");
    return perm_from_space(d["space"].get<std::string>(), level);
  }
  throw DescriptorError("unknown representation type '" + type + "'");
}

UnitaryRep parse_rep(const std::string& text, int level) {
  if (!text.empty() && (text.front() == '{' || text.front() == '[')) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw DescriptorError(std::string("invalid descriptor JSON: ") + e.what());
    }
    return build_rep(j, level);
  }
  if (text == "trivial") return trivial_rep(1, 4, level);
  if (text.rfind("trivial:", 0) == 0) {
    int dim = 0;
    try {
      dim = std::stoi(text.substr(8));
    } catch (const std::exception&) {
      throw DescriptorError("bad trivial dimension in '" + text + "'");
    }
    if (dim < 1 || dim > kMaxRepDim) throw DescriptorError("trivial dimension out of range");
    return trivial_rep(dim, 4, level);
  }
  if (level < 1 || level > kMaxModulus) throw DescriptorError("level out of range");
  return perm_from_space(text, level);
}

}  // namespace sl4
