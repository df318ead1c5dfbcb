#include "sl4/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <Eigen/Eigenvalues>

namespace sl4 {

namespace {

int level_of(int p, int r) {
  if (!is_prime(static_cast<std::uint64_t>(p)) || r < 1) {
    throw std::invalid_argument("pipeline needs a prime p and r >= 1");
  }
  int q = 1;
  for (int k = 0; k < r; ++k) q *= p;
  return q;
}

// I + x e_23 + y e_34 + z e_24
ModMatrix h_element(int x, int y, int z, int q) {
  ModMatrix g = ModMatrix::identity(4, q);
  g.set(1, 2, x);
  g.set(2, 3, y);
  g.set(1, 3, z);
  return g;
}

std::complex<double> root_of_unity(long long k, int q) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(reduce_mod(k, q)) / q);
}

int valuation(int x, int p, int r) {
  if (x == 0) return r;
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

std::vector<ModMatrix> sl2_elements(int q) {
  const GroupStore g = special_linear_group(2, q);
  std::vector<ModMatrix> out;
  for (std::size_t k = 0; k < g.order(); ++k) out.push_back(g.element(k));
  return out;
}

double max_residual(const UnitaryRep& rep, std::span<const ModMatrix> elements, const CVector& w) {
  double worst = 0.0;
  for (const auto& h : elements) worst = std::max(worst, (rep.apply(h, w) - w).norm());
  return worst;
}

// Frequency of u under a unitary of order dividing q, from the Rayleigh quotient.
int recover_frequency(const CMatrix& u_img, const CVector& u, int q) {
  const std::complex<double> lambda = u.dot(u_img * u) / u.squaredNorm();
  const double turns = std::arg(lambda) * q / (2.0 * std::numbers::pi);
  return static_cast<int>(reduce_mod(std::llround(turns), q));
}

}  // namespace

bool verify_step1_identities(int p, int r) {
  if (r < 2) throw std::invalid_argument("step-1 identities need r >= 2");
  const int q = level_of(p, r);
  const int s = q / p;  // p^{r-1}
  const ModMatrix id = ModMatrix::identity(4, q);
  auto block = [&](long long a, long long b, long long c, long long d) {
    return embed_block(ModMatrix::from_rows(q, {{a, b}, {c, d}}), 4, 0);
  };
  auto congruence = [&](long long a, long long b, long long c, long long d) {
    // I + p^{r-1} [[a, b], [c, d]] in the upper-left corner
    ModMatrix g = id;
    g.set(0, 0, 1 + s * a);
    g.set(0, 1, s * b);
    g.set(1, 0, s * c);
    g.set(1, 1, 1 + s * d);
    return g;
  };
  const ModMatrix lower = block(1, 0, 1, 1);
  const ModMatrix lower_inv = block(1, 0, -1, 1);
  bool ok = lower * lower_inv == id && det_mod(lower) == 1 % q;
  // first displayed product
  const ModMatrix first = lower * congruence(0, 1, 0, 0) * lower_inv;
  ok = ok && first == congruence(-1, 1, -1, 1);
  // second displayed product
  const ModMatrix second = congruence(-1, 1, -1, 1) * congruence(0, -1, 1, 0);
  ok = ok && second == congruence(-1, 0, 0, 1);
  // the result is the inverse of I + p^{r-1} diag(1, -1, 0, 0)
  ok = ok && second * congruence(1, 0, 0, -1) == id;
  // the second factor is a product of C_12 and C_21 elements
  ok = ok && congruence(0, -1, 1, 0) == elementary(1, 2, -s, 4, q) * elementary(2, 1, s, 4, q);
  return ok;
}

ModMatrix monomial_conjugator(int i, int j, int modulus) {
  if (i == j || i < 1 || j < 1 || i > 4 || j > 4) throw std::invalid_argument("bad (i, j)");
  std::array<int, 4> target{};  // 0-based image of e_k
  target[0] = i - 1;
  target[3] = j - 1;
  int k = 1;
  for (int t = 0; t < 4; ++t) {
    if (t == i - 1 || t == j - 1) continue;
    target[k++] = t;
  }
  ModMatrix m(4, modulus);
  for (int c = 0; c < 4; ++c) m.set(target[c], c, 1);
  if (det_mod(m) != 1 % modulus) m.set(target[1], 1, -1);  // e_2 unused by e_14
  if (m * elementary(1, 4, 1, 4, modulus) * invert(m) != elementary(i, j, 1, 4, modulus)) {
    throw PipelineAssertion("monomial conjugator does not move e_14 to e_ij");
  }
  return m;
}

Step1Result step1_find_Cij(const UnitaryRep& rep, int p, int r) {
  const int q = level_of(p, r);
  if (rep.level() != q || rep.group_dim() != 4) {
    throw DimensionMismatch("representation is not of SL4(Z/" + std::to_string(q) + ")");
  }
  const CMatrix id = CMatrix::Identity(rep.dim(), rep.dim());
  for (int i = 1; i <= 4; ++i) {
    for (int j = 1; j <= 4; ++j) {
      if (i == j) continue;
      const ModMatrix g = elementary(i, j, q / p, 4, q);
      if ((rep(g) - id).cwiseAbs().maxCoeff() > kNontrivialTol) {
        return {false, i, j, monomial_conjugator(i, j, q)};
      }
    }
  }
  Step1Result old;
  old.old_rep = true;
  old.conjugator = ModMatrix::identity(4, q);
  return old;
}

ModMatrix sl3_dual_conjugator(const std::array<int, 3>& xi, int p, int r) {
  const int q = level_of(p, r);
  int unit = -1;
  for (int k = 0; k < 3 && unit < 0; ++k)
    if (reduce_mod(xi[k], p) != 0) unit = k;
  if (unit < 0) throw NoPrimitiveLabel("xi is zero mod p");
  ModMatrix g(3, q);
  int row = 0;
  for (int k = 0; k < 3; ++k) {
    if (k == unit) continue;
    g.set(row++, k, 1);
  }
  for (int k = 0; k < 3; ++k) g.set(2, k, xi[k]);
  const long long d_inv = mod_inverse(det_mod(g), q);
  for (int k = 0; k < 3; ++k) g.set(0, k, g(0, k) * d_inv);
  // dual action: xi -> g^{-T} xi must land on (0, 0, 1)
  const ModMatrix dual = transpose(invert(g));
  for (int a = 0; a < 3; ++a) {
    long long s = 0;
    for (int b = 0; b < 3; ++b) s += dual(a, b) * xi[b];
    if (reduce_mod(s, q) != (a == 2 ? 1 % q : 0)) throw PipelineAssertion("SL3 conjugator misses (0,0,1)");
  }
  return g;
}

ModMatrix sl2_row_completion(const std::array<int, 2>& z, int p, int r) {
  const int q = level_of(p, r);
  if (reduce_mod(z[0], p) != 0) {
    return ModMatrix::from_rows(q, {{z[0], z[1]}, {0, mod_inverse(z[0], q)}});
  }
  if (reduce_mod(z[1], p) != 0) {
    return ModMatrix::from_rows(q, {{z[0], z[1]}, {-mod_inverse(z[1], q), 0}});
  }
  throw std::invalid_argument("row is not primitive mod p");
}

Step2Result step2_find_v(const UnitaryRep& rep, int p, int r) {
  const int q = level_of(p, r);
  Step2Result out;

  const std::vector<ModMatrix> u1_gens{elementary(1, 4, 1, 4, q), elementary(2, 4, 1, 4, q),
                                       elementary(3, 4, 1, 4, q)};
  const IsotypicDecomposition u1 = isotypic_split(rep, u1_gens, q, "U1");
  const IsotypicComponent* chosen = nullptr;
  for (const auto& c : u1.components) {
    if (c.label.values[0] % p != 0) {
      chosen = &c;
      break;
    }
  }
  if (!chosen) {
    for (const auto& c : u1.components) {
      if (std::any_of(c.label.values.begin(), c.label.values.end(), [p](int x) { return x % p != 0; })) {
        chosen = &c;
        break;
      }
    }
  }
  if (!chosen) throw NoPrimitiveLabel("U1 spectrum has no label primitive mod p");
  std::copy(chosen->label.values.begin(), chosen->label.values.end(), out.xi_before.begin());

  const ModMatrix g3 = sl3_dual_conjugator(out.xi_before, p, r);
  out.sl3_conjugator = embed_block(g3, 4, 0);
  out.xi_after = {0, 0, 1 % q};
  const CMatrix v_chi = rep(out.sl3_conjugator) * chosen->basis;
  out.dim_v_chi = static_cast<int>(v_chi.cols());
  {
    // check that v_chi is the (0,0,1)-isotypic space
    double worst = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const std::complex<double> want = k == 2 ? root_of_unity(1, q) : 1.0;
      worst = std::max(worst, (rep(u1_gens[k]) * v_chi - want * v_chi).cwiseAbs().maxCoeff());
    }
    if (worst > kWitnessTol) throw PipelineAssertion("normalized U1 character does not act by (0,0,1)");
  }

  const std::vector<ModMatrix> u2_gens{elementary(1, 3, 1, 4, q), elementary(2, 3, 1, 4, q)};
  const IsotypicDecomposition u2 = isotypic_split(rep, u2_gens, q, "U2", &v_chi);
  const IsotypicComponent* theta = nullptr;
  for (const auto& c : u2.components) {
    if (c.label.values[0] != 0 || c.label.values[1] != 0) {
      theta = &c;
      break;
    }
  }
  if (!theta) {
    out.case_tag = Step2Case::Case1;
    out.v = v_chi.col(0);
    out.sl2_conjugator = ModMatrix::identity(4, q);
  } else {
    out.case_tag = Step2Case::Case2;
    out.zeta = {theta->label.values[0], theta->label.values[1]};
    out.R = std::min(valuation(out.zeta[0], p, r), valuation(out.zeta[1], p, r));
    int pR = 1;
    for (int k = 0; k < out.R; ++k) pR *= p;
    out.z = {out.zeta[0] / pR, out.zeta[1] / pR};
    out.sl2_conjugator = embed_block(sl2_row_completion(out.z, p, r), 4, 0);
    out.v = rep(out.sl2_conjugator) * theta->basis.col(0);
  }
  out.v.normalize();

  for (int x = 0; x < q; ++x) {
    for (int y = 0; y < q; ++y) {
      for (int z = 0; z < q; ++z) {
        const CVector img = rep.apply(h_element(x, y, z, q), out.v);
        const double res = (img - root_of_unity(y, q) * out.v).norm();
        out.h_residual = std::max(out.h_residual, res);
        if (x == 0 && y == 0) out.kernel_residual = std::max(out.kernel_residual, res);
      }
    }
  }
  if (out.h_residual > kWitnessTol) {
    throw PipelineAssertion("H does not act on v by the y-character (residual " + std::to_string(out.h_residual) +
                            ")");
  }
  return out;
}

InvariantWitness step3_invariant(const UnitaryRep& rep, const CVector& v, int p, int r) {
  const int q = level_of(p, r);
  InvariantWitness wit;
  wit.level = q;
  wit.p = p;
  wit.r = r;
  wit.rep = rep.descriptor();

  const std::vector<ModMatrix> sl2 = sl2_elements(q);
  std::vector<ModMatrix> g2;
  for (const auto& a : sl2) g2.push_back(embed_block(a, 4, 1));
  wit.predicted_dim_w = static_cast<int>(g2.size()) / q;

  for (int n = 0; n < q; ++n) {
    wit.n_fixed_residual = std::max(wit.n_fixed_residual, (rep.apply(elementary(2, 3, n, 4, q), v) - v).norm());
  }

  CMatrix orbit(rep.dim(), static_cast<Eigen::Index>(g2.size()));
  for (std::size_t k = 0; k < g2.size(); ++k) orbit.col(static_cast<Eigen::Index>(k)) = rep.apply(g2[k], v);
  const CMatrix gram = orbit.adjoint() * orbit;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
  wit.dim_w = static_cast<int>((es.eigenvalues().array() > kGramRankTol).count());
  if (wit.dim_w != wit.predicted_dim_w) {
    throw PipelineAssertion("dim W = " + std::to_string(wit.dim_w) + " but |G2|/|N| = " +
                            std::to_string(wit.predicted_dim_w));
  }

  // Right cosets N g are indexed by the bottom row (c, d) of the SL2 block;
  // rho(g^{-1}) v carries the <[0;y;z]>-character (y, z) -> (d y + c z).
  const CMatrix y_gen = rep(elementary(3, 4, 1, 4, q));
  const CMatrix z_gen = rep(elementary(2, 4, 1, 4, q));
  std::set<std::pair<int, int>> rows_seen;
  std::set<std::pair<int, int>> labels_seen;
  bool labels_ok = true;
  for (const auto& a : sl2) {
    const std::pair<int, int> row{a(1, 0), a(1, 1)};
    if (!rows_seen.insert(row).second) continue;
    const CVector u = rep.apply(invert(embed_block(a, 4, 1)), v);
    const std::pair<int, int> label{recover_frequency(y_gen, u, q), recover_frequency(z_gen, u, q)};
    if (label != std::pair<int, int>{row.second, row.first}) labels_ok = false;
    if (!labels_seen.insert(label).second) labels_ok = false;
  }
  wit.coset_labels_distinct = labels_ok && static_cast<int>(rows_seen.size()) == wit.predicted_dim_w;

  CVector w = orbit.rowwise().sum() / static_cast<double>(g2.size());
  if (w.norm() < kGramRankTol) throw PipelineAssertion("G2-average of v vanished");
  w.normalize();

  // c maps e1 -> e2, e2 -> e3, e3 -> e1, so c SL2_block c^{-1} = G2.
  ModMatrix c(4, q);
  c.set(1, 0, 1);
  c.set(2, 1, 1);
  c.set(0, 2, 1);
  c.set(3, 3, 1);
  wit.block_conjugator = c;
  wit.w = rep.apply(invert(c), w);
  std::vector<ModMatrix> block;
  for (const auto& a : sl2) block.push_back(embed_sl2(a));
  wit.residual = max_residual(rep, block, wit.w);
  return wit;
}

InvariantWitness run_pipeline(const UnitaryRep& rep, int p, int r) {
  const int q = level_of(p, r);
  if (rep.level() != q || rep.group_dim() != 4) {
    throw DimensionMismatch("representation " + rep.descriptor() + " is not of SL4(Z/" + std::to_string(q) + ")");
  }
  std::vector<ModMatrix> block;
  for (const auto& a : sl2_elements(q)) block.push_back(embed_sl2(a));
  const Projector oracle = invariant_projector(rep, block);

  InvariantWitness wit;
  const Step1Result s1 = step1_find_Cij(rep, p, r);
  std::optional<Step2Result> s2;
  std::string reason;
  if (s1.old_rep) {
    reason = "every C_ij acts trivially";
  } else {
    try {
      s2 = step2_find_v(conjugated(rep, s1.conjugator), p, r);
    } catch (const NoPrimitiveLabel& e) {
      reason = e.what();
    }
  }

  if (s2) {
    const UnitaryRep working = conjugated(rep, s1.conjugator);
    wit = step3_invariant(working, s2->v, p, r);
    // invariant for m SL2 m^{-1} under rho; move back to the upper-left block
    wit.w = rep.apply(invert(s1.conjugator), wit.w);
    wit.rep = rep.descriptor();
    wit.step1 = s1;
    wit.step2 = std::move(s2);
  } else {
    wit.level = q;
    wit.p = p;
    wit.r = r;
    wit.rep = rep.descriptor();
    wit.fallback = true;
    wit.fallback_reason = reason;
    if (!s1.old_rep) wit.step1 = s1;
    if (oracle.rank < 1) throw PipelineAssertion("no SL2-invariant vector exists in " + rep.descriptor());
    Eigen::Index best = 0;
    oracle.matrix.colwise().norm().maxCoeff(&best);
    wit.w = oracle.matrix.col(best).normalized();
  }
  wit.residual = max_residual(rep, block, wit.w);
  wit.oracle_rank = oracle.rank;
  wit.oracle_distance = (oracle.matrix * wit.w - wit.w).norm();
  if (wit.residual > kWitnessTol || wit.oracle_distance > kWitnessTol) {
    throw PipelineAssertion("witness fails invariance (residual " + std::to_string(wit.residual) +
                            ", oracle distance " + std::to_string(wit.oracle_distance) + ")");
  }
  return wit;
}

nlohmann::json witness_to_json(const InvariantWitness& w) {
  nlohmann::json j;
  j["level"] = w.level;
  j["p"] = w.p;
  j["r"] = w.r;
  j["rep"] = w.rep;
  j["fallback"] = w.fallback;
  if (w.fallback) j["fallback_reason"] = w.fallback_reason;
  if (w.step1) {
    j["step1"] = {{"i", w.step1->i}, {"j", w.step1->j}, {"conjugator", w.step1->conjugator.to_string()}};
  } else {
    j["step1"] = nullptr;
  }
  if (w.step2) {
    const auto& s = *w.step2;
    j["xi_before"] = s.xi_before;
    j["xi_after"] = s.xi_after;
    j["sl3_conjugator"] = s.sl3_conjugator.to_string();
    j["dim_v_chi"] = s.dim_v_chi;
    j["case"] = s.case_tag == Step2Case::Case1 ? "Case 1" : "Case 2";
    j["R"] = s.R;
    j["zeta"] = s.zeta;
    j["z"] = s.z;
    j["sl2_conjugator"] = s.sl2_conjugator.to_string();
    j["h_residual"] = s.h_residual;
    j["dimW"] = w.dim_w;
    j["predicted_dimW"] = w.predicted_dim_w;
    j["n_fixed_residual"] = w.n_fixed_residual;
    j["coset_labels_distinct"] = w.coset_labels_distinct;
    j["block_conjugator"] = w.block_conjugator.to_string();
  }
  j["residual"] = w.residual;
  j["oracle_rank"] = w.oracle_rank;
  j["oracle_distance"] = w.oracle_distance;
  return j;
}

}  // namespace sl4
