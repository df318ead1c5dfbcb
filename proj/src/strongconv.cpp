#include "sl4/strongconv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace sl4 {

namespace {

std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(x, y, &out)) throw std::overflow_error("64-bit overflow in SL2(Z) product");
  return out;
}

std::int64_t checked_add(std::int64_t x, std::int64_t y) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(x, y, &out)) throw std::overflow_error("64-bit overflow in group ring sum");
  return out;
}

}  // namespace

std::string IntMat2::to_string() const {
  return "[[" + std::to_string(a) + "," + std::to_string(b) + "],[" + std::to_string(c) + "," +
         std::to_string(d) + "]]";
}

IntMat2 operator*(const IntMat2& x, const IntMat2& y) {
  return {checked_add(checked_mul(x.a, y.a), checked_mul(x.b, y.c)),
          checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.d)),
          checked_add(checked_mul(x.c, y.a), checked_mul(x.d, y.c)),
          checked_add(checked_mul(x.c, y.b), checked_mul(x.d, y.d))};
}

IntMat2 inverse(const IntMat2& x) {
  if (checked_mul(x.a, x.d) - checked_mul(x.b, x.c) != 1) throw std::domain_error("matrix not in SL2(Z)");
  return {x.d, -x.b, -x.c, x.a};
}

std::size_t IntMat2Hash::operator()(const IntMat2& m) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (std::int64_t v : {m.a, m.b, m.c, m.d}) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

std::pair<IntMat2, IntMat2> std_generators() { return {IntMat2{0, -1, 1, 0}, IntMat2{1, 1, 0, 1}}; }

GroupRingElement GroupRingElement::unit() {
  GroupRingElement e;
  e.add(IntMat2{}, 1);
  return e;
}

GroupRingElement GroupRingElement::generator_sum() {
  const auto [s, t] = std_generators();
  GroupRingElement z;
  for (const IntMat2& g : {s, inverse(s), t, inverse(t)}) z.add(g, 1);
  return z;
}

void GroupRingElement::add(const IntMat2& g, std::int64_t coeff) {
  if (coeff == 0) return;
  auto [it, fresh] = terms_.try_emplace(g, coeff);
  if (fresh) return;
  it->second = checked_add(it->second, coeff);
  if (it->second == 0) terms_.erase(it);
}

std::int64_t GroupRingElement::coeff(const IntMat2& g) const {
  const auto it = terms_.find(g);
  return it == terms_.end() ? 0 : it->second;
}

std::int64_t GroupRingElement::trace_of_square() const {
  std::int64_t acc = 0;
  for (const auto& [g, c] : terms_) acc = checked_add(acc, checked_mul(c, coeff(inverse(g))));
  return acc;
}

GroupRingElement operator*(const GroupRingElement& x, const GroupRingElement& y) {
  GroupRingElement out;
  for (const auto& [g, cg] : x.terms()) {
    for (const auto& [h, ch] : y.terms()) out.add(g * h, checked_mul(cg, ch));
  }
  return out;
}

MomentSequence moments(int n_max) {
  if (n_max < 0 || n_max > kMaxMomentOrder) {
    throw std::invalid_argument("n_max must lie in [0, " + std::to_string(kMaxMomentOrder) + "]");
  }
  const GroupRingElement z = GroupRingElement::generator_sum();
  MomentSequence ms;
  ms.a.push_back(1);
  // z is self-adjoint, so trace(z^{2n}) = sum_x c_n(x) c_n(x^{-1}) with c_n the coefficients of z^n.
  GroupRingElement power = GroupRingElement::unit();
  for (int n = 1; n <= n_max; ++n) {
    power = power * z;
    ms.a.push_back(power.trace_of_square());
  }
  return ms;
}

std::vector<double> lower_bounds(const MomentSequence& ms) {
  std::vector<double> b;
  for (int n = 1; n <= ms.n_max(); ++n) {
    b.push_back(std::exp(std::log(static_cast<double>(ms.a[n])) / (2.0 * n)));
  }
  return b;
}

bool log_convex(const MomentSequence& ms) {
  for (int n = 1; n < ms.n_max(); ++n) {
    const __int128 lhs = static_cast<__int128>(ms.a[n + 1]) * ms.a[n - 1];
    const __int128 rhs = static_cast<__int128>(ms.a[n]) * ms.a[n];
    if (lhs < rhs) return false;
  }
  return true;
}

double rep_norm(const UnitaryRep& rep) {
  const int level = rep.level();
  const ModMatrix s = embed_block(ModMatrix::from_rows(level, {{0, -1}, {1, 0}}), rep.group_dim(), 0);
  const ModMatrix t = embed_block(ModMatrix::from_rows(level, {{1, 1}, {0, 1}}), rep.group_dim(), 0);
  const CMatrix rs = rep(s);
  const CMatrix rt = rep(t);
  const CMatrix h = rs + rs.adjoint() + rt + rt.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

bool GapReport::gap_observed(double tol) const {
  const bool norms_full =
      std::all_of(rep_norms.begin(), rep_norms.end(), [tol](const RepNorm& r) { return std::abs(r.norm - 4.0) <= tol; });
  return norms_full && log_convex && !bounds.empty() && bounds.back() < 4.0;
}

GapReport gap_report(int n_max, std::span<const UnitaryRep> reps) {
  GapReport out;
  out.moments = moments(n_max);
  out.bounds = lower_bounds(out.moments);
  out.log_convex = log_convex(out.moments);
  if (out.bounds.size() >= 2) out.plateau_step = out.bounds.back() - out.bounds[out.bounds.size() - 2];
  for (const auto& r : reps) out.rep_norms.push_back({r.descriptor(), rep_norm(r)});
  return out;
}

nlohmann::json gap_report_to_json(const GapReport& report) {
  const auto [s, t] = std_generators();
  nlohmann::json j;
  j["generators"] = {{"S", s.to_string()}, {"T", t.to_string()}, {"z", "S + S^-1 + T + T^-1"}};
  j["moments"] = report.moments.a;
  j["bounds"] = report.bounds;
  j["log_convex"] = report.log_convex;
  j["plateau_step"] = report.plateau_step;
  auto& norms = j["rep_norms"] = nlohmann::json::array();
  for (const auto& r : report.rep_norms) norms.push_back({{"descriptor", r.descriptor}, {"norm", r.norm}});
  j["upper_bound"] = "strict inequality < 4 from non-amenability of SL2(Z); not certified numerically";
  return j;
}

}  // namespace sl4
