#pragma once

// Trace moments of z = S + S^{-1} + T + T^{-1} in the integer group ring of
// SL2(Z), and the operator norm of the same element in finite unitary
// representations of SL4(Z/N).

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sl4/reps.hpp"

namespace sl4 {

inline constexpr int kMaxMomentOrder = 14;

/// Exact 2x2 integer matrix; products abort with std::overflow_error.
struct IntMat2 {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  bool operator==(const IntMat2&) const = default;
  std::string to_string() const;
};

IntMat2 operator*(const IntMat2& x, const IntMat2& y);
/// Inverse in SL2(Z); throws std::domain_error when det != 1.
IntMat2 inverse(const IntMat2& x);

struct IntMat2Hash {
  std::size_t operator()(const IntMat2& m) const noexcept;
};

/// S = [[0,-1],[1,0]], T = [[1,1],[0,1]].
std::pair<IntMat2, IntMat2> std_generators();

/// Finitely supported integer combination of SL2(Z) elements; zero
/// coefficients are never stored.
class GroupRingElement {
 public:
  using Map = std::unordered_map<IntMat2, std::int64_t, IntMat2Hash>;

  GroupRingElement() = default;
  static GroupRingElement unit();
  /// S + S^{-1} + T + T^{-1}
  static GroupRingElement generator_sum();

  void add(const IntMat2& g, std::int64_t coeff);
  std::int64_t coeff(const IntMat2& g) const;
  std::size_t support_size() const { return terms_.size(); }
  const Map& terms() const { return terms_; }

  /// Coefficient at the identity.
  std::int64_t trace() const { return coeff(IntMat2{}); }
  /// sum_x c(x) c(x^{-1}) = trace of this * this.
  std::int64_t trace_of_square() const;

 private:
  Map terms_;
};

GroupRingElement operator*(const GroupRingElement& x, const GroupRingElement& y);

struct MomentSequence {
  std::vector<std::int64_t> a;  ///< a[n] = trace(z^{2n}), a[0] = 1
  int n_max() const { return static_cast<int>(a.size()) - 1; }
};

/// Throws std::invalid_argument when n_max is outside [0, 14].
MomentSequence moments(int n_max);
/// b_n = a_n^{1/(2n)} for n = 1..n_max.
std::vector<double> lower_bounds(const MomentSequence& ms);
/// a_{n+1} a_{n-1} >= a_n^2 for every interior n, compared exactly.
bool log_convex(const MomentSequence& ms);

/// Largest eigenvalue of rho(S) + rho(S)* + rho(T) + rho(T)* with S, T
/// placed in the upper-left block.
double rep_norm(const UnitaryRep& rep);

struct RepNorm {
  std::string descriptor;
  double norm = 0.0;
};

struct GapReport {
  MomentSequence moments;
  std::vector<double> bounds;
  bool log_convex = false;
  double plateau_step = 0.0;  ///< b_{n_max} - b_{n_max - 1}, 0 when n_max < 2
  std::vector<RepNorm> rep_norms;

  /// Every rep norm is 4 and the final bound sits strictly below 4.
  bool gap_observed(double tol = 1e-9) const;
};

GapReport gap_report(int n_max, std::span<const UnitaryRep> reps);
nlohmann::json gap_report_to_json(const GapReport& report);

}  // namespace sl4
