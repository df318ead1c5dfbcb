#include "sl4/invcount.hpp"

#include <algorithm>
#include <cmath>

namespace sl4 {

namespace {

std::uint64_t count_total(std::span<const std::size_t> counts) {
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

std::int64_t pair_with_trivial(const CharacterTable& t, std::span<const std::uint64_t> values,
                               std::span<const std::size_t> counts, std::int64_t bound) {
  if (counts.size() != t.class_count() || values.size() != t.class_count()) {
    throw std::invalid_argument("class distribution does not match the table");
  }
  const std::uint64_t l = t.prime;
  std::uint64_t acc = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    acc = fp::add(acc, fp::mul(counts[k] % l, values[k], l), l);
  }
  const std::uint64_t m = fp::mul(acc, fp::inv(count_total(counts) % l, l), l);
  if (m > static_cast<std::uint64_t>(bound)) {
    throw LiftOutOfRange("restriction multiplicity " + std::to_string(m) + " mod " + std::to_string(l) +
                         " exceeds " + std::to_string(bound));
  }
  return static_cast<std::int64_t>(m);
}

void fill_table_fields(RestrictionReport& rep, const GroupStore& store, const ClassData& classes,
                       const CharacterTable& table, const NamedSubgroup& sub) {
  rep.group_order = store.order();
  rep.class_count = classes.count();
  rep.subgroup_order = sub.order();
  rep.prime = table.prime;
  rep.exponent = table.exponent;
  rep.seed = table.seed;
  rep.table_check = verify_table(table);
  const auto counts = class_distribution(classes, sub.ids);
  for (std::size_t i = 0; i < table.size(); ++i) {
    rep.rows.push_back({table.characters[i].degree, restriction_multiplicity(table, i, counts)});
  }
}

RestrictionReport trivial_group_report(const std::string& group, const std::string& subgroup) {
  RestrictionReport rep;
  rep.group = group;
  rep.subgroup = subgroup;
  rep.group_order = 1;
  rep.class_count = 1;
  rep.subgroup_order = 1;
  rep.table_check = {true, true, true, true, true};
  rep.rows.push_back({1, 1});
  return rep;
}

}  // namespace

std::size_t RestrictionReport::zero_rows() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const RestrictionRow& r) { return r.multiplicity == 0; }));
}

std::int64_t restriction_multiplicity(const CharacterTable& table, std::size_t chi,
                                      std::span<const std::size_t> counts) {
  const auto& c = table.characters.at(chi);
  return pair_with_trivial(table, c.values_mod, counts, c.degree);
}

std::int64_t class_function_multiplicity(const CharacterTable& table,
                                         std::span<const std::uint64_t> values_mod,
                                         std::span<const std::size_t> counts, std::int64_t bound) {
  return pair_with_trivial(table, values_mod, counts, bound);
}

std::int64_t restriction_multiplicity_float(const CharacterTable& table, std::size_t chi,
                                            std::span<const std::size_t> counts, double* rounding_error) {
  std::complex<double> acc = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] != 0) acc += static_cast<double>(counts[k]) * evaluate_char(table, chi, k);
  }
  acc /= static_cast<double>(count_total(counts));
  const double rounded = std::round(acc.real());
  if (rounding_error) *rounding_error = std::abs(acc - std::complex<double>(rounded, 0.0));
  return static_cast<std::int64_t>(rounded);
}

std::vector<std::uint64_t> vector_permutation_character(const GroupStore& store, const ClassData& classes,
                                                        const CharacterTable& table, bool nonzero_only) {
  const int n = store.dim();
  const int q = store.modulus();
  std::vector<std::uint64_t> values(classes.count());
  std::size_t points = 1;
  for (int k = 0; k < n; ++k) points *= static_cast<std::size_t>(q);
  for (std::size_t c = 0; c < classes.count(); ++c) {
    const ModMatrix g = store.element(classes.representatives[c]);
    std::uint64_t fixed = 0;
    for (std::size_t x = nonzero_only ? 1 : 0; x < points; ++x) {
      std::vector<int> v(n);
      std::size_t rest = x;
      for (int k = 0; k < n; ++k) {
        v[k] = static_cast<int>(rest % q);
        rest /= q;
      }
      bool same = true;
      for (int row = 0; row < n && same; ++row) {
        long long s = 0;
        for (int col = 0; col < n; ++col) s += g(row, col) * v[col];
        same = reduce_mod(s, q) == v[row];
      }
      if (same) ++fixed;
    }
    values[c] = fixed % table.prime;
  }
  return values;
}

RestrictionReport verify_theorem_level(int level, const LevelOptions& options) {
  const std::string group = "SL4(Z/" + std::to_string(level) + ")";
  const std::string subgroup = "SL2_block";
  RestrictionReport rep;
  if (level == 1) {
    rep = trivial_group_report(group, subgroup);
  } else {
    const auto factors = factorize(level);
    const GroupStore store = special_linear_group(4, level, options.cap);
    const ClassData classes = conjugacy_classes(store);
    const CharacterTable table = character_table(store, classes, options.seed);
    // The upper-left block is the same coordinate pattern at any level.
    NamedSubgroup sub{SubgroupName::SL2Block, subgroup, 0, 0, 4, {}, {}};
    const GroupStore sl2 = special_linear_group(2, level, options.cap);
    for (std::size_t k = 0; k < sl2.order(); ++k) {
      sub.elements.push_back(embed_sl2(sl2.element(k)));
      sub.ids.push_back(store.index_of(sub.elements.back()));
    }
    if (factors.size() == 1) {
      sub.p = factors[0].prime;
      sub.r = factors[0].exponent;
    }
    rep.group = group;
    rep.subgroup = subgroup;
    fill_table_fields(rep, store, classes, table, sub);
  }
  rep.ok = std::all_of(rep.rows.begin(), rep.rows.end(), [](const RestrictionRow& r) { return r.has_invariant(); });
  rep.verdict = rep.ok ? "PASS" : "FAIL";
  return rep;
}

RestrictionReport find_sl3_counterexample(int p, const LevelOptions& options) {
  if (!is_prime(static_cast<std::uint64_t>(p))) throw std::invalid_argument("p must be prime");
  const GroupStore store = special_linear_group(3, p, options.cap);
  const ClassData classes = conjugacy_classes(store);
  const CharacterTable table = character_table(store, classes, options.seed);
  const NamedSubgroup sub = named_subgroup(store, SubgroupName::SL2Block, p, 1);
  RestrictionReport rep;
  rep.group = "SL3(Z/" + std::to_string(p) + ")";
  rep.subgroup = sub.label;
  fill_table_fields(rep, store, classes, table, sub);
  rep.ok = rep.zero_rows() > 0;
  rep.verdict = rep.ok ? "FOUND" : "NOT_FOUND";
  return rep;
}

nlohmann::json report_to_json(const RestrictionReport& r) {
  nlohmann::json j;
  j["group"] = r.group;
  j["subgroup"] = r.subgroup;
  j["group_order"] = r.group_order;
  j["class_count"] = r.class_count;
  j["subgroup_order"] = r.subgroup_order;
  j["prime"] = r.prime;
  j["exponent"] = r.exponent;
  j["seed"] = r.seed;
  j["table_check"] = {{"rows_mod", r.table_check.rows_mod},
                      {"columns_mod", r.table_check.columns_mod},
                      {"rows_cyclotomic", r.table_check.rows_cyclotomic},
                      {"degree_square_sum", r.table_check.degree_square_sum},
                      {"lift_consistent", r.table_check.lift_consistent}};
  auto& rows = j["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows) rows.push_back({{"degree", row.degree}, {"multiplicity", row.multiplicity}});
  j["verdict"] = r.verdict;
  return j;
}

}  // namespace sl4
