#include "sl4/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sl4/invcount.hpp"
#include "sl4/pipeline.hpp"
#include "sl4/reps.hpp"
#include "sl4/strongconv.hpp"

namespace sl4::cli {

namespace {

struct LevelRep {
  int level;
  std::string descriptor;
};

const std::vector<LevelRep>& default_reps() {
  static const std::vector<LevelRep> reps{{2, "nonzero:Z2^4"}, {4, "Z4^4"}};
  return reps;
}

PrimePower prime_power_level(int level) {
  const auto f = factorize(level);
  if (f.size() != 1) throw std::invalid_argument("level " + std::to_string(level) + " is not a prime power");
  return f[0];
}

nlohmann::json envelope(const std::string& command, std::uint64_t seed) {
  return {{"tool", kToolName}, {"version", kToolVersion}, {"command", command}, {"seed", seed}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

/// "-" prints to out, anything else is a file; an empty target prints nothing.
void emit_json(const nlohmann::json& j, const std::string& target, std::ostream& out) {
  if (target.empty()) return;
  if (target == "-") {
    out << j.dump(2) << "\n";
  } else {
    write_text(target, j.dump(2) + "\n");
  }
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw DescriptorError(path + ": " + e.what());
  }
}

std::string fixed(double x, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << std::scientific << x;
  return os.str();
}

StageResult identities_stage() {
  StageResult s{"identities", "step-1 matrix products and congruence-kernel isomorphism", true, "", {}};
  auto& products = s.data["products"] = nlohmann::json::array();
  for (auto [p, r] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}, {5, 2}}) {
    const bool ok = verify_step1_identities(p, r);
    products.push_back({{"p", p}, {"r", r}, {"ok", ok}});
    s.ok = s.ok && ok;
  }
  auto& kernels = s.data["kernel"] = nlohmann::json::array();
  for (auto [p, r] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}}) {
    const CongruenceKernelCheck c = check_congruence_kernel(p, r);
    kernels.push_back({{"p", p},
                       {"r", r},
                       {"trace_zero", c.trace_zero_count},
                       {"distinct_images", c.distinct_images},
                       {"kernel", c.kernel_count},
                       {"homomorphism", c.homomorphism},
                       {"ok", c.holds()}});
    s.ok = s.ok && c.holds();
  }
  s.detail = "products at 4, 8, 9, 25; kernel isomorphism at 4, 9";
  return s;
}

StageResult restriction_stage(const std::string& name, const std::string& claim, const RestrictionReport& r,
                              bool expect_all_positive) {
  StageResult s{name, claim, false, "", report_to_json(r)};
  const bool table_ok = r.table_check.all();
  s.ok = table_ok && r.ok;
  std::ostringstream d;
  d << r.group << " order " << r.group_order << ", " << r.class_count << " classes, l=" << r.prime
    << ", e=" << r.exponent << ", table " << (table_ok ? "ok" : "BAD") << ", "
    << (expect_all_positive ? "zero multiplicities " : "characters without invariants ") << r.zero_rows();
  s.detail = d.str();
  return s;
}

/// strict: the constructive route must succeed without the projector fallback.
StageResult pipeline_stage(const LevelRep& lr, bool strict) {
  const PrimePower pp = prime_power_level(lr.level);
  const UnitaryRep rep = parse_rep(lr.descriptor, lr.level);
  const InvariantWitness w = run_pipeline(rep, static_cast<int>(pp.prime), pp.exponent);
  StageResult s{"pipeline:" + std::to_string(lr.level), "constructive SL2-invariant vector", false, "",
                witness_to_json(w)};
  const bool constructive = !w.fallback && w.dim_w == w.predicted_dim_w && w.coset_labels_distinct;
  s.ok = w.residual <= kWitnessTol && w.oracle_distance <= kWitnessTol && (constructive || (!strict && w.fallback));
  s.detail = lr.descriptor + " dim " + std::to_string(rep.dim()) + ", ";
  if (w.fallback) {
    s.detail += "projector fallback (" + w.fallback_reason + ")";
  } else {
    s.detail += "dimW " + std::to_string(w.dim_w) + "/" + std::to_string(w.predicted_dim_w);
  }
  s.detail += ", residual " + fixed(w.residual, 2);
  return s;
}

std::vector<UnitaryRep> build_level_reps(const std::vector<LevelRep>& list) {
  std::vector<UnitaryRep> reps;
  for (const auto& lr : list) reps.push_back(parse_rep(lr.descriptor, lr.level));
  return reps;
}

StageResult strongconv_stage(int nmax, const std::vector<UnitaryRep>& reps) {
  const GapReport g = gap_report(nmax, reps);
  StageResult s{"strongconv", "finite norms equal 4 while regular-representation moment bounds stay below 4",
                false, "", gap_report_to_json(g)};
  s.ok = g.gap_observed() && g.plateau_step < 0.05;
  std::ostringstream d;
  d << std::fixed << std::setprecision(6) << "b_" << nmax << "=" << (g.bounds.empty() ? 0.0 : g.bounds.back())
    << ", step " << g.plateau_step << ", norms";
  for (const auto& r : g.rep_norms) d << " " << std::setprecision(12) << r.norm;
  s.detail = d.str();
  return s;
}

nlohmann::json stages_json(const std::vector<StageResult>& stages) {
  auto arr = nlohmann::json::array();
  for (const auto& s : stages) {
    arr.push_back({{"stage", s.name}, {"claim", s.claim}, {"status", s.ok ? "PASS" : "FAIL"}, {"data", s.data}});
  }
  return arr;
}

void print_stages(const std::vector<StageResult>& stages, std::ostream& out) {
  for (const auto& s : stages) {
    out << std::left << std::setw(16) << s.name << std::setw(6) << (s.ok ? "PASS" : "FAIL") << s.detail << "\n";
  }
}

std::vector<LevelRep> reps_from_config(const nlohmann::json& config) {
  const nlohmann::json& list = config.is_array() ? config : config.at("reps");
  std::vector<LevelRep> out;
  for (const auto& item : list) {
    if (!item.contains("level") || !item.contains("rep")) throw DescriptorError("rep entries need level and rep");
    const auto& r = item.at("rep");
    out.push_back({item.at("level").get<int>(), r.is_string() ? r.get<std::string>() : r.dump()});
  }
  return out;
}

}  // namespace

std::vector<StageResult> verify_all(const VerifyAllOptions& options) {
  const LevelOptions level_opts{options.cap, options.seed};
  // Fail before any stage runs when the cap cannot hold the groups to enumerate.
  const std::uint64_t needed = sl_order_formula(4, options.stretch_sl4_mod3 ? 3 : 2);
  if (options.cap < needed) {
    throw EnumerationCapExceeded("enumeration cap " + std::to_string(options.cap) + " is below the group order " +
                                 std::to_string(needed));
  }
  std::vector<StageResult> stages;
  stages.push_back(identities_stage());
  stages.push_back(restriction_stage("theorem:2", "every irreducible has an SL2 block invariant",
                                     verify_theorem_level(2, level_opts), true));
  if (options.stretch_sl4_mod3) {
    stages.push_back(restriction_stage("theorem:3", "every irreducible has an SL2 block invariant",
                                       verify_theorem_level(3, level_opts), true));
  }
  stages.push_back(restriction_stage("counterexample", "SL3(Z/2) has irreducibles without SL2 invariants",
                                     find_sl3_counterexample(2, level_opts), false));
  for (const auto& lr : default_reps()) stages.push_back(pipeline_stage(lr, true));
  stages.push_back(strongconv_stage(options.nmax, build_level_reps(default_reps())));
  return stages;
}

std::pair<int, int> parse_group_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (text.size() < 5 || text.substr(0, 2) != "SL" || colon == std::string::npos) {
    throw std::invalid_argument("group spec must look like SL3:2, got '" + text + "'");
  }
  try {
    std::size_t used = 0;
    const int n = std::stoi(text.substr(2, colon - 2), &used);
    if (used != colon - 2) throw std::invalid_argument("");
    const int modulus = std::stoi(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument("");
    if (n < 1 || n > kMaxDim || modulus < 2 || modulus > kMaxModulus) throw std::invalid_argument("");
    return {n, modulus};
  } catch (const std::logic_error&) {
    throw std::invalid_argument("bad group spec '" + text + "'");
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-level verification of SL2-invariant vectors in representations of SL4(Z/N)", kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::size_t cap = kDefaultEnumerationCap;
  std::uint64_t seed = kDefaultSeed;
  std::string json_target;
  int level = 2;
  int nmax = 12;
  std::string rep_text;
  std::string group_text = "SL4:2";
  std::string csv_path;
  std::string reps_path;
  std::string cache_dir = ".sl4cache";
  bool stretch = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--cap", cap, "element cap for group enumeration")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for eigenspace splitting");
    sub->add_option("--json", json_target, "write the JSON report to a file, '-' for stdout");
  };

  CLI::App* verify = app.add_subcommand("verify-all", "run every check in order");
  common(verify);
  verify->add_option("--nmax", nmax, "moment order")->check(CLI::Range(1, kMaxMomentOrder));
  verify->add_flag("--stretch-sl4-mod3", stretch, "also run the restriction count for SL4(Z/3)");

  CLI::App* chartab = app.add_subcommand("chartab", "character table of SL_n(Z/N)");
  common(chartab);
  chartab->add_option("--group", group_text, "group, e.g. SL3:2");
  chartab->add_option("--csv", csv_path, "CSV output path");

  CLI::App* invariants = app.add_subcommand("invariants", "SL2 block restriction multiplicities for SL4(Z/N)");
  common(invariants);
  invariants->add_option("--level", level, "N")->check(CLI::Range(1, kMaxModulus));

  CLI::App* counter = app.add_subcommand("counterexample", "SL3(Z/p) irreducibles without SL2 invariants");
  common(counter);
  counter->add_option("--level", level, "prime p");

  CLI::App* pipeline = app.add_subcommand("pipeline", "constructive invariant vector for one representation");
  common(pipeline);
  pipeline->add_option("--level", level, "p^r")->check(CLI::Range(2, kMaxModulus));
  pipeline->add_option("--rep", rep_text, "descriptor: JSON, Z4^4, nonzero:Z2^4, cosets:G1, trivial")->required();

  CLI::App* strong = app.add_subcommand("strongconv", "moment bounds versus finite representation norms");
  common(strong);
  strong->add_option("--nmax", nmax, "moment order")->check(CLI::Range(0, kMaxMomentOrder));
  strong->add_option("--reps", reps_path, "JSON file: [{\"level\": N, \"rep\": descriptor}, ...]");
  strong->add_option("--out", json_target, "report path (same as --json)");

  CLI::App* cache = app.add_subcommand("cache", "enumerate a group and store it in the binary cache");
  common(cache);
  cache->add_option("--group", group_text, "group, e.g. SL4:2");
  cache->add_option("--dir", cache_dir, "cache directory");

  std::vector<std::string> argv_store{kToolName};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kVerified : kOperationalError;
  }

  try {
    if (verify->parsed()) {
      const auto stages = verify_all({cap, seed, nmax, stretch});
      print_stages(stages, out);
      const auto failed = std::find_if(stages.begin(), stages.end(), [](const StageResult& s) { return !s.ok; });
      nlohmann::json j = envelope("verify-all", seed);
      j["cap"] = cap;
      j["stages"] = stages_json(stages);
      j["verdict"] = failed == stages.end() ? "PASS" : "FAIL";
      emit_json(j, json_target, out);
      if (failed != stages.end()) {
        err << "CRITICAL: stage " << failed->name << " failed\n";
        return kVerdictFailed;
      }
      out << "all stages PASS\n";
      return kVerified;
    }

    if (chartab->parsed()) {
      const auto [n, modulus] = parse_group_spec(group_text);
      const GroupStore store = special_linear_group(n, modulus, cap);
      const ClassData classes = conjugacy_classes(store);
      const CharacterTable table = character_table(store, classes, seed);
      const OrthogonalityCheck check = verify_table(table);
      nlohmann::json j = envelope("chartab", seed);
      j["group"] = group_text;
      j["claim"] = "character table by eigenspaces of class sums";
      j["table"] = table_to_json(table);
      j["orthogonality"] = check.all();
      if (!csv_path.empty()) write_text(csv_path, table_to_csv(table));
      if (json_target.empty() && csv_path.empty()) out << table_to_csv(table);
      emit_json(j, json_target, out);
      return check.all() ? kVerified : kVerdictFailed;
    }

    if (invariants->parsed() || counter->parsed()) {
      const bool inv = invariants->parsed();
      const RestrictionReport r =
          inv ? verify_theorem_level(level, {cap, seed}) : find_sl3_counterexample(level, {cap, seed});
      const StageResult s =
          inv ? restriction_stage("invariants", "every irreducible has an SL2 block invariant", r, true)
              : restriction_stage("counterexample", "SL3(Z/p) has irreducibles without SL2 invariants", r, false);
      print_stages({s}, out);
      for (std::size_t k = 0; k < r.rows.size(); ++k) {
        out << "  chi" << std::setw(3) << std::left << k << " degree " << std::setw(6) << r.rows[k].degree
            << " multiplicity " << r.rows[k].multiplicity << "\n";
      }
      nlohmann::json j = envelope(inv ? "invariants" : "counterexample", seed);
      j["claim"] = s.claim;
      j["report"] = s.data;
      j["status"] = s.ok ? "PASS" : "FAIL";
      emit_json(j, json_target, out);
      return s.ok ? kVerified : kVerdictFailed;
    }

    if (pipeline->parsed()) {
      const StageResult s = pipeline_stage({level, rep_text}, false);
      print_stages({s}, out);
      nlohmann::json j = envelope("pipeline", seed);
      j["claim"] = s.claim;
      j["witness"] = s.data;
      j["status"] = s.ok ? "PASS" : "FAIL";
      emit_json(j, json_target, out);
      return s.ok ? kVerified : kVerdictFailed;
    }

    if (strong->parsed()) {
      const std::vector<LevelRep> list = reps_path.empty() ? default_reps() : reps_from_config(read_json_file(reps_path));
      const StageResult s = strongconv_stage(nmax, build_level_reps(list));
      print_stages({s}, out);
      nlohmann::json j = envelope("strongconv", seed);
      j["claim"] = s.claim;
      j.update(s.data);
      j["status"] = s.ok ? "PASS" : "FAIL";
      emit_json(j, json_target, out);
      return s.ok ? kVerified : kVerdictFailed;
    }

    if (cache->parsed()) {
      const auto [n, modulus] = parse_group_spec(group_text);
      const auto gens = elementary_generators(n, modulus);
      std::filesystem::create_directories(cache_dir);
      const auto path = cache_path(cache_dir, gens);
      bool hit = false;
      std::size_t order = 0;
      if (std::filesystem::exists(path)) {
        const GroupStore g = load_group(path, gens);
        if (g.dim() != n || g.modulus() != modulus) throw std::runtime_error(path.string() + " holds another group");
        order = g.order();
        hit = true;
      } else {
        const GroupStore g = special_linear_group(n, modulus, cap);
        save_group(g, path);
        order = g.order();
      }
      out << group_text << " order " << order << (hit ? " loaded from " : " written to ") << path.string() << "\n";
      nlohmann::json j = envelope("cache", seed);
      j["group"] = group_text;
      j["order"] = order;
      j["path"] = path.string();
      j["hit"] = hit;
      emit_json(j, json_target, out);
      return order == sl_order_formula(n, modulus) ? kVerified : kVerdictFailed;
    }
  } catch (const PipelineAssertion& e) {
    err << "CRITICAL: " << e.what() << "\n";
    return kVerdictFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kOperationalError;
  }
  return kOperationalError;
}

}  // namespace sl4::cli
