#pragma once

// Command-line front end. Every command prints one versioned JSON report on
// the output stream; diagnostics go to the error stream.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sfmkit/analysis.hpp"
#include "sfmkit/design.hpp"
#include "sfmkit/error.hpp"
#include "sfmkit/io.hpp"
#include "sfmkit/numeric.hpp"
#include "sfmkit/system.hpp"
#include "sfmkit/validation.hpp"

namespace sfmkit {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 2;
inline constexpr int file = 3;
inline constexpr int cap = 4;
inline constexpr int precondition = 5;
inline constexpr int numeric = 6;
inline constexpr int internal = 70;
}  // namespace exit_code

class UsageError : public Error {
 public:
  using Error::Error;
};

namespace detail {

struct CliOptions {
  std::string system_path;
  std::string pattern_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::size_t trials = 20;
  double tol = default_spectrum_tolerance;
  std::size_t depth = 2;
  std::size_t max_enum = default_enumeration_cap;
  std::vector<std::size_t> bisect;  // i j i' j', 1-based
  std::vector<std::size_t> cycle;   // i1 .. ik, 1-based
  std::size_t at = 0;
  std::string variant = "proof";
};

inline SystemDocument load_inputs(const CliOptions& o) {
  SystemDocument doc = load_system(o.system_path);
  if (!o.pattern_path.empty()) doc.k = load_pattern(o.pattern_path);
  if (doc.k) require_compatible(doc.system, *doc.k);
  return doc;
}

inline InformationPattern require_pattern(const SystemDocument& doc) {
  if (!doc.k) throw UsageError("no information pattern: pass --pattern or add k_nonzeros to the system document");
  return *doc.k;
}

inline Json pattern_list_json(const std::vector<InformationPattern>& family) {
  Json list = Json::array();
  for (const auto& k : family) list.push_back(nonzeros_json(k));
  return list;
}

inline Json sparsest_json(const SparsestResult& r) {
  return {{"count", r.count ? Json(*r.count) : Json(nullptr)}, {"patterns", pattern_list_json(r.patterns)}};
}

inline Json designed_pattern_json(const StructuralSystem& sys, const InformationPattern& k) {
  return {{"pattern", pattern_json(k)},
          {"nonzero_count", k.nonzero_count()},
          {"feasible", is_feasible(sys, k)}};
}

inline std::vector<std::size_t> to_zero_based(const std::vector<std::size_t>& xs, const char* what) {
  std::vector<std::size_t> out;
  for (std::size_t x : xs) {
    if (x == 0) throw UsageError(std::string(what) + " indices are 1-based");
    out.push_back(x - 1);
  }
  return out;
}

inline Json run_command(const std::string& cmd, const CliOptions& o) {
  const SystemDocument doc = load_inputs(o);
  const StructuralSystem& sys = doc.system;

  if (cmd == "check") {
    const SystemDigraph d = build_closed_loop_digraph(sys, require_pattern(doc));
    return feasibility_json(d, check_feasible(d));
  }
  if (cmd == "essential") return essentiality_json(is_essential(sys, require_pattern(doc)));
  if (cmd == "design-a" || cmd == "design-b" || cmd == "design") {
    require_identity_io(sys);
    const InformationPattern k = cmd == "design-a"   ? design_condition_a_sparsest(sys.a())
                                 : cmd == "design-b" ? design_condition_b_sparsest(sys.a())
                                                     : design_feasible_essential(sys.a());
    if (!o.out_path.empty()) save_pattern(o.out_path, k);
    return designed_pattern_json(sys, k);
  }
  if (cmd == "transform") {
    const InformationPattern k = require_pattern(doc);
    InformationPattern out;
    Json applied;
    if (!o.bisect.empty() == !o.cycle.empty()) throw UsageError("transform needs exactly one of --bisect or --cycle");
    if (!o.bisect.empty()) {
      const auto ix = to_zero_based(o.bisect, "--bisect");
      out = bisect_feedback(sys, k, ix[0], ix[1], ix[2], ix[3]);
      applied = {{"kind", "bisect"}, {"removed", {o.bisect[0], o.bisect[1]}},
                 {"added", {{o.bisect[2], o.bisect[1]}, {o.bisect[0], o.bisect[3]}}}};
    } else {
      const auto states = to_zero_based(o.cycle, "--cycle");
      const SplitVariant variant = o.variant == "statement" ? SplitVariant::statement : SplitVariant::proof;
      out = split_cycle(sys, k, states, o.at, variant);
      applied = {{"kind", "split"}, {"variant", o.variant}, {"at", o.at}, {"cycle", o.cycle}};
    }
    if (!o.out_path.empty()) save_pattern(o.out_path, out);
    const SystemDigraph d = build_closed_loop_digraph(sys, out);
    return {{"transform", applied},
            {"input", nonzeros_json(k)},
            {"pattern", pattern_json(out)},
            {"condition_a", check_condition_a(d).holds},
            {"condition_b", check_condition_b(d).has_value()}};
  }
  if (cmd == "enumerate") {
    require_identity_io(sys);
    const InformationPattern seed = doc.k ? *doc.k : design_feasible_essential(sys.a());
    const auto family = enumerate_essential_family(sys, seed, o.depth);
    return {{"seed", nonzeros_json(seed)}, {"depth", o.depth}, {"family", pattern_list_json(family)},
            {"size", family.size()}};
  }
  if (cmd == "oracle") {
    Json result = {{"sparsest_feasible", sparsest_json(sparsest_bruteforce(sys, Criterion::feasible, o.max_enum))},
                   {"sparsest_condition_a", sparsest_json(sparsest_bruteforce(sys, Criterion::condition_a, o.max_enum))},
                   {"sparsest_condition_b", sparsest_json(sparsest_bruteforce(sys, Criterion::condition_b, o.max_enum))},
                   {"essential", pattern_list_json(essential_bruteforce(sys, o.max_enum))}};
    if (doc.k) result["feasible_subpatterns"] = pattern_list_json(enumerate_feasible(sys, *doc.k, o.max_enum));
    return result;
  }
  if (cmd == "validate") {
    if (!o.seed) throw UsageError("validate requires --seed");
    const CrossValidation cv = cross_validate(sys, require_pattern(doc), o.trials, o.tol, *o.seed);
    Json modes = Json::array();
    for (const auto& z : cv.estimate.candidate_modes) modes.push_back({z.real(), z.imag()});
    return {{"structurally_feasible", cv.structurally_feasible},
            {"numeric_fixed_modes", cv.numeric_fixed_modes},
            {"agree", cv.agree},
            {"reran", cv.reran},
            {"seed", cv.seed},
            {"trials", cv.trials},
            {"tolerance", cv.tolerance},
            {"candidate_modes", modes}};
  }
  if (cmd == "export") {
    const SystemDigraph d =
        build_closed_loop_digraph(sys, doc.k ? *doc.k : InformationPattern(sys.p(), sys.m()));
    const std::string dot = export_dot(d);
    if (!o.out_path.empty()) detail::write_file(o.out_path, dot);
    return {{"dot", dot}, {"path", o.out_path.empty() ? Json(nullptr) : Json(o.out_path)}};
  }
  throw UsageError("unknown command '" + cmd + "'");
}

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structurally fixed modes: analysis and information-pattern design", "sfmkit"};
  app.require_subcommand(1);
  detail::CliOptions o;

  auto add_system = [&](CLI::App* sub) {
    sub->add_option("--system", o.system_path, "system document (JSON)")->required();
    sub->add_option("--pattern", o.pattern_path, "information pattern document; overrides k_nonzeros");
  };
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"check", "decide conditions (a) and (b) and report witnesses"},
      {"essential", "decide essentiality with per-entry deletion evidence"},
      {"design-a", "sparsest pattern satisfying condition (a)"},
      {"design-b", "sparsest pattern satisfying condition (b)"},
      {"design", "feasible essential pattern"},
      {"transform", "apply bisect or split to a pattern"},
      {"enumerate", "essential family reachable by transforms"},
      {"oracle", "exhaustive sparsest and essential patterns"},
      {"validate", "compare structural verdict with a numeric estimate"},
      {"export", "closed-loop digraph in DOT"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_system(sub);
    if (name.starts_with("design") || name == "transform" || name == "export")
      sub->add_option("--out", o.out_path, "also write the result to this path");
    if (name == "enumerate") sub->add_option("--depth", o.depth, "transform rounds")->capture_default_str();
    if (name == "oracle") sub->add_option("--max-enum", o.max_enum, "entry cap")->capture_default_str();
    if (name == "validate") {
      sub->add_option("--seed", o.seed, "random seed")->required();
      sub->add_option("--trials", o.trials, "gains per instance")->capture_default_str()->check(CLI::Range(2, 1 << 20));
      sub->add_option("--tol", o.tol, "relative spectrum tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    }
    if (name == "transform") {
      sub->add_option("--bisect", o.bisect, "i j i' j' (1-based)")->expected(4)->delimiter(',');
      sub->add_option("--cycle", o.cycle, "state indices i1..ik of the feedback cycle")->delimiter(',');
      sub->add_option("--at", o.at, "split after the l-th state");
      sub->add_option("--variant", o.variant, "split variant")
          ->check(CLI::IsMember({"proof", "statement"}))
          ->capture_default_str();
    }
  }

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_code::usage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    out << dump(report(cmd, detail::run_command(cmd, o)));
    return exit_code::ok;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_code::file;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return exit_code::file;
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return exit_code::cap;
  } catch (const InvalidArgument& e) {
    err << "precondition failed: " << e.what() << "\n";
    return exit_code::precondition;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return exit_code::numeric;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_code::internal;
  }
}

}  // namespace sfmkit
