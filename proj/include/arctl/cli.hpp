#pragma once

// Command-line front end: check, validate, stats and reduce.
//
// Exit codes: 0 the property holds / the witness is adequate / success,
// 1 the property is violated / the witness is not adequate,
// 2 usage, file, model, formula or document error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arctl/checker.hpp"
#include "arctl/epistemic.hpp"
#include "arctl/formula.hpp"
#include "arctl/model.hpp"
#include "arctl/tlace.hpp"
#include "arctl/tlace_io.hpp"

namespace arctl::cli {

enum ExitCode : int { exit_ok = 0, exit_violated = 1, exit_error = 2 };

enum class OutputFormat { xml, json, text };

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string model_path;
  std::string formula;  // text, or read from formula_path
  std::optional<std::string> formula_path;
  Dialect dialect = Dialect::arctl;
  GenerationParams params;
  OutputFormat format = OutputFormat::xml;
  std::optional<std::string> output_path;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError("cannot write '" + path + "'");
  out << text;
  if (!out) throw CliError("cannot write '" + path + "'");
}

/// Comma-separated subset of EaX, EaU, EaG; "none" or an empty list
/// disables every expansion.
inline std::set<BranchOp> parse_branch_ops(const std::string& list) {
  std::set<BranchOp> ops;
  if (list == "none") return ops;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "EaX") ops.insert(BranchOp::eax);
    else if (item == "EaU") ops.insert(BranchOp::eau);
    else if (item == "EaG") ops.insert(BranchOp::eag);
    else throw CliError("unknown branch operator '" + item + "' (expected EaX, EaU or EaG)");
  }
  return ops;
}

inline std::string render(const TlaceDocument& doc, OutputFormat f) {
  switch (f) {
    case OutputFormat::xml: return to_xml(doc);
    case OutputFormat::json: return to_json(doc);
    case OutputFormat::text: return to_text(doc);
  }
  return {};
}

inline std::string describe(const TlaceStats& s) {
  auto plural = [](std::size_t n, const char* one, const char* many) {
    return std::to_string(n) + " " + (n == 1 ? one : many);
  };
  return plural(s.node_count, "node", "nodes") + ", " +
         plural(s.branch_count, "branch", "branches") + ", depth " +
         std::to_string(s.max_temporal_depth);
}

/// A model file, or a multi-agent file reduced to its MTS.
struct LoadedModel {
  MixedTransitionSystem model;
  bool from_mas = false;
};

inline LoadedModel load_any_model(const std::string& path) {
  const std::string text = read_file(path);
  if (looks_like_mas(text)) return {reduce_mas(load_mas(text)).model, true};
  return {load_model(text), false};
}

/// The ARCTL formula to check: CTLK input is reduced.
inline Formula prepare_formula(const std::string& text, Dialect dialect, bool from_mas) {
  Formula f = parse_formula(text, dialect);
  if (dialect == Dialect::ctlk) {
    if (!from_mas) throw CliError("the ctlk dialect requires a multi-agent model");
    return reduce_ctlk(f);
  }
  return f;
}

inline int cmd_check(const RunConfig& cfg, std::ostream& out) {
  LoadedModel lm = load_any_model(cfg.model_path);
  const std::string text = cfg.formula_path ? read_file(*cfg.formula_path) : cfg.formula;
  const Formula f = prepare_formula(text, cfg.dialect, lm.from_mas);
  const Verdict v = check(lm.model, f, cfg.params);
  if (v.holds) {
    out << "holds: " << to_string(f) << "\n";
    return exit_ok;
  }
  const TlaceNode& n = *v.counterexample;
  out << "violated at state " << lm.model.state_name(*v.witness_state) << ": " << to_string(f)
      << "\n";
  out << "counter-example: " << describe(stats(n)) << "\n";
  const TlaceDocument doc{v.explained, n, make_context(lm.model, n)};
  const std::string rendered = render(doc, cfg.format);
  if (cfg.output_path) {
    write_file(*cfg.output_path, rendered);
    out << "written to " << *cfg.output_path << "\n";
  } else {
    out << rendered;
  }
  return exit_violated;
}

/// Without a formula the document's own formula attribute is the one the
/// witness must explain. With one, the witness must explain its negation
/// unless `as_witness` is set.
inline int cmd_validate(const std::string& model_path, const std::string& tlace_path,
                        const std::optional<std::string>& formula, Dialect dialect,
                        bool as_witness, const std::optional<std::string>& state,
                        std::ostream& out) {
  LoadedModel lm = load_any_model(model_path);
  const TlaceDocument doc = read_tlace(read_file(tlace_path));
  Formula phi = Formula::truth();
  if (formula) {
    const Formula f = prepare_formula(*formula, dialect, lm.from_mas);
    phi = as_witness ? to_nnf(f) : negate_nnf(f);
  } else if (doc.formula) {
    phi = *doc.formula;
    if (!is_nnf(phi)) phi = to_nnf(phi);
  } else {
    throw CliError("the document names no formula; pass one");
  }
  const ValidationResult r = validate(doc.root, lm.model, phi, state);
  if (r.ok()) {
    out << "adequate: " << describe(stats(doc.root)) << "\n";
    return exit_ok;
  }
  out << "not adequate: " << to_string(r.clause) << " fails at " << r.location << ": "
      << r.message << "\n";
  return exit_violated;
}

inline int cmd_stats(const std::string& tlace_path, OutputFormat format, std::ostream& out) {
  const TlaceDocument doc = read_tlace(read_file(tlace_path));
  const TlaceStats s = stats(doc.root);
  switch (format) {
    case OutputFormat::text:
      out << describe(s) << "\n";
      break;
    case OutputFormat::json: {
      Json j = Json::object();
      j["node_count"] = s.node_count;
      j["branch_count"] = s.branch_count;
      j["max_temporal_depth"] = s.max_temporal_depth;
      out << j.dump(2) << "\n";
      break;
    }
    case OutputFormat::xml:
      out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<stats node_count=\"" << s.node_count
          << "\" branch_count=\"" << s.branch_count << "\" max_temporal_depth=\""
          << s.max_temporal_depth << "\"/>\n";
      break;
  }
  return exit_ok;
}

inline int cmd_reduce(const std::string& mas_path, const std::optional<std::string>& output,
                      std::ostream& out) {
  const ReductionResult r = reduce_mas(load_mas(read_file(mas_path)));
  const std::string text = save_model(r.model);
  if (output) {
    write_file(*output, text);
    out << "reduced model: " << r.model.state_count() << " states, "
        << r.model.transition_count() << " transitions, written to " << *output << "\n";
  } else {
    out << text;
  }
  return exit_ok;
}

/// Runs one command; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explicit-state ARCTL model checker with tree-like annotated counter-examples",
               "arctl"};
  app.require_subcommand(1);

  const std::map<std::string, Dialect> dialects{{"arctl", Dialect::arctl},
                                                {"ctlk", Dialect::ctlk}};
  const std::map<std::string, OutputFormat> formats{
      {"xml", OutputFormat::xml}, {"json", OutputFormat::json}, {"text", OutputFormat::text}};

  RunConfig cfg;
  std::string explain_ops;
  bool have_ops = false;
  std::size_t max_depth = 0;
  auto* check_cmd = app.add_subcommand("check", "check a property; emit a counter-example");
  check_cmd->add_option("model", cfg.model_path, "model or multi-agent file")->required();
  auto* formula_opt = check_cmd->add_option("formula", cfg.formula, "property");
  auto* formula_file = check_cmd->add_option("--formula-file", cfg.formula_path, "read the property from a file");
  formula_opt->excludes(formula_file);
  check_cmd->add_option("--dialect", cfg.dialect, "arctl or ctlk")
      ->transform(CLI::CheckedTransformer(dialects, CLI::ignore_case));
  auto* ops_opt = check_cmd->add_option("--explain-ops", explain_ops, "branches to expand: EaX,EaU,EaG or none");
  auto* depth_opt = check_cmd->add_option("--max-depth", max_depth, "deepest expanded branch level");
  check_cmd->add_option("--format", cfg.format, "xml, json or text")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  check_cmd->add_option("--output", cfg.output_path, "counter-example file");

  std::string v_model, v_tlace;
  std::optional<std::string> v_formula, v_state;
  Dialect v_dialect = Dialect::arctl;
  bool v_witness = false;
  auto* validate_cmd = app.add_subcommand("validate", "check a TLACE for adequacy");
  validate_cmd->add_option("model", v_model, "model or multi-agent file")->required();
  validate_cmd->add_option("tlace", v_tlace, "TLACE document")->required();
  validate_cmd->add_option("formula", v_formula, "the checked property");
  validate_cmd->add_option("--dialect", v_dialect, "arctl or ctlk")
      ->transform(CLI::CheckedTransformer(dialects, CLI::ignore_case));
  validate_cmd->add_flag("--witness", v_witness, "the formula is the explained one, not the property");
  validate_cmd->add_option("--state", v_state, "required root state");

  std::string s_tlace;
  OutputFormat s_format = OutputFormat::text;
  auto* stats_cmd = app.add_subcommand("stats", "size of a TLACE");
  stats_cmd->add_option("tlace", s_tlace, "TLACE document")->required();
  stats_cmd->add_option("--format", s_format, "text, json or xml")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  std::string r_mas;
  std::optional<std::string> r_out;
  auto* reduce_cmd = app.add_subcommand("reduce", "reduce a multi-agent system to an MTS");
  reduce_cmd->add_option("mas", r_mas, "multi-agent file")->required();
  reduce_cmd->add_option("--output", r_out, "output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "arctl: " << e.what() << "\n";
    return exit_error;
  }
  have_ops = ops_opt->count() > 0;

  try {
    if (*check_cmd) {
      if (!formula_opt->count() && !cfg.formula_path) throw CliError("no property given");
      if (have_ops) cfg.params.branch_ops = parse_branch_ops(explain_ops);
      if (depth_opt->count()) cfg.params.max_depth = max_depth;
      return cmd_check(cfg, out);
    }
    if (*validate_cmd)
      return cmd_validate(v_model, v_tlace, v_formula, v_dialect, v_witness, v_state, out);
    if (*stats_cmd) return cmd_stats(s_tlace, s_format, out);
    if (*reduce_cmd) return cmd_reduce(r_mas, r_out, out);
  } catch (const std::exception& e) {
    err << "arctl: " << e.what() << "\n";
    return exit_error;
  }
  return exit_error;
}

}  // namespace arctl::cli
