#pragma once

// Command-line driver. Reports go to `out`; diagnostics and usage text go to `err`.
//
// Exit codes: 0 clean, 1 findings (validation errors or lints) present,
// 2 an input file failed to parse, 3 usage error.

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "fisa/builtin_catalog.hpp"
#include "fisa/dsl.hpp"
#include "fisa/engine.hpp"
#include "fisa/report.hpp"
#include "fisa/trace.hpp"

namespace fisa::cli {

enum ExitCode : int { kOk = 0, kFindings = 1, kParseFailure = 2, kUsage = 3 };

namespace detail {

struct PipelineOptions {
  std::string model_path;
  std::string catalog_path;
  std::string overlay_path;
  std::string modes = "inversion,reaction";
};

struct Loaded {
  SystemModel model;
  Catalog catalog;
  std::optional<Overlay> overlay;
  Diagnostics catalog_diagnostics;
};

inline std::optional<std::string> read_file(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << path << ": error IO_ERROR: cannot open file\n";
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void print(std::ostream& err, const Diagnostics& diags) {
  for (const auto& d : diags) err << format_diagnostic(d) << '\n';
}

inline std::optional<ConstraintModes> parse_modes(const std::string& text) {
  ConstraintModes m{false, false};
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "inversion")
      m.inversion = true;
    else if (item == "reaction")
      m.reaction = true;
    else
      return std::nullopt;
  }
  if (m.count() == 0) return std::nullopt;
  return m;
}

// Parses every input; returns an exit code on failure.
inline std::variant<Loaded, int> load(const PipelineOptions& opts, std::ostream& err) {
  Loaded l;
  auto model_text = read_file(opts.model_path, err);
  if (!model_text) return kParseFailure;
  auto model = dsl::parse_model(*model_text, opts.model_path);
  if (!model) {
    print(err, model.diagnostics);
    return kParseFailure;
  }
  l.model = *model.value;

  if (opts.catalog_path.empty()) {
    l.catalog = builtin_guideline();
  } else {
    auto text = read_file(opts.catalog_path, err);
    if (!text) return kParseFailure;
    auto cat = dsl::read_catalog(*text, opts.catalog_path);
    if (!cat) {
      print(err, cat.diagnostics);
      return kParseFailure;
    }
    l.catalog = *cat.value;
    l.catalog_diagnostics = std::move(cat.diagnostics);
  }

  if (!opts.overlay_path.empty()) {
    auto text = read_file(opts.overlay_path, err);
    if (!text) return kParseFailure;
    auto ov = dsl::parse_overlay(*text, opts.overlay_path);
    if (!ov) {
      print(err, ov.diagnostics);
      return kParseFailure;
    }
    l.overlay = *ov.value;
  }
  return l;
}

// Catalog validation findings re-surface from the pipeline without source
// positions; borrow them from the parse.
inline void attach_positions(Diagnostics& diags, const Diagnostics& positioned) {
  for (auto& d : diags) {
    if (d.position) continue;
    for (const auto& p : positioned)
      if (p.position && p.code == d.code && p.subject_id == d.subject_id && p.message == d.message) {
        d.position = p.position;
        break;
      }
  }
}

struct Run {
  Analysis analysis;
  TraceGraph graph;
  Diagnostics lints;
};

inline Run run(const Loaded& l, ConstraintModes modes) {
  Run r;
  r.analysis = run_analysis(l.model, l.catalog, l.overlay ? &*l.overlay : nullptr, modes);
  attach_positions(r.analysis.diagnostics, l.catalog_diagnostics);
  r.graph = build_trace_graph(r.analysis);
  r.lints = collect_lints(r.analysis, r.graph);
  return r;
}

inline int findings_exit(const Diagnostics& lints, std::ostream& err) {
  print(err, lints);
  std::size_t errors = 0;
  for (const auto& d : lints) errors += d.is_error() ? 1 : 0;
  if (!lints.empty()) err << errors << " error(s), " << lints.size() - errors << " warning(s)\n";
  return lints.empty() ? kOk : kFindings;
}

inline int write_output(const std::string& text, const std::string& out_path, std::ostream& out, std::ostream& err) {
  if (out_path.empty()) {
    out << text;
    return kOk;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    err << out_path << ": error IO_ERROR: cannot write file\n";
    return kUsage;
  }
  f << text;
  return kOk;
}

inline void print_tree(const TraceGraph& g, const TraceNode& node, TraceDirection dir, int depth, std::ostream& out) {
  auto edges = dir == TraceDirection::up ? g.outgoing(node) : g.incoming(node);
  std::vector<const TraceEdge*> sorted(edges.begin(), edges.end());
  std::stable_sort(sorted.begin(), sorted.end(), [&](const TraceEdge* a, const TraceEdge* b) {
    const auto& na = dir == TraceDirection::up ? a->to : a->from;
    const auto& nb = dir == TraceDirection::up ? b->to : b->from;
    return natural_less(na.id, nb.id);
  });
  for (const TraceEdge* e : sorted) {
    const TraceNode& next = dir == TraceDirection::up ? e->to : e->from;
    out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << "<" << to_string(e->label) << "> "
        << to_string(next.kind) << ' ' << next.id << '\n';
    print_tree(g, next, dir, depth + 1, out);
  }
}

}  // namespace detail

inline int cli_main(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Security analysis of functional interaction structures", "fisa"};
  app.require_subcommand(1);

  detail::PipelineOptions opts;
  std::string format = "json", out_path, from, direction = "up", dot_flavor;

  auto add_pipeline = [&](CLI::App* sub) {
    sub->add_option("model", opts.model_path, "System model (*.fis)")->required();
    sub->add_option("--catalog", opts.catalog_path, "Guideline catalog (*.cat); built-in guideline if omitted");
    sub->add_option("--overlay", opts.overlay_path, "Refinement overlay (*.ovl)");
    sub->add_option("--modes", opts.modes, "Constraint derivation modes: inversion,reaction");
  };

  auto* validate = app.add_subcommand("validate", "Parse and validate all inputs, print diagnostics");
  add_pipeline(validate);

  auto* analyze = app.add_subcommand("analyze", "Run the full analysis and emit a report");
  add_pipeline(analyze);
  analyze->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "md"}));
  analyze->add_option("--out", out_path, "Write the report to a file instead of stdout");

  auto* trace = app.add_subcommand("trace", "Print the ancestors or descendants of a trace node");
  add_pipeline(trace);
  trace->add_option("--from", from, "Node id, e.g. SC-1")->required();
  trace->add_option("--direction", direction, "up (why it exists) or down (what depends on it)")
      ->check(CLI::IsMember({"up", "down"}));

  auto* report = app.add_subcommand("report", "Emit a Graphviz DOT rendering");
  add_pipeline(report);
  report->add_option("--dot", dot_flavor, "trace or fis")->required()->check(CLI::IsMember({"trace", "fis"}));
  report->add_option("--out", out_path, "Write the graph to a file instead of stdout");

  auto* catalog = app.add_subcommand("catalog", "Catalog utilities");
  auto* exporter = catalog->add_subcommand("export", "Print the built-in guideline catalog");
  catalog->require_subcommand(1);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (auto* sub : {validate, analyze, trace, report, catalog})
      if (sub->parsed()) failing = sub;
    err << failing->help();
    return kUsage;
  }

  if (exporter->parsed()) {
    out << dsl::serialize_catalog(builtin_guideline());
    return kOk;
  }

  auto modes = detail::parse_modes(opts.modes);
  if (!modes) {
    err << "error: --modes expects a comma-separated subset of inversion,reaction\n";
    return kUsage;
  }

  auto loaded = detail::load(opts, err);
  if (auto* code = std::get_if<int>(&loaded)) return *code;
  const auto& inputs = std::get<detail::Loaded>(loaded);
  auto r = detail::run(inputs, *modes);

  if (validate->parsed()) return detail::findings_exit(r.lints, err);

  if (analyze->parsed()) {
    std::string text = format == "md" ? emit_markdown(r.analysis, r.graph) : emit_json(r.analysis, r.graph);
    if (int rc = detail::write_output(text, out_path, out, err); rc != kOk) return rc;
    return detail::findings_exit(r.lints, err);
  }

  if (report->parsed()) {
    std::string text = dot_flavor == "fis" ? emit_dot_fis(r.analysis.model) : emit_dot_trace(r.graph);
    if (int rc = detail::write_output(text, out_path, out, err); rc != kOk) return rc;
    return detail::findings_exit(r.lints, err);
  }

  // trace
  auto node = r.graph.resolve(from);
  if (!node) {
    err << "error NODE_NOT_FOUND: no trace node '" << from << "'\n";
    return kUsage;
  }
  auto dir = direction == "down" ? TraceDirection::down : TraceDirection::up;
  TraceGraph sub = trace_closure(r.graph, *node, dir);
  out << to_string(node->kind) << ' ' << node->id << '\n';
  detail::print_tree(sub, *node, dir, 1, out);
  return detail::findings_exit(r.lints, err);
}

inline int cli_main(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(std::move(args), out, err);
}

}  // namespace fisa::cli
