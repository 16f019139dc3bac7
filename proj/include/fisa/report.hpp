#pragma once

// Report emitters. All output is deterministic: fixed key order, arrays in
// natural id order, LF line endings, no timestamps.

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "fisa/catalog.hpp"
#include "fisa/diagnostic.hpp"
#include "fisa/engine.hpp"
#include "fisa/model.hpp"
#include "fisa/trace.hpp"

namespace fisa {

enum class ReportFormat { json, markdown, dot_trace, dot_fis };

/// Orders ids so that numeric runs compare by value: IFB-2 < IFB-10, SC-9 < SC-10.
inline bool natural_less(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  while (i < a.size() && j < b.size()) {
    if (digit(a[i]) && digit(b[j])) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && digit(a[ie])) ++ie;
      while (je < b.size() && digit(b[je])) ++je;
      auto na = a.substr(i, ie - i), nb = b.substr(j, je - j);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if (a.size() - i != b.size() - j) return a.size() - i < b.size() - j;
  return a < b;
}

/// Joins ids sharing a prefix the way the guideline tables do: "IFB-2/3",
/// "F-1_IFB-2.1_LS-2.1/2.2". Ids without a common prefix are comma-separated;
/// an empty list renders as "/".
inline std::string join_compact(const std::vector<std::string>& ids) {
  if (ids.empty()) return "/";
  auto split = [](const std::string& id) {
    auto cut = id.rfind('-');
    return cut == std::string::npos ? std::pair<std::string, std::string>{"", id}
                                    : std::pair<std::string, std::string>{id.substr(0, cut + 1), id.substr(cut + 1)};
  };
  std::string prefix = split(ids.front()).first;
  bool shared = !prefix.empty() &&
                std::all_of(ids.begin(), ids.end(), [&](const std::string& id) { return split(id).first == prefix; });
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (shared)
      out += (i ? "/" : prefix) + split(ids[i]).second;
    else
      out += (i ? ", " : "") + ids[i];
  }
  return out;
}

/// Every diagnostic attached to a run: pipeline findings, then traceability
/// and reachability lints. A lint repeating an earlier (code, subject) pair is dropped.
inline Diagnostics collect_lints(const Analysis& analysis, const TraceGraph& graph) {
  Diagnostics out = analysis.diagnostics;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& d : out) seen.insert({d.code, d.subject_id.value_or("")});
  auto add = [&](const Diagnostics& ds) {
    for (const auto& d : ds)
      if (seen.insert({d.code, d.subject_id.value_or("")}).second) out.push_back(d);
  };
  add(completeness_lints(graph));
  add(reachability_lint(analysis.model, analysis));
  return out;
}

namespace detail {

template <typename T, typename Key>
std::vector<const T*> sorted_by_id(const std::vector<T>& items, Key key) {
  std::vector<const T*> out;
  for (const auto& x : items) out.push_back(&x);
  std::stable_sort(out.begin(), out.end(), [&](const T* a, const T* b) { return natural_less(key(*a), key(*b)); });
  return out;
}

inline std::string kind_string(const ComponentKind& k) {
  return k.tag == ComponentKind::Tag::custom ? "custom:" + k.label : to_string(k.tag);
}

inline std::vector<const TraceEdge*> sorted_edges(const TraceGraph& g) {
  std::vector<const TraceEdge*> out;
  for (const auto& e : g.edges()) out.push_back(&e);
  std::stable_sort(out.begin(), out.end(), [](const TraceEdge* a, const TraceEdge* b) {
    if (a->from.id != b->from.id) return natural_less(a->from.id, b->from.id);
    if (a->to.id != b->to.id) return natural_less(a->to.id, b->to.id);
    return std::tie(a->from.kind, a->to.kind, a->label) < std::tie(b->from.kind, b->to.kind, b->label);
  });
  return out;
}

}  // namespace detail

inline std::string emit_json(const Analysis& a, const TraceGraph& g) {
  using nlohmann::ordered_json;
  ordered_json doc;
  const auto& ctx = a.model.context;
  doc["context"] = {{"title", ctx.title},
                    {"operation_type", to_string(ctx.operation_type)},
                    {"location", to_string(ctx.location)},
                    {"connection", to_string(ctx.connection)}};

  ordered_json model = {{"components", ordered_json::array()},
                        {"functions", ordered_json::array()},
                        {"flows", ordered_json::array()}};
  for (const Component* c : detail::sorted_by_id(a.model.components, [](const Component& c) { return c.id; }))
    model["components"].push_back({{"id", c->id}, {"name", c->name}, {"kind", detail::kind_string(c->kind)}});
  for (const FunctionNode* f : detail::sorted_by_id(a.model.functions, [](const FunctionNode& f) { return f.id; }))
    model["functions"].push_back({{"id", f->id},
                                  {"name", f->name},
                                  {"component", f->component},
                                  {"responsibility", to_string(f->responsibility)}});
  for (const DataFlow* f : detail::sorted_by_id(a.model.flows, [](const DataFlow& f) { return f.id; })) {
    ordered_json j = {{"id", f->id}, {"source", f->source.function}, {"sink", f->sink.function}};
    j["via"] = f->via ? ordered_json(*f->via) : ordered_json(nullptr);
    j["payload"] = f->payload ? ordered_json(*f->payload) : ordered_json(nullptr);
    model["flows"].push_back(std::move(j));
  }
  doc["model"] = std::move(model);

  doc["ifb_instances"] = ordered_json::array();
  for (const IfbInstance* i : detail::sorted_by_id(a.ifb_instances, [](const IfbInstance& i) { return i.id; })) {
    ordered_json j = {{"id", i->id}, {"function", i->function}, {"template", i->template_id}};
    j["variant"] = i->variant ? ordered_json(*i->variant) : ordered_json(nullptr);
    if (const IfbTemplate* t = a.catalog.find_ifb(i->template_id))
      j["instructor"] = {{"major", to_string(t->instructor.major)}, {"minor", to_string(t->instructor.minor)}};
    else
      j["instructor"] = nullptr;
    j["description"] = i->description;
    j["hazards"] = i->hazards;
    doc["ifb_instances"].push_back(std::move(j));
  }

  doc["ls_instances"] = ordered_json::array();
  for (const LsInstance* l : detail::sorted_by_id(a.ls_instances, [](const LsInstance& l) { return l.id; })) {
    ordered_json j = {{"id", l->id}, {"parent", l->parent}, {"function", l->function}, {"template", l->template_id}};
    j["variant"] = l->variant ? ordered_json(*l->variant) : ordered_json(nullptr);
    j["category"] = to_string(l->category);
    j["description"] = l->description;
    doc["ls_instances"].push_back(std::move(j));
  }

  doc["constraints"] = ordered_json::array();
  for (const Constraint* c : detail::sorted_by_id(a.constraints, [](const Constraint& c) { return c.id; }))
    doc["constraints"].push_back(
        {{"id", c->id}, {"kind", to_string(c->kind)}, {"text", c->text}, {"linked_ls", c->linked_ls}});

  doc["lints"] = ordered_json::array();
  for (const auto& d : collect_lints(a, g)) {
    ordered_json j = {{"severity", to_string(d.severity)}, {"code", d.code}, {"message", d.message}};
    j["subject"] = d.subject_id ? ordered_json(*d.subject_id) : ordered_json(nullptr);
    if (d.position)
      j["position"] = {{"file", d.position->file}, {"line", d.position->line}, {"column", d.position->column}};
    else
      j["position"] = nullptr;
    doc["lints"].push_back(std::move(j));
  }

  doc["trace_edges"] = ordered_json::array();
  for (const TraceEdge* e : detail::sorted_edges(g))
    doc["trace_edges"].push_back({{"from", e->from.id},
                                  {"from_kind", to_string(e->from.kind)},
                                  {"to", e->to.id},
                                  {"to_kind", to_string(e->to.kind)},
                                  {"label", to_string(e->label)}});

  return doc.dump(2) + "\n";
}

namespace detail {

inline std::string md_cell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|')
      out += "\\|";
    else if (c == '\n' || c == '\r')
      out += ' ';
    else
      out += c;
  }
  return out;
}

inline std::string md_row(const std::vector<std::string>& cells) {
  std::string out = "|";
  for (const auto& c : cells) out += " " + md_cell(c) + " |";
  return out + "\n";
}

inline std::string md_header(const std::vector<std::string>& cells) {
  std::string out = md_row(cells) + "|";
  for (std::size_t i = 0; i < cells.size(); ++i) out += " --- |";
  return out + "\n";
}

}  // namespace detail

inline std::string emit_markdown(const Analysis& a, const TraceGraph& g) {
  using detail::md_header;
  using detail::md_row;
  std::string out = "# Security Analysis Report\n\n";

  const auto& ctx = a.model.context;
  out += "## Use Case\n\n";
  out += "- Title: " + (ctx.title.empty() ? std::string("(untitled)") : detail::md_cell(ctx.title)) + "\n";
  out += std::string("- Operation type: ") + to_string(ctx.operation_type) + "\n";
  out += std::string("- Working location: ") + to_string(ctx.location) + "\n";
  out += std::string("- Connection type: ") + to_string(ctx.connection) + "\n\n";

  auto functions = detail::sorted_by_id(a.model.functions, [](const FunctionNode& f) { return f.id; });
  auto ifbs = detail::sorted_by_id(a.ifb_instances, [](const IfbInstance& i) { return i.id; });
  auto lss = detail::sorted_by_id(a.ls_instances, [](const LsInstance& l) { return l.id; });

  out += "## Functions\n\n";
  out += md_header({"Function", "Name", "Component", "Responsibility", "NPCH", "PCH", "TI"});
  for (const FunctionNode* f : functions) {
    std::map<InstructorMajor, std::vector<std::string>> by_major;
    for (const IfbTemplate* t : templates_for(a.catalog, f->responsibility)) by_major[t->instructor.major].push_back(t->id);
    out += md_row({f->id, f->name, f->component, to_string(f->responsibility),
                   join_compact(by_major[InstructorMajor::NPCH]), join_compact(by_major[InstructorMajor::PCH]),
                   join_compact(by_major[InstructorMajor::TI])});
  }
  out += "\n";

  out += "## Insecure Function Behaviors\n\n";
  out += md_header({"ID", "Description", "Hazards"});
  for (const IfbInstance* i : ifbs) out += md_row({i->id, i->description, join_compact(i->hazards)});
  out += "\n";

  out += "## Loss Scenarios\n\n";
  std::vector<std::string> grid_header{"IFB"};
  for (auto c : kAllCategories) grid_header.push_back(display_name(c));
  out += md_header(grid_header);
  for (const IfbInstance* i : ifbs) {
    std::vector<std::string> row{i->id};
    for (auto c : kAllCategories) {
      std::vector<std::string> cell;
      for (const LsInstance* l : lss)
        if (l->parent == i->id && l->category == c) cell.push_back(l->id);
      row.push_back(join_compact(cell));
    }
    out += md_row(row);
  }
  out += "\n";
  out += md_header({"ID", "Category", "Description"});
  for (const LsInstance* l : lss) out += md_row({l->id, display_name(l->category), l->description});
  out += "\n";

  out += "## Security Constraints\n\n";
  out += md_header({"ID", "Kind", "System Constraint", "Linked LS"});
  for (const Constraint* c : detail::sorted_by_id(a.constraints, [](const Constraint& c) { return c.id; }))
    out += md_row({c->id, to_string(c->kind), c->text, join_compact(c->linked_ls)});

  auto lints = collect_lints(a, g);
  if (!lints.empty()) {
    out += "\n## Findings\n\n";
    out += md_header({"Severity", "Code", "Subject", "Message"});
    for (const auto& d : lints) out += md_row({to_string(d.severity), d.code, d.subject_id.value_or(""), d.message});
  }
  return out;
}

namespace detail {

inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

inline std::string dot_node_id(const TraceNode& n) { return dot_quote(std::string(to_string(n.kind)) + ":" + n.id); }

inline const char* dot_shape(NodeKind k) {
  switch (k) {
    case NodeKind::loss: return "doubleoctagon";
    case NodeKind::hazard: return "octagon";
    case NodeKind::ifb: return "box";
    case NodeKind::ls: return "note";
    case NodeKind::sc: return "component";
    case NodeKind::function: return "ellipse";
    case NodeKind::component: return "folder";
  }
  return "box";
}

}  // namespace detail

/// Traceability graph, one rank per layer: loss, hazard, IFB, LS, SC.
inline std::string emit_dot_trace(const TraceGraph& g) {
  std::string out = "digraph trace {\n  rankdir=BT;\n  node [fontname=\"Helvetica\"];\n";
  for (NodeKind k : {NodeKind::loss, NodeKind::hazard, NodeKind::ifb, NodeKind::ls, NodeKind::sc}) {
    auto nodes = g.nodes_of(k);
    std::stable_sort(nodes.begin(), nodes.end(), [](const TraceNode& a, const TraceNode& b) { return natural_less(a.id, b.id); });
    out += std::string("  subgraph rank_") + to_string(k) + " {\n    rank=same;\n";
    for (const auto& n : nodes)
      out += "    " + detail::dot_node_id(n) + " [label=" + detail::dot_quote(n.id) + ", shape=" + detail::dot_shape(k) + "];\n";
    out += "  }\n";
  }
  for (NodeKind k : {NodeKind::function, NodeKind::component}) {
    auto nodes = g.nodes_of(k);
    std::stable_sort(nodes.begin(), nodes.end(), [](const TraceNode& a, const TraceNode& b) { return natural_less(a.id, b.id); });
    for (const auto& n : nodes)
      out += "  " + detail::dot_node_id(n) + " [label=" + detail::dot_quote(n.id) + ", shape=" + detail::dot_shape(k) + "];\n";
  }
  for (const TraceEdge* e : detail::sorted_edges(g)) {
    out += "  " + detail::dot_node_id(e->from) + " -> " + detail::dot_node_id(e->to) + " [label=" +
           detail::dot_quote(to_string(e->label));
    if (!is_causal(e->label)) out += ", style=dashed";
    out += "];\n";
  }
  return out + "}\n";
}

/// Functional interaction structure: functions clustered by component, flows as edges.
inline std::string emit_dot_fis(const SystemModel& m) {
  std::string out = "digraph fis {\n  rankdir=LR;\n  node [fontname=\"Helvetica\", shape=box];\n";
  bool uses_external = std::any_of(m.flows.begin(), m.flows.end(), [](const DataFlow& f) {
    return f.source.is_external() || f.sink.is_external();
  });
  if (uses_external) out += "  \"EXTERNAL\" [label=\"EXTERNAL\", shape=doubleoctagon];\n";
  for (std::size_t ci = 0; ci < m.components.size(); ++ci) {
    const Component& c = m.components[ci];
    std::string label = c.name.empty() ? c.id : c.id + " (" + c.name + ")";
    out += "  subgraph cluster_" + std::to_string(ci) + " {\n";
    out += "    label=" + detail::dot_quote(label + "\n" + detail::kind_string(c.kind)) + ";\n";
    for (const auto& f : m.functions)
      if (f.component == c.id)
        out += "    " + detail::dot_quote(f.id) + " [label=" + detail::dot_quote(f.id + "\n" + f.name) + "];\n";
    out += "  }\n";
  }
  for (const auto& f : m.functions)
    if (!m.find_component(f.component))
      out += "  " + detail::dot_quote(f.id) + " [label=" + detail::dot_quote(f.id + "\n" + f.name) + "];\n";
  for (const auto& f : m.flows) {
    std::string label = f.id;
    if (f.payload) label += ": " + *f.payload;
    if (f.via) label += "\nvia " + *f.via;
    out += "  " + detail::dot_quote(f.source.function) + " -> " + detail::dot_quote(f.sink.function) +
           " [label=" + detail::dot_quote(label) + "];\n";
  }
  return out + "}\n";
}

}  // namespace fisa
