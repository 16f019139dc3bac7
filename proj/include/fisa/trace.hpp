#pragma once

// Traceability graph: Loss <- Hazard <- IFB <- LS <- SC, plus the function and
// component each IFB is located at.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "fisa/diagnostic.hpp"
#include "fisa/engine.hpp"
#include "fisa/model.hpp"

namespace fisa {

enum class NodeKind { loss, hazard, ifb, ls, sc, function, component };

inline constexpr NodeKind kAllNodeKinds[] = {NodeKind::loss, NodeKind::hazard,   NodeKind::ifb,      NodeKind::ls,
                                             NodeKind::sc,   NodeKind::function, NodeKind::component};

inline const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::loss: return "loss";
    case NodeKind::hazard: return "hazard";
    case NodeKind::ifb: return "ifb";
    case NodeKind::ls: return "ls";
    case NodeKind::sc: return "sc";
    case NodeKind::function: return "function";
    case NodeKind::component: return "component";
  }
  return "loss";
}

enum class EdgeLabel { hazard_of, leads_to, caused_by, constrains, located_in, performed_by };

inline const char* to_string(EdgeLabel l) {
  switch (l) {
    case EdgeLabel::hazard_of: return "hazard_of";
    case EdgeLabel::leads_to: return "leads_to";
    case EdgeLabel::caused_by: return "caused_by";
    case EdgeLabel::constrains: return "constrains";
    case EdgeLabel::located_in: return "located_in";
    case EdgeLabel::performed_by: return "performed_by";
  }
  return "hazard_of";
}

/// The only (from, to) kind pair each label may connect.
inline std::pair<NodeKind, NodeKind> endpoint_kinds(EdgeLabel l) {
  switch (l) {
    case EdgeLabel::hazard_of: return {NodeKind::hazard, NodeKind::loss};
    case EdgeLabel::leads_to: return {NodeKind::ifb, NodeKind::hazard};
    case EdgeLabel::caused_by: return {NodeKind::ls, NodeKind::ifb};
    case EdgeLabel::constrains: return {NodeKind::sc, NodeKind::ls};
    case EdgeLabel::located_in: return {NodeKind::function, NodeKind::component};
    case EdgeLabel::performed_by: return {NodeKind::ifb, NodeKind::function};
  }
  return {NodeKind::hazard, NodeKind::loss};
}

/// Causal chain labels, i.e. those walked when asking why a node exists.
inline bool is_causal(EdgeLabel l) {
  return l == EdgeLabel::hazard_of || l == EdgeLabel::leads_to || l == EdgeLabel::caused_by ||
         l == EdgeLabel::constrains;
}

struct TraceNode {
  std::string id;
  NodeKind kind = NodeKind::loss;

  auto operator<=>(const TraceNode&) const = default;
};

struct TraceEdge {
  TraceNode from;
  TraceNode to;
  EdgeLabel label = EdgeLabel::hazard_of;

  auto operator<=>(const TraceEdge&) const = default;
};

class NodeNotFound : public std::out_of_range {
 public:
  explicit NodeNotFound(const std::string& id)
      : std::out_of_range("NODE_NOT_FOUND: no trace node '" + id + "'"), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class TraceGraph {
 public:
  bool add_node(TraceNode n) {
    if (!index_.insert(n).second) return false;
    nodes_.push_back(std::move(n));
    return true;
  }

  // Edges whose endpoints are not both present are dropped; an edge between
  // the wrong kinds is a programming error.
  bool add_edge(const TraceNode& from, const TraceNode& to, EdgeLabel label) {
    auto [fk, tk] = endpoint_kinds(label);
    if (from.kind != fk || to.kind != tk)
      throw std::logic_error(std::string("illegal trace edge ") + to_string(from.kind) + " -" + to_string(label) + "-> " +
                             to_string(to.kind));
    if (!contains(from) || !contains(to)) return false;
    TraceEdge e{from, to, label};
    if (!edge_index_.insert(e).second) return false;
    out_[from].push_back(edges_.size());
    in_[to].push_back(edges_.size());
    edges_.push_back(std::move(e));
    return true;
  }

  bool contains(const TraceNode& n) const { return index_.count(n) != 0; }

  const std::vector<TraceNode>& nodes() const { return nodes_; }
  const std::vector<TraceEdge>& edges() const { return edges_; }

  std::vector<const TraceEdge*> outgoing(const TraceNode& n) const { return collect(out_, n); }
  std::vector<const TraceEdge*> incoming(const TraceNode& n) const { return collect(in_, n); }

  std::vector<TraceNode> nodes_of(NodeKind k) const {
    std::vector<TraceNode> out;
    for (const auto& n : nodes_)
      if (n.kind == k) out.push_back(n);
    return out;
  }

  std::size_t count(NodeKind k) const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [&](const TraceNode& n) { return n.kind == k; }));
  }

  std::size_t count(EdgeLabel l) const {
    return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(), [&](const TraceEdge& e) { return e.label == l; }));
  }

  /// First node with this id, trying kinds in the order given.
  std::optional<TraceNode> resolve(std::string_view id) const {
    for (NodeKind k : {NodeKind::sc, NodeKind::ls, NodeKind::ifb, NodeKind::function, NodeKind::component,
                       NodeKind::hazard, NodeKind::loss}) {
      TraceNode n{std::string(id), k};
      if (contains(n)) return n;
    }
    return std::nullopt;
  }

  /// Copy of the graph with every node of `kind` (and its edges) removed.
  TraceGraph without(NodeKind kind) const {
    TraceGraph g;
    for (const auto& n : nodes_)
      if (n.kind != kind) g.add_node(n);
    for (const auto& e : edges_) g.add_edge(e.from, e.to, e.label);
    return g;
  }

 private:
  using Adjacency = std::map<TraceNode, std::vector<std::size_t>>;

  std::vector<const TraceEdge*> collect(const Adjacency& adj, const TraceNode& n) const {
    std::vector<const TraceEdge*> out;
    if (auto it = adj.find(n); it != adj.end())
      for (auto i : it->second) out.push_back(&edges_[i]);
    return out;
  }

  std::vector<TraceNode> nodes_;
  std::set<TraceNode> index_;
  std::vector<TraceEdge> edges_;
  std::set<TraceEdge> edge_index_;
  Adjacency out_, in_;
};

inline TraceGraph build_trace_graph(const Analysis& a) {
  TraceGraph g;
  for (const auto& l : a.catalog.losses) g.add_node({l.id, NodeKind::loss});
  for (const auto& h : a.catalog.hazards) g.add_node({h.id, NodeKind::hazard});
  for (const auto& c : a.model.components) g.add_node({c.id, NodeKind::component});
  for (const auto& f : a.model.functions) g.add_node({f.id, NodeKind::function});
  for (const auto& i : a.ifb_instances) g.add_node({i.id, NodeKind::ifb});
  for (const auto& l : a.ls_instances) g.add_node({l.id, NodeKind::ls});
  for (const auto& c : a.constraints) g.add_node({c.id, NodeKind::sc});

  for (const auto& h : a.catalog.hazards)
    for (const auto& l : h.linked_losses) g.add_edge({h.id, NodeKind::hazard}, {l, NodeKind::loss}, EdgeLabel::hazard_of);
  for (const auto& f : a.model.functions)
    g.add_edge({f.id, NodeKind::function}, {f.component, NodeKind::component}, EdgeLabel::located_in);
  for (const auto& i : a.ifb_instances) {
    for (const auto& h : i.hazards) g.add_edge({i.id, NodeKind::ifb}, {h, NodeKind::hazard}, EdgeLabel::leads_to);
    g.add_edge({i.id, NodeKind::ifb}, {i.function, NodeKind::function}, EdgeLabel::performed_by);
  }
  for (const auto& l : a.ls_instances) g.add_edge({l.id, NodeKind::ls}, {l.parent, NodeKind::ifb}, EdgeLabel::caused_by);
  for (const auto& c : a.constraints)
    for (const auto& l : c.linked_ls) g.add_edge({c.id, NodeKind::sc}, {l, NodeKind::ls}, EdgeLabel::constrains);
  return g;
}

enum class TraceDirection { up, down };

/// Subgraph reachable from `start`. Upward walks follow the causal chain
/// (SC -> LS -> IFB -> hazard -> loss); downward walks follow every edge in
/// reverse, answering "what depends on this node".
inline TraceGraph trace_closure(const TraceGraph& graph, const TraceNode& start, TraceDirection dir) {
  if (!graph.contains(start)) throw NodeNotFound(start.id);
  std::set<TraceNode> seen{start};
  std::vector<TraceNode> work{start};
  std::set<const TraceEdge*> used;
  while (!work.empty()) {
    TraceNode cur = work.back();
    work.pop_back();
    auto edges = dir == TraceDirection::up ? graph.outgoing(cur) : graph.incoming(cur);
    for (const TraceEdge* e : edges) {
      if (dir == TraceDirection::up && !is_causal(e->label)) continue;
      used.insert(e);
      const TraceNode& next = dir == TraceDirection::up ? e->to : e->from;
      if (seen.insert(next).second) work.push_back(next);
    }
  }
  TraceGraph sub;
  for (const auto& n : graph.nodes())
    if (seen.count(n)) sub.add_node(n);
  for (const auto& e : graph.edges())
    if (used.count(&e))
      sub.add_edge(e.from, e.to, e.label);
  return sub;
}

inline TraceGraph ancestors(const TraceGraph& graph, std::string_view id, NodeKind kind) {
  return trace_closure(graph, {std::string(id), kind}, TraceDirection::up);
}

inline Diagnostics completeness_lints(const TraceGraph& g) {
  Diagnostics out;
  auto has_out = [&](const TraceNode& n, EdgeLabel l) {
    auto es = g.outgoing(n);
    return std::any_of(es.begin(), es.end(), [&](const TraceEdge* e) { return e->label == l; });
  };
  auto has_in = [&](const TraceNode& n, EdgeLabel l) {
    auto es = g.incoming(n);
    return std::any_of(es.begin(), es.end(), [&](const TraceEdge* e) { return e->label == l; });
  };
  for (const auto& n : g.nodes()) {
    switch (n.kind) {
      case NodeKind::hazard:
        if (!has_out(n, EdgeLabel::hazard_of))
          out.push_back(make_error("ORPHAN_HAZARD", "hazard '" + n.id + "' leads to no loss", n.id));
        break;
      case NodeKind::ifb:
        if (!has_out(n, EdgeLabel::leads_to))
          out.push_back(make_error("UNLINKED_IFB", "IFB instance '" + n.id + "' leads to no hazard", n.id));
        break;
      case NodeKind::ls:
        if (!has_in(n, EdgeLabel::constrains))
          out.push_back(make_error("UNCONSTRAINED_LS", "loss scenario '" + n.id + "' has no security constraint", n.id));
        break;
      case NodeKind::loss:
        if (g.incoming(n).empty())
          out.push_back(make_warning("UNUSED_LOSS", "loss '" + n.id + "' is not linked by any hazard", n.id));
        break;
      case NodeKind::function:
        if (!has_in(n, EdgeLabel::performed_by))
          out.push_back(make_warning("DEAD_FUNCTION", "function '" + n.id + "' has no IFB instances", n.id));
        break;
      default: break;
    }
  }
  return out;
}

/// Warns about functions no external data path reaches.
inline Diagnostics reachability_lint(const SystemModel& model, const Analysis& /*analysis*/) {
  Diagnostics out;
  auto reached = downstream_reachable(model, entry_points(model));
  for (const auto& f : model.functions)
    if (!reached.count(f.id))
      out.push_back(make_warning("UNREACHABLE_FUNCTION",
                                 "function '" + f.id + "' is not reachable from any EXTERNAL input", f.id));
  return out;
}

}  // namespace fisa
