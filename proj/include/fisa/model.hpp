#pragma once

// Functional interaction structure (FIS): the system model the analysis runs over.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fisa/diagnostic.hpp"

namespace fisa {

enum class OperationType { unspecified, synchronous, asynchronous };
enum class WorkingLocation { unspecified, manufacturer_place, anywhere_else };
enum class ConnectionType { unspecified, local, remote };

inline const char* to_string(OperationType v) {
  switch (v) {
    case OperationType::synchronous: return "synchronous";
    case OperationType::asynchronous: return "asynchronous";
    default: return "unspecified";
  }
}

inline const char* to_string(WorkingLocation v) {
  switch (v) {
    case WorkingLocation::manufacturer_place: return "manufacturer_place";
    case WorkingLocation::anywhere_else: return "anywhere_else";
    default: return "unspecified";
  }
}

inline const char* to_string(ConnectionType v) {
  switch (v) {
    case ConnectionType::local: return "local";
    case ConnectionType::remote: return "remote";
    default: return "unspecified";
  }
}

struct UseCaseContext {
  OperationType operation_type = OperationType::unspecified;
  WorkingLocation location = WorkingLocation::unspecified;
  ConnectionType connection = ConnectionType::unspecified;
  std::string title;

  bool is_default() const {
    return operation_type == OperationType::unspecified && location == WorkingLocation::unspecified &&
           connection == ConnectionType::unspecified && title.empty();
  }

  friend bool operator==(const UseCaseContext&, const UseCaseContext&) = default;
};

struct ComponentKind {
  enum class Tag { vehicle_interface, network_link, end_device, external_entity, custom };

  Tag tag = Tag::end_device;
  std::string label;  // only meaningful for custom

  static ComponentKind custom(std::string label) { return {Tag::custom, std::move(label)}; }

  friend bool operator==(const ComponentKind&, const ComponentKind&) = default;
};

inline const char* to_string(ComponentKind::Tag t) {
  switch (t) {
    case ComponentKind::Tag::vehicle_interface: return "vehicle_interface";
    case ComponentKind::Tag::network_link: return "network_link";
    case ComponentKind::Tag::end_device: return "end_device";
    case ComponentKind::Tag::external_entity: return "external_entity";
    case ComponentKind::Tag::custom: return "custom";
  }
  return "custom";
}

struct Component {
  std::string id;
  std::string name;
  ComponentKind kind;

  friend bool operator==(const Component&, const Component&) = default;
};

/// The four responsibility classes a function can carry. Each maps to one
/// row group of the guideline's IFB table.
enum class Responsibility { data_check, data_transform, data_transmission, service_process };

inline constexpr Responsibility kAllResponsibilities[] = {
    Responsibility::data_check, Responsibility::data_transform, Responsibility::data_transmission,
    Responsibility::service_process};

inline const char* to_string(Responsibility r) {
  switch (r) {
    case Responsibility::data_check: return "data_check";
    case Responsibility::data_transform: return "data_transform";
    case Responsibility::data_transmission: return "data_transmission";
    case Responsibility::service_process: return "service_process";
  }
  return "data_check";
}

inline std::optional<Responsibility> parse_responsibility(std::string_view s) {
  for (auto r : kAllResponsibilities)
    if (s == to_string(r)) return r;
  return std::nullopt;
}

struct FunctionNode {
  std::string id;
  std::string name;
  std::string component;
  Responsibility responsibility = Responsibility::data_check;

  friend bool operator==(const FunctionNode&, const FunctionNode&) = default;
};

inline constexpr std::string_view kExternal = "EXTERNAL";

/// Flow endpoint: a function id, or the reserved EXTERNAL boundary.
struct Endpoint {
  std::string function;

  static Endpoint external() { return {std::string(kExternal)}; }
  bool is_external() const { return function == kExternal; }

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

struct DataFlow {
  std::string id;
  Endpoint source;
  Endpoint sink;
  std::optional<std::string> via;
  std::optional<std::string> payload;

  friend bool operator==(const DataFlow&, const DataFlow&) = default;
};

struct SystemModel {
  UseCaseContext context;
  std::vector<Component> components;
  std::vector<FunctionNode> functions;
  std::vector<DataFlow> flows;

  const Component* find_component(std::string_view id) const {
    auto it = std::find_if(components.begin(), components.end(), [&](const Component& c) { return c.id == id; });
    return it == components.end() ? nullptr : &*it;
  }

  const FunctionNode* find_function(std::string_view id) const {
    auto it = std::find_if(functions.begin(), functions.end(), [&](const FunctionNode& f) { return f.id == id; });
    return it == functions.end() ? nullptr : &*it;
  }

  friend bool operator==(const SystemModel&, const SystemModel&) = default;
};

/// `[A-Za-z][A-Za-z0-9_-]*`
inline bool is_valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s.front())) return false;
  return std::all_of(s.begin() + 1, s.end(), [&](char c) { return alpha(c) || digit(c) || c == '_' || c == '-'; });
}

namespace detail {

inline void check_ids(Diagnostics& out, const std::vector<std::string>& ids, std::string_view what) {
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (!is_valid_identifier(id) || id == kExternal)
      out.push_back(make_error("BAD_ID", std::string(what) + " id '" + id + "' is not a valid identifier", id));
    if (!seen.insert(id).second)
      out.push_back(make_error("DUPLICATE_ID", "duplicate " + std::string(what) + " id '" + id + "'", id));
  }
}

}  // namespace detail

/// Structural checks over a parsed model. Errors for broken invariants,
/// warnings for suspicious but legal structure. Order follows declaration order.
inline Diagnostics validate_model(const SystemModel& model) {
  Diagnostics out;

  std::vector<std::string> ids;
  for (const auto& c : model.components) ids.push_back(c.id);
  detail::check_ids(out, ids, "component");
  ids.clear();
  for (const auto& f : model.functions) ids.push_back(f.id);
  detail::check_ids(out, ids, "function");
  ids.clear();
  for (const auto& f : model.flows) ids.push_back(f.id);
  detail::check_ids(out, ids, "flow");

  for (const auto& fn : model.functions) {
    if (!model.find_component(fn.component))
      out.push_back(make_error("DANGLING_COMPONENT",
                               "function '" + fn.id + "' is placed in undeclared component '" + fn.component + "'",
                               fn.id));
  }

  for (const auto& flow : model.flows) {
    for (const Endpoint* ep : {&flow.source, &flow.sink}) {
      if (!ep->is_external() && !model.find_function(ep->function))
        out.push_back(make_error("DANGLING_FLOW",
                                 "flow '" + flow.id + "' references undeclared function '" + ep->function + "'",
                                 flow.id));
    }
    if (flow.source == flow.sink)
      out.push_back(make_error("SELF_FLOW", "flow '" + flow.id + "' has identical source and sink", flow.id));
    if (flow.via) {
      const Component* link = model.find_component(*flow.via);
      if (!link)
        out.push_back(make_error("DANGLING_VIA", "flow '" + flow.id + "' is routed via undeclared component '" +
                                                     *flow.via + "'",
                                 flow.id));
      else if (link->kind.tag != ComponentKind::Tag::network_link)
        out.push_back(make_error("VIA_NOT_LINK",
                                 "flow '" + flow.id + "' is routed via '" + *flow.via + "', which is not a network_link",
                                 flow.id));
    }
  }

  // A vehicle interface is the gate of the in-vehicle system and is expected to check data.
  for (const auto& comp : model.components) {
    if (comp.kind.tag != ComponentKind::Tag::vehicle_interface) continue;
    bool has_check = std::any_of(model.functions.begin(), model.functions.end(), [&](const FunctionNode& f) {
      return f.component == comp.id && f.responsibility == Responsibility::data_check;
    });
    if (!has_check)
      out.push_back(make_warning("VI_MISSING_CHECK",
                                 "vehicle interface '" + comp.id + "' has no data_check function", comp.id));
  }
  return out;
}

using FunctionSet = std::set<std::string>;

/// Functions receiving data directly from outside the system.
inline FunctionSet entry_points(const SystemModel& model) {
  FunctionSet out;
  for (const auto& flow : model.flows)
    if (flow.source.is_external() && !flow.sink.is_external()) out.insert(flow.sink.function);
  return out;
}

/// Transitive closure over function-to-function flows, start set included.
inline FunctionSet downstream_reachable(const SystemModel& model, const FunctionSet& from) {
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& flow : model.flows)
    if (!flow.source.is_external() && !flow.sink.is_external())
      succ[flow.source.function].push_back(flow.sink.function);

  FunctionSet visited;
  std::vector<std::string> work(from.begin(), from.end());
  while (!work.empty()) {
    std::string cur = std::move(work.back());
    work.pop_back();
    if (!visited.insert(cur).second) continue;
    if (auto it = succ.find(cur); it != succ.end())
      for (const auto& next : it->second)
        if (!visited.count(next)) work.push_back(next);
  }
  return visited;
}

}  // namespace fisa
