#pragma once

// Analysis pipeline: IFB instantiation per function, loss scenario expansion,
// overlay refinement and security constraint derivation.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fisa/catalog.hpp"
#include "fisa/diagnostic.hpp"
#include "fisa/dsl.hpp"
#include "fisa/model.hpp"

namespace fisa {

struct IfbInstance {
  std::string id;  // <fn>_<IFB-t> or, refined, <fn>_<IFB-t>.<k>
  std::string function;
  std::string template_id;
  std::optional<int> variant;
  std::string description;
  std::vector<std::string> hazards;

  friend bool operator==(const IfbInstance&, const IfbInstance&) = default;
};

struct LsInstance {
  std::string id;  // <ifb-instance>_<LS-t> or <ifb-instance>_<LS-t>.<k>
  std::string parent;
  std::string function;
  std::string template_id;
  std::optional<int> variant;
  CausalCategory category = CausalCategory::algorithm;
  std::string description;
  std::optional<std::string> prevent_text;
  std::optional<std::string> react_text;

  friend bool operator==(const LsInstance&, const LsInstance&) = default;
};

enum class ConstraintKind { inversion, reaction };

inline const char* to_string(ConstraintKind k) { return k == ConstraintKind::inversion ? "inversion" : "reaction"; }

struct ConstraintModes {
  bool inversion = true;
  bool reaction = true;

  static ConstraintModes both() { return {true, true}; }
  std::size_t count() const { return std::size_t{inversion} + std::size_t{reaction}; }

  friend bool operator==(const ConstraintModes&, const ConstraintModes&) = default;
};

struct Constraint {
  std::string id;  // SC-<n>
  ConstraintKind kind = ConstraintKind::inversion;
  std::string text;
  std::vector<std::string> linked_ls;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct Analysis {
  SystemModel model;
  Catalog catalog;
  std::vector<IfbInstance> ifb_instances;
  std::vector<LsInstance> ls_instances;
  std::vector<Constraint> constraints;
  Diagnostics diagnostics;

  const IfbInstance* find_ifb(std::string_view id) const {
    auto it = std::find_if(ifb_instances.begin(), ifb_instances.end(), [&](const IfbInstance& i) { return i.id == id; });
    return it == ifb_instances.end() ? nullptr : &*it;
  }
  const LsInstance* find_ls(std::string_view id) const {
    auto it = std::find_if(ls_instances.begin(), ls_instances.end(), [&](const LsInstance& i) { return i.id == id; });
    return it == ls_instances.end() ? nullptr : &*it;
  }

  friend bool operator==(const Analysis&, const Analysis&) = default;
};

namespace detail {

inline void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

inline std::string ifb_instance_id(std::string_view function, std::string_view tmpl, std::optional<int> variant = {}) {
  std::string id = std::string(function) + "_" + std::string(tmpl);
  if (variant) id += "." + std::to_string(*variant);
  return id;
}

inline std::string ls_instance_id(std::string_view parent, std::string_view tmpl, std::optional<int> variant = {}) {
  return ifb_instance_id(parent, tmpl, variant);
}

inline std::string strip_period(std::string_view s) {
  while (!s.empty() && (s.back() == '.' || s.back() == ' ')) s.remove_suffix(1);
  return std::string(s);
}

// Lowercases a leading capital unless it starts an acronym ("NOK", "OK").
inline std::string lower_initial(std::string s) {
  if (s.size() >= 2 && s[0] >= 'A' && s[0] <= 'Z' && s[1] >= 'a' && s[1] <= 'z') s[0] = static_cast<char>(s[0] - 'A' + 'a');
  return s;
}

}  // namespace detail

/// Substitutes {function}, {function_id} and {component} in a catalog template.
inline std::string render_template(std::string_view tmpl, const FunctionNode& fn, const SystemModel& model) {
  std::string out(tmpl);
  const Component* comp = model.find_component(fn.component);
  std::string comp_name = comp && !comp->name.empty() ? comp->name : fn.component;
  detail::replace_all(out, "{function_id}", fn.id);
  detail::replace_all(out, "{function}", fn.name.empty() ? fn.id : fn.name);
  detail::replace_all(out, "{component}", comp_name);
  return out;
}

/// One IFB instance per (function, matching template), function declaration
/// order outermost, catalog order inside.
inline std::vector<IfbInstance> instantiate_ifbs(const SystemModel& model, const Catalog& catalog,
                                                 Diagnostics* diagnostics = nullptr) {
  std::vector<IfbInstance> out;
  for (const auto& fn : model.functions) {
    auto templates = templates_for(catalog, fn.responsibility);
    if (templates.empty() && diagnostics)
      diagnostics->push_back(make_warning("NO_TEMPLATES",
                                          "function '" + fn.id + "' has responsibility " +
                                              to_string(fn.responsibility) + " with no IFB templates",
                                          fn.id));
    for (const IfbTemplate* t : templates)
      out.push_back({detail::ifb_instance_id(fn.id, t->id), fn.id, t->id, std::nullopt,
                     render_template(t->description_template, fn, model), t->linked_hazards});
  }
  return out;
}

inline std::vector<LsInstance> instantiate_lss(const std::vector<IfbInstance>& ifbs, const Catalog& catalog,
                                               const SystemModel& model = {}) {
  std::vector<LsInstance> out;
  for (const auto& ifb : ifbs) {
    const FunctionNode* fn = model.find_function(ifb.function);
    FunctionNode fallback{ifb.function, ifb.function, {}, Responsibility::data_check};
    for (const LsTemplate* t : children_of(catalog, ifb.template_id)) {
      LsInstance ls;
      ls.id = detail::ls_instance_id(ifb.id, t->id);
      ls.parent = ifb.id;
      ls.function = ifb.function;
      ls.template_id = t->id;
      ls.category = t->causal_category;
      ls.description = render_template(t->description_template, fn ? *fn : fallback, model);
      out.push_back(std::move(ls));
    }
  }
  return out;
}

/// Generated inversion text for a loss scenario, scoped to its function so
/// identical guideline prose in different functions stays distinct.
inline std::string inversion_text(const LsInstance& ls) {
  return "In " + ls.function + ", the system must prevent: " + detail::strip_period(ls.description) + ".";
}

inline std::string reaction_text(const LsInstance& ls) {
  return "In " + ls.function + ", if " + detail::lower_initial(detail::strip_period(ls.description)) +
         " occurs, it must be detected and recorded, and the affected service must be aborted.";
}

/// Derives constraints per LS in order, inversion before reaction. Constraints
/// with the same kind and text merge and union their linked LS ids. Numbering
/// is sequential in order of first appearance.
inline std::vector<Constraint> derive_constraints(const std::vector<LsInstance>& lss, ConstraintModes modes) {
  std::vector<Constraint> out;
  std::map<std::pair<ConstraintKind, std::string>, std::size_t> index;
  auto emit = [&](ConstraintKind kind, std::string text, const std::string& ls_id) {
    auto key = std::make_pair(kind, text);
    if (auto it = index.find(key); it != index.end()) {
      auto& links = out[it->second].linked_ls;
      if (std::find(links.begin(), links.end(), ls_id) == links.end()) links.push_back(ls_id);
      return;
    }
    index.emplace(std::move(key), out.size());
    out.push_back({"SC-" + std::to_string(out.size() + 1), kind, std::move(text), {ls_id}});
  };
  for (const auto& ls : lss) {
    if (modes.inversion) emit(ConstraintKind::inversion, ls.prevent_text.value_or(inversion_text(ls)), ls.id);
    if (modes.reaction) emit(ConstraintKind::reaction, ls.react_text.value_or(reaction_text(ls)), ls.id);
  }
  return out;
}

namespace detail {

inline bool is_subset(const std::vector<std::string>& sub, const std::vector<std::string>& super) {
  return std::all_of(sub.begin(), sub.end(),
                     [&](const std::string& x) { return std::find(super.begin(), super.end(), x) != super.end(); });
}

inline Diagnostic overlay_error(std::string code, std::string message, const Refinement& r) {
  Diagnostic d = make_error(std::move(code), std::move(message), r.target);
  d.position = r.position;
  return d;
}

}  // namespace detail

/// Replaces targeted generic IFB instances by their numbered variants. Each
/// refinement is applied atomically: any error leaves its target untouched.
/// Constraints are not rederived here.
inline Analysis apply_overlay(Analysis analysis, const Overlay& overlay) {
  for (const auto& ref : overlay.refinements) {
    auto target_it = std::find_if(analysis.ifb_instances.begin(), analysis.ifb_instances.end(),
                                  [&](const IfbInstance& i) { return i.id == ref.target && !i.variant; });
    if (target_it == analysis.ifb_instances.end()) {
      analysis.diagnostics.push_back(detail::overlay_error(
          "UNKNOWN_TARGET", "refinement target '" + ref.target + "' is not a generic IFB instance of this analysis", ref));
      continue;
    }
    const IfbInstance generic = *target_it;
    const IfbTemplate* tmpl = analysis.catalog.find_ifb(generic.template_id);

    std::vector<IfbInstance> new_ifbs;
    std::vector<LsInstance> new_lss;
    bool ok = true;
    std::vector<LsInstance> generic_children;
    for (const auto& ls : analysis.ls_instances)
      if (ls.parent == generic.id) generic_children.push_back(ls);

    for (const auto& var : ref.variants) {
      IfbInstance inst;
      inst.id = detail::ifb_instance_id(generic.function, generic.template_id, var.index);
      inst.function = generic.function;
      inst.template_id = generic.template_id;
      inst.variant = var.index;
      inst.description = var.description;
      inst.hazards = tmpl ? tmpl->linked_hazards : generic.hazards;
      if (var.hazards) {
        if (!detail::is_subset(*var.hazards, inst.hazards)) {
          std::string extra;
          for (const auto& h : *var.hazards)
            if (std::find(inst.hazards.begin(), inst.hazards.end(), h) == inst.hazards.end())
              extra += (extra.empty() ? "" : ", ") + h;
          analysis.diagnostics.push_back(detail::overlay_error(
              "HAZARD_ESCALATION",
              "variant " + inst.id + " links hazard(s) " + extra + " not linked by " + generic.template_id, ref));
          ok = false;
        }
        inst.hazards = *var.hazards;
      }

      if (var.ls_variants.empty()) {
        for (const auto& child : generic_children) {
          LsInstance ls = child;
          ls.id = detail::ls_instance_id(inst.id, child.template_id);
          ls.parent = inst.id;
          new_lss.push_back(std::move(ls));
        }
      }
      for (const auto& lv : var.ls_variants) {
        const LsTemplate* lt = analysis.catalog.find_ls(lv.ls_template);
        if (!lt || lt->parent_ifb != generic.template_id) {
          analysis.diagnostics.push_back(detail::overlay_error(
              "CATEGORY_MISMATCH",
              lv.ls_template + (lt ? " is not a loss scenario of " : " is not a known loss scenario template for ") +
                  generic.template_id,
              ref));
          ok = false;
          continue;
        }
        LsInstance ls;
        ls.id = detail::ls_instance_id(inst.id, lt->id, lv.index);
        ls.parent = inst.id;
        ls.function = generic.function;
        ls.template_id = lt->id;
        ls.variant = lv.index;
        ls.category = lt->causal_category;
        ls.description = lv.description;
        ls.prevent_text = lv.prevent_text;
        ls.react_text = lv.react_text;
        new_lss.push_back(std::move(ls));
      }
      new_ifbs.push_back(std::move(inst));
    }
    if (!ok) continue;

    auto pos = analysis.ifb_instances.erase(target_it);
    analysis.ifb_instances.insert(pos, new_ifbs.begin(), new_ifbs.end());

    // Splice LS variants where the generic children were, or after the
    // preceding IFB's scenarios when the target had none.
    auto first_child = std::find_if(analysis.ls_instances.begin(), analysis.ls_instances.end(),
                                    [&](const LsInstance& l) { return l.parent == generic.id; });
    std::size_t insert_at = static_cast<std::size_t>(first_child - analysis.ls_instances.begin());
    if (first_child == analysis.ls_instances.end()) {
      std::set<std::string> earlier;
      for (const auto& i : analysis.ifb_instances) {
        if (i.id == new_ifbs.front().id) break;
        earlier.insert(i.id);
      }
      insert_at = 0;
      for (std::size_t i = 0; i < analysis.ls_instances.size(); ++i)
        if (earlier.count(analysis.ls_instances[i].parent)) insert_at = i + 1;
    }
    std::erase_if(analysis.ls_instances, [&](const LsInstance& l) { return l.parent == generic.id; });
    analysis.ls_instances.insert(analysis.ls_instances.begin() + static_cast<std::ptrdiff_t>(insert_at),
                                 new_lss.begin(), new_lss.end());
  }
  return analysis;
}

/// Full pipeline. Stops before instantiation when the model or catalog has
/// structural errors (broken references, duplicate ids); coverage errors such
/// as hazards without losses are carried as diagnostics and left for the
/// traceability lints to pinpoint.
inline Analysis run_analysis(const SystemModel& model, const Catalog& catalog, const Overlay* overlay = nullptr,
                             ConstraintModes modes = ConstraintModes::both()) {
  Analysis a;
  a.model = model;
  a.catalog = catalog;
  a.diagnostics = validate_model(model);
  bool blocked = has_errors(a.diagnostics);
  auto catalog_diags = validate_catalog(catalog);
  a.diagnostics.insert(a.diagnostics.end(), catalog_diags.begin(), catalog_diags.end());
  blocked = blocked ||
                 std::any_of(catalog_diags.begin(), catalog_diags.end(), [](const Diagnostic& d) { return is_structural(d); });
  if (blocked) return a;

  a.ifb_instances = instantiate_ifbs(model, catalog, &a.diagnostics);
  a.ls_instances = instantiate_lss(a.ifb_instances, catalog, model);
  if (overlay) a = apply_overlay(std::move(a), *overlay);
  a.constraints = derive_constraints(a.ls_instances, modes);
  return a;
}

}  // namespace fisa
