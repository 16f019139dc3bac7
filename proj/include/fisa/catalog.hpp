#pragma once

// Guideline catalog: losses, hazards, insecure function behavior (IFB)
// templates and loss scenario (LS) templates.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fisa/diagnostic.hpp"
#include "fisa/model.hpp"

namespace fisa {

struct Loss {
  std::string id;
  std::string description;

  friend bool operator==(const Loss&, const Loss&) = default;
};

struct Hazard {
  std::string id;
  std::string description;
  std::vector<std::string> linked_losses;

  friend bool operator==(const Hazard&, const Hazard&) = default;
};

/// NPCH: not providing causes hazard; PCH: providing causes hazard; TI: timing issue.
enum class InstructorMajor { NPCH, PCH, TI };

enum class InstructorMinor {
  not_called,
  not_executed_successfully,
  incorrect_data_input,
  improper_algorithm,
  information_leakage_risk,
  violate_time_limit,
};

inline constexpr InstructorMajor kAllMajors[] = {InstructorMajor::NPCH, InstructorMajor::PCH, InstructorMajor::TI};
inline constexpr InstructorMinor kAllMinors[] = {
    InstructorMinor::not_called,         InstructorMinor::not_executed_successfully,
    InstructorMinor::incorrect_data_input, InstructorMinor::improper_algorithm,
    InstructorMinor::information_leakage_risk, InstructorMinor::violate_time_limit};

inline const char* to_string(InstructorMajor m) {
  switch (m) {
    case InstructorMajor::NPCH: return "NPCH";
    case InstructorMajor::PCH: return "PCH";
    case InstructorMajor::TI: return "TI";
  }
  return "NPCH";
}

inline const char* to_string(InstructorMinor m) {
  switch (m) {
    case InstructorMinor::not_called: return "not_called";
    case InstructorMinor::not_executed_successfully: return "not_executed_successfully";
    case InstructorMinor::incorrect_data_input: return "incorrect_data_input";
    case InstructorMinor::improper_algorithm: return "improper_algorithm";
    case InstructorMinor::information_leakage_risk: return "information_leakage_risk";
    case InstructorMinor::violate_time_limit: return "violate_time_limit";
  }
  return "not_called";
}

inline std::optional<InstructorMajor> parse_major(std::string_view s) {
  for (auto m : kAllMajors)
    if (s == to_string(m)) return m;
  return std::nullopt;
}

inline std::optional<InstructorMinor> parse_minor(std::string_view s) {
  for (auto m : kAllMinors)
    if (s == to_string(m)) return m;
  return std::nullopt;
}

inline InstructorMajor major_of(InstructorMinor m) {
  switch (m) {
    case InstructorMinor::not_called:
    case InstructorMinor::not_executed_successfully: return InstructorMajor::NPCH;
    case InstructorMinor::violate_time_limit: return InstructorMajor::TI;
    default: return InstructorMajor::PCH;
  }
}

struct InstructorCategory {
  InstructorMajor major = InstructorMajor::NPCH;
  InstructorMinor minor = InstructorMinor::not_called;

  bool consistent() const { return major_of(minor) == major; }

  friend bool operator==(const InstructorCategory&, const InstructorCategory&) = default;
};

struct IfbTemplate {
  std::string id;
  Responsibility responsibility = Responsibility::data_check;
  InstructorCategory instructor;
  std::string description_template;
  std::vector<std::string> linked_hazards;

  friend bool operator==(const IfbTemplate&, const IfbTemplate&) = default;
};

/// Where a loss scenario's cause sits: in the function itself (its algorithm)
/// or in its environment.
enum class CausalCategory { algorithm, input, calling_behavior, computing_resource, on_link };

inline constexpr CausalCategory kAllCategories[] = {CausalCategory::algorithm, CausalCategory::input,
                                                    CausalCategory::calling_behavior,
                                                    CausalCategory::computing_resource, CausalCategory::on_link};

inline const char* to_string(CausalCategory c) {
  switch (c) {
    case CausalCategory::algorithm: return "algorithm";
    case CausalCategory::input: return "input";
    case CausalCategory::calling_behavior: return "calling_behavior";
    case CausalCategory::computing_resource: return "computing_resource";
    case CausalCategory::on_link: return "on_link";
  }
  return "algorithm";
}

inline const char* display_name(CausalCategory c) {
  switch (c) {
    case CausalCategory::algorithm: return "Algorithm";
    case CausalCategory::input: return "Input";
    case CausalCategory::calling_behavior: return "Calling Behavior";
    case CausalCategory::computing_resource: return "Computing Resource";
    case CausalCategory::on_link: return "On Link";
  }
  return "Algorithm";
}

inline std::optional<CausalCategory> parse_category(std::string_view s) {
  for (auto c : kAllCategories)
    if (s == to_string(c)) return c;
  return std::nullopt;
}

struct LsTemplate {
  std::string id;
  std::string parent_ifb;
  CausalCategory causal_category = CausalCategory::algorithm;
  std::string description_template;

  friend bool operator==(const LsTemplate&, const LsTemplate&) = default;
};

struct Catalog {
  std::vector<Loss> losses;
  std::vector<Hazard> hazards;
  std::vector<IfbTemplate> ifb_templates;
  std::vector<LsTemplate> ls_templates;

  const Loss* find_loss(std::string_view id) const {
    auto it = std::find_if(losses.begin(), losses.end(), [&](const Loss& l) { return l.id == id; });
    return it == losses.end() ? nullptr : &*it;
  }
  const Hazard* find_hazard(std::string_view id) const {
    auto it = std::find_if(hazards.begin(), hazards.end(), [&](const Hazard& h) { return h.id == id; });
    return it == hazards.end() ? nullptr : &*it;
  }
  const IfbTemplate* find_ifb(std::string_view id) const {
    auto it = std::find_if(ifb_templates.begin(), ifb_templates.end(), [&](const IfbTemplate& t) { return t.id == id; });
    return it == ifb_templates.end() ? nullptr : &*it;
  }
  const LsTemplate* find_ls(std::string_view id) const {
    auto it = std::find_if(ls_templates.begin(), ls_templates.end(), [&](const LsTemplate& t) { return t.id == id; });
    return it == ls_templates.end() ? nullptr : &*it;
  }

  friend bool operator==(const Catalog&, const Catalog&) = default;
};

/// IFB templates for one responsibility class, in catalog order.
inline std::vector<const IfbTemplate*> templates_for(const Catalog& catalog, Responsibility r) {
  std::vector<const IfbTemplate*> out;
  for (const auto& t : catalog.ifb_templates)
    if (t.responsibility == r) out.push_back(&t);
  return out;
}

/// LS templates whose parent is `ifb_id`, in catalog order.
inline std::vector<const LsTemplate*> children_of(const Catalog& catalog, std::string_view ifb_id) {
  std::vector<const LsTemplate*> out;
  for (const auto& t : catalog.ls_templates)
    if (t.parent_ifb == ifb_id) out.push_back(&t);
  return out;
}

inline Diagnostics validate_catalog(const Catalog& catalog) {
  Diagnostics out;
  auto dup_check = [&](const auto& items, std::string_view what) {
    std::set<std::string> seen;
    for (const auto& item : items)
      if (!seen.insert(item.id).second)
        out.push_back(make_error("DUPLICATE_ID", "duplicate " + std::string(what) + " id '" + item.id + "'", item.id));
  };
  dup_check(catalog.losses, "loss");
  dup_check(catalog.hazards, "hazard");
  dup_check(catalog.ifb_templates, "IFB template");
  dup_check(catalog.ls_templates, "LS template");

  for (const auto& h : catalog.hazards) {
    if (h.linked_losses.empty())
      out.push_back(make_error("ORPHAN_HAZARD", "hazard '" + h.id + "' links no loss", h.id));
    for (const auto& l : h.linked_losses)
      if (!catalog.find_loss(l))
        out.push_back(make_error("DANGLING_REF", "hazard '" + h.id + "' links undeclared loss '" + l + "'", h.id));
  }

  for (const auto& t : catalog.ifb_templates) {
    if (t.linked_hazards.empty())
      out.push_back(make_error("UNLINKED_IFB", "IFB template '" + t.id + "' links no hazard", t.id));
    for (const auto& h : t.linked_hazards)
      if (!catalog.find_hazard(h))
        out.push_back(make_error("DANGLING_REF", "IFB template '" + t.id + "' links undeclared hazard '" + h + "'", t.id));
    if (!t.instructor.consistent())
      out.push_back(make_error("INCONSISTENT_INSTRUCTOR",
                               "IFB template '" + t.id + "' pairs " + to_string(t.instructor.major) + " with " +
                                   to_string(t.instructor.minor),
                               t.id));
  }

  for (const auto& ls : catalog.ls_templates)
    if (!catalog.find_ifb(ls.parent_ifb))
      out.push_back(make_error("DANGLING_REF",
                               "LS template '" + ls.id + "' has undeclared parent '" + ls.parent_ifb + "'", ls.id));

  for (const auto& t : catalog.ifb_templates)
    if (children_of(catalog, t.id).empty())
      out.push_back(make_warning("CHILDLESS_IFB", "IFB template '" + t.id + "' has no loss scenario templates", t.id));

  return out;
}

/// Errors that make instantiation impossible (as opposed to coverage gaps
/// that the trace lints report per instance).
inline bool is_structural(const Diagnostic& d) {
  return d.is_error() && d.code != "ORPHAN_HAZARD" && d.code != "UNLINKED_IFB";
}

}  // namespace fisa
