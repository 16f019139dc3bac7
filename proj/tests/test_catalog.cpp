#include <gtest/gtest.h>

#include <map>
#include <set>

#include "fisa/builtin_catalog.hpp"
#include "fisa/catalog.hpp"
#include "support/guideline_oracle.hpp"

using namespace fisa;

namespace {

std::vector<std::string> ids(const std::vector<const IfbTemplate*>& ts) {
  std::vector<std::string> out;
  for (auto* t : ts) out.push_back(t->id);
  return out;
}

std::vector<std::string> hazards_from_oracle(const char* compact) {
  std::vector<std::string> out;
  std::string s(compact);
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find('/', start);
    out.push_back("H-" + s.substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

}  // namespace

TEST(BuiltinGuideline, FirstHazard) {
  const auto& h = builtin_guideline().hazards.at(0);
  EXPECT_EQ(h.id, "H-1");
  EXPECT_EQ(h.description, "System leaks sensitive information.");
  EXPECT_EQ(h.linked_losses, (std::vector<std::string>{"L-3"}));
}

TEST(BuiltinGuideline, ServiceNotExecutedTemplate) {
  const IfbTemplate* t = builtin_guideline().find_ifb("IFB-13");
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->responsibility, Responsibility::service_process);
  EXPECT_EQ(t->instructor, (InstructorCategory{InstructorMajor::NPCH, InstructorMinor::not_executed_successfully}));
  EXPECT_EQ(t->linked_hazards, (std::vector<std::string>{"H-3"}));
  EXPECT_EQ(t->description_template, "Service is requested but not executed correctly.");
}

TEST(BuiltinGuideline, ChildrenOfServiceNotExecuted) {
  auto kids = children_of(builtin_guideline(), "IFB-13");
  ASSERT_EQ(kids.size(), 3u);
  EXPECT_EQ(kids[0]->id, "LS-16");
  EXPECT_EQ(kids[0]->causal_category, CausalCategory::algorithm);
  EXPECT_EQ(kids[1]->id, "LS-17");
  EXPECT_EQ(kids[1]->causal_category, CausalCategory::input);
  EXPECT_EQ(kids[2]->id, "LS-18");
  EXPECT_EQ(kids[2]->causal_category, CausalCategory::on_link);
}

TEST(BuiltinGuideline, Cardinalities) {
  const auto& c = builtin_guideline();
  EXPECT_EQ(c.losses.size(), 4u);
  EXPECT_EQ(c.hazards.size(), 4u);
  EXPECT_EQ(c.ifb_templates.size(), 17u);
  EXPECT_EQ(c.ls_templates.size(), 23u);
}

TEST(BuiltinGuideline, AgreesWithTableTranscription) {
  const auto& c = builtin_guideline();
  static const std::map<char, Responsibility> groups{{'C', Responsibility::data_check},
                                                     {'T', Responsibility::data_transform},
                                                     {'N', Responsibility::data_transmission},
                                                     {'S', Responsibility::service_process}};
  for (const auto& row : oracle::kIfbRows) {
    const IfbTemplate* t = c.find_ifb("IFB-" + std::to_string(row.number));
    ASSERT_NE(t, nullptr) << row.number;
    EXPECT_EQ(t->responsibility, groups.at(row.group)) << t->id;
    EXPECT_EQ(t->linked_hazards, hazards_from_oracle(row.hazards)) << t->id;
  }
  static const std::map<char, CausalCategory> columns{{'A', CausalCategory::algorithm},
                                                      {'I', CausalCategory::input},
                                                      {'B', CausalCategory::calling_behavior},
                                                      {'R', CausalCategory::computing_resource},
                                                      {'L', CausalCategory::on_link}};
  for (const auto& cell : oracle::kLsCells) {
    const LsTemplate* t = c.find_ls("LS-" + std::to_string(cell.number));
    ASSERT_NE(t, nullptr) << cell.number;
    EXPECT_EQ(t->parent_ifb, "IFB-" + std::to_string(cell.parent));
    EXPECT_EQ(t->causal_category, columns.at(cell.column)) << t->id;
    EXPECT_EQ(t->description_template, cell.text);
  }
}

TEST(BuiltinGuideline, LossScenarioPartition) {
  const std::map<std::string, std::size_t> expected{
      {"IFB-1", 1}, {"IFB-2", 1},  {"IFB-3", 1},  {"IFB-4", 2},  {"IFB-5", 1},  {"IFB-6", 1},
      {"IFB-7", 2}, {"IFB-8", 1},  {"IFB-9", 1},  {"IFB-10", 1}, {"IFB-11", 2}, {"IFB-12", 1},
      {"IFB-13", 3}, {"IFB-14", 1}, {"IFB-15", 1}, {"IFB-16", 1}, {"IFB-17", 2}};
  std::size_t total = 0;
  for (const auto& t : builtin_guideline().ifb_templates) {
    auto n = children_of(builtin_guideline(), t.id).size();
    EXPECT_EQ(n, expected.at(t.id)) << t.id;
    total += n;
  }
  EXPECT_EQ(total, 23u);
}

TEST(BuiltinGuideline, CategoryHistogram) {
  std::map<CausalCategory, int> hist;
  for (const auto& t : builtin_guideline().ls_templates) ++hist[t.causal_category];
  EXPECT_EQ(hist[CausalCategory::algorithm], 10);
  EXPECT_EQ(hist[CausalCategory::input], 4);
  EXPECT_EQ(hist[CausalCategory::calling_behavior], 1);
  EXPECT_EQ(hist[CausalCategory::computing_resource], 3);
  EXPECT_EQ(hist[CausalCategory::on_link], 5);
}

TEST(BuiltinGuideline, InstructorsAreConsistent) {
  for (const auto& t : builtin_guideline().ifb_templates) EXPECT_TRUE(t.instructor.consistent()) << t.id;
}

TEST(ValidateCatalog, BuiltinIsClean) { EXPECT_TRUE(validate_catalog(builtin_guideline()).empty()); }

TEST(ValidateCatalog, HazardWithoutLoss) {
  Catalog c = builtin_guideline();
  c.hazards[2].linked_losses.clear();
  auto diags = validate_catalog(c);
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].code, "ORPHAN_HAZARD");
  EXPECT_EQ(diags[0].subject_id, "H-3");
  EXPECT_TRUE(diags[0].is_error());
}

TEST(ValidateCatalog, RemovingOnlyChildWarns) {
  Catalog c = builtin_guideline();
  std::erase_if(c.ls_templates, [](const LsTemplate& t) { return t.id == "LS-7"; });
  auto diags = validate_catalog(c);
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].code, "CHILDLESS_IFB");
  EXPECT_EQ(diags[0].severity, Severity::warning);
  EXPECT_EQ(diags[0].subject_id, "IFB-6");
}

TEST(ValidateCatalog, BrokenReferences) {
  Catalog c = builtin_guideline();
  c.hazards[0].linked_losses.push_back("L-9");
  c.ifb_templates[0].linked_hazards.clear();
  c.ifb_templates[1].instructor = {InstructorMajor::TI, InstructorMinor::not_called};
  c.ls_templates[0].parent_ifb = "IFB-99";
  auto diags = validate_catalog(c);
  std::vector<std::string> codes;
  for (const auto& d : diags) codes.push_back(d.code);
  // IFB-1 lost its only child too.
  EXPECT_EQ(codes, (std::vector<std::string>{"DANGLING_REF", "UNLINKED_IFB", "INCONSISTENT_INSTRUCTOR", "DANGLING_REF",
                                             "CHILDLESS_IFB"}));
}

TEST(TemplatesFor, DataCheck) {
  EXPECT_EQ(ids(templates_for(builtin_guideline(), Responsibility::data_check)),
            (std::vector<std::string>{"IFB-1", "IFB-2", "IFB-3", "IFB-4"}));
}

TEST(TemplatesFor, DataTransmission) {
  EXPECT_EQ(ids(templates_for(builtin_guideline(), Responsibility::data_transmission)),
            (std::vector<std::string>{"IFB-8", "IFB-9", "IFB-10", "IFB-11", "IFB-12"}));
}

TEST(TemplatesFor, EmptyCatalog) { EXPECT_TRUE(templates_for(Catalog{}, Responsibility::service_process).empty()); }

TEST(TemplatesFor, DisjointCover) {
  std::set<std::string> seen;
  std::size_t total = 0;
  std::map<Responsibility, std::size_t> sizes;
  for (auto r : kAllResponsibilities) {
    auto ts = templates_for(builtin_guideline(), r);
    sizes[r] = ts.size();
    for (auto* t : ts) {
      EXPECT_TRUE(seen.insert(t->id).second) << t->id;
      ++total;
    }
  }
  EXPECT_EQ(total, 17u);
  EXPECT_EQ(sizes[Responsibility::data_check], 4u);
  EXPECT_EQ(sizes[Responsibility::data_transform], 3u);
  EXPECT_EQ(sizes[Responsibility::data_transmission], 5u);
  EXPECT_EQ(sizes[Responsibility::service_process], 5u);
}

TEST(Instructor, MinorImpliesMajor) {
  EXPECT_EQ(major_of(InstructorMinor::not_called), InstructorMajor::NPCH);
  EXPECT_EQ(major_of(InstructorMinor::not_executed_successfully), InstructorMajor::NPCH);
  EXPECT_EQ(major_of(InstructorMinor::incorrect_data_input), InstructorMajor::PCH);
  EXPECT_EQ(major_of(InstructorMinor::improper_algorithm), InstructorMajor::PCH);
  EXPECT_EQ(major_of(InstructorMinor::information_leakage_risk), InstructorMajor::PCH);
  EXPECT_EQ(major_of(InstructorMinor::violate_time_limit), InstructorMajor::TI);
}
