// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "fisa/cli.hpp"
#include "fisa/fisa.hpp"
#include "support/guideline_oracle.hpp"
#include "support/test_paths.hpp"

using namespace fisa;
using fisa::testing::read_text;
using fisa::testing::source_path;

namespace {

// Collects failed checks of a single criterion.
struct Check {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  template <typename A, typename B>
  void equal(const A& actual, const B& expected, const std::string& what) {
    if (!(actual == expected)) {
      std::ostringstream s;
      s << what << ": got " << actual << ", want " << expected;
      failures.push_back(s.str());
    }
  }
};

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::cli_main(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / ("fisa_acceptance_" + name);
  std::ofstream(path, std::ios::binary) << content;
  return path.string();
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

const std::string kModel = source_path(fisa::testing::kExampleModel);
const std::string kOverlay = source_path(fisa::testing::kExampleOverlay);

Analysis example_analysis(bool refined) {
  auto m = dsl::parse_model(read_text(fisa::testing::kExampleModel));
  if (!refined) return run_analysis(*m.value, builtin_guideline());
  auto ov = dsl::parse_overlay(read_text(fisa::testing::kExampleOverlay));
  return run_analysis(*m.value, builtin_guideline(), &*ov.value);
}

void catalog_fidelity(Check& c) {
  auto exported = run_cli({"catalog", "export"});
  c.equal(exported.code, 0, "catalog export exit code");
  auto parsed = dsl::parse_catalog(exported.out);
  c.expect(parsed.value.has_value(), "exported catalog parses");
  if (!parsed.value) return;
  const Catalog& cat = *parsed.value;
  c.expect(cat == builtin_guideline(), "export parses back to builtin_guideline()");

  c.equal(cat.losses.size(), 4u, "loss count");
  c.equal(cat.hazards.size(), 4u, "hazard count");
  const std::vector<std::pair<std::string, std::string>> hazard_links{
      {"H-1", "L-3"}, {"H-2", "L-1,L-2,L-3,L-4"}, {"H-3", "L-3"}, {"H-4", "L-1,L-2,L-3,L-4"}};
  for (const auto& [h, losses] : hazard_links) {
    const Hazard* hz = cat.find_hazard(h);
    c.expect(hz != nullptr, h + " present");
    if (hz) c.equal(join(hz->linked_losses), losses, h + " losses");
  }

  c.equal(cat.ifb_templates.size(), 17u, "IFB template count");
  c.equal(templates_for(cat, Responsibility::data_check).size(), 4u, "check templates");
  c.equal(templates_for(cat, Responsibility::data_transform).size(), 3u, "transform templates");
  c.equal(templates_for(cat, Responsibility::data_transmission).size(), 5u, "transmission templates");
  c.equal(templates_for(cat, Responsibility::service_process).size(), 5u, "service templates");
  for (const auto& [id, hazards] : std::vector<std::pair<std::string, std::string>>{
           {"IFB-11", "H-1"}, {"IFB-6", "H-2,H-3,H-4"}, {"IFB-1", "H-2,H-4"}}) {
    const IfbTemplate* t = cat.find_ifb(id);
    c.expect(t != nullptr, id + " present");
    if (t) c.equal(join(t->linked_hazards), hazards, id + " hazards");
  }
  // Full row check against the independent transcription.
  for (const auto& row : oracle::kIfbRows) {
    std::string id = "IFB-" + std::to_string(row.number);
    std::string expected = row.hazards;
    std::string h;
    for (std::size_t i = 0; i < expected.size(); ++i)
      h += expected[i] == '/' ? std::string(",") : (i == 0 || expected[i - 1] == '/' ? "H-" : "") + std::string(1, expected[i]);
    const IfbTemplate* t = cat.find_ifb(id);
    if (t) c.equal(join(t->linked_hazards), h, id + " hazards (transcription)");
  }

  c.equal(cat.ls_templates.size(), 23u, "LS template count");
  for (const auto& [id, parent, category] : std::vector<std::tuple<std::string, std::string, CausalCategory>>{
           {"LS-1", "IFB-1", CausalCategory::calling_behavior},
           {"LS-5", "IFB-4", CausalCategory::computing_resource},
           {"LS-14", "IFB-11", CausalCategory::on_link}}) {
    const LsTemplate* t = cat.find_ls(id);
    c.expect(t != nullptr, id + " present");
    if (!t) continue;
    c.equal(t->parent_ifb, parent, id + " parent");
    c.equal(std::string(to_string(t->causal_category)), std::string(to_string(category)), id + " category");
  }
  const std::string columns = "AIBRL";
  for (const auto& cell : oracle::kLsCells) {
    const LsTemplate* t = cat.find_ls("LS-" + std::to_string(cell.number));
    if (!t) {
      c.expect(false, "LS-" + std::to_string(cell.number) + " present");
      continue;
    }
    c.equal(t->parent_ifb, "IFB-" + std::to_string(cell.parent), t->id + " parent (transcription)");
    c.equal(static_cast<std::size_t>(t->causal_category), columns.find(cell.column), t->id + " column (transcription)");
    c.equal(t->description_template, std::string(cell.text), t->id + " text");
  }
}

void example_counts(Check& c) {
  // Golden merged-constraint count, computed once by the table oracle.
  constexpr int kGoldenConstraints = 64;
  auto oracle_counts = oracle::expand(oracle::kExampleFunctions);
  c.equal(oracle_counts.merged_constraints, kGoldenConstraints, "oracle agrees with golden number");

  auto r = run_cli({"analyze", kModel, "--format", "json"});
  c.equal(r.code, 0, "analyze exit code");
  auto doc = nlohmann::json::parse(r.out, nullptr, false);
  c.expect(!doc.is_discarded(), "analyze output is JSON");
  if (doc.is_discarded()) return;
  c.equal(doc["ifb_instances"].size(), 24u, "IFB instances");
  c.equal(doc["ls_instances"].size(), 32u, "LS instances");
  c.equal(static_cast<int>(doc["constraints"].size()), kGoldenConstraints, "constraints");
  c.equal(static_cast<int>(doc["ifb_instances"].size()), oracle_counts.ifbs, "IFB instances vs oracle");
  c.equal(static_cast<int>(doc["ls_instances"].size()), oracle_counts.lss, "LS instances vs oracle");
}

void refinement(Check& c) {
  Analysis a = example_analysis(true);
  std::vector<std::string> target_ifbs, target_lss;
  for (const auto& i : a.ifb_instances)
    if (i.function == "F-1" && i.template_id == "IFB-2") target_ifbs.push_back(i.id);
  for (const auto& l : a.ls_instances)
    if (l.function == "F-1" && l.parent.starts_with("F-1_IFB-2")) target_lss.push_back(l.id);
  c.equal(join(target_ifbs), std::string("F-1_IFB-2.1"), "instances for F-1_IFB-2");
  c.equal(join(target_lss), std::string("F-1_IFB-2.1_LS-2.1,F-1_IFB-2.1_LS-2.2,F-1_IFB-2.1_LS-2.3"), "LS ids");

  std::vector<std::pair<ConstraintKind, std::string>> links;
  for (const auto& sc : a.constraints)
    if (sc.linked_ls.front().starts_with("F-1_IFB-2.1")) links.emplace_back(sc.kind, join(sc.linked_ls));
  const std::string pair12 = "F-1_IFB-2.1_LS-2.1,F-1_IFB-2.1_LS-2.2", only3 = "F-1_IFB-2.1_LS-2.3";
  auto has = [&](ConstraintKind k, const std::string& l) {
    return std::count(links.begin(), links.end(), std::make_pair(k, l)) == 1;
  };
  c.equal(links.size(), 4u, "constraints on refined scenarios");
  c.expect(has(ConstraintKind::inversion, pair12) && has(ConstraintKind::reaction, pair12),
           "LS-2.1/2.2 share one inversion and one reaction constraint");
  c.expect(has(ConstraintKind::inversion, only3) && has(ConstraintKind::reaction, only3),
           "LS-2.3 has its own inversion and reaction constraint");

  auto r = run_cli({"validate", kModel, "--overlay", kOverlay});
  c.equal(r.code, 0, "validate with overlay exit code");
}

void determinism(Check& c) {
  for (const char* path : fisa::testing::kModelCorpus) {
    std::string model = source_path(path);
    for (const auto& args : std::vector<std::vector<std::string>>{{"analyze", model, "--format", "json"},
                                                                  {"analyze", model, "--format", "md"},
                                                                  {"report", model, "--dot", "trace"},
                                                                  {"report", model, "--dot", "fis"}}) {
      auto first = run_cli(args), second = run_cli(args);
      std::string what = std::string(path) + " " + args[0] + " " + args.back();
      c.expect(!first.out.empty(), what + " produced output");
      c.expect(first.out == second.out && first.code == second.code, what + " byte-identical");
    }
  }
}

void parser_properties(Check& c) {
  for (const char* path : fisa::testing::kModelCorpus) {
    auto first = dsl::parse_model(read_text(path));
    c.expect(first.value.has_value(), std::string(path) + " parses");
    if (!first.value) continue;
    auto second = dsl::parse_model(dsl::serialize_model(*first.value));
    c.expect(second.value.has_value() && *second.value == *first.value, std::string(path) + " round-trips");
  }

  std::mt19937 rng(20261018);
  std::uniform_int_distribution<int> len(0, 200), byte(0, 255), coin(0, 1);
  const std::string keywords[] = {"component ", "function ", "flow ", "usecase ", "kind=", "class=", " -> ", "EXTERNAL",
                                  "\"",         "{",         "}",     ":",        "via ",  "#",      "\n",   "F-1"};
  int crashes = 0, unpositioned = 0, rejected = 0;
  // 10,000 raw byte strings, then as many again salted with grammar tokens so
  // the parser gets past the first token more often.
  for (int i = 0; i < 20000; ++i) {
    std::string s;
    int n = len(rng);
    for (int k = 0; k < n; ++k) {
      if (i >= 10000 && coin(rng))
        s += keywords[static_cast<std::size_t>(byte(rng)) % std::size(keywords)];
      else
        s += static_cast<char>(byte(rng));
    }
    try {
      auto p = dsl::parse_model(s);
      if (!p.value) ++rejected;
      for (const auto& d : p.diagnostics)
        if (!d.position) ++unpositioned;
    } catch (...) {
      ++crashes;
    }
  }
  c.equal(crashes, 0, "fuzz inputs that threw");
  c.equal(unpositioned, 0, "diagnostics without a position");
  c.expect(rejected > 0, "fuzz produced rejected inputs");
}

void lint_injection(Check& c) {
  // All hazard links removed from IFB-3: both check functions carry an instance.
  {
    Catalog cat = builtin_guideline();
    for (auto& t : cat.ifb_templates)
      if (t.id == "IFB-3") t.linked_hazards.clear();
    std::string path = temp_file("unlinked.cat", dsl::serialize_catalog(cat));
    for (const char* cmd : {"validate", "analyze"}) {
      auto r = run_cli({cmd, kModel, "--catalog", path});
      c.equal(r.code, 1, std::string(cmd) + " exit code with unlinked IFB-3");
      for (const char* inst : {"F-1_IFB-3", "F-4_IFB-3"})
        c.expect(r.err.find(std::string("error UNLINKED_IFB [") + inst + "]") != std::string::npos,
                 std::string(cmd) + " reports UNLINKED_IFB on " + inst);
    }
  }
  // Isolated function appended to the example model.
  {
    std::string path =
        temp_file("island.fis", read_text(fisa::testing::kExampleModel) + "function F-7 \"Island\" in DCU1 class=service_process\n");
    for (const char* cmd : {"validate", "analyze"}) {
      auto r = run_cli({cmd, path});
      c.equal(r.code, 1, std::string(cmd) + " exit code with isolated function");
      c.expect(r.err.find("UNREACHABLE_FUNCTION [F-7]") != std::string::npos,
               std::string(cmd) + " reports UNREACHABLE_FUNCTION on F-7");
    }
  }
  // Hazard with no losses.
  {
    Catalog cat = builtin_guideline();
    cat.hazards[2].linked_losses.clear();
    std::string path = temp_file("orphan.cat", dsl::serialize_catalog(cat));
    for (const char* cmd : {"validate", "analyze"}) {
      auto r = run_cli({cmd, kModel, "--catalog", path});
      c.equal(r.code, 1, std::string(cmd) + " exit code with empty-loss hazard");
      c.expect(r.err.find("error ORPHAN_HAZARD [H-3]") != std::string::npos,
               std::string(cmd) + " reports ORPHAN_HAZARD on H-3");
    }
  }
}

void traceability(Check& c) {
  for (bool refined : {false, true}) {
    Analysis a = example_analysis(refined);
    TraceGraph g = build_trace_graph(a);
    for (const auto& sc : g.nodes_of(NodeKind::sc))
      c.expect(ancestors(g, sc.id, NodeKind::sc).count(NodeKind::loss) > 0, sc.id + " reaches a loss");
  }
  Analysis a = example_analysis(true);
  TraceGraph g = build_trace_graph(a);
  int covering = 0;
  for (const auto& sc : a.constraints) {
    if (std::find(sc.linked_ls.begin(), sc.linked_ls.end(), "F-1_IFB-2.1_LS-2.3") == sc.linked_ls.end()) continue;
    ++covering;
    TraceGraph up = ancestors(g, sc.id, NodeKind::sc);
    for (const char* id : {"H-2"})
      c.expect(up.contains({id, NodeKind::hazard}), sc.id + " ancestors contain " + id);
    for (const char* id : {"L-1", "L-2", "L-3", "L-4"})
      c.expect(up.contains({id, NodeKind::loss}), sc.id + " ancestors contain " + id);
  }
  c.expect(covering > 0, "a constraint covers F-1_IFB-2.1_LS-2.3");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"1 catalog fidelity", catalog_fidelity},
      {"2 example-case counts", example_counts},
      {"3 refinement reproduction", refinement},
      {"4 determinism", determinism},
      {"5 parser properties", parser_properties},
      {"6 lint injection", lint_injection},
      {"7 traceability closure", traceability},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    try {
      run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    std::cout << (c.failures.empty() ? "PASS " : "FAIL ") << name << '\n';
    for (const auto& f : c.failures) std::cout << "    " << f << '\n';
    failed += c.failures.empty() ? 0 : 1;
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
