#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fisa/cli.hpp"
#include "support/test_paths.hpp"

using fisa::testing::source_path;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = fisa::cli::cli_main(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / ("fisa_cli_" + name);
  std::ofstream(path, std::ios::binary) << content;
  return path.string();
}

const std::string kModel = source_path(fisa::testing::kExampleModel);
const std::string kOverlay = source_path(fisa::testing::kExampleOverlay);

}  // namespace

TEST(Cli, ValidateCleanModel) {
  auto r = cli({"validate", kModel});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.err.empty());
}

TEST(Cli, AnalyzeJsonToStdout) {
  auto r = cli({"analyze", kModel, "--format", "json"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.front(), '{');
  EXPECT_NE(r.out.find("\"F-1_IFB-1\""), std::string::npos);
}

TEST(Cli, AnalyzeMarkdownToFile) {
  auto path = (std::filesystem::temp_directory_path() / "fisa_cli_report.md").string();
  auto r = cli({"analyze", kModel, "--overlay", kOverlay, "--format", "md", "--out", path});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_NE(buf.str().find("F-1_IFB-2.1_LS-2.1/2.2"), std::string::npos);
}

TEST(Cli, ReactionOnlyMode) {
  auto r = cli({"analyze", kModel, "--modes", "reaction"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find("\"inversion\""), std::string::npos);
  EXPECT_NE(r.out.find("\"SC-32\""), std::string::npos);
  EXPECT_EQ(r.out.find("\"SC-33\""), std::string::npos);
}

TEST(Cli, BadModesIsUsageError) { EXPECT_EQ(cli({"analyze", kModel, "--modes", "prayer"}).code, 3); }

TEST(Cli, SyntaxErrorExitsTwo) {
  auto r = cli({"validate", source_path("tests/data/broken.fis")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("broken.fis:3:9: error SYNTAX_ERROR"), std::string::npos) << r.err;
}

TEST(Cli, MissingFileExitsTwo) {
  auto r = cli({"validate", "/nonexistent/model.fis"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("IO_ERROR"), std::string::npos);
}

TEST(Cli, UnknownSubcommandIsUsageError) { EXPECT_EQ(cli({"frobnicate"}).code, 3); }

TEST(Cli, NoArgumentsIsUsageError) { EXPECT_EQ(cli({}).code, 3); }

TEST(Cli, Help) {
  auto r = cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("analyze"), std::string::npos);
}

TEST(Cli, UnreachableFunctionExitsOne) {
  auto path = temp_file("island.fis", R"(component VI kind=vehicle_interface
function F-1 "Check" in VI class=data_check
function F-2 "Island" in VI class=data_check
flow D1: EXTERNAL -> F-1
)");
  auto r = cli({"validate", path});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("warning UNREACHABLE_FUNCTION [F-2]"), std::string::npos) << r.err;
}

TEST(Cli, OrphanHazardInCatalogExitsOne) {
  std::string text = fisa::dsl::serialize_catalog(fisa::builtin_guideline());
  auto at = text.find("losses=[L-3]");
  text.replace(at, 12, "losses=[]");
  auto path = temp_file("orphan.cat", text);
  auto r = cli({"validate", kModel, "--catalog", path});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(":6:8: error ORPHAN_HAZARD [H-1]"), std::string::npos) << r.err;
}

TEST(Cli, TraceUpFromConstraint) {
  auto r = cli({"trace", kModel, "--from", "SC-1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("sc SC-1\n  <constrains> ls F-1_IFB-1_LS-1\n    <caused_by> ifb F-1_IFB-1\n", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("<hazard_of> loss L-4"), std::string::npos);
}

TEST(Cli, TraceDownFromLoss) {
  auto r = cli({"trace", kModel, "--from", "L-1", "--direction", "down"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("loss L-1\n  <hazard_of> hazard H-2\n", 0), 0u) << r.out;
}

TEST(Cli, TraceUnknownNode) {
  auto r = cli({"trace", kModel, "--from", "SC-999"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("NODE_NOT_FOUND"), std::string::npos);
}

TEST(Cli, DotOutputs) {
  auto trace = cli({"report", kModel, "--dot", "trace"});
  EXPECT_EQ(trace.code, 0);
  EXPECT_EQ(trace.out.rfind("digraph trace {", 0), 0u);
  auto fis = cli({"report", kModel, "--dot", "fis"});
  EXPECT_EQ(fis.code, 0);
  EXPECT_EQ(fis.out.rfind("digraph fis {", 0), 0u);
  EXPECT_EQ(cli({"report", kModel, "--dot", "pie"}).code, 3);
}

TEST(Cli, CatalogExportRoundTrips) {
  auto r = cli({"catalog", "export"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, fisa::kBuiltinCatalogText);
  auto path = temp_file("export.cat", r.out);
  EXPECT_EQ(cli({"validate", kModel, "--catalog", path}).code, 0);
}
