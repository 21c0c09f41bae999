#include <gtest/gtest.h>

#include <cstdio>
#include <set>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "xiform/cli.hpp"

using namespace xiform;

namespace {

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path_ = (std::filesystem::temp_directory_path() /
             ("xiform_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) +
              ".json"))
                .string();
    std::ofstream out(path_);
    out << contents;
  }
  ~TempFile() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct RunOutput {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

RunOutput run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kDFile = R"({"gram": [[1, 0], [0, -1]]})";
const char* kHFile = R"({"gram": [[0, 1], [1, 0]]})";

} // namespace

TEST(CliAnalyze, DiagonalForm) {
  TempFile file(kDFile);
  RunOutput r = run({"--format", "json", "analyze", file.path()});
  EXPECT_EQ(r.code, 0);
  json result = r.report().at("result");
  EXPECT_EQ(result.at("rank"), 2);
  EXPECT_EQ(result.at("det"), -1);
  EXPECT_EQ(result.at("unimodular"), true);
  EXPECT_EQ(result.at("parity"), "odd");
  EXPECT_EQ(result.at("signature"), 0);
}

TEST(CliAnalyze, HyperbolicForm) {
  TempFile file(kHFile);
  RunOutput r = run({"--format", "json", "analyze", file.path()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.report().at("result").at("parity"), "even");
  EXPECT_EQ(r.report().at("result").at("signature"), 0);
}

TEST(CliAnalyze, NonSymmetricIsInputError) {
  TempFile file(R"({"gram": [[0, 1], [2, 0]]})");
  RunOutput r = run({"analyze", file.path()});
  EXPECT_EQ(r.code, cli::kExitInput);
  EXPECT_NE(r.err.find("(0,1)"), std::string::npos); // row/col location
}

TEST(CliAnalyze, FloatEntriesRejected) {
  TempFile file(R"({"gram": [[1.5, 0], [0, 1]]})");
  RunOutput r = run({"analyze", file.path()});
  EXPECT_EQ(r.code, cli::kExitInput);
}

TEST(CliAnalyze, MissingFileIsInputError) {
  RunOutput r = run({"analyze", "/nonexistent/path.json"});
  EXPECT_EQ(r.code, cli::kExitInput);
}

TEST(CliClassify, ReportsReferenceShape) {
  TempFile file(kHFile);
  RunOutput r = run({"--format", "json", "classify", file.path()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.report().at("result").at("reference"), "H^1");
}

TEST(CliArf, RequiresG) {
  TempFile file(kDFile);
  RunOutput r = run({"arf", file.path()});
  EXPECT_EQ(r.code, cli::kExitInput);
  EXPECT_NE(r.err.find("MissingField"), std::string::npos);
}

TEST(CliArf, DiagonalRankFour) {
  TempFile file(R"({"gram": [[1,0,0,0],[0,1,0,0],[0,0,-1,0],[0,0,0,-1]], "g": [1,1,0,0]})");
  RunOutput r = run({"--format", "json", "arf", file.path()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.report().at("result").at("invariant"), "xi_odd");
  EXPECT_EQ(r.report().at("result").at("value"), 0);
}

TEST(CliLagrangian, AuditCaseIsRefutedWithCertificate) {
  TempFile file(R"({"gram": [[1,0,0,0],[0,1,0,0],[0,0,-1,0],[0,0,0,-1]], "g": [1,1,0,0]})");
  RunOutput r = run({"--format", "json", "lagrangian", file.path(), "--bound", "8"});
  EXPECT_EQ(r.code, 0); // refuted is definitive
  json result = r.report().at("result");
  EXPECT_EQ(result.at("verdict"), "refuted");
  EXPECT_TRUE(result.contains("pairing_obstruction"));
  EXPECT_EQ(result.at("oracle").at("certificate").at("kind"), "mod4-norm");
  EXPECT_EQ(result.at("oracle").at("certificate_replay"), true);
}

TEST(CliLagrangian, FoundCaseCarriesWitness) {
  TempFile file(R"({"gram": [[0, 1], [1, 0]], "g": [1, 0]})");
  RunOutput r = run({"--format", "json", "lagrangian", file.path()});
  EXPECT_EQ(r.code, 0);
  json result = r.report().at("result");
  EXPECT_EQ(result.at("verdict"), "found");
  EXPECT_TRUE(result.contains("constructive_witness"));
}

TEST(CliObstruction, SyntheticElementaryInstance) {
  TempFile file(
      R"({"gram": [[1,0,0,0],[0,-1,0,0],[0,0,0,1],[0,0,1,0]],
          "f": [0,0,0,1], "g": [1,1,0,0], "Lambda": 0, "sigma": 0})");
  RunOutput r = run({"--format", "json", "obstruction", file.path(), "--k-max", "2"});
  EXPECT_EQ(r.code, 0);
  json result = r.report().at("result");
  EXPECT_EQ(result.at("verdict"), "elementary");
  EXPECT_EQ(result.at("consistency").at("v_norm_matches_Lambda"), true);
  EXPECT_EQ(result.at("consistency").at("xi_odd_matches_Lambda_mod2"), true);
  EXPECT_TRUE(result.contains("witness"));
}

TEST(CliObstruction, ConditionFourFailure) {
  TempFile file(
      R"({"gram": [[1,0,0,0],[0,-1,0,0],[0,0,0,1],[0,0,1,0]],
          "f": [0,0,0,1], "g": [1,0,0,0]})");
  RunOutput r = run({"--format", "json", "obstruction", file.path()});
  EXPECT_EQ(r.code, 0);
  json result = r.report().at("result");
  EXPECT_EQ(result.at("verdict"), "not-elementary");
  EXPECT_EQ(result.at("conditions").at("xi_odd"), 1);
}

TEST(CliLambda, TableSumInertia) {
  RunOutput table = run({"--format", "json", "lambda", "--table"});
  EXPECT_EQ(table.code, 0);
  json rows = table.report().at("result").at("table");
  ASSERT_EQ(rows.size(), 28u);
  EXPECT_EQ(rows.at(1).at("lambda"), 4);
  std::set<int> image;
  for (const auto& row : rows) image.insert(row.at("lambda").get<int>());
  EXPECT_EQ(image.size(), 7u);

  RunOutput sum = run({"--format", "json", "lambda", "--sum", "0", "1"});
  EXPECT_EQ(sum.report().at("result").at("sum"), 4);

  RunOutput inertia = run({"--format", "json", "lambda", "--inertia"});
  json group = inertia.report().at("result").at("inertia_group");
  EXPECT_EQ(group, json::array({0, 7, 14, 21}));
}

TEST(CliLambda, TextTableIsStable) {
  RunOutput r = run({"lambda", "--table"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("  r  lambda"), std::string::npos);
  EXPECT_NE(r.out.find("  1  4"), std::string::npos);
}

TEST(CliAudit, SmallSweepCompletes) {
  RunOutput r = run({"--format", "json", "audit", "--max-rank", "2", "--bound", "4"});
  EXPECT_EQ(r.code, 0);
  json result = r.report().at("result");
  EXPECT_EQ(result.at("violations"), json::array());
  EXPECT_EQ(result.at("replay_ok"), true);
  EXPECT_EQ(result.at("rows").size(), 8u); // D^1 and H^1, four functionals each
}

TEST(CliReport, RoundTripsThroughJson) {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<int> small(0, 99);
  for (int trial = 0; trial < 100; ++trial) {
    ReportDocument doc;
    doc.command = "cmd-" + std::to_string(small(rng));
    doc.input_digest = fnv1a_digest(std::to_string(small(rng)));
    doc.timing_ms = small(rng);
    doc.result = json{{"verdict", small(rng) % 2 ? "found" : "refuted"},
                      {"values", json::array({small(rng), small(rng)})},
                      {"nested", json{{"k", small(rng)}}}};
    json encoded = report_to_json(doc);
    ReportDocument back = report_from_json(json::parse(encoded.dump()));
    EXPECT_EQ(back, doc);
  }
}

TEST(CliHelp, DocumentsExitCodes) {
  RunOutput r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Exit codes"), std::string::npos);
}

TEST(CliUnknownOption, IsInputError) {
  RunOutput r = run({"--bogus"});
  EXPECT_EQ(r.code, cli::kExitInput);
}
