#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <sys/wait.h>

#include "cli.hpp"

using namespace annmax;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "annmax");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("annmax_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

// Strips the wall-clock field so records can be compared.
std::string without_time(const std::string& lines) {
  std::istringstream in(lines);
  std::string line, out;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    j["stats"].erase("time_ns");
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace

TEST(CliQuery, ThreePointExample) {
  const auto P = write_temp("p3.csv", "x,y\n1,1\n5,0\n0,6\n");
  const auto Q = write_temp("q3.jsonl", "{\"q\":[[0,0],[2,2]]}\n");
  const auto r = run({"query", "--points", P, "--queries", Q, "--metric", "l1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  const auto want = oracle::brute_query(std::vector<Point>{{1, 1, 0}, {5, 0, 1}, {0, 6, 2}},
                                        std::vector<Point>{{0, 0, 0}, {2, 2, 1}}, Metric::L1);
  EXPECT_EQ(j["query_index"], 0);
  ASSERT_EQ(j["answers"].size(), 1u);
  EXPECT_EQ(j["answers"][0]["id"], want.point.id);
  EXPECT_EQ(j["answers"][0]["g"].get<double>(), want.g);
  EXPECT_GT(j["stats"]["drag_queries"].get<int>(), 0);
}

TEST(CliQuery, TopKAndMetricOverride) {
  const auto P = write_temp("pk.csv", "1,0\n3,0\n7,7\n");
  const auto Q = write_temp("qk.jsonl", "{\"q\":[[0,0],[4,0]],\"k\":5}\n{\"q\":[[0,0],[4,0]],\"metric\":\"l2\"}\n");
  const auto r = run({"query", "--points", P, "--queries", Q});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string a, b;
  std::getline(lines, a);
  std::getline(lines, b);
  EXPECT_EQ(nlohmann::json::parse(a)["answers"].size(), 3u);
  const auto second = nlohmann::json::parse(b);
  EXPECT_EQ(second["query_index"], 1);
  EXPECT_EQ(second["answers"][0]["id"], 0);
  EXPECT_EQ(second["answers"][0]["g"], 3);
}

TEST(CliQuery, EmptyQueryFileGivesNoOutput) {
  const auto P = write_temp("pe.csv", "1,1\n");
  const auto Q = write_temp("qe.jsonl", "");
  const auto r = run({"query", "--points", P, "--queries", Q, "--metric", "l2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "");
}

TEST(CliQuery, MalformedCsvLineSeven) {
  const auto P = write_temp("pbad.csv", "1,1\n2,2\n3,3\n4,4\n5,5\n6,6\n7;7\n");
  const auto Q = write_temp("qbad.jsonl", "{\"q\":[[0,0]]}\n");
  const auto r = run({"query", "--points", P, "--queries", Q});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 7"), std::string::npos) << r.err;
  EXPECT_EQ(r.out, "");
}

TEST(CliQuery, UsageErrors) {
  const auto P = write_temp("pu.csv", "1,1\n");
  const auto Q = write_temp("qu.jsonl", "{\"q\":[[0,0]]}\n");
  const auto Qk = write_temp("quk.jsonl", "{\"q\":[[0,0]],\"k\":2,\"metric\":\"l2\"}\n");
  EXPECT_EQ(run({"query", "--points", P, "--queries", Q, "--metric", "l2", "--topk"}).code, 2);
  EXPECT_EQ(run({"query", "--points", P, "--queries", Qk}).code, 2);
  EXPECT_EQ(run({"query", "--points", P, "--queries", Q, "--metric", "linf"}).code, 2);
  EXPECT_EQ(run({"query", "--points", P + ".missing", "--queries", Q}).code, 2);
  EXPECT_EQ(run({"query", "--points", P}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"verify"}).code, 2);
}

TEST(CliQuery, OutputIsDeterministic) {
  const auto P = write_temp("pd.csv", "0,0\n10,3\n4,4\n-2,7\n9,9\n");
  const auto Q = write_temp("qd.jsonl", "{\"q\":[[1,1],[8,2]],\"k\":4}\n{\"q\":[[3,3]]}\n");
  const auto a = run({"query", "--points", P, "--queries", Q});
  const auto b = run({"query", "--points", P, "--queries", Q});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(without_time(a.out), without_time(b.out));
}

TEST(CliVerify, RandomL1Instances) {
  const auto r = run({"verify", "--metric", "l1", "--seed", "42", "--random", "1000"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1000/1000 ok\n");
}

TEST(CliVerify, RandomL2Instances) {
  const auto r = run({"verify", "--metric", "l2", "--seed", "7", "--random", "200"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "200/200 ok\n");
}

TEST(CliVerify, SameSeedSameReport) {
  const auto a = run({"verify", "--seed", "42", "--random", "100"});
  const auto b = run({"verify", "--seed", "42", "--random", "100"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.code, b.code);
}

TEST(CliVerify, FileRecords) {
  const auto P = write_temp("pv.csv", "x,y\n1,1\n5,0\n0,6\n3,3\n");
  const auto Q = write_temp("qv.jsonl", "{\"q\":[[0,0],[2,2]]}\n{\"q\":[[0,0],[2,2]],\"k\":4}\n{\"q\":[[1,9]],\"metric\":\"l2\"}\n");
  const auto r = run({"verify", "--points", P, "--queries", Q});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.out, "3/3 ok\n");
}

TEST(CliVerify, InjectedFaultIsCaught) {
  const std::string cmd = std::string(ANNMAX_FAULTY_CLI) + " verify --seed 42 --random 5 > /dev/null";
  const int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 1);
}

TEST(CliVerify, FaultReportNamesSeedAndInstance) {
  const std::string out_path = (std::filesystem::temp_directory_path() / "annmax_test_fault.txt").string();
  const std::string cmd = std::string(ANNMAX_FAULTY_CLI) + " verify --seed 42 --random 5 > " + out_path;
  ASSERT_NE(std::system(cmd.c_str()), -1);
  std::ifstream in(out_path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_NE(text.find("instance 0 (seed 42)"), std::string::npos) << text;
  EXPECT_NE(text.find("4/5 ok"), std::string::npos) << text;
}

TEST(CliBinary, ExitCodes) {
  const std::string cli = ANNMAX_CLI;
  auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status(cli + " verify --seed 1 --random 20"), 0);
  EXPECT_EQ(status(cli + " bench --n 1 --queries 3"), 0);
  EXPECT_EQ(status(cli + " bench --n 1 --metric l2 --queries 3 --json"), 0);
  EXPECT_EQ(status(cli + " nonsense"), 2);
}

TEST(CliBench, TableAndJson) {
  const auto t = run({"bench", "--n", "500", "--m", "5", "--queries", "20", "--seed", "3"});
  ASSERT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("mean_drag_queries"), std::string::npos);
  const auto j = run({"bench", "--n", "500", "--m", "5", "--queries", "20", "--metric", "l2", "--json"});
  ASSERT_EQ(j.code, 0);
  const auto rec = nlohmann::json::parse(j.out);
  EXPECT_EQ(rec["n"], 500);
  EXPECT_TRUE(rec.contains("mean_nodes_visited"));
  EXPECT_TRUE(rec.contains("p95_us"));
}
