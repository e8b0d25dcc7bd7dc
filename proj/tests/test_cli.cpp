#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "catassoc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = catassoc::cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data_file(const char* name) { return std::string(CATASSOC_DATA_DIR) + "/" + name; }

class Scratch {
public:
  Scratch() : dir_(fs::temp_directory_path() / ("catassoc_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                                                 ::testing::UnitTest::GetInstance()->current_test_info()->name())) {
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& body) const {
    std::ofstream(path(name)) << body;
    return path(name);
  }

private:
  fs::path dir_;
};

nlohmann::json fields(const std::string& structured) { return nlohmann::json::parse(structured)["fields"]; }

}  // namespace

TEST(Cli, LoanMatrixHumanOutput) {
  const auto r = run({"matrix", data_file("loan_ontime_risk.csv"), "--response", "Risk", "--given", "OnTime"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* v : {"0.5108", "0.0407", "0.4485", "0.4959", "0.0402", "0.4639", "0.4631", "0.0393", "0.4976"})
    EXPECT_NE(r.out.find(v), std::string::npos) << v << "\n" << r.out;
}

TEST(Cli, VectorReportsGkTau) {
  const auto r = run({"vector", data_file("loan_ontime_risk.csv"), "-y", "Risk", "-x", "OnTime", "--format", "structured"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(fields(r.out)["gk_tau"].get<double>(), .0432, 5e-5);
}

TEST(Cli, TauOnDeterministicFile) {
  Scratch s;
  const auto f = s.write("det.csv", "Y,X\na,1\nb,2\na,3\nc,4\n");
  const auto r = run({"tau", f, "--response", "Y", "--given", "X", "--weights", "equal"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("1.0000"), std::string::npos) << r.out;
}

TEST(Cli, WeightsFromFileAreRescaled) {
  Scratch s;
  const auto w = s.write("w.txt", "2, 0 2\n");
  const auto r = run({"tau", data_file("loan_ontime_risk.csv"), "-y", "Risk", "-x", "OnTime", "-w", "file:" + w,
                      "--format", "structured"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto f = fields(r.out);
  EXPECT_EQ(f["weights_rescaled"], "yes");
  EXPECT_EQ(f["regular"], "no");
  EXPECT_NEAR(f["tau"].get<double>(), 0.5 * (.0451 + .0479), 1e-4);

  const auto bad = s.write("bad.txt", "1 1\n");
  EXPECT_EQ(run({"tau", data_file("loan_ontime_risk.csv"), "-y", "Risk", "-x", "OnTime", "-w", "file:" + bad}).code, 1);
}

TEST(Cli, ExitCodes) {
  const auto unknown = run({"matrix", data_file("loan_ontime_risk.csv"), "-y", "Risk", "-x", "Nope"});
  EXPECT_EQ(unknown.code, 1);
  EXPECT_NE(unknown.err.find("Nope"), std::string::npos);
  EXPECT_NE(unknown.err.find("OnTime"), std::string::npos);
  EXPECT_EQ(run({"matrix", "/nonexistent/file.csv", "-y", "Risk", "-x", "OnTime"}).code, 2);
  EXPECT_EQ(run({"matrix", data_file("loan_ontime_risk.csv"), "-y", "Risk"}).code, 1);
  EXPECT_EQ(run({"inspect", data_file("loan_ontime_risk.csv"), "--precision", "0"}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
  Scratch s;
  const auto empty = s.write("empty.csv", "");
  EXPECT_EQ(run({"inspect", empty}).code, 2);
}

TEST(Cli, InspectFrequencyTableWithMassColumn) {
  const auto r = run({"inspect", data_file("frequency_7x6.csv"), "--mass-column", "count", "--format", "structured"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto f = fields(r.out);
  EXPECT_DOUBLE_EQ(f["total_mass"].get<double>(), 24000.0);
  EXPECT_EQ(f["unit_mass"], "no");
  const auto v = run({"vector", data_file("frequency_7x6.csv"), "--mass-column", "count", "-y", "Y", "-x", "X"});
  EXPECT_NE(v.out.find("0.0825"), std::string::npos) << v.out;
}

TEST(Cli, StructuredOutputIsReproducibleAcrossThreads) {
  const std::vector<std::string> base{"bootstrap", data_file("loan_ontime_risk.csv"), "-y", "Risk", "--subset", "OnTime",
                                      "-B", "200", "--seed", "5", "--format", "structured"};
  auto with = [&](const char* threads) {
    auto a = base;
    a.push_back("--threads");
    a.push_back(threads);
    return run(a);
  };
  const auto one = with("1");
  ASSERT_EQ(one.code, 0) << one.err;
  EXPECT_EQ(one.out, with("1").out);
  EXPECT_EQ(one.out, with("4").out);
  EXPECT_EQ(fields(one.out)["point_estimate"].get<double>(), 100.0);
}

TEST(Cli, SimulateSelectPredictEquiv) {
  Scratch s;
  const auto flu = s.path("flu.csv");
  const auto sim = run({"simulate", "flu", "-n", "100000", "--seed", "1", "-o", flu});
  ASSERT_EQ(sim.code, 0) << sim.err;

  const auto sel = run({"select", "supervised", flu, "-y", "Y", "--epsilon", "1e-4", "--format", "structured"});
  ASSERT_EQ(sel.code, 0) << sel.err;
  EXPECT_EQ(fields(sel.out)["basis"], "X1,X2");

  const auto xor_file = s.write("xor.csv", "A,B,C\n0,0,0\n0,1,1\n1,0,1\n1,1,0\n");
  const auto st = run({"select", "structural", xor_file, "--format", "structured"});
  ASSERT_EQ(st.code, 0) << st.err;
  EXPECT_EQ(fields(st.out)["basis"], "A,B");

  const auto small = s.path("small.csv");
  ASSERT_EQ(run({"simulate", "flu", "-n", "5000", "--seed", "2", "-o", small}).code, 0);
  const auto pr = run({"predict", "--train", flu, "--test", small, "-y", "Y", "-x", "X1,X2", "--seed", "3",
                       "--format", "structured"});
  ASSERT_EQ(pr.code, 0) << pr.err;
  EXPECT_EQ(fields(pr.out)["test_rows"], 5000);

  const auto eq = run({"equiv", small, "--x1", "X1", "--x2", "R3", "-y", "Y", "--level", "3"});
  ASSERT_EQ(eq.code, 0) << eq.err;
  EXPECT_NE(eq.out.find("no"), std::string::npos);
  const auto scan = run({"equiv", small, "--x1", "X1", "--x2", "X2", "-y", "Y", "--format", "delimited"});
  ASSERT_EQ(scan.code, 0) << scan.err;
  EXPECT_NE(scan.out.find("consistent,yes"), std::string::npos) << scan.out;
}

TEST(Cli, SimulateToStdout) {
  const auto r = run({"simulate", "flu", "-n", "3", "--seed", "4", "-o", "-"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("Y,X1,X2,R3,R4,S5\n", 0), 0u) << r.out;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
}
