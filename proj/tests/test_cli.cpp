#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "peretz/cli.hpp"

using namespace peretz;

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("peretz-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                         "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string write(const std::string& name, const std::string& text) const {
    fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

json::Json parsed(const CliRun& r) { return json::Json::parse(r.out); }

}  // namespace

TEST(Cli, HelpListsSubcommands) {
  CliRun r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* sub : {"decompose", "assert", "balance", "branches", "identity", "av", "fixtures", "jacobian", "sample",
                          "preimage", "complement", "plot"})
    EXPECT_NE(r.out.find(sub), std::string::npos) << sub;
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"av"}).code, 2);
  EXPECT_EQ(run({"av", "--poly", "x", "--fixture", "pinchuk-p"}).code, 2);
  EXPECT_EQ(run({"decompose", "--poly", "x", "--var", "w"}).code, 2);
  EXPECT_EQ(run({"av", "--poly", "x", "--mode", "z-finite"}).code, 2);
  EXPECT_EQ(run({"sample", "--poly", "x"}).code, 2);
  CliRun bad = run({"av", "--poly", "x+"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("offset 2"), std::string::npos);
}

TEST(Cli, UnknownFixtureExitsTwo) {
  CliRun r = run({"decompose", "--fixture", "nope"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("pinchuk-p"), std::string::npos);
}

TEST(Cli, NormalizationFailureExitsOne) {
  CliRun r = run({"av", "--poly", "x^2 + y^2"});
  EXPECT_EQ(r.code, 1);
  json::Json j = parsed(r);
  EXPECT_EQ(j["normalization"], false);
  EXPECT_EQ(j["failure"], "NormalizationFailed");
}

TEST(Cli, DecomposeMatchesLibrary) {
  CliRun r = run({"decompose", "--fixture", "pinchuk-p", "--var", "x"});
  ASSERT_EQ(r.code, 0);
  json::Json j = parsed(r);
  ASSERT_EQ(j["terms"].size(), 7u);
  EXPECT_EQ(j["terms"][0]["exponent"], "6");
  EXPECT_EQ(j["terms"][0]["coefficient"], "y^4");
  EXPECT_EQ(j["terms"][6]["coefficient"], "y");
}

TEST(Cli, JsonIsCanonical) {
  for (std::vector<std::string> args : {std::vector<std::string>{"av", "--fixture", "pinchuk-p"},
                                        {"branches", "--fixture", "pinchuk-p", "--mode", "x-finite"},
                                        {"balance", "--fixture", "pinchuk-p"},
                                        {"fixtures"}}) {
    CliRun r = run(args);
    ASSERT_EQ(r.code, 0) << args[0];
    EXPECT_EQ(json::dump(parsed(r)), r.out) << args[0];
    EXPECT_EQ(run(args).out, r.out) << args[0];
  }
}

TEST(Cli, AvReport) {
  json::Json j = parsed(run({"av", "--fixture", "pinchuk-p"}));
  EXPECT_EQ(j["mode"], "y-finite");
  EXPECT_EQ(j["branches"].size(), 2u);
  EXPECT_EQ(j["identities"].size(), 2u);
  EXPECT_EQ(j["values"]["intervals"][0]["lower"], "-1");
  EXPECT_EQ(j["values"]["intervals"][0]["upper"], "+inf");
  EXPECT_EQ(j["identities"][0]["substitution"]["y"], "x^3*y + x^2");
}

TEST(Cli, IdentityFixtureIsVerified) {
  json::Json j = parsed(run({"identity", "--fixture", "identity-extended"}));
  EXPECT_EQ(j["identity"]["verified"], true);
  EXPECT_EQ(j["values"], "a^4 + 2*a^2");
}

TEST(Cli, FileInputAndExport) {
  TempDir tmp;
  std::string p = tmp.write("p.txt", "x*y + 1\n");
  json::Json j = parsed(run({"av", "--file", p}));
  EXPECT_EQ(j["input"], "x*y + 1");
  EXPECT_EQ(run({"av", "--file", (tmp.path() / "missing.txt").string()}).code, 2);

  fs::path out = tmp.path() / "export";
  ASSERT_EQ(run({"fixtures", "--export", out.string()}).code, 0);
  std::ifstream in(out / "pinchuk-p.txt");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text.substr(0, 7), "x^6*y^4");
  EXPECT_TRUE(fs::exists(out / "identity-extended.txt"));
}

TEST(Cli, SampleCsv) {
  TempDir tmp;
  std::string q = tmp.write("q.txt", "y^2");
  CliRun r = run({"sample", "--poly", "x", "--q-file", q, "--grid", "-1,1,-1,1,2,2", "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "x,y,u,v,det_sign\n"
            "-1,-1,-1,1,-1\n"
            "1,-1,1,1,-1\n"
            "-1,1,-1,1,1\n"
            "1,1,1,1,1\n");
  EXPECT_EQ(run({"sample", "--poly", "x", "--q-file", q, "--format", "svg"}).code, 2);
}

TEST(Cli, PreimageAndConfigPrecedence) {
  TempDir tmp;
  std::string q = tmp.write("q.txt", "2*x*y");
  std::string cfg = tmp.write("c.toml", "[preimage]\ntol = 1e-6\n");
  json::Json dflt = parsed(run({"preimage", "--poly", "x^2 - y^2", "--q-file", q, "--target", "1,0"}));
  EXPECT_EQ(dflt["tol"], 1e-10);
  EXPECT_EQ(dflt["count"], 2);
  json::Json from_cfg = parsed(run({"--config", cfg, "preimage", "--poly", "x^2 - y^2", "--q-file", q}));
  EXPECT_EQ(from_cfg["tol"], 1e-6);
  json::Json flag = parsed(run({"--config", cfg, "preimage", "--poly", "x^2 - y^2", "--q-file", q, "--tol", "1e-9"}));
  EXPECT_EQ(flag["tol"], 1e-9);
}

TEST(Cli, JacobianSignsAreSeeded) {
  TempDir tmp;
  std::string q = tmp.write("q.txt", "y^2");
  CliRun a = run({"jacobian", "--poly", "x", "--q-file", q, "--seed", "7", "--samples", "500"});
  ASSERT_EQ(a.code, 0);
  json::Json j = parsed(a);
  EXPECT_EQ(j["det"], "2*y");
  auto s = j["sign_report"];
  EXPECT_EQ(s["positive"].get<int>() + s["negative"].get<int>() + s["zero"].get<int>(), 500);
  EXPECT_EQ(run({"jacobian", "--poly", "x", "--q-file", q, "--seed", "7", "--samples", "500"}).out, a.out);
}

TEST(Cli, ComplementAndPlot) {
  TempDir tmp;
  std::string q = tmp.write("q.txt", "y^2");
  CliRun c = run({"complement", "--poly", "x", "--q-file", q, "--window", "-1,1,-1,1,20,21", "--grid", "-1.5,1.5,-1.5,1.5,41,41"});
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(parsed(c)["uncovered"].size(), 200u);
  CliRun svg = run({"plot", "--poly", "x", "--q-file", q, "--what", "complement", "--stroke", "red"});
  ASSERT_EQ(svg.code, 0);
  EXPECT_EQ(svg.out.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.out.find("fill=\"red\""), std::string::npos);
  EXPECT_EQ(run({"plot", "--poly", "x", "--q-file", q, "--what", "nothing"}).code, 2);
  EXPECT_EQ(run({"complement", "--poly", "x", "--q-file", q, "--rounds", "9"}).code, 2);
}
