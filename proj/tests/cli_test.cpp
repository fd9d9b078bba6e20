// Copyright 2026 The divminer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Runs the divminer executable end to end.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string command = std::string(DIVMINER_CLI) + " " + args + " 2>&1";
  Run result;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return result;
  char buffer[4096];
  size_t n;
  while ((n = fread(buffer, 1, sizeof(buffer), pipe)) > 0) result.out.append(buffer, n);
  const int raw = pclose(pipe);
  result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("divminer_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    std::ofstream out(dir_ / "data.csv");
    out << "g,h,y\n";
    for (int i = 0; i < 40; ++i) {
      out << (i % 2 ? "a" : "b") << ',' << (i % 3 ? "x" : "z") << ',' << (i % 5) * 0.5 << '\n';
    }
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string in(const char* name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, RunWritesReports) {
  const auto r = run("run --input " + in("data.csv") + " --outcome attribute:y --support 0.1 " +
                     "--top 2 --shapley top1-absolute --out " + in("out"));
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("rows: 40"), std::string::npos);
  EXPECT_NE(r.out.find("itemsets: 9"), std::string::npos);
  EXPECT_NE(r.out.find("elapsed:"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "itemsets.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "itemsets.json"));
  const std::string md = slurp(dir_ / "out" / "top.md");
  EXPECT_NE(md.find("## Highest divergence"), std::string::npos);
  EXPECT_NE(md.find("## Lowest divergence"), std::string::npos);
  size_t svgs = 0;
  for (const auto& entry : fs::directory_iterator(dir_ / "out" / "shapley")) {
    if (entry.path().extension() == ".svg") ++svgs;
  }
  EXPECT_EQ(svgs, 1u);
  // The summary's count equals the serialized record count.
  const std::string csv = slurp(dir_ / "out" / "itemsets.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
}

TEST_F(Cli, FormatSelectsOutputs) {
  const auto r = run("run --input " + in("data.csv") + " --outcome attribute:y --support 0.1 " +
                     "--format md --sign pos --out " + in("md"));
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_TRUE(fs::exists(dir_ / "md" / "top.md"));
  EXPECT_FALSE(fs::exists(dir_ / "md" / "itemsets.csv"));
  EXPECT_EQ(slurp(dir_ / "md" / "top.md").find("## Lowest"), std::string::npos);
}

TEST_F(Cli, ValidationFailuresExitNonzeroWithOneLine) {
  for (const std::string args : {"--support 1.5", "--support 0", "--top 0", "--sign up",
                                 "--format xml", "--compare other"}) {
    const auto r = run("run --input " + in("data.csv") + " --outcome attribute:y " + args +
                       " --out " + in("bad"));
    EXPECT_EQ(r.status, 1) << args << ": " << r.out;
    EXPECT_FALSE(r.out.empty());
  }
  EXPECT_EQ(run("").status, 1);
  EXPECT_EQ(run("run --outcome attribute:y").status, 1);
}

TEST_F(Cli, DataErrorsAndRecordCap) {
  const auto missing = run("run --input " + in("nope.csv") + " --outcome attribute:y");
  EXPECT_EQ(missing.status, 2);
  EXPECT_EQ(std::count(missing.out.begin(), missing.out.end(), '\n'), 1) << missing.out;
  const auto cap = run("run --input " + in("data.csv") +
                       " --outcome attribute:y --support 0.01 --max-records 3 --out " + in("cap"));
  EXPECT_EQ(cap.status, 3) << cap.out;
  const auto bad_outcome = run("run --input " + in("data.csv") + " --outcome bogus:y");
  EXPECT_EQ(bad_outcome.status, 1) << bad_outcome.out;
}

TEST_F(Cli, PrepareMissingSourceIsAnError) {
  const auto r = run("prepare compas --source " + in("nope.csv") + " --out " + in("prep"));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("nope.csv"), std::string::npos);
  EXPECT_EQ(run("prepare iris --source " + in("data.csv")).status, 1);
}

}  // namespace
