#include <gtest/gtest.h>

#include <string>

#include "cli_runner.hpp"
#include "support.hpp"

using testsupport::field;
using testsupport::run_cli;
using testsupport::slurp;
using testsupport::TempDir;

namespace {

std::string q(const std::string& s) { return "\"" + s + "\""; }

void gen(const TempDir& t, const std::string& extra = "") {
  const auto r = run_cli("gen-data --seed 5 --train " + q(t.file("tr.hydf")) + " --test " + q(t.file("te.hydf")) + " " + extra);
  ASSERT_EQ(r.code, 0) << r.out;
}

void encode(const TempDir& t, const std::string& name) {
  const auto r = run_cli("encode --seed 5 --input " + q(t.file(name + ".hydf")) + " --out " + q(t.file(name + ".hydv")));
  ASSERT_EQ(r.code, 0) << r.out;
}

}  // namespace

TEST(Cli, GenDataIsDeterministic) {
  TempDir a, b;
  gen(a);
  gen(b);
  EXPECT_EQ(slurp(a.file("tr.hydf")), slurp(b.file("tr.hydf")));
  EXPECT_EQ(slurp(a.file("te.hydf")), slurp(b.file("te.hydf")));
  EXPECT_FALSE(slurp(a.file("tr.hydf")).empty());
}

TEST(Cli, NoJitterTrainSetIsClassifiedPerfectly) {
  TempDir t;
  gen(t, "--sigma 0 --clip-sigma 0 --train-clips 3 --frames 20");
  encode(t, "tr");
  auto r = run_cli("train-hd --seed 5 --data " + q(t.file("tr.hydf")) + " --vectors " + q(t.file("tr.hydv")) + " --out " +
                   q(t.file("m.hyde")));
  ASSERT_EQ(r.code, 0) << r.out;
  r = run_cli("infer --seed 5 --model " + q(t.file("m.hyde")) + " --data " + q(t.file("tr.hydf")) + " --vectors " +
              q(t.file("tr.hydv")));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(field(r.out, "accuracy"), "1.000000") << r.out;
}

TEST(Cli, ReconfigPipelineMatchesKShotSweep) {
  TempDir t;
  gen(t);
  encode(t, "tr");
  encode(t, "te");
  const std::string tr = " --data " + q(t.file("tr.hydf")) + " --vectors " + q(t.file("tr.hydv"));
  auto r = run_cli("train-hd --seed 5" + tr + " --exclude-class 3 --out " + q(t.file("base.hyde")));
  ASSERT_EQ(r.code, 0) << r.out;
  r = run_cli("reconfig --seed 5 --model " + q(t.file("base.hyde")) + tr + " --class 3 --shots 5 --out " + q(t.file("m.hyde")));
  ASSERT_EQ(r.code, 0) << r.out;
  r = run_cli("infer --seed 5 --model " + q(t.file("m.hyde")) + " --data " + q(t.file("te.hydf")) + " --vectors " +
              q(t.file("te.hydv")) + " --held-out 3 --csv " + q(t.file("p.csv")));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto sweep = run_cli("sweep-kshot --seed 5 --k 5 --held-out 3 --trials 1");
  ASSERT_EQ(sweep.code, 0) << sweep.out;
  const auto last = sweep.out.substr(sweep.out.rfind("\n5,") + 1);
  // k,trials,new,old,...
  const auto c1 = last.find(',', last.find(',') + 1);
  const auto c2 = last.find(',', c1 + 1);
  const auto c3 = last.find(',', c2 + 1);
  EXPECT_EQ(field(r.out, "new_class_accuracy"), last.substr(c1 + 1, c2 - c1 - 1)) << r.out << sweep.out;
  EXPECT_EQ(field(r.out, "old_class_accuracy"), last.substr(c2 + 1, c3 - c2 - 1)) << r.out << sweep.out;
  const auto csv = slurp(t.file("p.csv"));
  EXPECT_NE(std::string(csv.begin(), csv.end()).find("# experiment=infer"), std::string::npos);
}

TEST(Cli, MalformedInputExitsWithFormatCode) {
  TempDir t;
  gen(t);
  {
    std::ofstream(t.file("bad.hydv"), std::ios::binary) << "HYDVxx";
  }
  encode(t, "tr");
  auto r = run_cli("train-hd --seed 5 --data " + q(t.file("tr.hydf")) + " --vectors " + q(t.file("tr.hydv")) + " --out " +
                   q(t.file("m.hyde")));
  ASSERT_EQ(r.code, 0);
  r = run_cli("infer --seed 5 --model " + q(t.file("m.hyde")) + " --data " + q(t.file("tr.hydf")) + " --vectors " +
              q(t.file("bad.hydv")));
  EXPECT_EQ(r.code, 3) << r.out;
  EXPECT_NE(r.out.find("offset"), std::string::npos) << r.out;
}

TEST(Cli, MissingArgumentsAndFilesFail) {
  EXPECT_NE(run_cli("infer").code, 0);
  EXPECT_NE(run_cli("no-such-command").code, 0);
  TempDir t;
  EXPECT_EQ(run_cli("encode --seed 1 --input " + q(t.file("missing.hydf")) + " --out " + q(t.file("x.hydv"))).code, 2);
}

TEST(Cli, SaccCheckAndReportsSucceed) {
  auto r = run_cli("sacc-check --seed 3 --kernel conv --trials 20");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(field(r.out, "mismatches"), "0") << r.out;
  TempDir t;
  r = run_cli("nnpe-report --builtin --csv " + q(t.file("t.csv")) + " --latency-csv " + q(t.file("l.csv")));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_FALSE(slurp(t.file("t.csv")).empty());
  r = run_cli("quantize --synthetic --seed 2 --out " + q(t.file("q.hydp")));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(field(r.out, "avg_bits"), "5.000000");
}
