#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "commands.hpp"
#include "config.hpp"
#include "litgraph/error.hpp"

namespace litgraph::cli {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("litgraph_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Run run_cli(const std::string& args, const fs::path& dir) {
  const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = std::string(LITGRAPH_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

const std::string kData = LITGRAPH_DATA_DIR;

TEST(Config, IniValuesAndRelativePaths) {
  PipelineConfig c;
  std::istringstream ini(
      "[run]\nseed = 7\nthreads = 2\n"
      "[paths]\ngraph = g.nt\nout_dir = /tmp/o\n"
      "[deepwalk]\ndimension = 16\nwalk_length = 20\n"
      "[rgcn]\nhidden_dim = 8\nuse_basis = true\nweight_decay = 0.001\n"
      "[eval]\nks = 1,3\n");
  apply_config(c, ini, "/data/cfg");
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.models.threads, 2u);
  EXPECT_EQ(*c.graph, fs::path("/data/cfg/g.nt"));
  EXPECT_EQ(c.out_dir, fs::path("/tmp/o"));
  EXPECT_EQ(c.models.deepwalk.skipgram.dimension, 16);
  EXPECT_EQ(c.models.brw.skipgram.dimension, 64);
  EXPECT_EQ(c.models.deepwalk.walk.walk_length, 20);
  EXPECT_EQ(c.models.rgcn.hidden_dim, 8);
  EXPECT_TRUE(c.models.rgcn.use_basis);
  EXPECT_EQ(c.ks, (std::vector<std::size_t>{1, 3}));
}

TEST(Config, UnknownKeysAndBadValuesRejected) {
  PipelineConfig c;
  std::istringstream typo("[deepwalk]\ndimensoin = 16\n");
  EXPECT_THROW(apply_config(c, typo), InputError);
  std::istringstream section("[nope]\na = 1\n");
  EXPECT_THROW(apply_config(c, section), InputError);
  std::istringstream bad("[rgcn]\nhidden_dim = many\n");
  EXPECT_THROW(apply_config(c, bad), InputError);
  EXPECT_THROW(parse_ks("5,,x"), InputError);
  EXPECT_THROW(parse_ks("0"), InputError);
}

TEST(Config, WrittenBestConfigReadsBack) {
  PipelineConfig c;
  c.seed = 11;
  c.models.rgcn.hidden_dim = 64;
  c.models.rgcn.weight_decay = 3e-4;
  std::ostringstream out;
  write_model_config(out, c, ModelKind::rgcn);
  PipelineConfig back;
  std::istringstream in(out.str());
  apply_config(back, in);
  EXPECT_EQ(back.seed, 11u);
  EXPECT_EQ(back.models.rgcn.hidden_dim, 64);
  EXPECT_DOUBLE_EQ(back.models.rgcn.weight_decay, 3e-4);
}

TEST(NearestByPrefix, LongestSharedPrefixFirst) {
  const std::vector<std::string> labels{"urn:book:1", "urn:book:12", "urn:tag:1", "urn:book:2"};
  const auto near = nearest_by_prefix(labels, "urn:book:13", 2);
  EXPECT_EQ(near, (std::vector<std::string>{"urn:book:1", "urn:book:12"}));
}

TEST(Cli, IngestFixture) {
  const auto dir = scratch("ingest");
  const auto r = run_cli("--out-dir " + (dir / "out").string() + " ingest " + kData + "/fixture.nt", dir);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "3 triples, 4 entities, 3 relations\n");
  EXPECT_TRUE(fs::exists(dir / "out" / "graph.tsv"));
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("exit");
  const std::string out = "--out-dir " + (dir / "out").string() + " ";
  auto r = run_cli(out + "ingest " + (dir / "missing.nt").string(), dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("not found"), std::string::npos);

  std::ofstream(dir / "bad.nt") << "<urn:a> <urn:p> <urn:b> .\n<urn:a> <urn:p>\n";
  r = run_cli(out + "ingest " + (dir / "bad.nt").string(), dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);

  r = run_cli(out + "frobnicate", dir);
  EXPECT_EQ(r.code, 2);

  ASSERT_EQ(run_cli(out + "ingest " + kData + "/fixture.nt", dir).code, 0);
  ASSERT_EQ(run_cli(out + "split", dir).code, 0);
  r = run_cli(out + "train --model brw", dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("weights"), std::string::npos);

  std::ofstream(dir / "empty_gt.tsv") << "";
  r = run_cli(out + "eval --ground-truth " + (dir / "empty_gt.tsv").string(), dir);
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, RecommendRanksAndExcludesQuery) {
  const auto dir = scratch("recommend");
  // cos(Q,B) = 0.98, cos(Q,C) = 0.6, cos(Q,D) = 0.
  std::ofstream(dir / "emb.tsv") << "#dim=2 model=fixture\nQ\t1\t0\nB\t0.98\t0.198997487421324\nC\t0.6\t0.8\nD\t0\t1\n";
  std::ofstream(dir / "cands.txt") << "Q\nB\nC\nD\n";
  const std::string base = "recommend --embeddings " + (dir / "emb.tsv").string() + " --query Q ";
  auto r = run_cli(base + "--candidates " + (dir / "cands.txt").string() + " --top-k 1", dir);
  EXPECT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(r.out.rfind("rank,candidate,score\n1,B,0.98", 0), 0u) << r.out;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);

  r = run_cli(base + "--candidates " + (dir / "cands.txt").string() + " --top-k 50", dir);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find(",Q,"), std::string::npos);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);

  r = run_cli("recommend --embeddings " + (dir / "emb.tsv").string() + " --query Qx", dir);
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("nearest known"), std::string::npos);
  EXPECT_NE(r.err.find("  Q"), std::string::npos);
}

TEST(Cli, ConfigFileWithFlagPrecedence) {
  const auto dir = scratch("config");
  std::ofstream(dir / "run.ini") << "[run]\nseed = 5\n[paths]\nout_dir = from_config\n";
  const auto r = run_cli("--config " + (dir / "run.ini").string() + " --out-dir " + (dir / "flag").string() +
                             " ingest " + kData + "/fixture.nt",
                         dir);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "flag" / "graph.tsv"));
  EXPECT_FALSE(fs::exists(dir / "from_config"));
}

TEST(Cli, SmallPipelineWithHybridDimension) {
  const auto dir = scratch("pipeline");
  const std::string out = "--seed 3 --out-dir " + (dir / "out").string() + " ";
  ASSERT_EQ(run_cli(out + "synth --entities 60 --tags 10 --groups 5 --queries 3 --locality 4", dir).code, 0);
  const auto syn = dir / "out";
  ASSERT_EQ(run_cli(out + "ingest " + (syn / "graph.nt").string(), dir).code, 0);
  ASSERT_EQ(run_cli(out + "split", dir).code, 0);
  const std::string small = " --walks-per-node 3 --walk-length 10 --dimension 8";
  const std::string weights = " --weights " + (syn / "relation_weights.tsv").string();
  ASSERT_EQ(run_cli(out + "train --model deepwalk" + small, dir).code, 0);
  ASSERT_EQ(run_cli(out + "train --model brw" + small + weights, dir).code, 0);
  const auto r = run_cli(out + "train --model hybrid" + small + weights, dir);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(syn / "embeddings" / "hybrid.tsv").rfind("#dim=16 model=hybrid", 0), 0u);

  const auto ev = run_cli(out + "eval --models deepwalk,hybrid --ground-truth " + (syn / "ground_truth.tsv").string() +
                              " --candidates " + (syn / "candidates.txt").string(),
                          dir);
  ASSERT_EQ(ev.code, 0) << ev.err;
  const auto csv = slurp(syn / "report.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "Model,AUC,Hits@10,Hits@5,MRR,nDCG@10");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);

  const auto rep = run_cli(out + "report", dir);
  EXPECT_EQ(rep.code, 0);
  EXPECT_EQ(rep.out, ev.out);
}

}  // namespace
}  // namespace litgraph::cli
