// Copyright 2026  The svsr Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "helpers.hpp"
#include "svsr/cli/cli.hpp"
#include "svsr/common/error.hpp"
#include "svsr/eval/wer.hpp"
#include "svsr/media/manifest.hpp"
#include "svsr/toy/corpus.hpp"

namespace svsr::cli {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

TEST(Cli, ExitCodeTable) {
  EXPECT_EQ(exit_code(ErrorKind::config), 2);
  EXPECT_EQ(exit_code(ErrorKind::format), 3);
  EXPECT_EQ(exit_code(ErrorKind::shape), 4);
  EXPECT_EQ(exit_code(ErrorKind::data), 5);
  EXPECT_EQ(exit_code(ErrorKind::numeric), 6);
  EXPECT_EQ(exit_code(ErrorKind::missing_artifact), 7);
  EXPECT_EQ(exit_code(ErrorKind::io), 8);
}

TEST(Cli, UnknownKeyAndMissingSeedAreConfigErrors) {
  svsr::testing::TempDir tmp;
  EXPECT_EQ(run({"train-vocab", "--seed", "1", "--manifests", "x", "--colour", "red", "--out", (tmp / "a").string()}).code,
            2);
  const auto r = run({"train-vocab", "--manifests", "x", "--out", (tmp / "b").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("seed"), std::string::npos) << r.err;
  EXPECT_EQ(run({"no-such-command"}).code, 2);
}

TEST(Cli, MissingArtifactNamesProducer) {
  svsr::testing::TempDir tmp;
  const auto r = run({"decode", "--seed", "1", "--model", (tmp / "m.ckpt").string(), "--vocab",
                      (tmp / "v.json").string(), "--manifest", (tmp / "t.jsonl").string(), "--out", (tmp / "o").string()});
  EXPECT_EQ(r.code, 7);
  EXPECT_TRUE(r.err.find("train-vsr") != std::string::npos || r.err.find("train-vocab") != std::string::npos) << r.err;
}

TEST(Cli, ConfigFilePrecedenceAndHashedRunDirectory) {
  svsr::testing::TempDir tmp;
  toy::CorpusOptions o;
  o.train_utterances = 4;
  o.speech_utterances = 1;
  o.test_utterances = 1;
  o.faces = 1;
  o.raw_size = 64;
  toy::write_corpus(tmp / "corpus", o);
  {
    std::ofstream cfg(tmp / "vocab.cfg");
    cfg << "# vocabulary run\nseed = 4\nvocab_size = 30\nmanifests = " << (tmp / "corpus" / "raw_train.jsonl").string()
        << "\n";
  }
  const auto r = run({"train-vocab", "--config", (tmp / "vocab.cfg").string(), "--vocab_size", "32", "--out",
                      (tmp / "v").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto cfg = read_json(tmp / "v" / "config.json");
  EXPECT_EQ(cfg.dump().find("\"vocab_size\":\"30\""), std::string::npos);
  EXPECT_NE(cfg.dump().find("\"vocab_size\":\"32\""), std::string::npos) << cfg.dump();
  EXPECT_EQ(read_json(tmp / "v" / "vocab.json").at("pieces").size(), 32u);

  setenv("SVSR_RUN_ROOT", (tmp / "runs").c_str(), 1);
  const auto a = run({"train-vocab", "--config", (tmp / "vocab.cfg").string(), "--vocab_size", "32"});
  unsetenv("SVSR_RUN_ROOT");
  ASSERT_EQ(a.code, 0) << a.err;
  std::size_t dirs = 0;
  for (const auto& e : fs::directory_iterator(tmp / "runs")) {
    ++dirs;
    EXPECT_EQ(e.path().filename().string().rfind("train-vocab-", 0), 0u);
    EXPECT_EQ(e.path().filename().string().size(), std::string("train-vocab-").size() + 12);
  }
  EXPECT_EQ(dirs, 1u);
}

// One tiny end-to-end run shared by the pipeline tests below.
class CliPipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = new svsr::testing::TempDir;
    auto& t = *root_;
    toy::CorpusOptions o;
    o.train_utterances = 4;
    o.speech_utterances = 10;
    o.test_utterances = 2;
    o.faces = 3;
    o.min_words = 1;
    o.max_words = 2;
    o.raw_size = 64;
    toy::write_corpus(t / "corpus", o);
    auto ok = [](const CliResult& r) {
      if (r.code != 0) throw std::runtime_error(r.err);
    };
    ok(run({"preprocess", "--seed", "1", "--manifest", (t / "corpus" / "raw_train.jsonl").string(), "--out",
            (t / "pre_train").string()}));
    ok(run({"preprocess", "--seed", "1", "--manifest", (t / "corpus" / "raw_test.jsonl").string(), "--out",
            (t / "pre_test").string()}));
    ok(run({"train-vocab", "--seed", "1", "--manifests", (t / "pre_train" / "manifest.jsonl").string(), "--vocab_size",
            "40", "--out", (t / "vocab").string()}));
    ok(run({"train-vsr", "--seed", "1", "--train", (t / "pre_train" / "manifest.jsonl").string(), "--vocab",
            (t / "vocab" / "vocab.json").string(), "--preset", "desk-small", "--steps", "2", "--warmup_steps", "1",
            "--frame_budget", "120", "--checkpoint_every", "1", "--out", (t / "vsr").string()}));
    ok(run({"train-lam", "--seed", "1", "--manifest", (t / "pre_train" / "manifest.jsonl").string(), "--width",
            "0.0625", "--decoder_convs_per_level", "1", "--steps", "1", "--window", "4", "--out",
            (t / "lam").string()}));
  }
  static void TearDownTestSuite() {
    delete root_;
    root_ = nullptr;
  }
  static svsr::testing::TempDir* root_;
};
svsr::testing::TempDir* CliPipeline::root_ = nullptr;

TEST_F(CliPipeline, DecodeThenEvalEqualsEval) {
  auto& t = *root_;
  const auto test = (t / "pre_test" / "manifest.jsonl").string();
  const auto model = (t / "vsr" / "model.ckpt").string(), vocab = (t / "vocab" / "vocab.json").string();
  auto d = run({"decode", "--seed", "1", "--model", model, "--vocab", vocab, "--manifest", test, "--out",
                (t / "dec").string()});
  ASSERT_EQ(d.code, 0) << d.err;
  auto e1 = run({"eval", "--seed", "1", "--manifest", test, "--hypotheses", (t / "dec" / "decode.jsonl").string(),
                 "--out", (t / "e1").string()});
  ASSERT_EQ(e1.code, 0) << e1.err;
  auto e2 = run({"eval", "--seed", "1", "--manifest", test, "--model", model, "--vocab", vocab, "--out",
                 (t / "e2").string()});
  ASSERT_EQ(e2.code, 0) << e2.err;
  const auto w1 = eval::WerReport::from_json(read_json(t / "e1" / "wer.json"));
  const auto w2 = eval::WerReport::from_json(read_json(t / "e2" / "wer.json"));
  EXPECT_EQ(w1.to_json(), w2.to_json());
  EXPECT_TRUE(fs::exists(t / "e1" / "wer.csv"));
}

TEST_F(CliPipeline, GenSynthTwoFacesPerClip) {
  auto& t = *root_;
  auto r = run({"gen-synth", "--seed", "1", "--generator", (t / "lam" / "lam.ckpt").string(), "--speech",
                (t / "corpus" / "speech.jsonl").string(), "--faces", (t / "corpus" / "faces.jsonl").string(),
                "--faces_per_clip", "2", "--out", (t / "synth").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = media::Manifest::load(t / "synth" / "synth.jsonl");
  EXPECT_EQ(m.size(), 20u);
}

TEST_F(CliPipeline, EveryRunRecordsItsConfig) {
  auto& t = *root_;
  for (const char* d : {"pre_train", "vocab", "vsr", "lam"}) {
    EXPECT_TRUE(fs::exists(t / d / "config.json")) << d;
    EXPECT_TRUE(fs::exists(t / d / "log.txt")) << d;
  }
  EXPECT_EQ(read_json(t / "vsr" / "config.json").dump().find("\"preset\":\"desk-small\"") != std::string::npos, true);
}

}  // namespace
}  // namespace svsr::cli
