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

// Writes the synthetic toy corpus used by the examples and acceptance runs.

#include <iostream>

#include <CLI11.hpp>

#include "svsr/common/error.hpp"
#include "svsr/toy/corpus.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write a small synthetic raw corpus", "svsr_toy"};
  std::string out;
  svsr::toy::CorpusOptions o;
  app.add_option("--out", out, "output directory")->required();
  app.add_option("--train", o.train_utterances, "audio-visual training utterances");
  app.add_option("--speech", o.speech_utterances, "audio-only utterances");
  app.add_option("--test", o.test_utterances, "test utterances");
  app.add_option("--faces", o.faces, "still face images");
  app.add_option("--min-words", o.min_words);
  app.add_option("--max-words", o.max_words);
  app.add_option("--raw-size", o.raw_size, "raw frame side in pixels");
  app.add_option("--seed", o.seed);
  CLI11_PARSE(app, argc, argv);
  try {
    svsr::toy::write_corpus(out, o);
  } catch (const svsr::Error& e) {
    std::cerr << "svsr_toy: " << e.what() << "\n";
    return 1;
  }
  std::cout << "corpus written to " << out << "\n";
  return 0;
}
