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

#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace svsr::acceptance {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int number;
  std::string title;
  std::function<Verdict(const std::filesystem::path& work)> run;
};

Verdict ctc_oracle(const std::filesystem::path&);
Verdict gradient_suite(const std::filesystem::path&);
Verdict analytic_points(const std::filesystem::path&);
Verdict generator_contract(const std::filesystem::path&);
Verdict decoder_factorization(const std::filesystem::path&);
Verdict wer_oracle(const std::filesystem::path&);
Verdict overfit_smoke(const std::filesystem::path&);
Verdict lam_smoke(const std::filesystem::path&);
Verdict pipeline_mismatch(const std::filesystem::path&);
Verdict pipeline_determinism(const std::filesystem::path&);
Verdict checkpoint_averaging(const std::filesystem::path&);

// Collects failed checks of one criterion.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    ++total_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ += !ok;
  }
  Verdict verdict(const std::string& summary) const {
    if (failed_ == 0) return {true, summary};
    std::string d = std::to_string(failed_) + "/" + std::to_string(total_) + " checks failed";
    for (const auto& f : failures_) d += "; " + f;
    return {false, d};
  }

 private:
  int total_ = 0, failed_ = 0;
  std::vector<std::string> failures_;
};

}  // namespace svsr::acceptance
