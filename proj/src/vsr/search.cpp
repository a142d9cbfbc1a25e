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

#include "svsr/vsr/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "svsr/common/error.hpp"
#include "svsr/nn/tensors.hpp"

namespace svsr::vsr {

double Hypothesis::normalized() const {
  const auto steps = tokens.size() + (truncated ? 0 : 1);
  return steps == 0 ? logprob : logprob / static_cast<double>(steps);
}

namespace {

bool emittable(int id, const tokenizer::SpecialIds& sp) { return id != sp.blank && id != sp.pad && id != sp.sos; }

Hypothesis greedy(const NextTokenScorer& scorer, const SearchOptions& opts) {
  const auto& sp = opts.specials;
  std::vector<int> prefix{sp.sos};
  Hypothesis h;
  for (int step = 0;; ++step) {
    const auto row = scorer({prefix}).at(0);
    int best = -1;
    for (int v = 0; v < static_cast<int>(row.size()); ++v)
      if (emittable(v, sp) && (best < 0 || row[static_cast<std::size_t>(v)] > row[static_cast<std::size_t>(best)]))
        best = v;
    if (best == sp.eos) {
      h.logprob += row[static_cast<std::size_t>(best)];
      return h;
    }
    if (step == opts.max_length) {
      h.truncated = true;
      return h;
    }
    h.logprob += row[static_cast<std::size_t>(best)];
    h.tokens.push_back(best);
    prefix.push_back(best);
  }
}

struct Beam {
  std::vector<int> prefix;  // with sos
  double logprob = 0.0;
};

Hypothesis beam_search(const NextTokenScorer& scorer, const SearchOptions& opts) {
  const auto& sp = opts.specials;
  const auto width = static_cast<std::size_t>(opts.beam);
  std::vector<Beam> live{{{sp.sos}, 0.0}};
  std::vector<Hypothesis> done;

  // Every step keeps the best `width` extensions over all live beams; those
  // ending in eos leave the beam as finished hypotheses.
  for (int step = 0; step <= opts.max_length && !live.empty(); ++step) {
    std::vector<std::vector<int>> prefixes;
    for (const auto& b : live) prefixes.push_back(b.prefix);
    const auto rows = scorer(prefixes);

    struct Candidate {
      std::size_t beam;
      int token;
      double logprob;
    };
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < live.size(); ++i)
      for (int v = 0; v < static_cast<int>(rows[i].size()); ++v)
        if (emittable(v, sp)) cands.push_back({i, v, live[i].logprob + rows[i][static_cast<std::size_t>(v)]});
    const auto keep = std::min(width, cands.size());
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep), cands.end(),
                      [](const Candidate& a, const Candidate& b) {
                        return a.logprob > b.logprob ||
                               (a.logprob == b.logprob && (a.beam < b.beam || (a.beam == b.beam && a.token < b.token)));
                      });

    std::vector<Beam> next;
    for (std::size_t j = 0; j < keep; ++j) {
      const auto& c = cands[j];
      const auto& from = live[c.beam];
      if (c.token == sp.eos) {
        Hypothesis h;
        h.tokens.assign(from.prefix.begin() + 1, from.prefix.end());
        h.logprob = c.logprob;
        done.push_back(std::move(h));
      } else if (step < opts.max_length) {
        auto p = from.prefix;
        p.push_back(c.token);
        next.push_back({std::move(p), c.logprob});
      } else {
        Hypothesis h;
        h.tokens.assign(from.prefix.begin() + 1, from.prefix.end());
        h.logprob = from.logprob;
        h.truncated = true;
        done.push_back(std::move(h));
      }
    }
    live = std::move(next);
  }
  if (done.empty()) throw NumericError("beam search produced no hypothesis");
  return *std::max_element(done.begin(), done.end(), [](const Hypothesis& a, const Hypothesis& b) {
    return a.normalized() < b.normalized();
  });
}

}  // namespace

Hypothesis search(const NextTokenScorer& scorer, const SearchOptions& opts) {
  if (opts.beam < 1) throw ConfigError("beam must be >= 1");
  if (opts.max_length < 0) throw ConfigError("max_length must be >= 0");
  return opts.beam == 1 ? greedy(scorer, opts) : beam_search(scorer, opts);
}

NextTokenScorer model_scorer(VsrModel& model, const torch::Tensor& z_e) {
  return [&model, z_e](const std::vector<std::vector<int>>& prefixes) {
    torch::NoGradGuard guard;
    const auto n = static_cast<std::int64_t>(prefixes.size());
    const auto len = static_cast<std::int64_t>(prefixes.front().size());
    auto y = torch::empty({n, len}, torch::kInt64);
    for (std::int64_t i = 0; i < n; ++i) {
      const auto& p = prefixes[static_cast<std::size_t>(i)];
      if (static_cast<std::int64_t>(p.size()) != len) throw ShapeError("scorer prefixes must share a length");
      for (std::int64_t j = 0; j < len; ++j) y[i][j] = p[static_cast<std::size_t>(j)];
    }
    auto memory = z_e.expand({n, z_e.size(1), z_e.size(2)});
    auto lengths = torch::full({n}, z_e.size(1), torch::kInt64);
    auto logp = torch::log_softmax(model->decoder_logits(memory, lengths, y).select(1, len - 1), -1)
                    .to(torch::kFloat64)
                    .contiguous();
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
      const double* p = logp[i].data_ptr<double>();
      rows[static_cast<std::size_t>(i)].assign(p, p + logp.size(1));
    }
    return rows;
  };
}

Hypothesis decode(VsrModel& model, const media::VideoClip& clip, const DecodeOptions& opts) {
  torch::NoGradGuard guard;
  model->eval();
  auto frames = nn::clip_to_tensor(clip).unsqueeze(0);
  auto lengths = torch::full({1}, frames.size(1), torch::kInt64);
  auto z_e = model->encode(model->frontend(frames), lengths);
  SearchOptions so;
  so.beam = opts.beam;
  so.max_length = static_cast<int>(std::ceil(opts.max_length_factor * static_cast<double>(clip.num_frames)));
  return search(model_scorer(model, z_e), so);
}

double sequence_logprob(VsrModel& model, const torch::Tensor& z_e, const std::vector<int>& tokens) {
  torch::NoGradGuard guard;
  auto [y_in, y_out] = teacher_forcing_pair({tokens}, model->config().vocab_size);
  auto lengths = torch::full({1}, z_e.size(1), torch::kInt64);
  auto logp = torch::log_softmax(model->decoder_logits(z_e, lengths, y_in), -1).to(torch::kFloat64);
  return logp.gather(2, y_out.unsqueeze(2)).sum().item<double>();
}

}  // namespace svsr::vsr
