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

#include "svsr/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "svsr/common/error.hpp"
#include "svsr/common/hash.hpp"

namespace svsr::nn {

static_assert(std::endian::native == std::endian::little, "checkpoint format assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'S', 'V', 'C', 'K'};

std::string dtype_name(const torch::Tensor& t) {
  switch (t.scalar_type()) {
    case torch::kFloat32: return "f32";
    case torch::kFloat64: return "f64";
    case torch::kInt64: return "i64";
    default: throw FormatError(fmt::format("unsupported checkpoint dtype {}", c10::toString(t.scalar_type())));
  }
}

torch::ScalarType dtype_from(const std::string& s) {
  if (s == "f32") return torch::kFloat32;
  if (s == "f64") return torch::kFloat64;
  if (s == "i64") return torch::kInt64;
  throw FormatError("unknown checkpoint dtype '" + s + "'");
}

}  // namespace

const torch::Tensor* Checkpoint::find(const std::string& name) const {
  for (const auto& [n, t] : tensors)
    if (n == name) return &t;
  return nullptr;
}

void Checkpoint::put(const std::string& name, const torch::Tensor& t) {
  for (auto& [n, existing] : tensors)
    if (n == name) {
      existing = t.detach().contiguous().clone();
      return;
    }
  tensors.emplace_back(name, t.detach().contiguous().clone());
}

std::string Checkpoint::content_hash() const {
  Sha256 h;
  for (const auto& [name, t] : tensors) {
    const auto c = t.contiguous();
    h.update(name);
    h.update(dtype_name(c));
    for (auto d : c.sizes()) h.update(std::to_string(d) + ",");
    h.update(std::span<const std::uint8_t>(static_cast<const std::uint8_t*>(c.data_ptr()), c.nbytes()));
  }
  return h.hex_digest();
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  nlohmann::ordered_json header;
  header["format"] = "svsr-checkpoint";
  header["version"] = kCheckpointVersion;
  header["meta"] = ckpt.meta;
  header["tensors"] = nlohmann::ordered_json::array();
  std::uint64_t offset = 0;
  std::vector<torch::Tensor> payloads;
  for (const auto& [name, t] : ckpt.tensors) {
    auto c = t.detach().to(torch::kCPU).contiguous();
    nlohmann::ordered_json d;
    d["name"] = name;
    d["dtype"] = dtype_name(c);
    d["shape"] = c.sizes().vec();
    d["offset"] = offset;
    d["nbytes"] = c.nbytes();
    header["tensors"].push_back(d);
    offset += c.nbytes();
    payloads.push_back(std::move(c));
  }
  const std::string head = header.dump();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out.write(kMagic, 4);
  const std::uint32_t version = kCheckpointVersion;
  const std::uint64_t head_len = head.size();
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&head_len), sizeof head_len);
  out.write(head.data(), static_cast<std::streamsize>(head.size()));
  for (const auto& c : payloads)
    out.write(static_cast<const char*>(c.data_ptr()), static_cast<std::streamsize>(c.nbytes()));
  if (!out) throw IoError("short write to checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifactError("checkpoint " + path.string() + " does not exist");
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto fail = [&](const std::string& why) { return FormatError(path.string() + ": " + why); };
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw fail("bad magic: not an svsr checkpoint");
  std::uint32_t version;
  std::uint64_t head_len;
  std::memcpy(&version, bytes.data() + 4, 4);
  std::memcpy(&head_len, bytes.data() + 8, 8);
  if (version != kCheckpointVersion) throw fail(fmt::format("unsupported checkpoint version {}", version));
  if (16 + head_len > bytes.size()) throw fail("truncated header");
  nlohmann::ordered_json header;
  try {
    header = nlohmann::ordered_json::parse(std::string_view(bytes.data() + 16, head_len));
  } catch (const nlohmann::json::exception& e) {
    throw fail(e.what());
  }
  const std::size_t base = 16 + head_len;
  Checkpoint ckpt;
  ckpt.meta = header.value("meta", nlohmann::ordered_json::object());
  for (const auto& d : header.at("tensors")) {
    const auto shape = d.at("shape").get<std::vector<std::int64_t>>();
    const auto off = d.at("offset").get<std::uint64_t>();
    const auto nbytes = d.at("nbytes").get<std::uint64_t>();
    if (base + off + nbytes > bytes.size()) throw fail("truncated tensor payload for " + d.at("name").get<std::string>());
    auto t = torch::empty(shape, torch::TensorOptions().dtype(dtype_from(d.at("dtype").get<std::string>())));
    if (static_cast<std::uint64_t>(t.nbytes()) != nbytes) throw fail("tensor size mismatch for " + d.at("name").get<std::string>());
    std::memcpy(t.data_ptr(), bytes.data() + base + off, nbytes);
    ckpt.tensors.emplace_back(d.at("name").get<std::string>(), std::move(t));
  }
  return ckpt;
}

void collect_module(Checkpoint& ckpt, const std::string& prefix, const torch::nn::Module& module) {
  for (const auto& p : module.named_parameters(true)) ckpt.put(prefix + p.key(), p.value());
  for (const auto& b : module.named_buffers(true)) ckpt.put(prefix + b.key(), b.value());
}

void restore_module(const Checkpoint& ckpt, const std::string& prefix, torch::nn::Module& module) {
  torch::NoGradGuard no_grad;
  std::vector<std::string> problems;
  auto copy_into = [&](const std::string& name, torch::Tensor& dst) {
    const torch::Tensor* src = ckpt.find(prefix + name);
    if (src == nullptr) {
      problems.push_back(prefix + name + " (missing)");
      return;
    }
    if (src->sizes() != dst.sizes()) {
      problems.push_back(fmt::format("{} (checkpoint {} vs model {})", prefix + name, fmt::join(src->sizes(), "x"),
                                     fmt::join(dst.sizes(), "x")));
      return;
    }
    dst.copy_(src->to(dst.dtype()));
  };
  for (auto& p : module.named_parameters(true)) copy_into(p.key(), p.value());
  for (auto& b : module.named_buffers(true)) copy_into(b.key(), b.value());
  if (!problems.empty()) throw ShapeError(fmt::format("checkpoint does not fit model: {}", fmt::join(problems, "; ")));
}

std::vector<std::pair<std::string, torch::Tensor>> snapshot(const torch::nn::Module& module) {
  std::vector<std::pair<std::string, torch::Tensor>> out;
  for (const auto& p : module.named_parameters(true)) out.emplace_back(p.key(), p.value().detach().clone());
  for (const auto& b : module.named_buffers(true)) out.emplace_back(b.key(), b.value().detach().clone());
  return out;
}

std::int64_t count_parameters(const torch::nn::Module& module) {
  std::int64_t n = 0;
  for (const auto& p : module.parameters(true)) n += p.numel();
  return n;
}

}  // namespace svsr::nn
