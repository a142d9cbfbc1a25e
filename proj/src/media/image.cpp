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

#include "svsr/media/image.hpp"

#include <fmt/format.h>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "svsr/common/error.hpp"
#include "svsr/media/clip.hpp"

namespace svsr::media {

namespace {

cv::Mat as_mat(const Image& img) {
  const int type = img.channels == 1 ? CV_8UC1 : CV_8UC3;
  // cv::Mat does not own the buffer; callers clone when needed.
  return cv::Mat(img.height, img.width, type, const_cast<std::uint8_t*>(img.pixels.data()));
}

Image from_mat(const cv::Mat& m) {
  Image out;
  out.width = m.cols;
  out.height = m.rows;
  out.channels = m.channels();
  const cv::Mat c = m.isContinuous() ? m : m.clone();
  out.pixels.assign(c.datastart, c.dataend);
  return out;
}

void check(const Image& img) {
  if (img.channels != 1 && img.channels != 3)
    throw ShapeError(fmt::format("unsupported channel count {}", img.channels));
  if (img.pixels.size() != static_cast<std::size_t>(img.width) * img.height * img.channels)
    throw ShapeError("image payload size does not match its dimensions");
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
  cv::Mat m = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (m.empty()) throw FormatError("cannot decode image " + path.string());
  cv::Mat rgb;
  cv::cvtColor(m, rgb, cv::COLOR_BGR2RGB);
  return from_mat(rgb);
}

void save_png(const std::filesystem::path& path, const Image& image) {
  check(image);
  cv::Mat m = as_mat(image);
  cv::Mat out;
  if (image.channels == 3)
    cv::cvtColor(m, out, cv::COLOR_RGB2BGR);
  else
    out = m;
  if (!cv::imwrite(path.string(), out)) throw IoError("cannot write " + path.string());
}

Image to_gray(const Image& image) {
  check(image);
  if (image.channels == 1) return image;
  cv::Mat gray;
  cv::cvtColor(as_mat(image), gray, cv::COLOR_RGB2GRAY);
  return from_mat(gray);
}

Image resize_bilinear(const Image& image, int width, int height) {
  check(image);
  if (image.width == width && image.height == height) return image;
  cv::Mat out;
  cv::resize(as_mat(image), out, cv::Size(width, height), 0, 0, cv::INTER_LINEAR);
  return from_mat(out);
}

Image crop_mouth(const Image& frame, const BBox& box) {
  check(frame);
  if (box.width <= 0 || box.height <= 0 || box.x < 0 || box.y < 0 || box.x + box.width > frame.width ||
      box.y + box.height > frame.height)
    throw DataError(fmt::format("bbox ({}, {}, {}x{}) outside frame {}x{}", box.x, box.y, box.width, box.height,
                                frame.width, frame.height));
  const Image gray = to_gray(frame);
  cv::Mat roi = as_mat(gray)(cv::Rect(box.x, box.y, box.width, box.height)).clone();
  return resize_bilinear(from_mat(roi), kFrameSize, kFrameSize);
}

}  // namespace svsr::media
