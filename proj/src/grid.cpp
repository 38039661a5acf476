// SPDX-License-Identifier: Apache-2.0
#include "ida/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ida/errors.hpp"

namespace ida {

namespace {

void require_length(std::size_t actual, std::size_t expected, const char* what) {
  if (actual != expected) {
    throw DimensionError(std::string(what) + ": data length " + std::to_string(actual) +
                         " does not match shape (" + std::to_string(expected) + ")");
  }
}

void require_shape(Shape a, Shape b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": shape " + std::to_string(a.height) + "x" +
                         std::to_string(a.width) + " vs " + std::to_string(b.height) + "x" +
                         std::to_string(b.width));
  }
}

}  // namespace

LabelMap::LabelMap(Shape shape, int num_classes, int fill)
    : shape_(shape), num_classes_(num_classes), data_(shape.pixels(), fill) {
  if (num_classes < 1) throw ConfigError("LabelMap: num_classes must be >= 1");
  if (fill < 0 || fill >= num_classes) throw DataError("LabelMap: fill class out of range");
}

LabelMap::LabelMap(Shape shape, int num_classes, std::vector<int> data)
    : shape_(shape), num_classes_(num_classes), data_(std::move(data)) {
  if (num_classes < 1) throw ConfigError("LabelMap: num_classes must be >= 1");
  require_length(data_.size(), shape.pixels(), "LabelMap");
  for (int v : data_) {
    if (v < 0 || v >= num_classes) {
      throw DataError("LabelMap: class index " + std::to_string(v) + " outside [0, " +
                      std::to_string(num_classes) + ")");
    }
  }
}

std::vector<std::size_t> LabelMap::histogram() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes_), 0);
  for (int v : data_) ++counts[static_cast<std::size_t>(v)];
  return counts;
}

std::vector<int> LabelMap::present_classes() const {
  std::vector<int> present;
  const auto counts = histogram();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] > 0) present.push_back(static_cast<int>(c));
  }
  return present;
}

ProbMap::ProbMap(Shape shape, int num_classes, std::vector<double> data)
    : shape_(shape), num_classes_(num_classes), data_(std::move(data)) {
  if (num_classes < 1) throw ConfigError("ProbMap: num_classes must be >= 1");
  const auto nc = static_cast<std::size_t>(num_classes);
  require_length(data_.size(), shape.pixels() * nc, "ProbMap");
  for (std::size_t p = 0; p < shape.pixels(); ++p) {
    double sum = 0.0;
    for (std::size_t c = 0; c < nc; ++c) {
      const double v = data_[p * nc + c];
      if (!(v >= 0.0)) throw DataError("ProbMap: negative or NaN probability at pixel " + std::to_string(p));
      sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw DataError("ProbMap: probabilities at pixel " + std::to_string(p) + " sum to " +
                      std::to_string(sum));
    }
  }
}

ProbMap ProbMap::unchecked(Shape shape, int num_classes, std::vector<double> data) {
  ProbMap out;
  out.shape_ = shape;
  out.num_classes_ = num_classes;
  out.data_ = std::move(data);
  return out;
}

ProbMap ProbMap::from_scores(Shape shape, int num_classes, std::vector<double> scores) {
  const auto nc = static_cast<std::size_t>(num_classes);
  require_length(scores.size(), shape.pixels() * nc, "ProbMap::from_scores");
  for (std::size_t p = 0; p < shape.pixels(); ++p) {
    double sum = 0.0;
    for (std::size_t c = 0; c < nc; ++c) {
      if (!(scores[p * nc + c] >= 0.0)) throw DataError("ProbMap::from_scores: negative score");
      sum += scores[p * nc + c];
    }
    for (std::size_t c = 0; c < nc; ++c) {
      scores[p * nc + c] = sum > 0.0 ? scores[p * nc + c] / sum : 1.0 / static_cast<double>(nc);
    }
  }
  return ProbMap(shape, num_classes, std::move(scores));
}

ProbMap ProbMap::one_hot(const LabelMap& labels) {
  const auto nc = static_cast<std::size_t>(labels.num_classes());
  std::vector<double> data(labels.shape().pixels() * nc, 0.0);
  for (std::size_t p = 0; p < labels.shape().pixels(); ++p) {
    data[p * nc + static_cast<std::size_t>(labels[p])] = 1.0;
  }
  return unchecked(labels.shape(), labels.num_classes(), std::move(data));
}

ProbMap ProbMap::uniform(Shape shape, int num_classes) {
  if (num_classes < 1) throw ConfigError("ProbMap: num_classes must be >= 1");
  std::vector<double> data(shape.pixels() * static_cast<std::size_t>(num_classes),
                           1.0 / static_cast<double>(num_classes));
  return unchecked(shape, num_classes, std::move(data));
}

ImageGrid::ImageGrid(Shape shape, std::size_t channels, double fill)
    : shape_(shape), channels_(channels), data_(shape.pixels() * channels, std::clamp(fill, 0.0, 1.0)) {
  if (channels == 0) throw ConfigError("ImageGrid: channels must be >= 1");
}

ImageGrid::ImageGrid(Shape shape, std::size_t channels, std::vector<double> data)
    : shape_(shape), channels_(channels), data_(std::move(data)) {
  if (channels == 0) throw ConfigError("ImageGrid: channels must be >= 1");
  require_length(data_.size(), shape.pixels() * channels, "ImageGrid");
  for (double v : data_) {
    if (!(v >= 0.0 && v <= 1.0)) throw DataError("ImageGrid: intensity outside [0, 1]");
  }
}

void ImageGrid::set(std::size_t pixel, std::size_t channel, double value) {
  data_[pixel * channels_ + channel] = std::clamp(value, 0.0, 1.0);
}

MixMask::MixMask(Shape shape, std::uint8_t fill) : shape_(shape), data_(shape.pixels(), fill) {
  if (fill > 1) throw DataError("MixMask: fill must be 0 or 1");
}

MixMask::MixMask(Shape shape, std::vector<std::uint8_t> data) : shape_(shape), data_(std::move(data)) {
  require_length(data_.size(), shape.pixels(), "MixMask");
  for (auto v : data_) {
    if (v > 1) throw DataError("MixMask: values must be exactly 0 or 1");
  }
}

MixMask MixMask::from_classes(const LabelMap& labels, std::span<const int> classes) {
  std::vector<std::uint8_t> selected(static_cast<std::size_t>(labels.num_classes()), 0);
  for (int c : classes) {
    if (c < 0 || c >= labels.num_classes()) throw DataError("MixMask: selected class out of range");
    selected[static_cast<std::size_t>(c)] = 1;
  }
  MixMask mask(labels.shape());
  for (std::size_t p = 0; p < labels.shape().pixels(); ++p) {
    mask.data_[p] = selected[static_cast<std::size_t>(labels[p])];
  }
  return mask;
}

MixMask MixMask::complement() const {
  MixMask out(shape_);
  for (std::size_t p = 0; p < data_.size(); ++p) out.data_[p] = static_cast<std::uint8_t>(1 - data_[p]);
  return out;
}

std::size_t MixMask::count() const {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

LabelMap argmax_labels(const ProbMap& probs) {
  std::vector<int> labels(probs.shape().pixels());
  for (std::size_t p = 0; p < labels.size(); ++p) {
    const auto row = probs.pixel(p);
    // max_element returns the first maximum, i.e. the lowest index on ties.
    labels[p] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return LabelMap(probs.shape(), probs.num_classes(), std::move(labels));
}

std::vector<double> max_confidence(const ProbMap& probs) {
  std::vector<double> conf(probs.shape().pixels());
  for (std::size_t p = 0; p < conf.size(); ++p) {
    const auto row = probs.pixel(p);
    conf[p] = *std::max_element(row.begin(), row.end());
  }
  return conf;
}

ImageGrid masked_blend(const ImageGrid& donor, const ImageGrid& follower, const MixMask& mask) {
  require_shape(donor.shape(), follower.shape(), "masked_blend(image)");
  require_shape(donor.shape(), mask.shape(), "masked_blend(image mask)");
  if (donor.channels() != follower.channels()) throw DimensionError("masked_blend: channel count mismatch");
  const std::size_t ch = donor.channels();
  std::vector<double> out(donor.data().size());
  for (std::size_t p = 0; p < mask.shape().pixels(); ++p) {
    const auto& src = mask[p] ? donor : follower;
    for (std::size_t c = 0; c < ch; ++c) out[p * ch + c] = src.at(p, c);
  }
  return ImageGrid(donor.shape(), ch, std::move(out));
}

LabelMap masked_blend(const LabelMap& donor, const LabelMap& follower, const MixMask& mask) {
  require_shape(donor.shape(), follower.shape(), "masked_blend(labels)");
  require_shape(donor.shape(), mask.shape(), "masked_blend(labels mask)");
  if (donor.num_classes() != follower.num_classes()) throw DimensionError("masked_blend: class count mismatch");
  std::vector<int> out(mask.shape().pixels());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = mask[p] ? donor[p] : follower[p];
  return LabelMap(donor.shape(), donor.num_classes(), std::move(out));
}

void softmax(std::span<const double> logits, std::span<double> out) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : logits) peak = std::max(peak, v);
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    sum += out[i];
  }
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] /= sum;
}

}  // namespace ida
