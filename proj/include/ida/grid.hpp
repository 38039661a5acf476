// SPDX-License-Identifier: Apache-2.0
//
// Dense row-major grids shared by every stage of the pipeline: label maps,
// per-pixel class probabilities, RGB images and binary mixing masks.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ida {

struct Shape {
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t pixels() const { return height * width; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Class index per pixel. Every entry lies in [0, num_classes).
class LabelMap {
 public:
  LabelMap() = default;
  /// Filled with `fill` (class 0 by default).
  LabelMap(Shape shape, int num_classes, int fill = 0);
  /// Takes ownership of `data`; throws DimensionError on a length mismatch and
  /// DataError if any index falls outside [0, num_classes).
  LabelMap(Shape shape, int num_classes, std::vector<int> data);

  Shape shape() const { return shape_; }
  std::size_t height() const { return shape_.height; }
  std::size_t width() const { return shape_.width; }
  int num_classes() const { return num_classes_; }

  int at(std::size_t row, std::size_t col) const { return data_[row * shape_.width + col]; }
  int operator[](std::size_t pixel) const { return data_[pixel]; }
  /// Unchecked write; callers keep the index in range.
  void set(std::size_t pixel, int cls) { data_[pixel] = cls; }

  std::span<const int> data() const { return data_; }

  /// Sorted list of classes with at least one pixel.
  std::vector<int> present_classes() const;
  /// Pixel count per class, length num_classes.
  std::vector<std::size_t> histogram() const;

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  Shape shape_{};
  int num_classes_ = 0;
  std::vector<int> data_;
};

/// Per-pixel categorical distribution over C classes. Stored pixel-major:
/// the C probabilities of a pixel are contiguous.
class ProbMap {
 public:
  static constexpr double kSumTolerance = 1e-6;

  ProbMap() = default;
  /// Validates that every pixel is a distribution (entries >= 0, sum 1 within
  /// kSumTolerance); throws DataError otherwise.
  ProbMap(Shape shape, int num_classes, std::vector<double> data);

  /// Skips validation. For kernels that produce softmax output directly.
  static ProbMap unchecked(Shape shape, int num_classes, std::vector<double> data);

  /// Normalises per-pixel nonnegative scores; pixels with zero mass become uniform.
  static ProbMap from_scores(Shape shape, int num_classes, std::vector<double> scores);
  /// Exact one-hot encoding of a label map.
  static ProbMap one_hot(const LabelMap& labels);
  static ProbMap uniform(Shape shape, int num_classes);

  Shape shape() const { return shape_; }
  std::size_t height() const { return shape_.height; }
  std::size_t width() const { return shape_.width; }
  int num_classes() const { return num_classes_; }

  std::span<const double> pixel(std::size_t p) const {
    return {data_.data() + p * static_cast<std::size_t>(num_classes_),
            static_cast<std::size_t>(num_classes_)};
  }
  double prob(std::size_t p, int cls) const {
    return data_[p * static_cast<std::size_t>(num_classes_) + static_cast<std::size_t>(cls)];
  }
  std::span<const double> data() const { return data_; }

 private:
  Shape shape_{};
  int num_classes_ = 0;
  std::vector<double> data_;
};

/// Real-valued intensities in [0, 1], interleaved per pixel (HWC), 3 channels by default.
class ImageGrid {
 public:
  ImageGrid() = default;
  ImageGrid(Shape shape, std::size_t channels = 3, double fill = 0.0);
  /// Throws DimensionError on a length mismatch and DataError on values outside [0, 1].
  ImageGrid(Shape shape, std::size_t channels, std::vector<double> data);

  Shape shape() const { return shape_; }
  std::size_t height() const { return shape_.height; }
  std::size_t width() const { return shape_.width; }
  std::size_t channels() const { return channels_; }

  double at(std::size_t pixel, std::size_t channel) const { return data_[pixel * channels_ + channel]; }
  /// Clamps `value` into [0, 1].
  void set(std::size_t pixel, std::size_t channel, double value);

  std::span<const double> data() const { return data_; }

  friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

 private:
  Shape shape_{};
  std::size_t channels_ = 0;
  std::vector<double> data_;
};

/// Binary donor-selection mask: 1 takes the donor pixel, 0 the follower pixel.
class MixMask {
 public:
  MixMask() = default;
  explicit MixMask(Shape shape, std::uint8_t fill = 0);
  /// Throws DataError if any value is not 0 or 1.
  MixMask(Shape shape, std::vector<std::uint8_t> data);

  /// mask[p] = 1 iff labels[p] is in `classes`.
  static MixMask from_classes(const LabelMap& labels, std::span<const int> classes);

  Shape shape() const { return shape_; }
  std::size_t height() const { return shape_.height; }
  std::size_t width() const { return shape_.width; }
  std::uint8_t operator[](std::size_t p) const { return data_[p]; }
  std::span<const std::uint8_t> data() const { return data_; }

  MixMask complement() const;
  std::size_t count() const;

  friend bool operator==(const MixMask&, const MixMask&) = default;

 private:
  Shape shape_{};
  std::vector<std::uint8_t> data_;
};

/// Per-pixel argmax; ties go to the lowest class index.
LabelMap argmax_labels(const ProbMap& probs);

/// Per-pixel maximum probability, row-major H*W.
std::vector<double> max_confidence(const ProbMap& probs);

/// Donor where mask == 1, follower where mask == 0, bit-exactly.
ImageGrid masked_blend(const ImageGrid& donor, const ImageGrid& follower, const MixMask& mask);
LabelMap masked_blend(const LabelMap& donor, const LabelMap& follower, const MixMask& mask);

/// Numerically stable softmax of one logit row, written into `out`.
void softmax(std::span<const double> logits, std::span<double> out);

}  // namespace ida
