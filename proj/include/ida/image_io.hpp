// SPDX-License-Identifier: Apache-2.0
//
// Netpbm and CSV codecs for grids. Images travel as binary PPM (P6, 8-bit),
// label maps as PGM (P5, class index = gray value) or CSV (one row per line).
#pragma once

#include <filesystem>

#include "ida/grid.hpp"

namespace ida::io {

/// Reads a P6 PPM with maxval <= 255; intensities are divided by maxval.
ImageGrid read_ppm(const std::filesystem::path& path);
/// Writes a 3-channel image as P6 with maxval 255 (round-to-nearest).
void write_ppm(const std::filesystem::path& path, const ImageGrid& image);

/// `num_classes` <= 0 infers max(index) + 1.
LabelMap read_pgm_labels(const std::filesystem::path& path, int num_classes = 0);
/// 8-bit P5, maxval 255; requires num_classes <= 256.
void write_pgm_labels(const std::filesystem::path& path, const LabelMap& labels);

LabelMap read_csv_labels(const std::filesystem::path& path, int num_classes = 0);
void write_csv_labels(const std::filesystem::path& path, const LabelMap& labels);

/// Dispatches on extension: ".csv" is CSV, anything else PGM.
LabelMap read_labels(const std::filesystem::path& path, int num_classes = 0);

/// Mask as P5 with maxval 1, so stored values are exactly 0 and 1.
void write_pgm_mask(const std::filesystem::path& path, const MixMask& mask);
MixMask read_pgm_mask(const std::filesystem::path& path);

}  // namespace ida::io
