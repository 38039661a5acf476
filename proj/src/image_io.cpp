// SPDX-License-Identifier: Apache-2.0
#include "ida/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ida/errors.hpp"

namespace ida::io {

namespace {

struct NetpbmHeader {
  std::string magic;
  std::size_t width = 0;
  std::size_t height = 0;
  int maxval = 0;
};

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  int ch = 0;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
  return token;
}

NetpbmHeader read_header(std::istream& in, const std::filesystem::path& path) {
  NetpbmHeader h;
  try {
    h.magic = next_token(in);
    h.width = std::stoul(next_token(in));
    h.height = std::stoul(next_token(in));
    h.maxval = std::stoi(next_token(in));
  } catch (const std::logic_error&) {
    throw DataError("malformed netpbm header in " + path.string());
  }
  if (h.maxval < 1 || h.maxval > 255) {
    throw DataError(path.string() + ": only 8-bit netpbm (maxval 1..255) is supported");
  }
  return h;
}

std::vector<unsigned char> read_payload(std::istream& in, std::size_t n, const std::filesystem::path& path) {
  std::vector<unsigned char> bytes(n);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw DataError(path.string() + ": truncated pixel data");
  return bytes;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void write_gray(const std::filesystem::path& path, Shape shape, int maxval, const std::vector<unsigned char>& bytes) {
  auto out = open_out(path);
  out << "P5\n" << shape.width << ' ' << shape.height << '\n' << maxval << '\n';
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

int infer_classes(const std::vector<int>& data, int num_classes) {
  if (num_classes > 0) return num_classes;
  if (data.empty()) return 1;
  return *std::max_element(data.begin(), data.end()) + 1;
}

}  // namespace

ImageGrid read_ppm(const std::filesystem::path& path) {
  auto in = open_in(path);
  const auto h = read_header(in, path);
  if (h.magic != "P6") throw DataError(path.string() + ": expected P6 PPM, got " + h.magic);
  const Shape shape{h.height, h.width};
  const auto bytes = read_payload(in, shape.pixels() * 3, path);
  std::vector<double> data(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    data[i] = std::min(1.0, static_cast<double>(bytes[i]) / h.maxval);
  }
  return ImageGrid(shape, 3, std::move(data));
}

void write_ppm(const std::filesystem::path& path, const ImageGrid& image) {
  if (image.channels() != 3) throw DimensionError("write_ppm: image must have 3 channels");
  std::vector<unsigned char> bytes(image.data().size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    bytes[i] = static_cast<unsigned char>(std::lround(image.data()[i] * 255.0));
  }
  auto out = open_out(path);
  out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

LabelMap read_pgm_labels(const std::filesystem::path& path, int num_classes) {
  auto in = open_in(path);
  const auto h = read_header(in, path);
  if (h.magic != "P5") throw DataError(path.string() + ": expected P5 PGM, got " + h.magic);
  const Shape shape{h.height, h.width};
  const auto bytes = read_payload(in, shape.pixels(), path);
  std::vector<int> data(bytes.begin(), bytes.end());
  const int nc = infer_classes(data, num_classes);
  return LabelMap(shape, nc, std::move(data));
}

void write_pgm_labels(const std::filesystem::path& path, const LabelMap& labels) {
  if (labels.num_classes() > 256) throw ConfigError("write_pgm_labels: more than 256 classes");
  std::vector<unsigned char> bytes(labels.data().begin(), labels.data().end());
  write_gray(path, labels.shape(), 255, bytes);
}

LabelMap read_csv_labels(const std::filesystem::path& path, int num_classes) {
  auto in = open_in(path);
  std::vector<int> data;
  std::size_t height = 0;
  std::size_t width = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::stringstream row(line);
    std::string cell;
    std::size_t cols = 0;
    while (std::getline(row, cell, ',')) {
      try {
        std::size_t used = 0;
        const int v = std::stoi(cell, &used);
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
        data.push_back(v);
      } catch (const std::logic_error&) {
        throw DataError(path.string() + ": non-integer cell '" + cell + "' on row " + std::to_string(height + 1));
      }
      ++cols;
    }
    if (height == 0) width = cols;
    if (cols != width) throw DataError(path.string() + ": ragged row " + std::to_string(height + 1));
    ++height;
  }
  const int nc = infer_classes(data, num_classes);
  return LabelMap(Shape{height, width}, nc, std::move(data));
}

void write_csv_labels(const std::filesystem::path& path, const LabelMap& labels) {
  auto out = open_out(path);
  for (std::size_t r = 0; r < labels.height(); ++r) {
    for (std::size_t c = 0; c < labels.width(); ++c) {
      if (c) out << ',';
      out << labels.at(r, c);
    }
    out << '\n';
  }
}

LabelMap read_labels(const std::filesystem::path& path, int num_classes) {
  if (path.extension() == ".csv") return read_csv_labels(path, num_classes);
  return read_pgm_labels(path, num_classes);
}

void write_pgm_mask(const std::filesystem::path& path, const MixMask& mask) {
  std::vector<unsigned char> bytes(mask.data().begin(), mask.data().end());
  write_gray(path, mask.shape(), 1, bytes);
}

MixMask read_pgm_mask(const std::filesystem::path& path) {
  auto in = open_in(path);
  const auto h = read_header(in, path);
  if (h.magic != "P5") throw DataError(path.string() + ": expected P5 PGM, got " + h.magic);
  const Shape shape{h.height, h.width};
  auto bytes = read_payload(in, shape.pixels(), path);
  // Accept 0/maxval masks written by other tools.
  for (auto& b : bytes) b = b ? 1 : 0;
  return MixMask(shape, std::vector<std::uint8_t>(bytes.begin(), bytes.end()));
}

}  // namespace ida::io
