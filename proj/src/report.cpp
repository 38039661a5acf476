// SPDX-License-Identifier: Apache-2.0
#include "ida/report.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "ida/errors.hpp"

namespace ida {

std::vector<ReliabilityBin> reliability(std::span<const EcsIouPair> pairs, std::size_t num_bins) {
  if (pairs.empty()) throw ConfigError("reliability: no (ECS, IoU) pairs");
  if (num_bins < 2) throw ConfigError("reliability: need at least two bins");

  std::vector<ReliabilityBin> bins(num_bins);
  std::vector<double> sums(num_bins, 0.0);
  const double width = 1.0 / static_cast<double>(num_bins);
  for (std::size_t b = 0; b < num_bins; ++b) {
    bins[b].ecs_low = static_cast<double>(b) * width;
    bins[b].ecs_high = b + 1 == num_bins ? 1.0 : static_cast<double>(b + 1) * width;
  }
  for (const auto& p : pairs) {
    if (!(p.ecs >= 0.0 && p.ecs <= 1.0) || !(p.iou >= 0.0 && p.iou <= 1.0)) {
      throw ConfigError("reliability: ECS and IoU must lie in [0, 1]");
    }
    const auto b = std::min(num_bins - 1, static_cast<std::size_t>(p.ecs * static_cast<double>(num_bins)));
    sums[b] += p.iou;
    ++bins[b].count;
  }
  for (std::size_t b = 0; b < num_bins; ++b) {
    if (bins[b].count) bins[b].mean_iou = sums[b] / static_cast<double>(bins[b].count);
  }
  return bins;
}

double correlation(std::span<const EcsIouPair> pairs) {
  if (pairs.size() < 2) throw ConfigError("correlation: need at least two pairs");
  const double n = static_cast<double>(pairs.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& p : pairs) {
    mx += p.ecs;
    my += p.iou;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (const auto& p : pairs) {
    const double dx = p.ecs - mx;
    const double dy = p.iou - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelationError("correlation: zero variance");
  return sxy / std::sqrt(sxx * syy);
}

std::string git_blob_digest(std::string_view bytes) {
  const std::string header = "blob " + std::to_string(bytes.size()) + '\0';
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), header.data(), header.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) {
    throw Error("git_blob_digest: SHA-1 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string git_blob_digest_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return git_blob_digest(ss.str());
}

}  // namespace ida
