// SPDX-License-Identifier: Apache-2.0
//
// Serial reference kernels against their OpenMP counterparts.
//   ./ida_bench --benchmark_filter=CrossEntropy
#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "ida/classifier.hpp"
#include "ida/kernels.hpp"

namespace {

using namespace ida;

struct Fixture {
  ImageGrid image;
  LabelMap labels;
  PixelClassifier model;
  FeatureMap features;
  ProbMap probs;

  explicit Fixture(std::size_t side) {
    std::mt19937_64 rng(side);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> cls(0, 5);
    const Shape s{side, side};
    std::vector<double> px(s.pixels() * 3);
    for (auto& v : px) v = u(rng);
    std::vector<int> lab(s.pixels());
    for (auto& v : lab) v = cls(rng);
    image = ImageGrid(s, 3, std::move(px));
    labels = LabelMap(s, 6, std::move(lab));
    model = PixelClassifier::random(6, 1, 0.5);
    features = kernels::reference::extract_features(image);
    probs = kernels::reference::predict(model.view(), features);
  }
};

const Fixture& fixture(std::size_t side) {
  static std::map<std::size_t, Fixture> cache;
  auto it = cache.find(side);
  if (it == cache.end()) it = cache.emplace(side, Fixture(side)).first;
  return it->second;
}

template <auto Fn>
void features(benchmark::State& st) {
  const auto& f = fixture(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(Fn(f.image));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(f.image.shape().pixels()));
}

template <auto Fn>
void predict(benchmark::State& st) {
  const auto& f = fixture(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(Fn(f.model.view(), f.features));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(f.image.shape().pixels()));
}

template <auto Fn>
void cross_entropy(benchmark::State& st) {
  const auto& f = fixture(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(Fn(f.model.view(), f.features, f.labels));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(f.image.shape().pixels()));
}

template <auto Fn>
void confidence(benchmark::State& st) {
  const auto& f = fixture(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(Fn(f.probs, f.labels));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(f.image.shape().pixels()));
}

#define IDA_PAIR(name, fn)                                                                            \
  BENCHMARK(name<&kernels::reference::fn>)->Name(#name "/serial")->Arg(64)->Arg(256)->UseRealTime(); \
  BENCHMARK(name<&kernels::fn>)->Name(#name "/omp")->Arg(64)->Arg(256)->UseRealTime()

IDA_PAIR(features, extract_features);
IDA_PAIR(predict, predict);
IDA_PAIR(cross_entropy, cross_entropy);
IDA_PAIR(confidence, confidence_by_class);

}  // namespace

BENCHMARK_MAIN();
