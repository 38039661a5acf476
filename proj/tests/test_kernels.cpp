// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <omp.h>

#include <random>

#include "ida/classifier.hpp"
#include "ida/kernels.hpp"
#include "oracles.hpp"

using namespace ida;

namespace {

struct Instance {
  ImageGrid image;
  LabelMap labels;
  PixelClassifier model;
};

// Sizes straddle the reduction block so partial blocks are exercised.
Instance make_instance(std::mt19937_64& rng) {
  const Shape s{1 + rng() % 48, 1 + rng() % 48};
  const int nc = 2 + static_cast<int>(rng() % 7);
  return {oracle::random_image(s, rng), oracle::random_labels(s, nc, rng),
          PixelClassifier::random(nc, rng(), 0.5)};
}

}  // namespace

TEST_CASE("parallel kernels agree with the serial reference") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = make_instance(rng);
    const auto view = inst.model.view();

    const auto f = kernels::extract_features(inst.image);
    const auto f_ref = kernels::reference::extract_features(inst.image);
    CHECK(f.data == f_ref.data);

    const auto p = kernels::predict(view, f);
    const auto p_ref = kernels::reference::predict(view, f_ref);
    CHECK(std::equal(p.data().begin(), p.data().end(), p_ref.data().begin(), p_ref.data().end()));

    const auto ce = kernels::cross_entropy(view, f, inst.labels);
    const auto ce_ref = kernels::reference::cross_entropy(view, f_ref, inst.labels);
    CHECK(ce.loss == doctest::Approx(ce_ref.loss).epsilon(1e-12));
    CHECK(oracle::max_relative_error(ce.grad, ce_ref.grad, 1e-9) < 1e-10);

    const auto cs = kernels::confidence_by_class(p, inst.labels);
    const auto cs_ref = kernels::reference::confidence_by_class(p_ref, inst.labels);
    CHECK(cs.count == cs_ref.count);
    CHECK(oracle::max_relative_error(cs.sum, cs_ref.sum, 1e-9) < 1e-12);

    const auto pred = argmax_labels(p);
    CHECK(kernels::confusion(inst.labels, pred) == kernels::reference::confusion(inst.labels, pred));
  }
}

TEST_CASE("parallel kernels are bit-identical across thread counts") {
  std::mt19937_64 rng(22);
  const Shape s{70, 50};
  const auto image = oracle::random_image(s, rng);
  const auto labels = oracle::random_labels(s, 5, rng);
  const auto model = PixelClassifier::random(5, 3, 0.5);
  const auto f = kernels::extract_features(image);

  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto one = kernels::cross_entropy(model.view(), f, labels);
  const auto cs_one = kernels::confidence_by_class(model.predict(f), labels);
  omp_set_num_threads(4);
  const auto four = kernels::cross_entropy(model.view(), f, labels);
  const auto cs_four = kernels::confidence_by_class(model.predict(f), labels);
  omp_set_num_threads(saved);

  CHECK(one.loss == four.loss);
  CHECK(one.grad == four.grad);
  CHECK(cs_one.sum == cs_four.sum);
}
