// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "ida/classifier.hpp"
#include "ida/errors.hpp"
#include "ida/kernels.hpp"
#include "oracles.hpp"

using namespace ida;

TEST_CASE("mean cross-entropy examples") {
  std::mt19937_64 rng(61);
  const auto labels = oracle::random_labels(Shape{3, 3}, 4, rng);
  CHECK(mean_cross_entropy(ProbMap::one_hot(labels), labels) == 0.0);
  CHECK(mean_cross_entropy(ProbMap::uniform(Shape{3, 3}, 4), labels) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
}

TEST_CASE("zero model predicts uniform and loses ln C") {
  std::mt19937_64 rng(62);
  const PixelClassifier zero(5);
  const auto image = oracle::random_image(Shape{4, 4}, rng);
  const auto labels = oracle::random_labels(Shape{4, 4}, 5, rng);
  CHECK(source_loss(zero, image, labels).loss == doctest::Approx(std::log(5.0)).epsilon(1e-14));
  const auto probs = zero.predict(image);
  for (double v : probs.data()) CHECK(v == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("very confident correct model has near-zero loss") {
  // Bias-only model pointing at the single present class.
  PixelClassifier m(3);
  m.params()[m.params().size() - 3 + 1] = 800.0;
  const ImageGrid image(Shape{2, 2}, 3, 0.5);
  const LabelMap labels(Shape{2, 2}, 3, 1);
  CHECK(source_loss(m, image, labels).loss == 0.0);
}

TEST_CASE("property: source loss gradient matches finite differences") {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 10; ++trial) {
    const Shape s{4, 4};
    const int nc = 3;
    const auto image = oracle::random_image(s, rng);
    const auto labels = oracle::random_labels(s, nc, rng);
    const auto model = PixelClassifier::random(nc, rng(), 1.0);
    const auto analytic = source_loss(model, image, labels);
    const auto numeric = oracle::finite_difference(model, [&](const PixelClassifier& m) {
      return mean_cross_entropy(m.predict(image), labels);
    });
    CHECK(analytic.loss >= 0.0);
    CHECK(oracle::max_relative_error(analytic.grad, numeric, 1e-6) < 1e-4);
  }
}

TEST_CASE("gradient_step applies the weighted update") {
  PixelClassifier m(2, 1);
  const std::vector<double> grad{1.0, -2.0, 0.5, 0.25};
  gradient_step(m, grad, 0.1, 2.0);
  CHECK(m.params()[0] == doctest::Approx(-0.2));
  CHECK(m.params()[1] == doctest::Approx(0.4));
  CHECK(m.params()[3] == doctest::Approx(-0.05));
  CHECK_THROWS_AS(gradient_step(m, std::vector<double>{1.0}, 0.1), DimensionError);
}

TEST_CASE("teacher EMA endpoints") {
  const auto student0 = PixelClassifier::random(4, 1, 0.3);
  const auto student1 = PixelClassifier::random(4, 2, 0.3);

  TeacherState copy(student0, 0.0);
  copy.update(student1);
  CHECK(copy.model() == student1);

  TeacherState frozen(student0, 1.0);
  frozen.update(student1);
  frozen.update(student1);
  CHECK(frozen.model() == student0);

  TeacherState half(student0, 0.5);
  half.update(student1);
  for (std::size_t i = 0; i < student0.params().size(); ++i) {
    CHECK(half.model().params()[i] == doctest::Approx(0.5 * (student0.params()[i] + student1.params()[i])));
  }
  CHECK_THROWS_AS(TeacherState(student0, 1.5), ConfigError);
}

TEST_CASE("pseudo_label follows the synchronised teacher") {
  std::mt19937_64 rng(64);
  const auto student = PixelClassifier::random(4, 9, 2.0);
  TeacherState teacher(PixelClassifier(4), 0.0);
  teacher.update(student);
  const auto image = oracle::random_image(Shape{6, 6}, rng);
  CHECK(pseudo_label(teacher.model(), image) == argmax_labels(student.predict(image)));
  CHECK(pseudo_label(teacher.model(), image) == pseudo_label(teacher.model(), image));
}

TEST_CASE("model file round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "ida_test_model";
  std::filesystem::create_directories(dir);
  const auto m = PixelClassifier::random(7, 5, 0.7);
  write_model(dir / "m.bin", m);
  CHECK(read_model(dir / "m.bin") == m);
  CHECK_THROWS_AS(read_model(dir / "nope.bin"), DataError);
}
