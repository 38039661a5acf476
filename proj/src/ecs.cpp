// SPDX-License-Identifier: Apache-2.0
#include "ida/ecs.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "ida/errors.hpp"
#include "ida/kernels.hpp"

namespace ida {

namespace {

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

}  // namespace

std::string_view to_string(Domain d) { return d == Domain::Source ? "source" : "target"; }

RawEcs measure_ecs(const ProbMap& probs, const LabelMap& membership) {
  const auto sums = kernels::confidence_by_class(probs, membership);
  RawEcs raw(sums.sum.size());
  for (std::size_t c = 0; c < raw.size(); ++c) {
    if (sums.count[c] > 0) raw[c] = sums.sum[c] / static_cast<double>(sums.count[c]);
  }
  return raw;
}

EcsState::EcsState(int num_classes, double tau) : num_classes_(num_classes), tau_(tau) {
  if (num_classes < 1) throw ConfigError("EcsState: num_classes must be >= 1");
  if (!(tau >= 0.0 && tau < 1.0)) throw ConfigError("EcsState: tau must lie in [0, 1)");
  const auto nc = static_cast<std::size_t>(num_classes);
  const double init = 1.0 / static_cast<double>(num_classes);
  source_.assign(nc, init);
  target_.assign(nc, init);
  seen_source_.assign(nc, false);
  seen_target_.assign(nc, false);
}

void EcsState::update(Domain domain, const RawEcs& raw) {
  if (raw.size() != static_cast<std::size_t>(num_classes_)) {
    throw DimensionError("EcsState::update: raw ECS has " + std::to_string(raw.size()) + " classes, state has " +
                         std::to_string(num_classes_));
  }
  auto& values = domain == Domain::Source ? source_ : target_;
  auto& seen = domain == Domain::Source ? seen_source_ : seen_target_;
  for (std::size_t c = 0; c < raw.size(); ++c) {
    if (!raw[c]) continue;
    if (!seen[c]) {
      values[c] = *raw[c];
      seen[c] = true;
    } else {
      values[c] = tau_ * values[c] + (1.0 - tau_) * *raw[c];
    }
  }
}

const std::vector<double>& EcsState::snapshot(Domain domain) const {
  return domain == Domain::Source ? source_ : target_;
}

const std::vector<bool>& EcsState::seen(Domain domain) const {
  return domain == Domain::Source ? seen_source_ : seen_target_;
}

EcsState update(EcsState state, Domain domain, const RawEcs& raw) {
  state.update(domain, raw);
  return state;
}

void EcsHistory::record(std::size_t iteration, Domain domain, const RawEcs& raw, const EcsState& state) {
  const auto& smoothed = state.snapshot(domain);
  for (std::size_t c = 0; c < raw.size(); ++c) {
    if (raw[c]) rows_.push_back({iteration, domain, static_cast<int>(c), *raw[c], smoothed[c]});
  }
}

void EcsHistory::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "iteration,domain,class,raw,smoothed\n";
  for (const auto& r : rows_) {
    out << r.iteration << ',' << to_string(r.domain) << ',' << r.cls << ',' << shortest(r.raw) << ','
        << shortest(r.smoothed) << '\n';
  }
}

void write_ecs_csv(const std::filesystem::path& path, const EcsState& state) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "class,source_ecs,target_ecs\n";
  for (int c = 0; c < state.num_classes(); ++c) {
    const auto cu = static_cast<std::size_t>(c);
    out << c << ',' << shortest(state.snapshot(Domain::Source)[cu]) << ','
        << shortest(state.snapshot(Domain::Target)[cu]) << '\n';
  }
}

EcsState read_ecs_csv(const std::filesystem::path& path, double tau) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty ECS table");
  std::vector<RawEcs::value_type> source;
  std::vector<RawEcs::value_type> target;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::stringstream row(line);
    std::string cls, s, t;
    if (!std::getline(row, cls, ',') || !std::getline(row, s, ',') || !std::getline(row, t)) {
      throw DataError(path.string() + ": expected class,source_ecs,target_ecs");
    }
    try {
      if (std::stoi(cls) != static_cast<int>(source.size())) throw DataError(path.string() + ": classes out of order");
      source.emplace_back(std::stod(s));
      target.emplace_back(std::stod(t));
    } catch (const std::logic_error&) {
      throw DataError(path.string() + ": non-numeric ECS row '" + line + "'");
    }
  }
  if (source.empty()) throw DataError(path.string() + ": no ECS rows");
  for (const auto& v : source) {
    if (!(*v >= 0.0 && *v <= 1.0)) throw DataError(path.string() + ": ECS outside [0, 1]");
  }
  for (const auto& v : target) {
    if (!(*v >= 0.0 && *v <= 1.0)) throw DataError(path.string() + ": ECS outside [0, 1]");
  }
  EcsState state(static_cast<int>(source.size()), tau);
  state.update(Domain::Source, source);
  state.update(Domain::Target, target);
  return state;
}

}  // namespace ida
