#pragma once

#include "routh/core.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace routh {

/// Point of T*Q.
struct CotangentState {
  Vector q;
  Vector p;
};

/// Point of T*S: shape position and reduced momentum.
struct ReducedCotangentState {
  Vector x;
  Vector s;
};

struct RunMetadata {
  std::string system;
  std::string method;
  double h = 0.0;
  std::map<std::string, std::string> params;
};

template <class State>
struct Sample {
  long step = 0;
  double t = 0.0;
  State state;
};

/// Ordered samples of a run. Sample k is at t = k h.
/// A run that hits a numerical failure keeps every sample up to the last
/// valid step and records the reason in `failure`.
template <class State>
struct Trajectory {
  std::vector<Sample<State>> samples;
  /// Reconstructed group coordinates, one per sample when present.
  std::vector<GroupElement> group;
  RunMetadata meta;
  std::optional<std::string> failure;

  void push(long step, State s) { samples.push_back({step, step * meta.h, std::move(s)}); }
  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  const State& operator[](std::size_t k) const { return samples[k].state; }
  const State& back() const { return samples.back().state; }
};

using ConfigTrajectory = Trajectory<ConfigPoint>;
using ShapeTrajectory = Trajectory<ShapePoint>;
using CotangentTrajectory = Trajectory<CotangentState>;
using ReducedTrajectory = Trajectory<ReducedCotangentState>;

}  // namespace routh
