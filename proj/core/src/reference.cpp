#include "smcbf/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smcbf::sim {

namespace {

struct Evaluate {
  double t;

  double operator()(const SquareWave& s) const {
    const double phase = std::fmod(t, s.period);
    return phase < 0.5 * s.period ? s.amplitude : -s.amplitude;
  }

  double operator()(const PulseTrain& p) const {
    for (double start : p.times)
      if (t >= start && t < start + p.width) return p.amplitude;
    return 0.0;
  }

  double operator()(const StepSchedule& s) const {
    const auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
    if (it == s.times.begin()) return 0.0;
    return s.values[static_cast<std::size_t>(std::distance(s.times.begin(), it) - 1)];
  }
};

struct Validate {
  void operator()(const SquareWave& s) const {
    if (!(s.period > 0.0)) throw std::invalid_argument("square wave: period must be > 0");
  }
  void operator()(const PulseTrain& p) const {
    if (!(p.width >= 0.0)) throw std::invalid_argument("pulse train: width must be >= 0");
  }
  void operator()(const StepSchedule& s) const {
    if (s.times.size() != s.values.size())
      throw std::invalid_argument("step schedule: times and values differ in length");
    if (!std::is_sorted(s.times.begin(), s.times.end()))
      throw std::invalid_argument("step schedule: times must be non-decreasing");
  }
};

}  // namespace

double generate_reference(const ReferenceComponent& spec, double t) {
  return std::visit(Evaluate{t}, spec);
}

double ReferenceSignal::operator()(double t) const {
  double value = 0.0;
  for (const auto& c : components) value += generate_reference(c, t);
  return value;
}

void ReferenceSignal::validate() const {
  for (const auto& c : components) std::visit(Validate{}, c);
}

}  // namespace smcbf::sim
