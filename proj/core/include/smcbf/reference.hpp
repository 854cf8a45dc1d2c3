#pragma once

#include <variant>
#include <vector>

namespace smcbf::sim {

/// ±amplitude, starting positive, switching every half period.
struct SquareWave {
  double amplitude = 0.0;
  double period = 1.0;
};

/// amplitude on [tᵢ, tᵢ + width), 0 elsewhere.
struct PulseTrain {
  double amplitude = 0.0;
  double width = 0.0;
  std::vector<double> times;
};

/// Piecewise constant: values[i] from times[i] on, 0 before times[0].
struct StepSchedule {
  std::vector<double> times;
  std::vector<double> values;
};

using ReferenceComponent = std::variant<SquareWave, PulseTrain, StepSchedule>;

double generate_reference(const ReferenceComponent& spec, double t);

/// Sum of components; an empty signal is identically zero.
struct ReferenceSignal {
  std::vector<ReferenceComponent> components;

  double operator()(double t) const;
  void validate() const;
};

}  // namespace smcbf::sim
