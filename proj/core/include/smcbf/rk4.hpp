#pragma once

#include <Eigen/Core>

#include <sstream>
#include <stdexcept>
#include <string>

namespace smcbf::sim {

/// Raised when the state derivative stops being finite.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Classical fourth-order Runge–Kutta step with the input held constant
/// over the step. `deriv(x, u)` returns ẋ.
template <class State, class Input, class Deriv>
State rk4_step(const Deriv& deriv, const State& x, const Input& u, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be > 0");
  auto eval = [&](const State& at) -> State {
    State d = deriv(at, u);
    if (!d.allFinite()) {
      std::ostringstream msg;
      msg << "rk4_step: non-finite derivative at state [" << at.transpose() << "]";
      throw IntegrationError(msg.str());
    }
    return d;
  };
  const State k1 = eval(x);
  const State k2 = eval(State(x + 0.5 * dt * k1));
  const State k3 = eval(State(x + 0.5 * dt * k2));
  const State k4 = eval(State(x + dt * k3));
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace smcbf::sim
