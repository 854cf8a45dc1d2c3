#include "smcbf/perturb.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace smcbf::plants {

namespace {

constexpr std::array<ParamField<FurutaParams>, 13> kFurutaFields{{
    {"arm_mass", &FurutaParams::arm_mass},
    {"pendulum_mass", &FurutaParams::pendulum_mass},
    {"arm_half_length", &FurutaParams::arm_half_length},
    {"pendulum_half_length", &FurutaParams::pendulum_half_length},
    {"arm_radius", &FurutaParams::arm_radius},
    {"arm_com_offset", &FurutaParams::arm_com_offset},
    {"gravity", &FurutaParams::gravity},
    {"torque_constant", &FurutaParams::torque_constant},
    {"back_emf_constant", &FurutaParams::back_emf_constant},
    {"armature_resistance", &FurutaParams::armature_resistance},
    {"duty_to_volts", &FurutaParams::duty_to_volts},
    {"arm_damping", &FurutaParams::arm_damping},
    {"pendulum_damping", &FurutaParams::pendulum_damping},
}};

constexpr std::array<ParamField<MaglevParams>, 11> kMaglevFields{{
    {"l1g", &MaglevParams::l1g},
    {"l2g", &MaglevParams::l2g},
    {"l3g", &MaglevParams::l3g},
    {"mass", &MaglevParams::mass},
    {"gravity", &MaglevParams::gravity},
    {"pitch_inertia", &MaglevParams::pitch_inertia},
    {"roll_inertia", &MaglevParams::roll_inertia},
    {"k1", &MaglevParams::k1},
    {"k2", &MaglevParams::k2},
    {"k3", &MaglevParams::k3},
    {"com_offset", &MaglevParams::com_offset},
}};

constexpr std::array<ParamField<FurutaParams>, 2> kFurutaAliases{{
    {"m0", &FurutaParams::arm_mass},
    {"m1", &FurutaParams::pendulum_mass},
}};

constexpr std::array<ParamField<MaglevParams>, 1> kMaglevAliases{{
    {"M", &MaglevParams::mass},
}};

template <class Params>
double Params::*find_field(std::string_view name, std::span<const ParamField<Params>> fields,
                           std::span<const ParamField<Params>> aliases) {
  for (auto table : {fields, aliases})
    for (const auto& f : table)
      if (f.name == name) return f.member;
  throw std::invalid_argument("perturb: unknown parameter '" + std::string(name) + "'");
}

template <class Params>
Params apply(const Params& params, const ScaleMap& scales,
             std::span<const ParamField<Params>> fields,
             std::span<const ParamField<Params>> aliases) {
  Params out = params;
  for (const auto& [name, scale] : scales) {
    double Params::*member = find_field(name, fields, aliases);
    if (!(scale > 0.0) || !std::isfinite(scale))
      throw std::invalid_argument("perturb: scale for '" + name + "' must be > 0");
    out.*member *= scale;
  }
  return out;
}

template <class Params>
std::vector<std::string> names(std::span<const ParamField<Params>> fields) {
  std::vector<std::string> out;
  for (const auto& f : fields) out.emplace_back(f.name);
  return out;
}

}  // namespace

FurutaParams perturb(const FurutaParams& params, const ScaleMap& scales) {
  return apply<FurutaParams>(params, scales, kFurutaFields, kFurutaAliases);
}

MaglevParams perturb(const MaglevParams& params, const ScaleMap& scales) {
  return apply<MaglevParams>(params, scales, kMaglevFields, kMaglevAliases);
}

std::span<const ParamField<FurutaParams>> furuta_param_fields() { return kFurutaFields; }
std::span<const ParamField<MaglevParams>> maglev_param_fields() { return kMaglevFields; }

std::vector<std::string> furuta_param_names() { return names(furuta_param_fields()); }
std::vector<std::string> maglev_param_names() { return names(maglev_param_fields()); }

}  // namespace smcbf::plants
