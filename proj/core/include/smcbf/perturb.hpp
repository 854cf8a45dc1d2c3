#pragma once

#include "smcbf/furuta.hpp"
#include "smcbf/maglev.hpp"

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace smcbf::plants {

/// Multiplicative scale per parameter name, e.g. {"arm_mass": 1.6}.
using ScaleMap = std::map<std::string, double>;

/// Copies of the parameters with the named fields scaled. Field names are
/// the struct member names; the short aliases m0, m1 (Furuta) and M
/// (MAGLEV) are also accepted. Throws std::invalid_argument for unknown
/// names or non-positive scales.
FurutaParams perturb(const FurutaParams& params, const ScaleMap& scales);
MaglevParams perturb(const MaglevParams& params, const ScaleMap& scales);

template <class Params>
struct ParamField {
  std::string_view name;
  double Params::*member;
};

/// Canonical (member-name) fields, in declaration order.
std::span<const ParamField<FurutaParams>> furuta_param_fields();
std::span<const ParamField<MaglevParams>> maglev_param_fields();

std::vector<std::string> furuta_param_names();
std::vector<std::string> maglev_param_names();

}  // namespace smcbf::plants
