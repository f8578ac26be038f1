#pragma once

#include <map>
#include <string>
#include <vector>

#include "mexp/measures.hpp"
#include "mexp/systems.hpp"

namespace mexp {

using Params = std::map<std::string, double>;

/// Names accepted by make_system, in zoo order.
std::vector<std::string> system_names();

/// Zoo system by name. Parameters: rotation {alpha}; denjoy {alpha, N, profile}.
/// Throws UsageError for an unknown name or parameter.
SystemSpec make_system(const std::string& name, const Params& params = {});

/// Names accepted by make_measure; "dirac:<v>" takes the atom coordinate.
std::vector<std::string> measure_names();

/// Measure on f's space by name. denjoy-minimal reuses f's construction when
/// f is the Denjoy map and builds the default one otherwise.
MeasureSpec make_measure(const std::string& name, const SystemSpec& f);

/// phi(x) = sin^2(pi x / 2), an increasing homeomorphism of [0,1].
PointMap sine_squared();

}  // namespace mexp
