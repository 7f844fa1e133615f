#pragma once

#include <string>
#include <vector>

#include "mildsim/periodic_limit.hpp"

namespace mildsim {

/// Builds a PeriodicLimitFn from a registry expression, e.g.
///   spike
///   const(0.5)
///   sin(period=2, amplitude=1)
///   decaying_sin(period=2, amplitude=0.5, rate=1)
///   sum(sin(period=2), const(1))
///   scale(0.1, spike)
///   shift(0.25, spike)
/// Unknown names and malformed arguments raise ConfigError.
PeriodicLimitFn parse_expression(const std::string& text);

const std::vector<std::string>& expression_names();

} // namespace mildsim
