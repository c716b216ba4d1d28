#pragma once

#include <iosfwd>
#include <string>

#include "psalloc/model.hpp"
#include "psalloc/simulate.hpp"
#include "psalloc/wasted_space.hpp"

namespace psalloc {

/// CSV layout: '#'-prefixed metadata lines (params, method, tolerances,
/// residuals), then a `k,r,pi` header and one row per state. Probabilities
/// are printed with 17 significant digits so parse(write(x)) == x bit-wise.
void write_csv(std::ostream& os, const JointDistribution& d);
JointDistribution read_csv(std::istream& is);

/// JSON layout: one object {"meta": {...}, "rows": [[k, r, pi], ...]}.
void write_json(std::ostream& os, const JointDistribution& d);
JointDistribution read_json(std::istream& is);

std::string to_json_string(const SimulationSummary& s);
std::string to_json_string(const WastedSpaceDistribution& w);

}  // namespace psalloc
