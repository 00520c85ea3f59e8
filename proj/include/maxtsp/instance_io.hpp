#pragma once

#include <string>
#include <string_view>

#include "maxtsp/metric.hpp"

namespace maxtsp {

// Reads either the native format (first token `MAXTSP`) or the supported
// TSPLIB subset. Native layout:
//
//   MAXTSP 1
//   TYPE POINTS | TYPE MATRIX
//   N <n>
//   D <d>          (POINTS only)
//   NORM <norm>    (POINTS only, optional, defaults to L2)
//   <n rows of d reals>  or  <n rows of n reals>
//
// Blank lines and lines starting with '#' are ignored.
//
// TSPLIB: TYPE: TSP, DIMENSION, and EDGE_WEIGHT_TYPE EUC_2D (NODE_COORD_SECTION)
// or EXPLICIT with EDGE_WEIGHT_FORMAT FULL_MATRIX (EDGE_WEIGHT_SECTION). EUC_2D
// distances are rounded to the nearest integer, nint(sqrt(dx^2 + dy^2)), as
// TSPLIB prescribes; such instances carry no point provenance.
//
// Throws ParseError carrying the offending line number.
MetricInstance parse_instance(std::string_view text);

// Native format. Reals are written in shortest round-trip form, so
// parse_instance(write_instance(x)) reproduces x's matrix bit for bit.
std::string write_instance(const MetricInstance& inst);

MetricInstance read_instance_file(const std::string& path);

}  // namespace maxtsp
