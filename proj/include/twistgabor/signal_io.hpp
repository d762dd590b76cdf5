#pragma once

#include <iosfwd>
#include <string>

#include "twistgabor/grid.hpp"

namespace twg {

// Binary container, little-endian:
//   uint32 n, float64 L[n], uint64 M[n], then prod(M) pairs (re, im) float64.
void write_binary(std::ostream& os, const SampledSignal& f);
SampledSignal read_binary(std::istream& is);
void save_binary(const std::string& path, const SampledSignal& f);
SampledSignal load_binary(const std::string& path);

// CSV with header "index,x_0,...,x_{n-1},re,im"; x is the canonical point.
void write_csv(std::ostream& os, const SampledSignal& f);

/// printf("%.17g"): round-trip exact for doubles.
std::string format_double(double v);

}  // namespace twg
