#pragma once

#include <string>

#include "json.hpp"
#include "twistgabor/discrete_spaces.hpp"
#include "twistgabor/stft_gabor.hpp"

namespace twg {

using Json = nlohmann::ordered_json;

/// {spec, trials, seed, ratio_min, ratio_max, band}
Json to_json(const RatioStats& stats, const std::string& spec);
Json to_json(const FrameBounds& fb);
Json to_json(const DiscreteCoeffs& c);
Json to_json(const Grid& g);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace twg
