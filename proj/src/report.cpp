#include "twistgabor/report.hpp"

namespace twg {

Json to_json(const RatioStats& stats, const std::string& spec) {
  Json j;
  j["spec"] = spec;
  j["trials"] = stats.trials;
  j["seed"] = stats.seed;
  j["ratio_min"] = stats.ratio_min;
  j["ratio_max"] = stats.ratio_max;
  j["band"] = stats.band;
  return j;
}

Json to_json(const FrameBounds& fb) {
  Json j;
  j["A"] = fb.lower;
  j["B"] = fb.upper;
  j["B_over_A"] = fb.upper / fb.lower;
  j["power_iterations"] = fb.upper_iterations;
  j["inverse_iterations"] = fb.lower_iterations;
  return j;
}

Json to_json(const Grid& g) {
  Json j;
  j["L"] = g.lengths();
  j["M"] = g.counts();
  return j;
}

Json to_json(const DiscreteCoeffs& c) {
  Json j;
  j["lattice"] = c.lattice.describe();
  j["grid"] = to_json(c.grid);
  Json entries = Json::array();
  for (Index i = 0; i < c.size(); ++i) {
    Json e;
    e["m"] = (*c.points)[i].coords;
    e["re"] = c.values[i].real();
    e["im"] = c.values[i].imag();
    entries.push_back(std::move(e));
  }
  j["coeffs"] = std::move(entries);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace twg
