#pragma once

// JSON interchange for series:
//   {"vars": ["z","zbar"], "cap": N, "coeffs": [{"deg": [j,k], "re": x, "im": y}, ...]}
// Omitted multidegrees are zero; only nonzero coefficients are written.

#include "json.hpp"

#include "rigidsphere/series.hpp"

namespace rigidsphere {

nlohmann::json series_to_json(const MultiSeries &s);
// Throws SeriesError on malformed input.
MultiSeries series_from_json(const nlohmann::json &j);

} // namespace rigidsphere
