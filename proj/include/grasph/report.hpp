#pragma once

#include <string>

#include <json.hpp>

#include "grasph/bounds.hpp"
#include "grasph/series.hpp"
#include "grasph/spherical.hpp"

namespace grasph {

/// 17 significant digits; round-trips every finite double exactly.
std::string format_sig17(double v);

nlohmann::json to_json(const RatioSweepReport& report);
RatioSweepReport sweep_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SeriesReport& report);
SeriesReport series_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CalibrationRecord& record);
nlohmann::json to_json(const ThresholdRecord& record);
nlohmann::json to_json(const EvalResult& result);

/// CSV with header row, comma separator, LF endings.
std::string to_csv(const RatioSweepReport& report);  // shell,max_ratio
std::string to_csv(const SeriesReport& report);      // shell,shell_sum,partial_sum

bool operator==(const RatioSweepReport& a, const RatioSweepReport& b);
bool operator==(const SeriesReport& a, const SeriesReport& b);

}  // namespace grasph
