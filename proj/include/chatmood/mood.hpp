// Per-day emotionality series, trendline, and its CSV/SVG renderings.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chatmood/label_class.hpp"

namespace chatmood {

/// positive -> +1, neutral -> 0, negative -> -1.
int class_to_score(LabelClass c);

/// One labeled sentence anchored at its parent message's UTC timestamp.
struct MoodObservation {
  std::int64_t timestamp = 0;  // UTC seconds
  LabelClass label = LabelClass::neutral;
};

struct DayMood {
  std::string date;            // ISO-8601 calendar date
  double mean_score = 0.0;     // in [-1, 1]
  int count = 0;               // sentences that day
  std::int64_t day_number = 0;  // days since epoch; carries gaps into the x axis

  bool operator==(const DayMood&) const = default;
};

struct Trend {
  double slope = 0.0;      // score change per day
  double intercept = 0.0;  // fitted score at the first observed day

  bool operator==(const Trend&) const = default;
};

/// Days with no observations are omitted; a single-day series has no trend.
struct MoodSeries {
  std::vector<DayMood> days;  // dates strictly increasing
  std::optional<Trend> trend;

  bool operator==(const MoodSeries&) const = default;
};

/// Ordinary least squares over (day offset, mean score) pairs.
Trend fit_trend(const std::vector<std::pair<double, double>>& points);

/// Groups by calendar day — UTC shifted by the fixed offset — and averages
/// the mapped scores; the trend is fitted over day offsets from the first
/// observed day. Input order does not matter.
MoodSeries daily_series(const std::vector<MoodObservation>& observations,
                        int timezone_offset_minutes = 0);

/// Header "date,mean_score,count"; means at full round-trip precision.
std::string series_to_csv(const MoodSeries& series);

/// Inverse of series_to_csv; the trend is refitted from the parsed days.
MoodSeries series_from_csv(const std::string& csv);

/// Standalone chart: solid data path (id "data"), dashed trend path
/// (id "trend", absent without a trend), y axis fixed to [-1, 1].
std::string series_to_svg(const MoodSeries& series);

}  // namespace chatmood
