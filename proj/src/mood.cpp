// Daily emotionality aggregation and rendering.
#include "chatmood/mood.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>

#include "chatmood/errors.hpp"
#include "chatmood/numeric.hpp"

namespace chatmood {
namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  return a >= 0 ? a / b : -((-a + b - 1) / b);
}

std::string iso_date(std::int64_t day_number) {
  using namespace std::chrono;
  const year_month_day ymd{sys_days{days{day_number}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::int64_t day_number_from_iso(const std::string& date) {
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  if (std::sscanf(date.c_str(), "%d-%u-%u", &y, &m, &d) != 3)
    throw ParseError("bad ISO date \"" + date + "\"");
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{m}, day{d}};
  if (!ymd.ok()) throw ParseError("bad ISO date \"" + date + "\"");
  return sys_days{ymd}.time_since_epoch().count();
}

std::string number_field(double x) { return nlohmann::json(x).dump(); }

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::optional<Trend> refit(const std::vector<DayMood>& days) {
  if (days.size() < 2) return std::nullopt;
  std::vector<std::pair<double, double>> points;
  for (const DayMood& day : days)
    points.emplace_back(static_cast<double>(day.day_number - days.front().day_number),
                        day.mean_score);
  return fit_trend(points);
}

}  // namespace

int class_to_score(LabelClass c) {
  switch (c) {
    case LabelClass::positive: return 1;
    case LabelClass::neutral: return 0;
    case LabelClass::negative: return -1;
  }
  return 0;
}

Trend fit_trend(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw ValueError("fit_trend: need at least 2 points");
  Eigen::VectorXd x(static_cast<Eigen::Index>(points.size()));
  Eigen::VectorXd y(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    x(static_cast<Eigen::Index>(i)) = points[i].first;
    y(static_cast<Eigen::Index>(i)) = points[i].second;
  }
  const auto [slope, intercept] = ols_line(x, y);
  return {slope, intercept};
}

MoodSeries daily_series(const std::vector<MoodObservation>& observations,
                        int timezone_offset_minutes) {
  if (observations.empty()) throw ValueError("daily_series: no labeled sentences");
  std::map<std::int64_t, std::pair<long, int>> by_day;  // day -> (score sum, count)
  for (const MoodObservation& obs : observations) {
    const std::int64_t shifted =
        obs.timestamp + static_cast<std::int64_t>(timezone_offset_minutes) * 60;
    auto& [sum, count] = by_day[floor_div(shifted, 86400)];
    sum += class_to_score(obs.label);
    ++count;
  }

  MoodSeries series;
  for (const auto& [day, gathered] : by_day) {
    DayMood entry;
    entry.day_number = day;
    entry.date = iso_date(day);
    entry.count = gathered.second;
    entry.mean_score = static_cast<double>(gathered.first) / gathered.second;
    series.days.push_back(std::move(entry));
  }
  series.trend = refit(series.days);
  return series;
}

std::string series_to_csv(const MoodSeries& series) {
  std::string out = "date,mean_score,count\n";
  for (const DayMood& day : series.days)
    out += day.date + "," + number_field(day.mean_score) + "," + std::to_string(day.count) + "\n";
  return out;
}

MoodSeries series_from_csv(const std::string& csv) {
  MoodSeries series;
  std::size_t start = 0;
  int line_no = 0;
  while (start < csv.size()) {
    std::size_t end = csv.find('\n', start);
    if (end == std::string::npos) end = csv.size();
    const std::string line = csv.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "date,mean_score,count")
        throw ParseError("mood CSV line 1: unexpected header \"" + line + "\"");
      continue;
    }
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos)
      throw ParseError("mood CSV line " + std::to_string(line_no) + ": expected 3 fields");
    DayMood day;
    day.date = line.substr(0, c1);
    day.day_number = day_number_from_iso(day.date);
    try {
      std::size_t used = 0;
      const std::string mean_text = line.substr(c1 + 1, c2 - c1 - 1);
      day.mean_score = std::stod(mean_text, &used);
      if (used != mean_text.size()) throw std::invalid_argument("trailing");
      day.count = std::stoi(line.substr(c2 + 1));
    } catch (const std::exception&) {
      throw ParseError("mood CSV line " + std::to_string(line_no) + ": bad number");
    }
    if (day.count < 1)
      throw ParseError("mood CSV line " + std::to_string(line_no) + ": count must be >= 1");
    if (!series.days.empty() && series.days.back().day_number >= day.day_number)
      throw ParseError("mood CSV line " + std::to_string(line_no) + ": dates must increase");
    series.days.push_back(std::move(day));
  }
  if (series.days.empty()) throw ParseError("mood CSV: no data rows");
  series.trend = refit(series.days);
  return series;
}

std::string series_to_svg(const MoodSeries& series) {
  if (series.days.empty()) throw ValueError("series_to_svg: empty series");
  const double width = 800;
  const double height = 400;
  const double ml = 60;
  const double mr = 20;
  const double mt = 20;
  const double mb = 45;
  const double plot_w = width - ml - mr;
  const double plot_h = height - mt - mb;
  const std::int64_t first = series.days.front().day_number;
  const std::int64_t span = std::max<std::int64_t>(1, series.days.back().day_number - first);
  auto x_of = [&](std::int64_t day) {
    return ml + plot_w * static_cast<double>(day - first) / static_cast<double>(span);
  };
  auto y_of = [&](double value) { return mt + (1.0 - value) / 2.0 * plot_h; };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + coord(width) +
                    "\" height=\"" + coord(height) + "\" viewBox=\"0 0 " + coord(width) + " " +
                    coord(height) + "\">\n";
  svg += "  <rect x=\"" + coord(ml) + "\" y=\"" + coord(mt) + "\" width=\"" + coord(plot_w) +
         "\" height=\"" + coord(plot_h) + "\" fill=\"none\" stroke=\"#999\"/>\n";
  for (const double level : {1.0, 0.0, -1.0}) {
    const std::string y = coord(y_of(level));
    if (level == 0.0)
      svg += "  <line x1=\"" + coord(ml) + "\" y1=\"" + y + "\" x2=\"" + coord(ml + plot_w) +
             "\" y2=\"" + y + "\" stroke=\"#ccc\"/>\n";
    svg += "  <text x=\"" + coord(ml - 8) + "\" y=\"" + y +
           "\" text-anchor=\"end\" dominant-baseline=\"middle\" font-size=\"13\">" +
           (level > 0 ? "1" : level < 0 ? "-1" : "0") + "</text>\n";
  }
  svg += "  <text x=\"" + coord(ml) + "\" y=\"" + coord(height - 12) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + series.days.front().date + "</text>\n";
  if (series.days.size() > 1)
    svg += "  <text x=\"" + coord(ml + plot_w) + "\" y=\"" + coord(height - 12) +
           "\" text-anchor=\"middle\" font-size=\"13\">" + series.days.back().date + "</text>\n";

  std::string data_path;
  for (std::size_t i = 0; i < series.days.size(); ++i) {
    const DayMood& day = series.days[i];
    data_path += (i == 0 ? "M " : " L ") + coord(x_of(day.day_number)) + " " +
                 coord(y_of(day.mean_score));
  }
  svg += "  <path id=\"data\" fill=\"none\" stroke=\"#1f6f8b\" stroke-width=\"2\" d=\"" +
         data_path + "\"/>\n";
  for (const DayMood& day : series.days)
    svg += "  <circle cx=\"" + coord(x_of(day.day_number)) + "\" cy=\"" +
           coord(y_of(day.mean_score)) + "\" r=\"3\" fill=\"#1f6f8b\"/>\n";

  if (series.trend) {
    const double last_offset = static_cast<double>(series.days.back().day_number - first);
    const double y0 = std::clamp(series.trend->intercept, -1.0, 1.0);
    const double y1 = std::clamp(series.trend->intercept + series.trend->slope * last_offset,
                                 -1.0, 1.0);
    svg += "  <path id=\"trend\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" "
           "stroke-dasharray=\"6 4\" d=\"M " +
           coord(x_of(first)) + " " + coord(y_of(y0)) + " L " + coord(x_of(series.days.back().day_number)) +
           " " + coord(y_of(y1)) + "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace chatmood
