// Multi-sensor recording: sensor positions plus an N x T activity matrix,
// with CSV load/save. Sensors and time steps are 1-based throughout.
#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "stpm/errors.hpp"
#include "stpm/types.hpp"

namespace stpm {

class Recording {
 public:
  // activities is row-major N x T. Throws DimensionError / DataError on
  // inconsistent or non-finite input.
  Recording(std::vector<SensorPosition> positions,
            std::vector<double> activities, int n_steps, std::string label = {})
      : positions_(std::move(positions)),
        activities_(std::move(activities)),
        n_steps_(n_steps),
        label_(std::move(label)) {
    const auto n = static_cast<long long>(positions_.size());
    if (n < 2) throw DimensionError("recording needs at least 2 sensors");
    if (n_steps_ < 2) throw DimensionError("recording needs at least 2 time steps");
    if (activities_.size() != static_cast<std::size_t>(n) * n_steps_)
      throw DimensionError("activity matrix size does not match sensors x steps");
    for (const auto& p : positions_) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
        throw DataError("non-finite sensor coordinate");
    }
    for (double v : activities_) {
      if (!std::isfinite(v)) throw DataError("non-finite activity value");
    }
  }

  int n_sensors() const { return static_cast<int>(positions_.size()); }
  int n_steps() const { return n_steps_; }
  const std::string& label() const { return label_; }
  const std::vector<SensorPosition>& positions() const { return positions_; }

  const SensorPosition& position(int sensor) const {
    return positions_[static_cast<std::size_t>(sensor - 1)];
  }

  double activity(int sensor, int t) const {
    return activities_[static_cast<std::size_t>(sensor - 1) * n_steps_ + (t - 1)];
  }

  std::span<const double> row(int sensor) const {
    return {activities_.data() + static_cast<std::size_t>(sensor - 1) * n_steps_,
            static_cast<std::size_t>(n_steps_)};
  }

  bool valid_sensor(int sensor) const {
    return sensor >= 1 && sensor <= n_sensors();
  }

  bool valid_interval(const Interval& i) const {
    return i.t1 >= 1 && i.t1 < i.t2 && i.t2 <= n_steps_;
  }

 private:
  std::vector<SensorPosition> positions_;
  std::vector<double> activities_;
  int n_steps_;
  std::string label_;
};

namespace detail {

inline std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline double parse_double(const std::string& field, const std::string& file,
                           std::size_t lineno) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  while (last != first && (*(last - 1) == ' ' || *(last - 1) == '\t')) --last;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last)
    throw ParseError(file + ":" + std::to_string(lineno) +
                     ": cannot parse number '" + field + "'");
  return value;
}

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace detail

// Positions CSV: header `id,x,y,z`, then one row per sensor with 1-based
// contiguous ids. Activities CSV: no header, N rows of T comma-separated
// reals in the same sensor order. LF and CRLF are both accepted.
inline Recording load_recording(const std::filesystem::path& positions_path,
                                const std::filesystem::path& activities_path) {
  std::ifstream pf(positions_path);
  if (!pf) throw ParseError("cannot open " + positions_path.string());
  const std::string pname = positions_path.filename().string();

  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(pf, line))
    throw ParseError(pname + ": empty positions file");
  ++lineno;
  if (detail::strip_cr(line) != "id,x,y,z")
    throw ParseError(pname + ":1: expected header 'id,x,y,z'");

  std::vector<SensorPosition> positions;
  while (std::getline(pf, line)) {
    ++lineno;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    auto fields = detail::split_csv(line);
    if (fields.size() != 4)
      throw ParseError(pname + ":" + std::to_string(lineno) +
                       ": expected 4 fields, got " + std::to_string(fields.size()));
    double id = detail::parse_double(fields[0], pname, lineno);
    if (id != static_cast<double>(positions.size() + 1))
      throw DataError(pname + ":" + std::to_string(lineno) +
                      ": sensor ids must be 1-based and contiguous");
    SensorPosition p{detail::parse_double(fields[1], pname, lineno),
                     detail::parse_double(fields[2], pname, lineno),
                     detail::parse_double(fields[3], pname, lineno)};
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
      throw DataError(pname + ":" + std::to_string(lineno) +
                      ": non-finite coordinate");
    positions.push_back(p);
  }

  std::ifstream af(activities_path);
  if (!af) throw ParseError("cannot open " + activities_path.string());
  const std::string aname = activities_path.filename().string();

  std::vector<double> activities;
  std::size_t n_steps = 0;
  std::size_t rows = 0;
  lineno = 0;
  while (std::getline(af, line)) {
    ++lineno;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    auto fields = detail::split_csv(line);
    if (n_steps == 0) {
      n_steps = fields.size();
    } else if (fields.size() != n_steps) {
      throw DimensionError(aname + ":" + std::to_string(lineno) +
                           ": row has " + std::to_string(fields.size()) +
                           " values, expected " + std::to_string(n_steps));
    }
    for (const auto& f : fields) {
      double v = detail::parse_double(f, aname, lineno);
      if (!std::isfinite(v))
        throw DataError(aname + ":" + std::to_string(lineno) +
                        ": non-finite activity value");
      activities.push_back(v);
    }
    ++rows;
  }

  if (rows != positions.size())
    throw DimensionError("positions list " + std::to_string(positions.size()) +
                         " sensors, activities " + std::to_string(rows) + " rows");
  if (n_steps > static_cast<std::size_t>(std::numeric_limits<int>::max()))
    throw DimensionError("too many time steps");

  return Recording(std::move(positions), std::move(activities),
                   static_cast<int>(n_steps),
                   positions_path.parent_path().filename().string());
}

// Writes the two CSV files; numbers are shortest round-trip representations,
// so save followed by load reproduces the recording bit-exactly.
inline void save_recording(const Recording& rec,
                           const std::filesystem::path& positions_path,
                           const std::filesystem::path& activities_path) {
  std::ofstream pf(positions_path, std::ios::binary);
  if (!pf) throw Error("cannot write " + positions_path.string());
  pf << "id,x,y,z\n";
  for (int i = 1; i <= rec.n_sensors(); ++i) {
    const auto& p = rec.position(i);
    pf << i << ',' << detail::format_double(p.x) << ','
       << detail::format_double(p.y) << ',' << detail::format_double(p.z)
       << '\n';
  }

  std::ofstream af(activities_path, std::ios::binary);
  if (!af) throw Error("cannot write " + activities_path.string());
  for (int i = 1; i <= rec.n_sensors(); ++i) {
    auto r = rec.row(i);
    for (std::size_t t = 0; t < r.size(); ++t) {
      if (t) af << ',';
      af << detail::format_double(r[t]);
    }
    af << '\n';
  }
}

}  // namespace stpm
