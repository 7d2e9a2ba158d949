#include "epistock/csv_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "epistock/errors.hpp"

namespace epistock {

namespace {

void append_num(std::string& row, double v, bool leading_comma = true) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  if (leading_comma) row.push_back(',');
  row += buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

double to_num(const std::string& s) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw ParseError("malformed numeric field: '" + s + "'");
  }
}

}  // namespace

std::size_t write_timeseries_csv(const Trajectory& traj, std::ostream& sink) {
  sink << "# epistock timeseries v1\n" << kTimeseriesHeader << "\n";
  std::string row;
  for (const auto& s : traj.samples) {
    row.clear();
    append_num(row, s.t, false);
    for (std::size_t c = 0; c < 2; ++c) {
      for (std::size_t f = 0; f < kCommunityB; ++f) {
        append_num(row, s.state[c * kCommunityB + f]);
      }
      append_num(row, c == 0 ? s.re_a : s.re_b);
    }
    append_num(row, s.switch_value);
    append_num(row, s.transfer_rate);
    sink << row << "\n";
  }
  return traj.samples.size();
}

std::vector<TrajectorySample> read_timeseries_csv(std::istream& source) {
  std::vector<TrajectorySample> samples;
  std::string line;
  bool header_seen = false;
  while (std::getline(source, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kTimeseriesHeader) {
        throw ParseError("unexpected timeseries header: '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 17) {
      throw ParseError("timeseries row has " + std::to_string(fields.size()) +
                       " fields, expected 17");
    }
    TrajectorySample s;
    s.t = to_num(fields[0]);
    std::size_t col = 1;
    for (std::size_t c = 0; c < 2; ++c) {
      for (std::size_t f = 0; f < kCommunityB; ++f) {
        s.state[c * kCommunityB + f] = to_num(fields[col++]);
      }
      (c == 0 ? s.re_a : s.re_b) = to_num(fields[col++]);
    }
    s.switch_value = to_num(fields[col++]);
    s.transfer_rate = to_num(fields[col++]);
    if (!samples.empty() && s.t <= samples.back().t) {
      throw ParseError("timeseries rows must be strictly increasing in t");
    }
    samples.push_back(s);
  }
  return samples;
}

namespace {

void write_axis_meta(std::ostream& sink, const char* name, const SweepAxis& ax) {
  std::string row;
  append_num(row, ax.min, false);
  append_num(row, ax.max);
  sink << "# " << name << ": " << to_string(ax.parameter) << "," << row << ","
       << ax.steps << "\n";
}

SweepAxis parse_axis_meta(const std::string& payload) {
  const auto fields = split_csv(payload);
  if (fields.size() != 4) {
    throw ParseError("malformed axis metadata: '" + payload + "'");
  }
  SweepAxis ax;
  ax.parameter = axis_param_from_string(fields[0]);
  ax.min = to_num(fields[1]);
  ax.max = to_num(fields[2]);
  ax.steps = static_cast<std::size_t>(to_num(fields[3]));
  return ax;
}

}  // namespace

std::size_t write_phase_csv(const SweepResult& res, std::ostream& sink) {
  sink << "# epistock phase v1\n";
  sink << "# engine: " << res.engine_version << "\n";
  write_axis_meta(sink, "axis_x", res.axis_x);
  write_axis_meta(sink, "axis_y", res.axis_y);
  {
    std::string row;
    append_num(row, res.rel_tol, false);
    append_num(row, res.abs_tol);
    append_num(row, res.horizon);
    sink << "# tolerances: " << row << "\n";
  }
  sink << kPhaseHeader << "\n";

  std::string row;
  for (const auto& pt : res.points) {
    const auto& s = pt.summary;
    row.clear();
    append_num(row, pt.x, false);
    append_num(row, pt.y);
    append_num(row, s.infected_ratio_a);
    append_num(row, s.infected_ratio_b);
    append_num(row, s.infected_ratio_mean);
    row += s.depleted_a ? ",1" : ",0";
    row += s.depleted_b ? ",1" : ",0";
    row.push_back(',');
    row += to_string(pt.outcome);
    append_num(row, s.unserved_ratio_a);
    append_num(row, s.unserved_ratio_b);
    row += s.complete ? ",1" : ",0";
    sink << row << "\n";
  }
  return res.points.size();
}

SweepResult read_phase_csv(std::istream& source) {
  SweepResult res;
  res.base = default_config();
  std::string line;
  bool header_seen = false;
  bool have_x = false, have_y = false;
  while (std::getline(source, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::size_t colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string tag = line.substr(1, colon - 1);
      const std::string payload = line.substr(colon + 1);
      const std::string trimmed =
          payload.substr(payload.find_first_not_of(' '));
      if (tag == " axis_x") {
        res.axis_x = parse_axis_meta(trimmed);
        have_x = true;
      } else if (tag == " axis_y") {
        res.axis_y = parse_axis_meta(trimmed);
        have_y = true;
      } else if (tag == " engine") {
        res.engine_version = trimmed;
      } else if (tag == " tolerances") {
        const auto f = split_csv(trimmed);
        if (f.size() == 3) {
          res.rel_tol = to_num(f[0]);
          res.abs_tol = to_num(f[1]);
          res.horizon = to_num(f[2]);
        }
      }
      continue;
    }
    if (!header_seen) {
      if (line != kPhaseHeader) {
        throw ParseError("unexpected phase header: '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 11) {
      throw ParseError("phase row has " + std::to_string(fields.size()) +
                       " fields, expected 11");
    }
    PhasePoint pt;
    pt.x = to_num(fields[0]);
    pt.y = to_num(fields[1]);
    pt.summary.infected_ratio_a = to_num(fields[2]);
    pt.summary.infected_ratio_b = to_num(fields[3]);
    pt.summary.infected_ratio_mean = to_num(fields[4]);
    pt.summary.depleted_a = fields[5] == "1";
    pt.summary.depleted_b = fields[6] == "1";
    pt.outcome = outcome_from_string(fields[7]);
    pt.summary.outcome = pt.outcome;
    pt.summary.unserved_ratio_a = to_num(fields[8]);
    pt.summary.unserved_ratio_b = to_num(fields[9]);
    pt.summary.complete = fields[10] == "1";
    res.points.push_back(pt);
  }
  if (!have_x || !have_y) {
    throw ParseError("phase csv is missing axis metadata");
  }
  if (res.points.size() != res.axis_x.steps * res.axis_y.steps) {
    throw ParseError("phase csv row count does not match the axis grid");
  }
  return res;
}

}  // namespace epistock
