#include "spechom/event_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace spechom {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

const char* kind_name(EventKind k) {
  switch (k) {
    case EventKind::NoDetection: return "none";
    case EventKind::Single: return "single";
    case EventKind::Bunch: return "bunch";
    case EventKind::Coincidence: return "coincidence";
  }
  return "?";
}

EventKind kind_from(const std::string& s) {
  if (s == "none") return EventKind::NoDetection;
  if (s == "single") return EventKind::Single;
  if (s == "bunch") return EventKind::Bunch;
  if (s == "coincidence") return EventKind::Coincidence;
  throw std::invalid_argument("events csv: unknown kind '" + s + "'");
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

void write_events_csv(std::ostream& out, const std::vector<DetectionEvent>& events) {
  out << "kind,channel,omega_a,omega_b\n";
  for (const DetectionEvent& e : events) {
    out << kind_name(e.kind) << ',';
    if (e.channel != 0) out << static_cast<int>(e.channel);
    out << ',';
    if (e.omega_a) out << format_number(*e.omega_a);
    out << ',';
    if (e.omega_b) out << format_number(*e.omega_b);
    out << '\n';
  }
}

std::vector<DetectionEvent> read_events_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("events csv: empty input");
  if (split_csv_line(line) != std::vector<std::string>{"kind", "channel", "omega_a", "omega_b"})
    throw std::invalid_argument("events csv: bad header '" + line + "'");

  std::vector<DetectionEvent> events;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4)
      throw std::invalid_argument("events csv line " + std::to_string(lineno) +
                                  ": expected 4 fields");
    DetectionEvent e;
    e.kind = kind_from(fields[0]);
    if (!fields[1].empty()) {
      const int ch = std::stoi(fields[1]);
      if (ch != 1 && ch != 2)
        throw std::invalid_argument("events csv line " + std::to_string(lineno) +
                                    ": channel must be 1 or 2");
      e.channel = static_cast<std::uint8_t>(ch);
    }
    if (!fields[2].empty()) e.omega_a = std::stod(fields[2]);
    if (!fields[3].empty()) e.omega_b = std::stod(fields[3]);
    events.push_back(e);
  }
  return events;
}

void write_beats_csv(std::ostream& out, const std::vector<BeatPoint>& table) {
  out << "delta,bunch_density,coincidence_density\n";
  for (const BeatPoint& p : table)
    out << format_number(p.delta) << ',' << format_number(p.bunch_density) << ','
        << format_number(p.coincidence_density) << '\n';
}

void write_scan_csv(std::ostream& out, const std::vector<ScanPoint>& points) {
  out << "axis_value,fi_resolved,fi_nonresolved,fi_eta1,fi_large_delay,qfi,"
         "crb_resolved,crb_nonresolved,qcrb\n";
  for (const ScanPoint& p : points) {
    out << format_number(p.axis_value);
    if (p.report) {
      const FisherReport& r = *p.report;
      for (double v : {r.fi_resolved, r.fi_nonresolved, r.fi_eta1, r.fi_large_delay, r.qfi,
                       r.crb_resolved, r.crb_nonresolved, r.qcrb})
        out << ',' << format_number(v);
    } else {
      for (int i = 0; i < 8; ++i) out << ",nan";
    }
    out << '\n';
  }
}

}  // namespace spechom
