#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "spechom/fisher.hpp"
#include "spechom/interference.hpp"

namespace spechom {

/// Formats a double with 12 significant digits (the CSV output precision).
std::string format_number(double v);

/// Event CSV with header `kind,channel,omega_a,omega_b`; kinds are
/// none/single/bunch/coincidence and absent fields stay empty.
void write_events_csv(std::ostream& out, const std::vector<DetectionEvent>& events);
std::vector<DetectionEvent> read_events_csv(std::istream& in);

/// Beat-profile CSV with header `delta,bunch_density,coincidence_density`.
void write_beats_csv(std::ostream& out, const std::vector<BeatPoint>& table);

/// Fisher-scan CSV with header `axis_value,fi_resolved,fi_nonresolved,
/// fi_eta1,fi_large_delay,qfi,crb_resolved,crb_nonresolved,qcrb`.
/// Failed points carry `nan` in every value column.
void write_scan_csv(std::ostream& out, const std::vector<ScanPoint>& points);

}  // namespace spechom
