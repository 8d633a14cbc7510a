#pragma once

#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "pcf/amp/design.hpp"

namespace pcf::io {

struct ReportEntry {
  std::string key;
  std::string value;
};

/// Closed-form analysis of a deck as ordered key=value pairs. Pole and zero
/// magnitudes are in Mrad/s. Key names and precisions are stable.
std::vector<ReportEntry> closed_form_report(const amp::AmpDesign& design);

void write_report(std::ostream& os, const std::vector<ReportEntry>& entries);

/// Reads key=value lines back, skipping blanks and '#' comments.
std::map<std::string, std::string> parse_report(std::string_view text);

}  // namespace pcf::io
