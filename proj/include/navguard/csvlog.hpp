#pragma once

#include <ostream>
#include <string>

#include "navguard/scenario.hpp"

namespace navguard {

// The exact header line produced by write_log_csv.
const std::string& csv_header();

// One header row plus one row per step. Numbers carry 12 significant
// digits; optional fields are empty when absent; attacked is 0 or 1;
// hypothesis is H0 or H1. Lines end with LF.
void write_log_csv(const SimLog& log, std::ostream& out);

// File variant; throws IoError if the destination cannot be written.
void write_log_csv(const SimLog& log, const std::string& path);

}  // namespace navguard
