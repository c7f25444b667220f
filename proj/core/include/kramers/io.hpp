#pragma once

// Plain-text persistence: field files, snapshot tables and CSV helpers.  All
// reals are written with %.17g so equal runs produce identical bytes.

#include "kramers/spectral.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace kramers {

std::string format_real(double x);

/// "# kramers-field modes=N components=r" followed by one line of N coefficients per component.
void write_field(const std::string& path, const Field& u);
void write_field(std::ostream& os, const Field& u);
/// Reads a field file; the space must match its modes and components.
Field read_field(const std::string& path, const SpacePtr& space);

struct SnapshotHeader {
  std::string config_hash;
  std::uint64_t seed = 0;
  double mu = 0.0;  // 0 for the limit equation
  int modes = 0;
  int components = 0;
};

struct SnapshotRow {
  double t = 0.0;
  const Field* u = nullptr;
  const Field* v = nullptr;  // optional
};

/// Header comment, a column line "t,u[c:i],...,v[c:i],..." and one CSV row per snapshot.
void write_snapshots(const std::string& path, const SnapshotHeader& header,
                     const std::vector<SnapshotRow>& rows);

/// Joins values with commas and a trailing newline.
std::string csv_line(const std::vector<std::string>& cells);

}  // namespace kramers
