#include "kramers/io.hpp"

#include "kramers/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace kramers {

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_field(std::ostream& os, const Field& u) {
  const int r = u.space()->n_components();
  const int n = u.space()->n_modes();
  os << "# kramers-field modes=" << n << " components=" << r << "\n";
  for (int c = 0; c < r; ++c) {
    for (int i = 0; i < n; ++i) os << (i ? " " : "") << format_real(u(c, i));
    os << "\n";
  }
}

void write_field(const std::string& path, const Field& u) {
  std::ofstream out(path);
  if (!out) throw InvalidConfig("write_field: cannot open '" + path + "'");
  write_field(out, u);
}

Field read_field(const std::string& path, const SpacePtr& space) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("read_field: cannot open '" + path + "'");
  std::string header;
  std::getline(in, header);
  int n = -1, r = -1;
  if (std::sscanf(header.c_str(), "# kramers-field modes=%d components=%d", &n, &r) != 2)
    throw InvalidConfig("read_field: '" + path + "' lacks a kramers-field header");
  if (n != space->n_modes() || r != space->n_components())
    throw InvalidConfig("read_field: '" + path + "' has modes=" + std::to_string(n) +
                        " components=" + std::to_string(r) + ", expected modes=" +
                        std::to_string(space->n_modes()) +
                        " components=" + std::to_string(space->n_components()));
  Field u(space);
  for (int c = 0; c < r; ++c)
    for (int i = 0; i < n; ++i)
      if (!(in >> u(c, i))) throw InvalidConfig("read_field: '" + path + "' is truncated");
  return u;
}

void write_snapshots(const std::string& path, const SnapshotHeader& h,
                     const std::vector<SnapshotRow>& rows) {
  std::ofstream out(path);
  if (!out) throw InvalidConfig("write_snapshots: cannot open '" + path + "'");
  out << "# config_hash=" << h.config_hash << " seed=" << h.seed << " mu=" << format_real(h.mu)
      << " modes=" << h.modes << " components=" << h.components << "\n";
  const bool with_v = !rows.empty() && rows.front().v;
  std::vector<std::string> cols{"t"};
  for (const char* name : {"u", "v"}) {
    if (name[0] == 'v' && !with_v) break;
    for (int i = 0; i < h.modes; ++i)
      for (int c = 0; c < h.components; ++c)
        cols.push_back(std::string(name) + "[" + std::to_string(c) + ":" + std::to_string(i + 1) + "]");
  }
  out << csv_line(cols);
  for (const auto& row : rows) {
    std::vector<std::string> cells{format_real(row.t)};
    for (const Field* f : {row.u, row.v}) {
      if (!f) continue;
      for (int i = 0; i < h.modes; ++i)
        for (int c = 0; c < h.components; ++c) cells.push_back(format_real((*f)(c, i)));
    }
    out << csv_line(cells);
  }
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) out += ',';
    out += cells[k];
  }
  out += '\n';
  return out;
}

}  // namespace kramers
