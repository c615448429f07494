#include "axiswirl/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "axiswirl/config.hpp"
#include "axiswirl/error.hpp"

#ifndef AXISWIRL_VERSION
#define AXISWIRL_VERSION "unknown"
#endif

namespace axiswirl {

const char* version() noexcept { return AXISWIRL_VERSION; }

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& s, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw BadValue(where, "'" + s + "' is not a number");
  return x;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

}  // namespace

std::string series_header() {
  std::string h;
  for (const auto name : DiagnosticsRecord::field_names()) {
    if (!h.empty()) h += ',';
    h += name;
  }
  return h;
}

std::string series_row(const DiagnosticsRecord& r) {
  std::string row;
  for (const double x : r.to_array()) {
    if (!row.empty()) row += ',';
    row += format_double(x);
  }
  return row;
}

void write_series(std::ostream& out, std::span<const DiagnosticsRecord> records) {
  out << series_header() << '\n';
  for (const auto& r : records) out << series_row(r) << '\n';
}

std::vector<DiagnosticsRecord> read_series(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != series_header()) {
    throw BadValue("series", "header does not match the record schema");
  }
  std::vector<DiagnosticsRecord> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != DiagnosticsRecord::kFieldCount) {
      throw BadValue("series", "row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                                   " columns");
    }
    std::array<double, DiagnosticsRecord::kFieldCount> values{};
    for (std::size_t i = 0; i < values.size(); ++i) {
      values[i] = parse_number(cells[i], "series row " + std::to_string(row));
    }
    out.push_back(DiagnosticsRecord::from_array(values));
  }
  return out;
}

std::vector<DiagnosticsRecord> read_series(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  return read_series(in);
}

SeriesWriter::SeriesWriter(const std::filesystem::path& path, std::size_t stride)
    : out_(open_out(path)), path_(path), stride_(std::max<std::size_t>(stride, 1)) {
  out_ << series_header() << '\n';
}

void SeriesWriter::add(const DiagnosticsRecord& r) {
  if (count_ % stride_ == 0) {
    out_ << series_row(r) << '\n';
    pending_.reset();
  } else {
    pending_ = r;
  }
  ++count_;
}

void SeriesWriter::finish() {
  if (pending_) out_ << series_row(*pending_) << '\n';
  pending_.reset();
  out_.close();
  if (!out_) throw Error("failed writing " + path_.string());
}

std::string snapshot_name(double t) { return "snap_" + format_double(t) + ".csv"; }

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap, double nu, int sign) {
  std::ofstream out = open_out(path);
  out << "# t = " << format_double(snap.t) << "\n"
      << "# N = " << snap.u.size() << "\n"
      << "# nu = " << format_double(nu) << "\n"
      << "# sign = " << sign << "\n"
      << "z,u,v,psi\n";
  for (std::size_t j = 0; j < snap.u.size(); ++j) {
    out << format_double(snap.u.grid().node(j)) << ',' << format_double(snap.u[j]) << ','
        << format_double(snap.v[j]) << ',' << format_double(snap.psi[j]) << '\n';
  }
  out.close();
  if (!out) throw Error("failed writing " + path.string());
}

SnapshotFile read_snapshot(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  SnapshotFile snap;
  std::optional<std::size_t> n;
  std::string line;
  const std::string where = path.string();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      key.erase(key.find_last_not_of(' ') + 1);
      std::string value = line.substr(eq + 1);
      value.erase(0, value.find_first_not_of(' '));
      if (key == "t") snap.t = parse_number(value, where);
      else if (key == "N") n = static_cast<std::size_t>(parse_number(value, where));
      else if (key == "nu") snap.nu = parse_number(value, where);
      else if (key == "sign") snap.sign = static_cast<int>(parse_number(value, where));
      continue;
    }
    if (line == "z,u,v,psi") continue;
    const auto cells = split(line, ',');
    if (cells.size() != 4) throw BadValue(where, "snapshot rows need 4 columns");
    snap.z.push_back(parse_number(cells[0], where));
    snap.u.push_back(parse_number(cells[1], where));
    snap.v.push_back(parse_number(cells[2], where));
    snap.psi.push_back(parse_number(cells[3], where));
  }
  if (!n || *n != snap.u.size()) throw BadValue(where, "row count does not match the N header");
  return snap;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h) {
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::string buf(1 << 16, '\0');
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    h = fnv1a64(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())), h);
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

namespace {
constexpr const char* kConfigMarker = "--- config ---";
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  std::ofstream out = open_out(path);
  out << "model = " << m.model << "\n"
      << "init = " << m.init << "\n"
      << "grid_size = " << m.grid_size << "\n"
      << "t_start = " << format_double(m.t_start) << "\n"
      << "t_end = " << format_double(m.t_end) << "\n"
      << "status = " << m.status << "\n";
  if (m.t_star) out << "t_star = " << format_double(*m.t_star) << "\n";
  if (!m.cause.empty()) out << "cause = " << m.cause << "\n";
  if (!m.detail.empty()) out << "detail = " << m.detail << "\n";
  out << "steps = " << m.steps << "\n"
      << "version = " << m.version << "\n";
  for (const auto& [file, sum] : m.checksums) out << "checksum." << file << " = " << sum << "\n";
  out << kConfigMarker << "\n" << m.config;
  out.close();
  if (!out) throw Error("failed writing " + path.string());
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  RunManifest m;
  std::string line;
  const std::string where = path.string();
  while (std::getline(in, line)) {
    if (line == kConfigMarker) {
      std::ostringstream rest;
      rest << in.rdbuf();
      m.config = rest.str();
      break;
    }
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw BadValue(where, "malformed manifest line '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 3);
    if (key == "model") m.model = value;
    else if (key == "init") m.init = value;
    else if (key == "grid_size") m.grid_size = static_cast<std::size_t>(parse_number(value, where));
    else if (key == "t_start") m.t_start = parse_number(value, where);
    else if (key == "t_end") m.t_end = parse_number(value, where);
    else if (key == "status") m.status = value;
    else if (key == "t_star") m.t_star = parse_number(value, where);
    else if (key == "cause") m.cause = value;
    else if (key == "detail") m.detail = value;
    else if (key == "steps") m.steps = static_cast<std::size_t>(parse_number(value, where));
    else if (key == "version") m.version = value;
    else if (key.rfind("checksum.", 0) == 0) m.checksums[key.substr(9)] = value;
    else throw BadValue(where, "unknown manifest key '" + key + "'");
  }
  return m;
}

}  // namespace axiswirl
