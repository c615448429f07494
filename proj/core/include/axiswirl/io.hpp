#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "axiswirl/diagnostics.hpp"
#include "axiswirl/simulate.hpp"

namespace axiswirl {

/// Header line naming every DiagnosticsRecord field, comma separated.
std::string series_header();
std::string series_row(const DiagnosticsRecord& r);

void write_series(std::ostream& out, std::span<const DiagnosticsRecord> records);
/// Throws BadValue if the header does not match or a row is malformed.
std::vector<DiagnosticsRecord> read_series(std::istream& in);
std::vector<DiagnosticsRecord> read_series(const std::filesystem::path& path);

/// Streams records to a CSV file as a run produces them, keeping every
/// stride-th row plus the final one.
class SeriesWriter {
 public:
  SeriesWriter(const std::filesystem::path& path, std::size_t stride = 1);
  void add(const DiagnosticsRecord& r);
  /// Writes the held-back last row, if any, and closes the file.
  void finish();

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t stride_;
  std::size_t count_ = 0;
  std::optional<DiagnosticsRecord> pending_;
};

/// Field dump with columns z,u,v,psi and a `#` header carrying t, N, nu, sign.
struct SnapshotFile {
  double t = 0.0;
  double nu = 0.0;
  int sign = +1;
  std::vector<double> z;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> psi;
};

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap, double nu, int sign);
SnapshotFile read_snapshot(const std::filesystem::path& path);
/// "snap_<t>.csv" with t printed to 17 significant digits.
std::string snapshot_name(double t);

/// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
std::string fnv1a64_file(const std::filesystem::path& path);
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

struct RunManifest {
  std::string model;
  std::string init;
  std::size_t grid_size = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  /// "Completed", "Blowup" or "StepLimit".
  std::string status;
  std::optional<double> t_star;
  std::string cause;
  std::string detail;
  std::size_t steps = 0;
  std::map<std::string, std::string> checksums;
  std::string version;
  /// Verbatim config text; re-parsing it reproduces the run.
  std::string config;
};

/// `key = value` lines, then "checksum.<file> = <hex>" lines, then the config
/// after a `--- config ---` marker.
void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

/// Library version string.
const char* version() noexcept;

}  // namespace axiswirl
