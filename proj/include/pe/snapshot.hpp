#pragma once

#include <string>

#include "pe/field.hpp"

namespace pe {

/// Binary field snapshot ("PESN", version 1, little-endian):
///   magic[4] version:u32 nx:u32 ny:u32 nz:u32 lx:f64 ly:f64 h:f64 t:f64
///   component 1, then component 2, physical values as f64 indexed
///   x-major, then y, then z.
struct Snapshot {
  Field velocity;  // physical repr on a grid built from the header
  double t = 0.0;
};

/// Writes via a temporary file and rename, so readers never see a partial file.
void write_snapshot(const Field& v, double t, const std::string& path);

/// Throws FormatError on a bad magic, unsupported version, implausible
/// dimensions or a truncated payload.
Snapshot read_snapshot(const std::string& path);

}  // namespace pe
