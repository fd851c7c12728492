#pragma once

#include <iosfwd>
#include <string>

#include "spde2d/field.hpp"

namespace spde2d {

/// Binary field container, format tag "SPDE2D01":
///   8 magic bytes "SPDE2D01",
///   3 x u64 little-endian: n_times, n_y, n_z,
///   times, ys, zs as little-endian f64 arrays,
///   values as little-endian f64, row-major (time, y, z).
void write_field(const FieldSample& field, const std::string& path);
FieldSample read_field(const std::string& path);

/// CSV export with header t,y,z,value, one row per grid point.
void write_field_csv(const FieldSample& field, std::ostream& out);
void write_field_csv(const FieldSample& field, const std::string& path);

/// Shortest round-trip decimal rendering; used for all CSV numbers so output
/// is byte-stable across runs and worker counts.
std::string format_double(double v);

}  // namespace spde2d
