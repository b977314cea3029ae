#pragma once

#include <string>

#include "lfpp/grid.hpp"

namespace lfpp {

// Field snapshot file, magic "LFP1":
//   u32 nx, u32 ny, f64 spacing, f64 origin_x, f64 origin_y,
//   u8 kind tag, f64 kind parameter, then nx*ny f64 values row-major.
// All integers and doubles little-endian.
void write_snapshot(const std::string& path, const GridField& field);
GridField read_snapshot(const std::string& path);

}  // namespace lfpp
