#pragma once

#include <filesystem>
#include <iosfwd>

#include "rotbl/grid.hpp"

namespace rotbl {

/// Binary dump: 64-byte text header "ROTBL1 <n_x1> <n_y> <L> <Y> <label>" padded with spaces
/// and terminated by '\n', followed by n_x1 * n_y little-endian float64 values, x1-major.
void write_field(std::ostream& os, const Field2D& f);
void write_field(const std::filesystem::path& p, const Field2D& f);
Field2D read_field(std::istream& is);
Field2D read_field(const std::filesystem::path& p);

/// CSV rows "x1,y,value".
void write_field_csv(const std::filesystem::path& p, const Field2D& f);

}  // namespace rotbl
