#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "palcanon/matrix.hpp"

namespace palcanon {

// Text format: "rows cols" followed by rows*cols pairs "re im" in row-major
// order, any whitespace between tokens. Values are written with 17
// significant digits so binary64 entries round-trip exactly.

CMatrix parse_matrix(std::string_view text);
void write_matrix(const CMatrix& a, std::ostream& out);

CMatrix read_matrix(const std::filesystem::path& path);
void write_matrix(const CMatrix& a, const std::filesystem::path& path);

}  // namespace palcanon
