#pragma once

#include <string>

#include "choq/grid.hpp"

namespace choq {

// Binary field file: magic "CHQF", version byte 1, byte N, then per axis a
// 32-bit unsigned M and a 64-bit float L (little endian), then M^N doubles
// in row-major order.
void write_field(const std::string& path, const Field& u);
Field read_field(const std::string& path);

// Writes bytes to <path>.tmp and renames into place.
void atomic_write(const std::string& path, const std::string& bytes);

}  // namespace choq
