#pragma once

#include <filesystem>

#include "afa/tensor.hpp"

namespace afa {

// AFAT v1 container: magic "AFAT", version byte 1, dtype byte 1 (f32),
// rank byte (1..4), rank little-endian u32 extents, then row-major
// little-endian f32 payload. No padding, no checksum.
void write_tensor(const std::filesystem::path& path, const Tensor& t);
Tensor read_tensor(const std::filesystem::path& path);

}  // namespace afa
