#pragma once

#include <filesystem>

#include "afa/fourier.hpp"
#include "afa/tensor.hpp"

namespace afa {

// Binary PGM (P5, one channel) / PPM (P6, three channels), maxval 255 only.
// Values map to [0,1] by /255 on read and round(v*255) on write.
ImageTensor read_pgm_ppm(const std::filesystem::path& path);
void write_pgm_ppm(const std::filesystem::path& path, const ImageTensor& img);

// Renders arbitrary real data as an 8-bit PGM with a linear min->0,
// max->255 mapping (all zeros when the data is constant). Returns the
// (min, max) pair that was used.
std::pair<double, double> write_pgm_autoscale(const std::filesystem::path& path,
                                              const RealGrid& grid);

}  // namespace afa
