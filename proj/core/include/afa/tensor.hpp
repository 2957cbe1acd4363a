#pragma once

#include <cstdint>
#include <vector>

#include "afa/errors.hpp"

namespace afa {

// Dense row-major f32 tensor, rank 1 to 4. Values are kept finite; loaders
// and constructors reject NaN/Inf.
class Tensor {
  public:
    Tensor() = default;
    Tensor(std::vector<std::uint32_t> dims, std::vector<float> values);
    static Tensor zeros(std::vector<std::uint32_t> dims);

    const std::vector<std::uint32_t>& dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<float>& values() const noexcept { return values_; }
    std::vector<float>& values() noexcept { return values_; }

    float operator[](std::size_t i) const { return values_[i]; }
    float& operator[](std::size_t i) { return values_[i]; }

  private:
    std::vector<std::uint32_t> dims_;
    std::vector<float> values_;
};

// C x H x W image, values in [0,1] when `clamped` is set.
class ImageTensor {
  public:
    ImageTensor() = default;
    ImageTensor(int channels, int height, int width, bool clamped = false);
    ImageTensor(int channels, int height, int width, std::vector<float> values, bool clamped);

    int channels() const noexcept { return channels_; }
    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    bool clamped() const noexcept { return clamped_; }
    void set_clamped(bool c) noexcept { clamped_ = c; }

    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<float>& values() const noexcept { return values_; }
    std::vector<float>& values() noexcept { return values_; }

    float at(int c, int y, int x) const {
        return values_[static_cast<std::size_t>((c * height_ + y)) * width_ + x];
    }
    float& at(int c, int y, int x) {
        return values_[static_cast<std::size_t>((c * height_ + y)) * width_ + x];
    }

    Tensor to_tensor() const;
    static ImageTensor from_tensor(const Tensor& t, bool clamped);

  private:
    int channels_ = 0;
    int height_ = 0;
    int width_ = 0;
    bool clamped_ = false;
    std::vector<float> values_;
};

double l2_norm(const Tensor& t) noexcept;
double l2_norm(const std::vector<float>& values) noexcept;

// Per-element min(1, max(0, v)); idempotent, marks the result clamped.
ImageTensor clamp01(const ImageTensor& img);

bool all_finite(const std::vector<float>& values) noexcept;

}  // namespace afa
