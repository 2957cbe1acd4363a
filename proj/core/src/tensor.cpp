#include "afa/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace afa {

namespace {

std::size_t checked_element_count(const std::vector<std::uint32_t>& dims) {
    if (dims.empty() || dims.size() > 4) {
        raise(Errc::InvalidDims, "tensor rank must be 1..4, got " + std::to_string(dims.size()));
    }
    std::size_t count = 1;
    for (std::uint32_t d : dims) {
        if (d == 0) {
            raise(Errc::InvalidDims, "tensor extents must be positive");
        }
        count *= d;
    }
    return count;
}

}  // namespace

Tensor::Tensor(std::vector<std::uint32_t> dims, std::vector<float> values)
    : dims_(std::move(dims)), values_(std::move(values)) {
    const std::size_t expected = checked_element_count(dims_);
    if (expected != values_.size()) {
        raise(Errc::InvalidDims, "value count does not match extents");
    }
    if (!all_finite(values_)) {
        raise(Errc::InvalidParam, "tensor values must be finite");
    }
}

Tensor Tensor::zeros(std::vector<std::uint32_t> dims) {
    const std::size_t count = checked_element_count(dims);
    return Tensor(std::move(dims), std::vector<float>(count, 0.0f));
}

ImageTensor::ImageTensor(int channels, int height, int width, bool clamped)
    : channels_(channels), height_(height), width_(width), clamped_(clamped) {
    if (channels != 1 && channels != 3) {
        raise(Errc::InvalidDims, "image channels must be 1 or 3");
    }
    if (height < 1 || width < 1) {
        raise(Errc::InvalidDims, "image extents must be positive");
    }
    values_.assign(static_cast<std::size_t>(channels) * height * width, 0.0f);
}

ImageTensor::ImageTensor(int channels, int height, int width, std::vector<float> values,
                         bool clamped)
    : ImageTensor(channels, height, width, clamped) {
    if (values.size() != values_.size()) {
        raise(Errc::InvalidDims, "image value count does not match C*H*W");
    }
    if (!all_finite(values)) {
        raise(Errc::InvalidParam, "image values must be finite");
    }
    if (clamped) {
        for (float v : values) {
            if (v < 0.0f || v > 1.0f) {
                raise(Errc::InvalidParam, "clamped image carries out-of-range value");
            }
        }
    }
    values_ = std::move(values);
}

Tensor ImageTensor::to_tensor() const {
    return Tensor({static_cast<std::uint32_t>(channels_), static_cast<std::uint32_t>(height_),
                   static_cast<std::uint32_t>(width_)},
                  values_);
}

ImageTensor ImageTensor::from_tensor(const Tensor& t, bool clamped) {
    if (t.dims().size() != 3) {
        raise(Errc::InvalidDims, "image tensors must be rank 3 (C,H,W)");
    }
    return ImageTensor(static_cast<int>(t.dims()[0]), static_cast<int>(t.dims()[1]),
                       static_cast<int>(t.dims()[2]), t.values(), clamped);
}

double l2_norm(const std::vector<float>& values) noexcept {
    double acc = 0.0;
    for (float v : values) {
        acc += static_cast<double>(v) * static_cast<double>(v);
    }
    return std::sqrt(acc);
}

double l2_norm(const Tensor& t) noexcept { return l2_norm(t.values()); }

ImageTensor clamp01(const ImageTensor& img) {
    ImageTensor out = img;
    for (float& v : out.values()) {
        v = std::min(1.0f, std::max(0.0f, v));
    }
    out.set_clamped(true);
    return out;
}

bool all_finite(const std::vector<float>& values) noexcept {
    return std::all_of(values.begin(), values.end(),
                       [](float v) { return std::isfinite(v); });
}

}  // namespace afa
