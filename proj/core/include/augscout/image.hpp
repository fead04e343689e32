#pragma once

#include <cstddef>
#include <vector>

namespace augscout {

/// Dense H x W x C float image, row-major, channels innermost.
/// Pixel values are expected in [0, 1] but nothing enforces it.
struct Image {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> data;

  Image() = default;
  Image(int h, int w, int c, float fill = 0.0f)
      : height(h), width(w), channels(c),
        data(static_cast<std::size_t>(h) * w * c, fill) {}

  float& at(int y, int x, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  float at(int y, int x, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  std::size_t size() const { return data.size(); }

  bool same_shape(const Image& other) const {
    return height == other.height && width == other.width && channels == other.channels;
  }

  friend bool operator==(const Image& a, const Image& b) {
    return a.same_shape(b) && a.data == b.data;
  }
};

/// Extracts the window of size h x w whose top-left corner is (y0, x0).
Image crop_window(const Image& src, int y0, int x0, int h, int w);

/// Bilinear resize with half-pixel centers and edge clamping.
///
/// Output pixel (i, j) samples the source at
///   sy = (i + 0.5) * height/out_h - 0.5,  sx = (j + 0.5) * width/out_w - 0.5,
/// blending the four clamped neighbours via nested lerps
/// (lerp(a, b, t) = a + t*(b - a)), which keeps constant images constant
/// bit-for-bit. Alternate backends can match this kernel exactly.
Image resize_bilinear(const Image& src, int out_h, int out_w);

/// Mirrors columns (left-right flip).
Image flip_horizontal(const Image& src);

}  // namespace augscout
