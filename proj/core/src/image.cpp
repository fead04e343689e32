#include "augscout/image.hpp"

#include <algorithm>
#include <cmath>

#include "augscout/errors.hpp"

namespace augscout {

Image crop_window(const Image& src, int y0, int x0, int h, int w) {
  if (y0 < 0 || x0 < 0 || h < 1 || w < 1 || y0 + h > src.height || x0 + w > src.width) {
    raise(ErrorCode::InvalidSpec, "crop window outside image bounds");
  }
  Image out(h, w, src.channels);
  for (int y = 0; y < h; ++y) {
    const float* in_row = &src.data[(static_cast<std::size_t>(y0 + y) * src.width + x0) * src.channels];
    float* out_row = &out.data[static_cast<std::size_t>(y) * w * src.channels];
    std::copy(in_row, in_row + static_cast<std::size_t>(w) * src.channels, out_row);
  }
  return out;
}

namespace {

inline float lerp(float a, float b, float t) { return a + t * (b - a); }

}  // namespace

Image resize_bilinear(const Image& src, int out_h, int out_w) {
  if (out_h < 1 || out_w < 1) raise(ErrorCode::InvalidSpec, "resize target below one pixel");
  if (src.height == out_h && src.width == out_w) return src;

  Image out(out_h, out_w, src.channels);
  const double scale_y = static_cast<double>(src.height) / out_h;
  const double scale_x = static_cast<double>(src.width) / out_w;
  const int c_count = src.channels;

  for (int i = 0; i < out_h; ++i) {
    double sy = (i + 0.5) * scale_y - 0.5;
    int y0 = static_cast<int>(std::floor(sy));
    float fy = static_cast<float>(sy - y0);
    int y0c = std::clamp(y0, 0, src.height - 1);
    int y1c = std::clamp(y0 + 1, 0, src.height - 1);
    for (int j = 0; j < out_w; ++j) {
      double sx = (j + 0.5) * scale_x - 0.5;
      int x0 = static_cast<int>(std::floor(sx));
      float fx = static_cast<float>(sx - x0);
      int x0c = std::clamp(x0, 0, src.width - 1);
      int x1c = std::clamp(x0 + 1, 0, src.width - 1);
      for (int c = 0; c < c_count; ++c) {
        float top = lerp(src.at(y0c, x0c, c), src.at(y0c, x1c, c), fx);
        float bot = lerp(src.at(y1c, x0c, c), src.at(y1c, x1c, c), fx);
        out.at(i, j, c) = lerp(top, bot, fy);
      }
    }
  }
  return out;
}

Image flip_horizontal(const Image& src) {
  Image out(src.height, src.width, src.channels);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      for (int c = 0; c < src.channels; ++c) {
        out.at(y, x, c) = src.at(y, src.width - 1 - x, c);
      }
    }
  }
  return out;
}

}  // namespace augscout
