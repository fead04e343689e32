#include "augscout/augment.hpp"

#include <algorithm>
#include <set>

#include "augscout/errors.hpp"

namespace augscout {

CropSpec::CropSpec(Percent a) : alpha(a) {
  if (a.milli() < 0 || a.milli() >= 100 * Percent::kScale) {
    raise(ErrorCode::InvalidSpec, "crop alpha must be in [0, 100): " + a.str());
  }
}

FlipSpec::FlipSpec(double p) : probability(p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    raise(ErrorCode::InvalidSpec, "flip probability must be in [0, 1]");
  }
}

std::string AugmentationPolicy::describe() const {
  if (crop && flip) return "crop+flip";
  if (crop) return "crop";
  if (flip) return "flip";
  return "none";
}

int effective_dim(int image_size, Percent alpha) {
  if (image_size < 1) raise(ErrorCode::InvalidSpec, "image size must be at least 1");
  if (alpha.milli() < 0 || alpha.milli() >= 100 * Percent::kScale) {
    raise(ErrorCode::InvalidSpec, "alpha must be in [0, 100): " + alpha.str());
  }
  // image_size * (1 - alpha/100) as the exact rational num/den, then
  // round-half-to-even.
  const std::int64_t den = 100 * Percent::kScale;
  const std::int64_t num = static_cast<std::int64_t>(image_size) * (den - alpha.milli());
  std::int64_t q = num / den;
  const std::int64_t r = num % den;
  if (2 * r > den || (2 * r == den && q % 2 == 1)) ++q;
  if (q < 1) {
    raise(ErrorCode::DegenerateCrop,
          "alpha " + alpha.str() + " leaves no pixels at size " + std::to_string(image_size));
  }
  return static_cast<int>(q);
}

Image apply_random_crop(const Image& image, const CropSpec& spec, RngStream& rng) {
  const int base = std::min(image.height, image.width);
  const int side = effective_dim(base, spec.alpha);
  if (side > image.height || side > image.width) {
    raise(ErrorCode::InvalidSpec, "image smaller than crop window");
  }
  if (side == image.height && side == image.width) return image;
  const int y0 = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(image.height - side) + 1));
  const int x0 = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(image.width - side) + 1));
  Image window = crop_window(image, y0, x0, side, side);
  return resize_bilinear(window, image.height, image.width);
}

Image apply_random_flip(const Image& image, const FlipSpec& spec, RngStream& rng) {
  if (rng.uniform01() < spec.probability) return flip_horizontal(image);
  return image;
}

Image apply_policy(const Image& image, const AugmentationPolicy& policy, RngStream& rng) {
  if (policy.empty()) return image;
  Image out = policy.crop ? apply_random_crop(image, *policy.crop, rng) : image;
  if (policy.flip) out = apply_random_flip(out, *policy.flip, rng);
  return out;
}

AlphaGrid default_grid(int image_size) {
  if (image_size < 4) raise(ErrorCode::InvalidSpec, "default grid needs image size >= 4");
  AlphaGrid grid;
  grid.image_size = image_size;
  grid.alphas.reserve(28);
  for (int k = 0; k < 28; ++k) {
    grid.alphas.push_back(Percent::from_int(10 * k / 3));
  }
  return dedupe_grid(grid);
}

AlphaGrid make_grid(int image_size, Percent lo, Percent hi, Percent step) {
  if (image_size < 1) raise(ErrorCode::InvalidSpec, "grid image size must be at least 1");
  if (step.milli() <= 0) raise(ErrorCode::InvalidSpec, "grid step must be positive");
  if (lo.milli() < 0 || hi.milli() >= 100 * Percent::kScale || lo > hi) {
    raise(ErrorCode::InvalidSpec, "grid range must satisfy 0 <= lo <= hi < 100");
  }
  AlphaGrid grid;
  grid.image_size = image_size;
  for (std::int64_t m = lo.milli(); m <= hi.milli(); m += step.milli()) {
    grid.alphas.push_back(Percent::from_milli(m));
  }
  return grid;
}

AlphaGrid dedupe_grid(const AlphaGrid& grid) {
  if (!std::is_sorted(grid.alphas.begin(), grid.alphas.end()) ||
      std::adjacent_find(grid.alphas.begin(), grid.alphas.end()) != grid.alphas.end()) {
    raise(ErrorCode::InvalidSpec, "grid must be strictly increasing before dedupe");
  }
  AlphaGrid out;
  out.image_size = grid.image_size;
  std::set<int> seen;
  for (const Percent& alpha : grid.alphas) {
    if (seen.insert(effective_dim(grid.image_size, alpha)).second) {
      out.alphas.push_back(alpha);
    }
  }
  return out;
}

}  // namespace augscout
