#pragma once

#include <optional>
#include <vector>

#include "augscout/image.hpp"
#include "augscout/percent.hpp"
#include "augscout/rng.hpp"

namespace augscout {

/// Random crop of intensity alpha: a square window of side
/// effective_dim(image_size, alpha) is cut out (no padding) and upscaled back
/// to the original size. alpha is the fraction of linear size removed.
struct CropSpec {
  Percent alpha;

  CropSpec() = default;
  explicit CropSpec(Percent a);  // validates 0 <= alpha < 100
};

struct FlipSpec {
  double probability = 0.5;

  FlipSpec() = default;
  explicit FlipSpec(double p);  // validates 0 <= p <= 1
};

/// Ordered per-iteration training transforms: crop first, then flip.
/// Applies to training batches only; evaluation data must never pass through
/// a policy.
struct AugmentationPolicy {
  std::optional<CropSpec> crop;
  std::optional<FlipSpec> flip;

  bool empty() const { return !crop && !flip; }
  std::string describe() const;  // "crop+flip", "crop", "flip", "none"
};

/// Ordered alpha values plus the reference image size used for dedupe.
struct AlphaGrid {
  std::vector<Percent> alphas;  // strictly increasing, each in [0, 100)
  int image_size = 0;

  std::size_t size() const { return alphas.size(); }
};

/// Post-crop side length: round-half-to-even of image_size * (1 - alpha/100),
/// computed on exact integers. Throws DegenerateCrop if the result would be
/// below one pixel.
int effective_dim(int image_size, Percent alpha);

/// Chooses the window offset uniformly over all valid positions (y drawn
/// first, then x, one draw each) and resizes back to the input dimensions.
/// Output dimensions always equal input dimensions.
Image apply_random_crop(const Image& image, const CropSpec& spec, RngStream& rng);

/// Mirrors columns with probability spec.probability (one draw).
Image apply_random_flip(const Image& image, const FlipSpec& spec, RngStream& rng);

/// Crop then flip, in that order.
Image apply_policy(const Image& image, const AugmentationPolicy& policy, RngStream& rng);

/// The stock scouting grid: alpha_k = floor(10k/3) percent for k = 0..27,
/// i.e. 0, 3, 6, 10, 13, ..., 86, 90, deduped for the given image size.
AlphaGrid default_grid(int image_size);

/// Uniform grid from lo to hi (inclusive) in the given step.
AlphaGrid make_grid(int image_size, Percent lo, Percent hi, Percent step);

/// Keeps the smallest alpha among any group sharing the same effective
/// dimension; order preserved. Idempotent.
AlphaGrid dedupe_grid(const AlphaGrid& grid);

}  // namespace augscout
