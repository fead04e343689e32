#include <algorithm>
#include <cmath>
#include <numeric>

#include "augscout/dataset.hpp"
#include "augscout/errors.hpp"
#include "augscout/rng.hpp"

namespace augscout {

namespace {

const char* kind_name(ClassGenerator::Kind kind) {
  switch (kind) {
    case ClassGenerator::Kind::periodic: return "periodic";
    case ClassGenerator::Kind::corner_mark: return "corner_mark";
    case ClassGenerator::Kind::center_mark: return "center_mark";
    case ClassGenerator::Kind::uniform_color: return "uniform";
  }
  return "unknown";
}

}  // namespace

std::string ClassGenerator::display_name() const {
  return name.empty() ? kind_name(kind) : name;
}

void SyntheticSpec::validate() const {
  if (image_size < 4) raise(ErrorCode::InvalidSpec, "synthetic image_size must be >= 4");
  if (channels < 1) raise(ErrorCode::InvalidSpec, "synthetic channels must be >= 1");
  if (classes.empty()) raise(ErrorCode::InvalidSpec, "synthetic spec needs at least one class");
  if (samples_per_class < 2 || test_samples_per_class < 1) {
    raise(ErrorCode::InvalidSpec, "synthetic sample counts too small");
  }
  if (noise_std < 0.0) raise(ErrorCode::InvalidSpec, "noise_std must be >= 0");
  std::vector<std::string> names;
  for (const ClassGenerator& gen : classes) {
    switch (gen.kind) {
      case ClassGenerator::Kind::periodic:
        if (gen.period < 2 || image_size % gen.period != 0) {
          raise(ErrorCode::InvalidSpec, "periodic period must divide image_size");
        }
        break;
      case ClassGenerator::Kind::corner_mark:
      case ClassGenerator::Kind::center_mark:
        if (gen.patch < 1 || gen.patch >= image_size) {
          raise(ErrorCode::InvalidSpec, "mark patch size must be in [1, image_size)");
        }
        break;
      case ClassGenerator::Kind::uniform_color:
        if (gen.level < 0.0 || gen.level > 1.0) {
          raise(ErrorCode::InvalidSpec, "uniform level must be in [0, 1]");
        }
        break;
    }
    names.push_back(gen.display_name());
  }
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
    raise(ErrorCode::InvalidSpec, "synthetic class names must be unique");
  }
}

int min_surviving_window(const ClassGenerator& gen, int image_size) {
  switch (gen.kind) {
    case ClassGenerator::Kind::uniform_color:
      return 1;
    case ClassGenerator::Kind::periodic:
      // Every window of side >= period sees a full cycle in both axes.
      return gen.period;
    case ClassGenerator::Kind::center_mark: {
      // Patch spans [c, c+m); the worst offsets are 0 and image_size - w.
      const int c = (image_size - gen.patch) / 2;
      return std::max(c + gen.patch, image_size - c);
    }
    case ClassGenerator::Kind::corner_mark:
      // Only the full frame contains the corner patch at every placement.
      return image_size;
  }
  raise(ErrorCode::InvalidSpec, "unknown generator kind");
}

Image render_class_pattern(const ClassGenerator& gen, int image_size, int channels,
                           double background) {
  Image img(image_size, image_size, channels, static_cast<float>(background));
  auto paint = [&](int y, int x, double v) {
    for (int c = 0; c < channels; ++c) img.at(y, x, c) = static_cast<float>(v);
  };
  switch (gen.kind) {
    case ClassGenerator::Kind::uniform_color:
      for (int y = 0; y < image_size; ++y)
        for (int x = 0; x < image_size; ++x) paint(y, x, gen.level);
      break;
    case ClassGenerator::Kind::periodic: {
      // Checkerboard with cells of period/2, alternating background and level.
      const int cell = std::max(1, gen.period / 2);
      for (int y = 0; y < image_size; ++y) {
        for (int x = 0; x < image_size; ++x) {
          if (((y / cell) + (x / cell)) % 2 == 0) paint(y, x, gen.level);
        }
      }
      break;
    }
    case ClassGenerator::Kind::corner_mark:
      for (int y = 0; y < gen.patch; ++y)
        for (int x = 0; x < gen.patch; ++x) paint(y, x, gen.level);
      break;
    case ClassGenerator::Kind::center_mark: {
      const int c0 = (image_size - gen.patch) / 2;
      for (int y = c0; y < c0 + gen.patch; ++y)
        for (int x = c0; x < c0 + gen.patch; ++x) paint(y, x, gen.level);
      break;
    }
  }
  return img;
}

SyntheticDataset make_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  SyntheticDataset out;

  std::vector<std::string> names;
  for (const ClassGenerator& gen : spec.classes) names.push_back(gen.display_name());

  auto fill_split = [&](LabeledDataset& split, const std::string& tag, int per_class,
                        std::uint64_t salt) {
    split.dataset_id = "synthetic";
    split.split_tag = tag;
    split.class_names = names;
    for (std::size_t c = 0; c < spec.classes.size(); ++c) {
      const Image pattern =
          render_class_pattern(spec.classes[c], spec.image_size, spec.channels, spec.background);
      RngStream rng(derive_seed(seed, salt, c));
      for (int s = 0; s < per_class; ++s) {
        Image img = pattern;
        if (spec.noise_std > 0.0) {
          for (float& v : img.data) {
            v = std::clamp(v + static_cast<float>(rng.normal(0.0, spec.noise_std)), 0.0f, 1.0f);
          }
        }
        split.images.push_back(std::move(img));
        split.labels.push_back(static_cast<int>(c));
      }
    }
  };
  fill_split(out.train, "train", spec.samples_per_class, 0x7261696eULL);
  fill_split(out.test, "test", spec.test_samples_per_class, 0x74657374ULL);

  // Most robust first: ascending minimum surviving window, names break ties.
  std::vector<std::size_t> order(spec.classes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const int wa = min_surviving_window(spec.classes[a], spec.image_size);
    const int wb = min_surviving_window(spec.classes[b], spec.image_size);
    if (wa != wb) return wa < wb;
    return names[a] < names[b];
  });
  for (std::size_t ix : order) out.expected_robustness_order.push_back(names[ix]);

  out.train.validate();
  out.test.validate();
  return out;
}

}  // namespace augscout
