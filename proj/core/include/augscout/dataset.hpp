#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "augscout/image.hpp"

namespace augscout {

/// An immutable split of labeled images. Every class index in [0, K) must
/// appear at least once; H, W, C are constant across the split.
struct LabeledDataset {
  std::string dataset_id;
  std::string split_tag;  // "train" | "val" | "test"
  std::vector<Image> images;
  std::vector<int> labels;
  std::vector<std::string> class_names;

  std::size_t size() const { return images.size(); }
  int num_classes() const { return static_cast<int>(class_names.size()); }
  std::vector<int> class_counts() const;

  /// Checks the structural invariants; throws InvalidSpec on violation.
  void validate(bool require_all_classes = true) const;
};

/// Root directory for dataset files: AUGSCOUT_CACHE if set, otherwise
/// ~/.cache/augscout. Layout is <root>/<name>/<files>, optionally with a
/// manifest.json carrying {"files": {"<file>": {"crc32": ..., "bytes": ...}}}.
std::filesystem::path default_cache_root();

/// Loads one of {fashion_mnist, cifar10, cifar100} from the cache directory.
/// When train_fraction < 1 the train split is stratified-subsampled; the
/// canonical test split is never subsampled. Grayscale images keep C=1.
/// Throws DatasetUnavailable if files are missing, ChecksumMismatch if a
/// manifest entry disagrees.
std::pair<LabeledDataset, LabeledDataset> load_dataset(
    const std::string& name, double train_fraction, std::uint64_t seed,
    const std::filesystem::path& cache_root = default_cache_root());

/// Stratified validation split: round(fraction * n_c) samples per class move
/// into the validation part. Throws ClassTooSmall if any class would end up
/// empty on either side.
std::pair<LabeledDataset, LabeledDataset> split_validation(const LabeledDataset& train,
                                                           double fraction, std::uint64_t seed);

/// Stratified subsample keeping round(fraction * n_c) per class (at least 1).
LabeledDataset stratified_subsample(const LabeledDataset& data, double fraction,
                                    std::uint64_t seed);

/// Zero-pads images symmetrically to target_h x target_w (content centered).
LabeledDataset pad_images(const LabeledDataset& data, int target_h, int target_w);

/// Replicates a single channel to the requested channel count.
LabeledDataset replicate_channels(const LabeledDataset& data, int channels);

// ---------------------------------------------------------------------------
// Synthetic oracle datasets
// ---------------------------------------------------------------------------

/// One class of a synthetic dataset. The generators have known-by-construction
/// crop robustness, which makes end-to-end sweeps verifiable at desk scale:
///   periodic(g)    -- pattern repeating every g pixels; any g-wide window
///                     shows a full period.
///   corner_mark(m) -- m x m patch at the top-left corner; only the full
///                     frame is guaranteed to show it.
///   center_mark(m) -- m x m patch at the center.
///   uniform_color  -- constant level; survives any crop.
struct ClassGenerator {
  enum class Kind { periodic, corner_mark, center_mark, uniform_color };

  Kind kind = Kind::uniform_color;
  int period = 4;        // periodic
  int patch = 8;         // corner_mark / center_mark
  double level = 0.4;    // uniform_color level, or mark/pattern intensity
  std::string name;      // defaults to the kind name

  std::string display_name() const;
};

struct SyntheticSpec {
  int image_size = 32;
  int channels = 1;
  std::vector<ClassGenerator> classes;
  int samples_per_class = 48;
  int test_samples_per_class = 16;
  double noise_std = 0.02;
  double background = 0.1;

  void validate() const;  // throws InvalidSpec
};

struct SyntheticDataset {
  LabeledDataset train;
  LabeledDataset test;
  /// Classes sorted most-robust first: ascending by the smallest window size
  /// whose every placement still contains a full class-identifying feature.
  std::vector<std::string> expected_robustness_order;
};

/// Smallest window side w such that every w x w placement inside the frame
/// contains a full feature instance of this generator.
int min_surviving_window(const ClassGenerator& gen, int image_size);

SyntheticDataset make_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

/// Renders the noise-free canonical pattern for one class.
Image render_class_pattern(const ClassGenerator& gen, int image_size, int channels,
                           double background);

// ---------------------------------------------------------------------------
// Self-describing dataset reference (used by plans and job documents)
// ---------------------------------------------------------------------------

struct DatasetRef {
  enum class Kind { named, synthetic };

  Kind kind = Kind::named;
  std::string name;              // named: fashion_mnist | cifar10 | cifar100
  double train_fraction = 1.0;   // named
  std::uint64_t subsample_seed = 0;
  SyntheticSpec synthetic;       // synthetic
  std::uint64_t synthetic_seed = 0;

  std::string id() const;

  /// Materializes (train, test); named datasets come from cache_root.
  std::pair<LabeledDataset, LabeledDataset> resolve(
      const std::filesystem::path& cache_root = default_cache_root()) const;
};

}  // namespace augscout
