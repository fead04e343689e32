#include "augscout/dataset.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "augscout/errors.hpp"
#include "augscout/rng.hpp"

namespace augscout {

namespace {

using nlohmann::json;

const std::vector<std::string>& fashion_mnist_names() {
  static const std::vector<std::string> names = {
      "T-Shirt", "Trouser", "Pullover", "Dress",   "Coat",
      "Sandal",  "Shirt",   "Sneaker",  "Bag",     "Ankle Boot"};
  return names;
}

const std::vector<std::string>& cifar10_names() {
  static const std::vector<std::string> names = {
      "airplane", "automobile", "bird",  "cat",  "deer",
      "dog",      "frog",       "horse", "ship", "truck"};
  return names;
}

const std::vector<std::string>& cifar100_names() {
  static const std::vector<std::string> names = {
      "apple", "aquarium_fish", "baby", "bear", "beaver", "bed", "bee", "beetle",
      "bicycle", "bottle", "bowl", "boy", "bridge", "bus", "butterfly", "camel",
      "can", "castle", "caterpillar", "cattle", "chair", "chimpanzee", "clock",
      "cloud", "cockroach", "couch", "crab", "crocodile", "cup", "dinosaur",
      "dolphin", "elephant", "flatfish", "forest", "fox", "girl", "hamster",
      "house", "kangaroo", "keyboard", "lamp", "lawn_mower", "leopard", "lion",
      "lizard", "lobster", "man", "maple_tree", "motorcycle", "mountain",
      "mouse", "mushroom", "oak_tree", "orange", "orchid", "otter", "palm_tree",
      "pear", "pickup_truck", "pine_tree", "plain", "plate", "poppy",
      "porcupine", "possum", "rabbit", "raccoon", "ray", "road", "rocket",
      "rose", "sea", "seal", "shark", "shrew", "skunk", "skyscraper", "snail",
      "snake", "spider", "squirrel", "streetcar", "sunflower", "sweet_pepper",
      "table", "tank", "telephone", "television", "tiger", "tractor", "train",
      "trout", "tulip", "turtle", "wardrobe", "whale", "willow_tree", "wolf",
      "woman", "worm"};
  return names;
}

std::vector<unsigned char> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::DatasetUnavailable, "cannot open " + path.string());
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>());
}

bool is_gzip(const std::vector<unsigned char>& bytes) {
  return bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b;
}

std::vector<unsigned char> gunzip(const std::vector<unsigned char>& bytes,
                                  const std::string& context) {
  z_stream zs{};
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) {
    raise(ErrorCode::IoError, "zlib init failed for " + context);
  }
  std::vector<unsigned char> out;
  out.reserve(bytes.size() * 4);
  unsigned char buffer[1 << 16];
  zs.next_in = const_cast<unsigned char*>(bytes.data());
  zs.avail_in = static_cast<uInt>(bytes.size());
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = buffer;
    zs.avail_out = sizeof buffer;
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      raise(ErrorCode::IoError, "gzip decode failed for " + context);
    }
    out.insert(out.end(), buffer, buffer + (sizeof buffer - zs.avail_out));
  }
  inflateEnd(&zs);
  return out;
}

/// Locates <dir>/<stem> or <dir>/<stem>.gz; verifies the manifest entry (crc32
/// of the on-disk bytes) when one exists; returns decompressed contents.
std::vector<unsigned char> load_dataset_file(const std::filesystem::path& dir,
                                             const std::string& stem, const json* manifest) {
  std::filesystem::path path = dir / stem;
  if (!std::filesystem::exists(path)) {
    std::filesystem::path gz = dir / (stem + ".gz");
    if (!std::filesystem::exists(gz)) {
      raise(ErrorCode::DatasetUnavailable, "missing " + path.string() + " (or .gz)");
    }
    path = gz;
  }
  std::vector<unsigned char> raw = read_file_bytes(path);
  if (manifest != nullptr) {
    const auto& files = (*manifest)["files"];
    const std::string key = path.filename().string();
    if (files.contains(key)) {
      const auto& entry = files[key];
      const auto crc = static_cast<std::uint32_t>(
          crc32(0L, raw.data(), static_cast<uInt>(raw.size())));
      if (entry.contains("bytes") && entry["bytes"].get<std::uint64_t>() != raw.size()) {
        raise(ErrorCode::ChecksumMismatch, key + ": size mismatch");
      }
      if (entry.contains("crc32") && entry["crc32"].get<std::uint32_t>() != crc) {
        raise(ErrorCode::ChecksumMismatch, key + ": crc32 mismatch");
      }
    }
  }
  if (is_gzip(raw)) return gunzip(raw, path.string());
  return raw;
}

std::uint32_t read_be32(const std::vector<unsigned char>& b, std::size_t off) {
  return (static_cast<std::uint32_t>(b[off]) << 24) | (static_cast<std::uint32_t>(b[off + 1]) << 16) |
         (static_cast<std::uint32_t>(b[off + 2]) << 8) | static_cast<std::uint32_t>(b[off + 3]);
}

std::vector<Image> parse_idx_images(const std::vector<unsigned char>& b, const std::string& ctx) {
  if (b.size() < 16 || read_be32(b, 0) != 0x00000803) {
    raise(ErrorCode::DatasetUnavailable, ctx + ": not an idx3 image file");
  }
  const std::size_t n = read_be32(b, 4);
  const int rows = static_cast<int>(read_be32(b, 8));
  const int cols = static_cast<int>(read_be32(b, 12));
  if (b.size() != 16 + n * static_cast<std::size_t>(rows) * cols) {
    raise(ErrorCode::DatasetUnavailable, ctx + ": truncated idx3 image file");
  }
  std::vector<Image> images;
  images.reserve(n);
  std::size_t off = 16;
  for (std::size_t i = 0; i < n; ++i) {
    Image img(rows, cols, 1);
    for (std::size_t p = 0; p < static_cast<std::size_t>(rows) * cols; ++p) {
      img.data[p] = static_cast<float>(b[off + p]) / 255.0f;
    }
    off += static_cast<std::size_t>(rows) * cols;
    images.push_back(std::move(img));
  }
  return images;
}

std::vector<int> parse_idx_labels(const std::vector<unsigned char>& b, const std::string& ctx) {
  if (b.size() < 8 || read_be32(b, 0) != 0x00000801) {
    raise(ErrorCode::DatasetUnavailable, ctx + ": not an idx1 label file");
  }
  const std::size_t n = read_be32(b, 4);
  if (b.size() != 8 + n) raise(ErrorCode::DatasetUnavailable, ctx + ": truncated idx1 label file");
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = b[8 + i];
  return labels;
}

/// CIFAR binary records: [labels...][3072 bytes planar RGB]. label_bytes is 1
/// for CIFAR-10 and 2 for CIFAR-100 (coarse then fine; fine is kept).
void parse_cifar_records(const std::vector<unsigned char>& b, int label_bytes,
                         std::vector<Image>& images, std::vector<int>& labels,
                         const std::string& ctx) {
  const std::size_t record = static_cast<std::size_t>(label_bytes) + 3072;
  if (b.empty() || b.size() % record != 0) {
    raise(ErrorCode::DatasetUnavailable, ctx + ": malformed cifar binary file");
  }
  const std::size_t n = b.size() / record;
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned char* rec = b.data() + i * record;
    labels.push_back(rec[label_bytes - 1]);
    Image img(32, 32, 3);
    const unsigned char* planes = rec + label_bytes;
    for (int c = 0; c < 3; ++c) {
      for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 32; ++x) {
          img.at(y, x, c) = static_cast<float>(planes[c * 1024 + y * 32 + x]) / 255.0f;
        }
      }
    }
    images.push_back(std::move(img));
  }
}

constexpr std::uint64_t kSubsampleSalt = 0x40a1c2e3d4f50617ULL;
constexpr std::uint64_t kSplitSalt = 0x9d2c5680a1b2c3d4ULL;

std::vector<std::vector<std::size_t>> indices_by_class(const LabeledDataset& data) {
  std::vector<std::vector<std::size_t>> by_class(data.num_classes());
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    by_class[static_cast<std::size_t>(data.labels[i])].push_back(i);
  }
  return by_class;
}

void shuffle_indices(std::vector<std::size_t>& ix, RngStream& rng) {
  for (std::size_t i = ix.size(); i > 1; --i) {
    std::swap(ix[i - 1], ix[rng.uniform_below(i)]);
  }
}

LabeledDataset take_indices(const LabeledDataset& data, std::vector<std::size_t> indices,
                            const std::string& split_tag) {
  std::sort(indices.begin(), indices.end());
  LabeledDataset out;
  out.dataset_id = data.dataset_id;
  out.split_tag = split_tag;
  out.class_names = data.class_names;
  out.images.reserve(indices.size());
  out.labels.reserve(indices.size());
  for (std::size_t ix : indices) {
    out.images.push_back(data.images[ix]);
    out.labels.push_back(data.labels[ix]);
  }
  return out;
}

}  // namespace

std::vector<int> LabeledDataset::class_counts() const {
  std::vector<int> counts(class_names.size(), 0);
  for (int label : labels) {
    if (label < 0 || label >= num_classes()) {
      raise(ErrorCode::InvalidSpec, dataset_id + ": label out of range");
    }
    ++counts[static_cast<std::size_t>(label)];
  }
  return counts;
}

void LabeledDataset::validate(bool require_all_classes) const {
  if (images.size() != labels.size()) {
    raise(ErrorCode::InvalidSpec, dataset_id + ": image/label count mismatch");
  }
  if (!images.empty()) {
    for (const Image& img : images) {
      if (!img.same_shape(images.front())) {
        raise(ErrorCode::InvalidSpec, dataset_id + ": inconsistent image shapes");
      }
      for (float v : img.data) {
        if (!std::isfinite(v)) raise(ErrorCode::InvalidSpec, dataset_id + ": non-finite pixel");
      }
    }
  }
  const std::vector<int> counts = class_counts();
  if (require_all_classes) {
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] == 0) {
        raise(ErrorCode::InvalidSpec,
              dataset_id + ": class " + class_names[c] + " absent from " + split_tag);
      }
    }
  }
}

std::filesystem::path default_cache_root() {
  if (const char* env = std::getenv("AUGSCOUT_CACHE"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0') {
    return std::filesystem::path(home) / ".cache" / "augscout";
  }
  return std::filesystem::path(".augscout_cache");
}

std::pair<LabeledDataset, LabeledDataset> load_dataset(const std::string& name,
                                                       double train_fraction, std::uint64_t seed,
                                                       const std::filesystem::path& cache_root) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    raise(ErrorCode::InvalidSpec, "train_fraction must be in (0, 1]");
  }
  const std::filesystem::path dir = cache_root / name;
  if (!std::filesystem::exists(dir)) {
    raise(ErrorCode::DatasetUnavailable, "no cache directory " + dir.string());
  }

  json manifest;
  const json* manifest_ptr = nullptr;
  const std::filesystem::path manifest_path = dir / "manifest.json";
  if (std::filesystem::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    try {
      in >> manifest;
    } catch (const std::exception& e) {
      raise(ErrorCode::ChecksumMismatch, "unreadable manifest: " + std::string(e.what()));
    }
    if (manifest.contains("files")) manifest_ptr = &manifest;
  }

  LabeledDataset train;
  LabeledDataset test;
  train.dataset_id = test.dataset_id = name;
  train.split_tag = "train";
  test.split_tag = "test";

  if (name == "fashion_mnist") {
    train.class_names = test.class_names = fashion_mnist_names();
    train.images = parse_idx_images(load_dataset_file(dir, "train-images-idx3-ubyte", manifest_ptr),
                                    name + "/train images");
    train.labels = parse_idx_labels(load_dataset_file(dir, "train-labels-idx1-ubyte", manifest_ptr),
                                    name + "/train labels");
    test.images = parse_idx_images(load_dataset_file(dir, "t10k-images-idx3-ubyte", manifest_ptr),
                                   name + "/test images");
    test.labels = parse_idx_labels(load_dataset_file(dir, "t10k-labels-idx1-ubyte", manifest_ptr),
                                   name + "/test labels");
  } else if (name == "cifar10") {
    train.class_names = test.class_names = cifar10_names();
    for (int i = 1; i <= 5; ++i) {
      parse_cifar_records(
          load_dataset_file(dir, "data_batch_" + std::to_string(i) + ".bin", manifest_ptr), 1,
          train.images, train.labels, name);
    }
    parse_cifar_records(load_dataset_file(dir, "test_batch.bin", manifest_ptr), 1, test.images,
                        test.labels, name);
  } else if (name == "cifar100") {
    train.class_names = test.class_names = cifar100_names();
    parse_cifar_records(load_dataset_file(dir, "train.bin", manifest_ptr), 2, train.images,
                        train.labels, name);
    parse_cifar_records(load_dataset_file(dir, "test.bin", manifest_ptr), 2, test.images,
                        test.labels, name);
  } else {
    raise(ErrorCode::InvalidSpec, "unknown dataset: " + name);
  }

  train.validate();
  test.validate();
  if (train_fraction < 1.0) {
    train = stratified_subsample(train, train_fraction, seed);
  }
  return {std::move(train), std::move(test)};
}

LabeledDataset stratified_subsample(const LabeledDataset& data, double fraction,
                                    std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    raise(ErrorCode::InvalidSpec, "subsample fraction must be in (0, 1]");
  }
  if (fraction == 1.0) return data;
  auto by_class = indices_by_class(data);
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& ix = by_class[c];
    RngStream rng(derive_seed(seed, kSubsampleSalt, c));
    shuffle_indices(ix, rng);
    const auto want = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(ix.size()))));
    keep.insert(keep.end(), ix.begin(), ix.begin() + std::min(want, ix.size()));
  }
  return take_indices(data, std::move(keep), data.split_tag);
}

std::pair<LabeledDataset, LabeledDataset> split_validation(const LabeledDataset& train,
                                                           double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    raise(ErrorCode::InvalidSpec, "validation fraction must be in (0, 1)");
  }
  auto by_class = indices_by_class(train);
  std::vector<std::size_t> val_ix;
  std::vector<std::size_t> train_ix;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& ix = by_class[c];
    const auto n_val =
        static_cast<std::size_t>(std::llround(fraction * static_cast<double>(ix.size())));
    if (n_val == 0 || n_val >= ix.size()) {
      raise(ErrorCode::ClassTooSmall,
            "class " + train.class_names[c] + " cannot be split at fraction " +
                std::to_string(fraction));
    }
    RngStream rng(derive_seed(seed, kSplitSalt, c));
    shuffle_indices(ix, rng);
    val_ix.insert(val_ix.end(), ix.begin(), ix.begin() + n_val);
    train_ix.insert(train_ix.end(), ix.begin() + n_val, ix.end());
  }
  return {take_indices(train, std::move(train_ix), "train"),
          take_indices(train, std::move(val_ix), "val")};
}

LabeledDataset pad_images(const LabeledDataset& data, int target_h, int target_w) {
  LabeledDataset out = data;
  for (Image& img : out.images) {
    if (img.height > target_h || img.width > target_w) {
      raise(ErrorCode::InvalidSpec, "pad target smaller than image");
    }
    if (img.height == target_h && img.width == target_w) continue;
    Image padded(target_h, target_w, img.channels, 0.0f);
    const int oy = (target_h - img.height) / 2;
    const int ox = (target_w - img.width) / 2;
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        for (int c = 0; c < img.channels; ++c) {
          padded.at(oy + y, ox + x, c) = img.at(y, x, c);
        }
      }
    }
    img = std::move(padded);
  }
  return out;
}

LabeledDataset replicate_channels(const LabeledDataset& data, int channels) {
  LabeledDataset out = data;
  for (Image& img : out.images) {
    if (img.channels == channels) continue;
    if (img.channels != 1) {
      raise(ErrorCode::InvalidSpec, "can only replicate single-channel images");
    }
    Image rep(img.height, img.width, channels);
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        for (int c = 0; c < channels; ++c) rep.at(y, x, c) = img.at(y, x, 0);
      }
    }
    img = std::move(rep);
  }
  return out;
}

std::string DatasetRef::id() const {
  if (kind == Kind::named) return name;
  return "synthetic";
}

std::pair<LabeledDataset, LabeledDataset> DatasetRef::resolve(
    const std::filesystem::path& cache_root) const {
  if (kind == Kind::named) {
    return load_dataset(name, train_fraction, subsample_seed, cache_root);
  }
  SyntheticDataset synth = make_synthetic(synthetic, synthetic_seed);
  return {std::move(synth.train), std::move(synth.test)};
}

}  // namespace augscout
