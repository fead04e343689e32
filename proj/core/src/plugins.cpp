#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

#include "augscout/errors.hpp"
#include "augscout/rng.hpp"
#include "augscout/trainer.hpp"

namespace augscout {

namespace {

constexpr std::uint64_t kInitSalt = 0x696e6974ULL;
constexpr std::uint64_t kAugSalt = 0x61756700ULL;
constexpr std::uint64_t kShuffleSalt = 0x73687566ULL;

struct Adam {
  std::vector<float> m, v;
  double lr;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  long long t = 0;

  Adam(std::size_t n, double learning_rate) : m(n, 0.0f), v(n, 0.0f), lr(learning_rate) {}

  void step(std::vector<float>& w, const std::vector<float>& g) {
    ++t;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = static_cast<float>(beta1 * m[i] + (1.0 - beta1) * g[i]);
      v[i] = static_cast<float>(beta2 * v[i] + (1.0 - beta2) * g[i] * g[i]);
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      w[i] -= static_cast<float>(lr * mhat / (std::sqrt(vhat) + eps));
    }
  }
};

/// Stateless model over a flat parameter vector; the driver owns weights,
/// snapshots, and the optimization loop.
class Model {
public:
  virtual ~Model() = default;
  virtual std::size_t param_count() const = 0;
  virtual void init_params(std::vector<float>& w, RngStream& rng) const = 0;
  /// Mean batch loss; accumulates d(loss)/dw into grad (already zeroed).
  virtual double batch_gradient(const std::vector<float>& w, const std::vector<Image>& images,
                                const int* labels_begin, std::size_t n,
                                std::vector<float>& grad) const = 0;
  virtual int predict(const std::vector<float>& w, const Image& image) const = 0;
};

std::vector<int> predict_all(const Model& model, const std::vector<float>& w,
                             const LabeledDataset& data) {
  std::vector<int> out;
  out.reserve(data.size());
  for (const Image& img : data.images) out.push_back(model.predict(w, img));
  return out;
}

double plain_accuracy(std::span<const int> predictions, std::span<const int> labels) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predictions[i] == labels[i]) ++correct;
  }
  return labels.empty() ? 0.0 : static_cast<double>(correct) / labels.size();
}

void softmax_inplace(std::vector<double>& logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& z : logits) {
    z = std::exp(z - mx);
    sum += z;
  }
  for (double& z : logits) z /= sum;
}

/// Shared training loop: shuffled minibatches, per-iteration augmentation on
/// training data only, early stopping on validation accuracy with best-epoch
/// weight restoration, final evaluation on the untouched test split.
RunRecord drive_training(const Model& model, const TrainerSpec& spec, const LabeledDataset& train,
                         const LabeledDataset& val, const LabeledDataset& test,
                         const AugmentationPolicy& policy) {
  const auto started = std::chrono::steady_clock::now();
  spec.validate();
  if (train.size() == 0 || val.size() == 0 || test.size() == 0) {
    raise(ErrorCode::PluginFailure, "empty split passed to trainer");
  }

  std::vector<float> w(model.param_count(), 0.0f);
  RngStream init_rng(derive_seed(spec.seed, kInitSalt));
  model.init_params(w, init_rng);

  Adam opt(w.size(), spec.learning_rate);
  RngStream aug_rng(derive_seed(spec.seed, kAugSalt));
  RngStream shuffle_rng(derive_seed(spec.seed, kShuffleSalt));
  EarlyStopper stopper(spec.early_stopping);

  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<float> grad(w.size(), 0.0f);
  std::vector<float> best_w = w;
  int epochs_trained = 0;

  for (int epoch = 1; epoch <= spec.max_epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.uniform_below(i)]);
    }
    for (std::size_t begin = 0; begin < order.size(); begin += spec.batch_size) {
      const std::size_t end = std::min(order.size(), begin + spec.batch_size);
      std::vector<Image> batch;
      std::vector<int> batch_labels;
      batch.reserve(end - begin);
      for (std::size_t i = begin; i < end; ++i) {
        batch.push_back(apply_policy(train.images[order[i]], policy, aug_rng));
        batch_labels.push_back(train.labels[order[i]]);
      }
      std::fill(grad.begin(), grad.end(), 0.0f);
      const double loss = model.batch_gradient(w, batch, batch_labels.data(), batch.size(), grad);
      if (!std::isfinite(loss)) {
        raise(ErrorCode::NonFiniteLoss, "training diverged at epoch " + std::to_string(epoch));
      }
      opt.step(w, grad);
    }
    epochs_trained = epoch;
    const double val_acc = plain_accuracy(predict_all(model, w, val), val.labels);
    const bool stop = stopper.step(val_acc);
    if (stopper.best_epoch() == epoch) best_w = w;
    if (stop) break;
  }

  if (spec.early_stopping.restore_best && stopper.best_epoch() > 0) w = best_w;

  RunRecord record;
  record.dataset_id = test.dataset_id;
  record.architecture_id = spec.architecture_id;
  record.policy = policy;
  record.alpha = policy.crop ? policy.crop->alpha : Percent::from_int(0);
  record.seed = spec.seed;
  record.class_names = test.class_names;
  const std::vector<int> predictions = predict_all(model, w, test);
  record.per_class_accuracy =
      per_class_accuracy(predictions, test.labels, test.num_classes());
  record.test_class_counts = test.class_counts();
  record.mean_accuracy =
      weighted_mean_accuracy(record.per_class_accuracy, record.test_class_counts);
  record.train_accuracy = plain_accuracy(predict_all(model, w, train), train.labels);
  record.val_accuracy = plain_accuracy(predict_all(model, w, val), val.labels);
  record.epochs_trained = epochs_trained;
  record.best_epoch = stopper.best_epoch();
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return record;
}

// ---------------------------------------------------------------------------
// linear_probe: softmax regression on raw pixels
// ---------------------------------------------------------------------------

class LinearProbe : public Model {
public:
  LinearProbe(int dim, int classes) : dim_(dim), classes_(classes) {}

  std::size_t param_count() const override {
    return static_cast<std::size_t>(classes_) * (dim_ + 1);
  }

  void init_params(std::vector<float>& w, RngStream&) const override {
    std::fill(w.begin(), w.end(), 0.0f);  // convex; zero start is canonical
  }

  double batch_gradient(const std::vector<float>& w, const std::vector<Image>& images,
                        const int* labels, std::size_t n,
                        std::vector<float>& grad) const override {
    double loss = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> logits(classes_);
    for (std::size_t s = 0; s < n; ++s) {
      const std::vector<float>& x = images[s].data;
      for (int k = 0; k < classes_; ++k) {
        const float* row = &w[static_cast<std::size_t>(k) * (dim_ + 1)];
        double z = row[dim_];
        for (int d = 0; d < dim_; ++d) z += row[d] * x[d];
        logits[k] = z;
      }
      softmax_inplace(logits);
      loss -= std::log(std::max(logits[labels[s]], 1e-12)) * inv_n;
      for (int k = 0; k < classes_; ++k) {
        const float delta =
            static_cast<float>((logits[k] - (k == labels[s] ? 1.0 : 0.0)) * inv_n);
        float* grow = &grad[static_cast<std::size_t>(k) * (dim_ + 1)];
        for (int d = 0; d < dim_; ++d) grow[d] += delta * x[d];
        grow[dim_] += delta;
      }
    }
    return loss;
  }

  int predict(const std::vector<float>& w, const Image& image) const override {
    int best = 0;
    double best_z = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < classes_; ++k) {
      const float* row = &w[static_cast<std::size_t>(k) * (dim_ + 1)];
      double z = row[dim_];
      for (int d = 0; d < dim_; ++d) z += row[d] * image.data[d];
      if (z > best_z) {
        best_z = z;
        best = k;
      }
    }
    return best;
  }

private:
  int dim_;
  int classes_;
};

// ---------------------------------------------------------------------------
// reference_cnn: conv-relu-maxpool4, conv-relu, global average pool, linear
// ---------------------------------------------------------------------------

class ReferenceCnn : public Model {
public:
  static constexpr int kFilters1 = 4;
  static constexpr int kFilters2 = 8;

  ReferenceCnn(int height, int width, int channels, int classes)
      : h_(height), w_(width), c_(channels), classes_(classes), ph_(height / 4),
        pw_(width / 4) {
    if (ph_ < 2 || pw_ < 2) {
      raise(ErrorCode::PluginFailure, "reference_cnn needs images of at least 8x8");
    }
    conv1_w_ = kFilters1 * c_ * 9;
    conv2_w_ = kFilters2 * kFilters1 * 9;
    fc_w_ = classes_ * kFilters2;
  }

  std::size_t param_count() const override {
    return conv1_w_ + kFilters1 + conv2_w_ + kFilters2 + fc_w_ + classes_;
  }

  void init_params(std::vector<float>& w, RngStream& rng) const override {
    std::fill(w.begin(), w.end(), 0.0f);
    const double s1 = std::sqrt(2.0 / (9.0 * c_));
    const double s2 = std::sqrt(2.0 / (9.0 * kFilters1));
    for (int i = 0; i < conv1_w_; ++i) w[i] = static_cast<float>(rng.normal(0.0, s1));
    for (int i = 0; i < conv2_w_; ++i) {
      w[conv1_w_ + kFilters1 + i] = static_cast<float>(rng.normal(0.0, s2));
    }
    // fc stays zero
  }

  double batch_gradient(const std::vector<float>& w, const std::vector<Image>& images,
                        const int* labels, std::size_t n,
                        std::vector<float>& grad) const override {
    double loss = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    Buffers buf(*this);
    for (std::size_t s = 0; s < n; ++s) {
      forward(w, images[s], buf);
      softmax_inplace(buf.logits);
      loss -= std::log(std::max(buf.logits[labels[s]], 1e-12)) * inv_n;
      backward(w, images[s], labels[s], inv_n, buf, grad);
    }
    return loss;
  }

  int predict(const std::vector<float>& w, const Image& image) const override {
    Buffers buf(*this);
    forward(w, image, buf);
    int best = 0;
    for (int k = 1; k < classes_; ++k) {
      if (buf.logits[k] > buf.logits[best]) best = k;
    }
    return best;
  }

private:
  struct Buffers {
    std::vector<float> act1;     // kFilters1 x h x w (post-relu)
    std::vector<float> pooled;   // kFilters1 x ph x pw
    std::vector<int> pool_arg;   // argmax flat index into act1
    std::vector<float> act2;     // kFilters2 x ph x pw (post-relu)
    std::vector<double> gap;     // kFilters2
    std::vector<double> logits;  // classes
    std::vector<float> d_act2, d_pooled, d_act1;

    explicit Buffers(const ReferenceCnn& net)
        : act1(static_cast<std::size_t>(kFilters1) * net.h_ * net.w_),
          pooled(static_cast<std::size_t>(kFilters1) * net.ph_ * net.pw_),
          pool_arg(pooled.size()),
          act2(static_cast<std::size_t>(kFilters2) * net.ph_ * net.pw_),
          gap(kFilters2),
          logits(net.classes_),
          d_act2(act2.size()),
          d_pooled(pooled.size()),
          d_act1(act1.size()) {}
  };

  // Parameter layout offsets.
  int off_conv1b() const { return conv1_w_; }
  int off_conv2w() const { return conv1_w_ + kFilters1; }
  int off_conv2b() const { return off_conv2w() + conv2_w_; }
  int off_fcw() const { return off_conv2b() + kFilters2; }
  int off_fcb() const { return off_fcw() + fc_w_; }

  void forward(const std::vector<float>& w, const Image& img, Buffers& buf) const {
    // conv1 (3x3, pad 1) + relu
    for (int f = 0; f < kFilters1; ++f) {
      const float* kw = &w[static_cast<std::size_t>(f) * c_ * 9];
      const float kb = w[off_conv1b() + f];
      for (int y = 0; y < h_; ++y) {
        for (int x = 0; x < w_; ++x) {
          float acc = kb;
          for (int c = 0; c < c_; ++c) {
            for (int dy = -1; dy <= 1; ++dy) {
              const int yy = y + dy;
              if (yy < 0 || yy >= h_) continue;
              for (int dx = -1; dx <= 1; ++dx) {
                const int xx = x + dx;
                if (xx < 0 || xx >= w_) continue;
                acc += kw[(c * 3 + (dy + 1)) * 3 + (dx + 1)] * img.at(yy, xx, c);
              }
            }
          }
          buf.act1[(static_cast<std::size_t>(f) * h_ + y) * w_ + x] = acc > 0.0f ? acc : 0.0f;
        }
      }
    }
    // maxpool 4x4 stride 4
    for (int f = 0; f < kFilters1; ++f) {
      for (int py = 0; py < ph_; ++py) {
        for (int px = 0; px < pw_; ++px) {
          float best = -std::numeric_limits<float>::infinity();
          int best_ix = 0;
          for (int dy = 0; dy < 4; ++dy) {
            for (int dx = 0; dx < 4; ++dx) {
              const int ix = (static_cast<int>(f) * h_ + py * 4 + dy) * w_ + px * 4 + dx;
              if (buf.act1[ix] > best) {
                best = buf.act1[ix];
                best_ix = ix;
              }
            }
          }
          const std::size_t pix = (static_cast<std::size_t>(f) * ph_ + py) * pw_ + px;
          buf.pooled[pix] = best;
          buf.pool_arg[pix] = best_ix;
        }
      }
    }
    // conv2 (3x3, pad 1) + relu on the pooled map
    for (int f = 0; f < kFilters2; ++f) {
      const float* kw = &w[off_conv2w() + static_cast<std::size_t>(f) * kFilters1 * 9];
      const float kb = w[off_conv2b() + f];
      for (int y = 0; y < ph_; ++y) {
        for (int x = 0; x < pw_; ++x) {
          float acc = kb;
          for (int c = 0; c < kFilters1; ++c) {
            for (int dy = -1; dy <= 1; ++dy) {
              const int yy = y + dy;
              if (yy < 0 || yy >= ph_) continue;
              for (int dx = -1; dx <= 1; ++dx) {
                const int xx = x + dx;
                if (xx < 0 || xx >= pw_) continue;
                acc += kw[(c * 3 + (dy + 1)) * 3 + (dx + 1)] *
                       buf.pooled[(static_cast<std::size_t>(c) * ph_ + yy) * pw_ + xx];
              }
            }
          }
          buf.act2[(static_cast<std::size_t>(f) * ph_ + y) * pw_ + x] = acc > 0.0f ? acc : 0.0f;
        }
      }
    }
    // global average pool + linear head
    const double inv_hw = 1.0 / (static_cast<double>(ph_) * pw_);
    for (int f = 0; f < kFilters2; ++f) {
      double sum = 0.0;
      for (int i = 0; i < ph_ * pw_; ++i) sum += buf.act2[static_cast<std::size_t>(f) * ph_ * pw_ + i];
      buf.gap[f] = sum * inv_hw;
    }
    for (int k = 0; k < classes_; ++k) {
      double z = w[off_fcb() + k];
      for (int f = 0; f < kFilters2; ++f) z += w[off_fcw() + k * kFilters2 + f] * buf.gap[f];
      buf.logits[k] = z;
    }
  }

  /// buf.logits must already hold the softmax probabilities.
  void backward(const std::vector<float>& w, const Image& img, int label, double scale,
                Buffers& buf, std::vector<float>& grad) const {
    std::vector<double> dgap(kFilters2, 0.0);
    for (int k = 0; k < classes_; ++k) {
      const double dlogit = (buf.logits[k] - (k == label ? 1.0 : 0.0)) * scale;
      grad[off_fcb() + k] += static_cast<float>(dlogit);
      for (int f = 0; f < kFilters2; ++f) {
        grad[off_fcw() + k * kFilters2 + f] += static_cast<float>(dlogit * buf.gap[f]);
        dgap[f] += dlogit * w[off_fcw() + k * kFilters2 + f];
      }
    }
    const double inv_hw = 1.0 / (static_cast<double>(ph_) * pw_);
    std::fill(buf.d_act2.begin(), buf.d_act2.end(), 0.0f);
    for (int f = 0; f < kFilters2; ++f) {
      const float d = static_cast<float>(dgap[f] * inv_hw);
      for (int i = 0; i < ph_ * pw_; ++i) {
        const std::size_t ix = static_cast<std::size_t>(f) * ph_ * pw_ + i;
        if (buf.act2[ix] > 0.0f) buf.d_act2[ix] = d;  // relu gate
      }
    }
    // conv2 backward
    std::fill(buf.d_pooled.begin(), buf.d_pooled.end(), 0.0f);
    for (int f = 0; f < kFilters2; ++f) {
      const float* kw = &w[off_conv2w() + static_cast<std::size_t>(f) * kFilters1 * 9];
      float* kg = &grad[off_conv2w() + static_cast<std::size_t>(f) * kFilters1 * 9];
      for (int y = 0; y < ph_; ++y) {
        for (int x = 0; x < pw_; ++x) {
          const float dz = buf.d_act2[(static_cast<std::size_t>(f) * ph_ + y) * pw_ + x];
          if (dz == 0.0f) continue;
          grad[off_conv2b() + f] += dz;
          for (int c = 0; c < kFilters1; ++c) {
            for (int dy = -1; dy <= 1; ++dy) {
              const int yy = y + dy;
              if (yy < 0 || yy >= ph_) continue;
              for (int dx = -1; dx <= 1; ++dx) {
                const int xx = x + dx;
                if (xx < 0 || xx >= pw_) continue;
                const std::size_t pix = (static_cast<std::size_t>(c) * ph_ + yy) * pw_ + xx;
                kg[(c * 3 + (dy + 1)) * 3 + (dx + 1)] += dz * buf.pooled[pix];
                buf.d_pooled[pix] += dz * kw[(c * 3 + (dy + 1)) * 3 + (dx + 1)];
              }
            }
          }
        }
      }
    }
    // maxpool backward
    std::fill(buf.d_act1.begin(), buf.d_act1.end(), 0.0f);
    for (std::size_t pix = 0; pix < buf.pooled.size(); ++pix) {
      buf.d_act1[buf.pool_arg[pix]] += buf.d_pooled[pix];
    }
    // conv1 backward (relu gate then kernels)
    for (int f = 0; f < kFilters1; ++f) {
      float* kg = &grad[static_cast<std::size_t>(f) * c_ * 9];
      for (int y = 0; y < h_; ++y) {
        for (int x = 0; x < w_; ++x) {
          const std::size_t ix = (static_cast<std::size_t>(f) * h_ + y) * w_ + x;
          if (buf.act1[ix] <= 0.0f) continue;
          const float dz = buf.d_act1[ix];
          if (dz == 0.0f) continue;
          grad[off_conv1b() + f] += dz;
          for (int c = 0; c < c_; ++c) {
            for (int dy = -1; dy <= 1; ++dy) {
              const int yy = y + dy;
              if (yy < 0 || yy >= h_) continue;
              for (int dx = -1; dx <= 1; ++dx) {
                const int xx = x + dx;
                if (xx < 0 || xx >= w_) continue;
                kg[(c * 3 + (dy + 1)) * 3 + (dx + 1)] += dz * img.at(yy, xx, c);
              }
            }
          }
        }
      }
    }
  }

  int h_, w_, c_, classes_, ph_, pw_;
  int conv1_w_, conv2_w_, fc_w_;
};

RunRecord run_linear_probe(const TrainerSpec& spec, const LabeledDataset& train,
                           const LabeledDataset& val, const LabeledDataset& test,
                           const AugmentationPolicy& policy) {
  const Image& sample = train.images.front();
  LinearProbe model(sample.height * sample.width * sample.channels, train.num_classes());
  return drive_training(model, spec, train, val, test, policy);
}

RunRecord run_reference_cnn(const TrainerSpec& spec, const LabeledDataset& train,
                            const LabeledDataset& val, const LabeledDataset& test,
                            const AugmentationPolicy& policy) {
  const Image& sample = train.images.front();
  ReferenceCnn model(sample.height, sample.width, sample.channels, train.num_classes());
  return drive_training(model, spec, train, val, test, policy);
}

}  // namespace

void register_reference_trainers() {
  static const bool once = [] {
    register_trainer("linear_probe", run_linear_probe);
    register_trainer("reference_cnn", run_reference_cnn);
    return true;
  }();
  (void)once;
}

}  // namespace augscout
