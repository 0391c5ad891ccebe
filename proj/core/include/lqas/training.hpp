#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lqas/circuit.hpp"
#include "lqas/matrix.hpp"

namespace lqas {

/// Supervised regression samples: one feature row per target.
struct Samples {
    Matrix X;
    std::vector<double> y;

    std::size_t size() const noexcept { return y.size(); }
};

/// Per-candidate optimizer settings. Defaults reproduce the reference
/// protocol: 200 epochs, batches of 25, Adam with lr 1e-2, parameters at 0.
struct TrainConfig {
    int epochs = 200;
    int batch_size = 25;
    double learning_rate = 1e-2;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t shuffle_seed = 0;

    /// Throws ConfigError when a field is out of range.
    void check() const;
};

struct Metrics {
    double mse = 0.0;
    double r2 = 0.0;
};

struct TrainResult {
    std::vector<double> params;
    /// Mean per-sample squared error seen during each epoch's batches.
    std::vector<double> history;
    Metrics train;
    Metrics validation;
};

/// Adam with bias correction over a flat parameter vector.
class Adam {
  public:
    Adam(std::size_t n_params, double learning_rate, double beta1, double beta2, double eps);

    void step(std::span<double> params, std::span<const double> grad);
    long steps() const noexcept { return t_; }

  private:
    double lr_, beta1_, beta2_, eps_;
    std::vector<double> m_, v_;
    long t_ = 0;
    double beta1_pow_ = 1.0;
    double beta2_pow_ = 1.0;
};

double mse(std::span<const double> y_true, std::span<const double> y_pred);
double r2(std::span<const double> y_true, std::span<const double> y_pred);

/// Metrics of the ansatz at `params` on a sample set.
Metrics evaluate(const Ansatz& ansatz, std::span<const double> params, const Samples& data);

/// Trains from an all-zero parameter vector. Each epoch shuffles the
/// training rows with seed (shuffle_seed + epoch), walks them in batches of
/// batch_size (the last batch may be short) and takes one Adam step per batch
/// on the batch-mean gradient of the squared error.
TrainResult train(const Ansatz& ansatz, const Samples& train_set, const Samples& val_set,
                  const TrainConfig& cfg);

}  // namespace lqas
