#include "lqas/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "lqas/error.hpp"
#include "lqas/simulator.hpp"

namespace lqas {

void TrainConfig::check() const {
    if (epochs < 1) {
        throw ConfigError("epochs must be >= 1");
    }
    if (batch_size < 1) {
        throw ConfigError("batch_size must be >= 1");
    }
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("learning_rate must be positive");
    }
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
        throw ConfigError("Adam betas must lie in [0, 1)");
    }
    if (!(adam_eps > 0.0)) {
        throw ConfigError("adam_eps must be positive");
    }
}

Adam::Adam(std::size_t n_params, double learning_rate, double beta1, double beta2, double eps)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps), m_(n_params, 0.0),
      v_(n_params, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grad) {
    if (params.size() != m_.size() || grad.size() != m_.size()) {
        throw DimensionError("Adam step size mismatch");
    }
    ++t_;
    beta1_pow_ *= beta1_;
    beta2_pow_ *= beta2_;
    const double c1 = 1.0 - beta1_pow_;
    const double c2 = 1.0 - beta2_pow_;
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
        const double m_hat = m_[i] / c1;
        const double v_hat = v_[i] / c2;
        params[i] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
    }
}

namespace {

void check_pair(std::span<const double> y_true, std::span<const double> y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw DimensionError("metric inputs differ in length (" + std::to_string(y_true.size()) +
                             " vs " + std::to_string(y_pred.size()) + ")");
    }
    if (y_true.empty()) {
        throw DimensionError("metric inputs are empty");
    }
}

}  // namespace

double mse(std::span<const double> y_true, std::span<const double> y_pred) {
    check_pair(y_true, y_pred);
    double sum = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double r = y_true[i] - y_pred[i];
        sum += r * r;
    }
    return sum / static_cast<double>(y_true.size());
}

double r2(std::span<const double> y_true, std::span<const double> y_pred) {
    check_pair(y_true, y_pred);
    if (y_true.size() < 2) {
        throw UndefinedMetricError("R^2 needs at least two samples");
    }
    const double mean =
        std::accumulate(y_true.begin(), y_true.end(), 0.0) / static_cast<double>(y_true.size());
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        ss_res += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
        ss_tot += (y_true[i] - mean) * (y_true[i] - mean);
    }
    if (ss_tot == 0.0) {
        throw UndefinedMetricError("R^2 is undefined for a constant target");
    }
    return 1.0 - ss_res / ss_tot;
}

Metrics evaluate(const Ansatz& ansatz, std::span<const double> params, const Samples& data) {
    const std::vector<double> pred = predict_batch(ansatz, params, data.X);
    return Metrics{mse(data.y, pred), r2(data.y, pred)};
}

TrainResult train(const Ansatz& ansatz, const Samples& train_set, const Samples& val_set,
                  const TrainConfig& cfg) {
    cfg.check();
    if (train_set.size() == 0) {
        throw ConfigError("training set is empty");
    }
    if (val_set.size() == 0) {
        throw ConfigError("validation set is empty");
    }
    if (train_set.X.rows() != train_set.size() || val_set.X.rows() != val_set.size()) {
        throw DimensionError("feature rows and targets differ in count");
    }

    const std::size_t n_params = ansatz.n_params();
    const std::size_t n = train_set.size();
    const auto batch = static_cast<std::size_t>(cfg.batch_size);

    TrainResult result;
    result.params.assign(n_params, 0.0);
    result.history.reserve(static_cast<std::size_t>(cfg.epochs));

    Adam adam(n_params, cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);
    Evaluator eval(ansatz.n_qubits);
    std::vector<std::size_t> order(n);
    std::vector<double> sample_grad;
    std::vector<double> batch_grad(n_params);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::mt19937_64 rng(cfg.shuffle_seed + static_cast<std::uint64_t>(epoch));
        std::shuffle(order.begin(), order.end(), rng);

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t stop = std::min(n, start + batch);
            std::fill(batch_grad.begin(), batch_grad.end(), 0.0);
            for (std::size_t i = start; i < stop; ++i) {
                const std::size_t row = order[i];
                const double target = train_set.y[row];
                const double pred =
                    eval.loss_gradient(ansatz, result.params, train_set.X.row(row), target,
                                       sample_grad);
                epoch_loss += (pred - target) * (pred - target);
                for (std::size_t p = 0; p < n_params; ++p) {
                    batch_grad[p] += sample_grad[p];
                }
            }
            if (n_params > 0) {
                const double scale = 1.0 / static_cast<double>(stop - start);
                for (double& g : batch_grad) {
                    g *= scale;
                }
                adam.step(result.params, batch_grad);
            }
        }
        result.history.push_back(epoch_loss / static_cast<double>(n));
    }

    result.train = evaluate(ansatz, result.params, train_set);
    result.validation = evaluate(ansatz, result.params, val_set);
    return result;
}

}  // namespace lqas
