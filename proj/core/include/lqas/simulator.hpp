#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lqas/circuit.hpp"
#include "lqas/matrix.hpp"

namespace lqas {

using Complex = std::complex<double>;

/// Dense n-qubit pure state. Qubit 0 is the most significant bit of the
/// basis index, so |q0 q1 ... q_{n-1}> sits at index sum q_i * 2^(n-1-i).
class StateVector {
  public:
    /// |0...0> on n_qubits wires.
    explicit StateVector(std::size_t n_qubits);

    std::size_t n_qubits() const noexcept { return n_qubits_; }
    std::size_t size() const noexcept { return amps_.size(); }

    std::span<const Complex> amplitudes() const noexcept { return amps_; }
    std::span<Complex> amplitudes() noexcept { return amps_; }
    Complex operator[](std::size_t i) const noexcept { return amps_[i]; }

    void reset();
    double norm() const noexcept;

    /// <Z> on the given qubit.
    double expectation_z(std::size_t qubit) const;

    /// Applies the gate's unitary. Rotations are exp(-i angle P / 2); CRP
    /// applies that rotation to wires[1] when wires[0] is |1>. `angle` must
    /// be set exactly when the kind has a parameter.
    void apply(const Gate& gate, std::optional<double> angle);

    /// Applies U(angle)^dagger, i.e. the gate with negated angle.
    void apply_inverse(const Gate& gate, std::optional<double> angle);

    /// Replaces the state by G|psi>, where G is the gate's (Hermitian)
    /// generator: P on the target for rotations, |1><1| (x) P for controlled
    /// rotations. The result is generally not normalized.
    void apply_generator(const Gate& gate);

    friend Complex inner_product(const StateVector& bra, const StateVector& ket);

  private:
    void check_wires(const Gate& gate) const;

    std::size_t n_qubits_;
    std::vector<Complex> amps_;
};

/// Value-returning convenience over StateVector::apply.
StateVector apply_gate(StateVector state, const Gate& gate, std::optional<double> angle);

/// Angle a gate reads for the given parameters and feature row, or nullopt
/// for parameter-free gates.
std::optional<double> bound_angle(const Gate& gate, std::span<const double> params,
                                  std::span<const double> features);

/// <Z_0> of the circuit applied to |0...0>, with FeatureSlot(j) -> x[j] and
/// ParamSlot(p) -> params[p]. Throws DimensionError on length mismatch.
double predict(const Ansatz& ansatz, std::span<const double> params, std::span<const double> x);

std::vector<double> predict_batch(const Ansatz& ansatz, std::span<const double> params,
                                  const Matrix& X);

struct LossGradient {
    double prediction = 0.0;
    double loss = 0.0;
    std::vector<double> grad;
};

/// Squared error (predict - target)^2 and its gradient with respect to the
/// trainable parameters, by a single adjoint (reverse) sweep.
LossGradient gradient(const Ansatz& ansatz, std::span<const double> params,
                      std::span<const double> x, double target);

/// Reusable scratch buffers for repeated evaluations of one ansatz width.
/// Not thread-safe; give each worker its own.
class Evaluator {
  public:
    explicit Evaluator(std::size_t n_qubits);

    double predict(const Ansatz& ansatz, std::span<const double> params,
                   std::span<const double> x);

    /// Writes d(loss)/d(params) into grad (resized to n_params) and returns
    /// the prediction. loss = (prediction - target)^2.
    double loss_gradient(const Ansatz& ansatz, std::span<const double> params,
                         std::span<const double> x, double target, std::vector<double>& grad);

    /// Norm of the most recent forward state.
    double last_norm() const noexcept { return psi_.norm(); }

  private:
    void forward(const Ansatz& ansatz, std::span<const double> params, std::span<const double> x);

    StateVector psi_;
    StateVector lambda_;
};

}  // namespace lqas
