#include "lqas/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lqas/error.hpp"

namespace lqas {

namespace {

constexpr Complex kI{0.0, 1.0};

struct Mat2 {
    Complex a, b, c, d;  // [[a, b], [c, d]]
};

Mat2 rotation_matrix(GateKind kind, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    switch (kind) {
    case GateKind::RX:
    case GateKind::CRX:
        return {c, Complex{0.0, -s}, Complex{0.0, -s}, c};
    case GateKind::RY:
    case GateKind::CRY:
        return {c, -s, s, c};
    case GateKind::RZ:
    case GateKind::CRZ:
        return {Complex{c, -s}, 0.0, 0.0, Complex{c, s}};
    case GateKind::CNOT:
        break;
    }
    return {0.0, 1.0, 1.0, 0.0};
}

// Visits every basis index i whose `bit` is clear, passing (i, i | bit).
template <class F>
void for_each_pair(std::size_t size, std::size_t bit, F&& f) {
    for (std::size_t base = 0; base < size; base += 2 * bit) {
        for (std::size_t off = 0; off < bit; ++off) {
            const std::size_t i0 = base + off;
            f(i0, i0 | bit);
        }
    }
}

// As for_each_pair, restricted to indices where `control_bit` is set.
template <class F>
void for_each_controlled_pair(std::size_t size, std::size_t control_bit, std::size_t target_bit,
                              F&& f) {
    for_each_pair(size, target_bit, [&](std::size_t i0, std::size_t i1) {
        if (i0 & control_bit) {
            f(i0, i1);
        }
    });
}

void apply_mat2(std::span<Complex> amps, std::size_t bit, const Mat2& m) {
    for_each_pair(amps.size(), bit, [&](std::size_t i0, std::size_t i1) {
        const Complex v0 = amps[i0];
        const Complex v1 = amps[i1];
        amps[i0] = m.a * v0 + m.b * v1;
        amps[i1] = m.c * v0 + m.d * v1;
    });
}

void apply_controlled_mat2(std::span<Complex> amps, std::size_t control_bit,
                           std::size_t target_bit, const Mat2& m) {
    for_each_controlled_pair(amps.size(), control_bit, target_bit,
                             [&](std::size_t i0, std::size_t i1) {
                                 const Complex v0 = amps[i0];
                                 const Complex v1 = amps[i1];
                                 amps[i0] = m.a * v0 + m.b * v1;
                                 amps[i1] = m.c * v0 + m.d * v1;
                             });
}

// Pauli P in {X, Y, Z} on a pair of amplitudes, in place.
void apply_pauli_pair(GateKind kind, Complex& v0, Complex& v1) {
    switch (kind) {
    case GateKind::RX:
    case GateKind::CRX:
        std::swap(v0, v1);
        break;
    case GateKind::RY:
    case GateKind::CRY: {
        const Complex t0 = v0;
        v0 = -kI * v1;
        v1 = kI * t0;
        break;
    }
    case GateKind::RZ:
    case GateKind::CRZ:
        v1 = -v1;
        break;
    case GateKind::CNOT:
        break;
    }
}

}  // namespace

StateVector::StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits == 0 || n_qubits > 30) {
        throw DimensionError("state vector needs between 1 and 30 qubits, got " +
                             std::to_string(n_qubits));
    }
    amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps_[0] = 1.0;
}

void StateVector::reset() {
    std::fill(amps_.begin(), amps_.end(), Complex{0.0, 0.0});
    amps_[0] = 1.0;
}

double StateVector::norm() const noexcept {
    double sum = 0.0;
    for (const Complex& a : amps_) {
        sum += std::norm(a);
    }
    return std::sqrt(sum);
}

double StateVector::expectation_z(std::size_t qubit) const {
    if (qubit >= n_qubits_) {
        throw DimensionError("qubit " + std::to_string(qubit) + " out of range");
    }
    const std::size_t bit = std::size_t{1} << (n_qubits_ - 1 - qubit);
    double value = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        const double p = std::norm(amps_[i]);
        value += (i & bit) ? -p : p;
    }
    return value;
}

void StateVector::check_wires(const Gate& gate) const {
    auto wires = gate.active_wires();
    for (std::size_t w : wires) {
        if (w >= n_qubits_) {
            std::ostringstream msg;
            msg << to_string(gate.kind) << " wire " << w << " out of range for " << n_qubits_
                << " qubits";
            throw DimensionError(msg.str());
        }
    }
    if (wires.size() == 2 && wires[0] == wires[1]) {
        throw DimensionError(std::string(to_string(gate.kind)) + " control equals target");
    }
}

void StateVector::apply(const Gate& gate, std::optional<double> angle) {
    check_wires(gate);
    const bool needs_angle = param_count(gate.kind) == 1;
    if (needs_angle != angle.has_value()) {
        throw DimensionError(std::string(to_string(gate.kind)) +
                             (needs_angle ? " requires an angle" : " takes no angle"));
    }
    if (angle && !std::isfinite(*angle)) {
        throw NumericError(std::string(to_string(gate.kind)) + " angle is not finite");
    }

    const std::size_t t_bit = std::size_t{1} << (n_qubits_ - 1 - gate.wires[gate.n_wires() - 1]);
    if (gate.kind == GateKind::CNOT) {
        const std::size_t c_bit = std::size_t{1} << (n_qubits_ - 1 - gate.wires[0]);
        for_each_controlled_pair(amps_.size(), c_bit, t_bit,
                                 [this](std::size_t i0, std::size_t i1) {
                                     std::swap(amps_[i0], amps_[i1]);
                                 });
        return;
    }

    const Mat2 m = rotation_matrix(gate.kind, *angle);
    if (is_rotation(gate.kind)) {
        apply_mat2(amps_, t_bit, m);
    } else {
        const std::size_t c_bit = std::size_t{1} << (n_qubits_ - 1 - gate.wires[0]);
        apply_controlled_mat2(amps_, c_bit, t_bit, m);
    }
}

void StateVector::apply_inverse(const Gate& gate, std::optional<double> angle) {
    if (angle) {
        apply(gate, -*angle);
    } else {
        apply(gate, std::nullopt);
    }
}

void StateVector::apply_generator(const Gate& gate) {
    check_wires(gate);
    if (param_count(gate.kind) == 0) {
        throw DimensionError("CNOT has no generator");
    }
    const std::size_t t_bit = std::size_t{1} << (n_qubits_ - 1 - gate.wires[gate.n_wires() - 1]);
    if (is_rotation(gate.kind)) {
        for_each_pair(amps_.size(), t_bit, [&](std::size_t i0, std::size_t i1) {
            apply_pauli_pair(gate.kind, amps_[i0], amps_[i1]);
        });
        return;
    }
    const std::size_t c_bit = std::size_t{1} << (n_qubits_ - 1 - gate.wires[0]);
    for_each_pair(amps_.size(), t_bit, [&](std::size_t i0, std::size_t i1) {
        if (i0 & c_bit) {
            apply_pauli_pair(gate.kind, amps_[i0], amps_[i1]);
        } else {
            amps_[i0] = 0.0;
            amps_[i1] = 0.0;
        }
    });
}

Complex inner_product(const StateVector& bra, const StateVector& ket) {
    if (bra.size() != ket.size()) {
        throw DimensionError("inner product of states with different widths");
    }
    Complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < bra.size(); ++i) {
        sum += std::conj(bra.amps_[i]) * ket.amps_[i];
    }
    return sum;
}

StateVector apply_gate(StateVector state, const Gate& gate, std::optional<double> angle) {
    state.apply(gate, angle);
    return state;
}

std::optional<double> bound_angle(const Gate& gate, std::span<const double> params,
                                  std::span<const double> features) {
    switch (gate.binding.type) {
    case Binding::Type::None:
        return std::nullopt;
    case Binding::Type::Feature:
        if (gate.binding.index >= features.size()) {
            throw DimensionError("feature slot " + std::to_string(gate.binding.index) +
                                 " out of range");
        }
        return features[gate.binding.index];
    case Binding::Type::Param:
        if (gate.binding.index >= params.size()) {
            throw DimensionError("parameter slot " + std::to_string(gate.binding.index) +
                                 " out of range");
        }
        return params[gate.binding.index];
    }
    return std::nullopt;
}

namespace {

void check_lengths(const Ansatz& ansatz, std::span<const double> params,
                   std::span<const double> x) {
    if (params.size() != ansatz.n_params()) {
        throw DimensionError("expected " + std::to_string(ansatz.n_params()) +
                             " parameters, got " + std::to_string(params.size()));
    }
    if (x.size() != ansatz.n_features) {
        throw DimensionError("expected " + std::to_string(ansatz.n_features) +
                             " features, got " + std::to_string(x.size()));
    }
}

// <lambda| G |psi> without materializing G|psi>.
Complex generator_overlap(std::span<const Complex> lambda, std::span<const Complex> psi,
                          const Gate& gate, std::size_t n_qubits) {
    const std::size_t t_bit = std::size_t{1} << (n_qubits - 1 - gate.wires[gate.n_wires() - 1]);
    const std::size_t c_bit =
        is_rotation(gate.kind) ? 0 : std::size_t{1} << (n_qubits - 1 - gate.wires[0]);
    Complex sum{0.0, 0.0};
    for_each_pair(psi.size(), t_bit, [&](std::size_t i0, std::size_t i1) {
        if ((i0 & c_bit) != c_bit) {
            return;
        }
        Complex v0 = psi[i0];
        Complex v1 = psi[i1];
        apply_pauli_pair(gate.kind, v0, v1);
        sum += std::conj(lambda[i0]) * v0 + std::conj(lambda[i1]) * v1;
    });
    return sum;
}

}  // namespace

Evaluator::Evaluator(std::size_t n_qubits) : psi_(n_qubits), lambda_(n_qubits) {}

void Evaluator::forward(const Ansatz& ansatz, std::span<const double> params,
                        std::span<const double> x) {
    check_lengths(ansatz, params, x);
    if (ansatz.n_qubits != psi_.n_qubits()) {
        psi_ = StateVector(ansatz.n_qubits);
        lambda_ = StateVector(ansatz.n_qubits);
    } else {
        psi_.reset();
    }
    for (const Gate& g : ansatz.gates) {
        psi_.apply(g, bound_angle(g, params, x));
    }
}

double Evaluator::predict(const Ansatz& ansatz, std::span<const double> params,
                          std::span<const double> x) {
    forward(ansatz, params, x);
    return psi_.expectation_z(0);
}

double Evaluator::loss_gradient(const Ansatz& ansatz, std::span<const double> params,
                                std::span<const double> x, double target,
                                std::vector<double>& grad) {
    forward(ansatz, params, x);
    const double prediction = psi_.expectation_z(0);
    const double dloss = 2.0 * (prediction - target);

    grad.assign(params.size(), 0.0);
    if (params.empty()) {
        return prediction;
    }

    // lambda = Z_0 |psi>; qubit 0 is the top bit, so negate the upper half.
    auto lam = lambda_.amplitudes();
    auto psi = psi_.amplitudes();
    const std::size_t half = lam.size() / 2;
    for (std::size_t i = 0; i < lam.size(); ++i) {
        lam[i] = i < half ? psi[i] : -psi[i];
    }

    for (auto it = ansatz.gates.rbegin(); it != ansatz.gates.rend(); ++it) {
        const Gate& g = *it;
        const auto angle = bound_angle(g, params, x);
        if (g.is_parametrized()) {
            grad[g.binding.index] = dloss * generator_overlap(lam, psi, g, psi_.n_qubits()).imag();
        }
        psi_.apply_inverse(g, angle);
        lambda_.apply_inverse(g, angle);
    }
    return prediction;
}

double predict(const Ansatz& ansatz, std::span<const double> params, std::span<const double> x) {
    Evaluator eval(ansatz.n_qubits);
    return eval.predict(ansatz, params, x);
}

std::vector<double> predict_batch(const Ansatz& ansatz, std::span<const double> params,
                                  const Matrix& X) {
    std::vector<double> out;
    out.reserve(X.rows());
    if (X.rows() == 0) {
        return out;
    }
    Evaluator eval(ansatz.n_qubits);
    for (std::size_t r = 0; r < X.rows(); ++r) {
        out.push_back(eval.predict(ansatz, params, X.row(r)));
    }
    return out;
}

LossGradient gradient(const Ansatz& ansatz, std::span<const double> params,
                      std::span<const double> x, double target) {
    Evaluator eval(ansatz.n_qubits);
    LossGradient out;
    out.prediction = eval.loss_gradient(ansatz, params, x, target, out.grad);
    out.loss = (out.prediction - target) * (out.prediction - target);
    return out;
}

}  // namespace lqas
