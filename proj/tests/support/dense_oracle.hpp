#pragma once

// Reference simulator for tests: builds the full 2^n x 2^n unitary of every
// gate from Kronecker products of 2x2 blocks and multiplies it into the state.
// It shares no code with the production kernels.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "lqas/circuit.hpp"

namespace lqas::testutil {

using cd = std::complex<double>;

struct DenseMatrix {
    std::size_t dim = 0;
    std::vector<cd> a;  // row-major

    explicit DenseMatrix(std::size_t d = 0) : dim(d), a(d * d) {}
    cd& operator()(std::size_t r, std::size_t c) { return a[r * dim + c]; }
    cd operator()(std::size_t r, std::size_t c) const { return a[r * dim + c]; }

    static DenseMatrix identity(std::size_t d) {
        DenseMatrix m(d);
        for (std::size_t i = 0; i < d; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }
};

inline DenseMatrix multiply(const DenseMatrix& x, const DenseMatrix& y) {
    DenseMatrix out(x.dim);
    for (std::size_t i = 0; i < x.dim; ++i) {
        for (std::size_t k = 0; k < x.dim; ++k) {
            const cd xik = x(i, k);
            for (std::size_t j = 0; j < x.dim; ++j) {
                out(i, j) += xik * y(k, j);
            }
        }
    }
    return out;
}

inline DenseMatrix adjoint(const DenseMatrix& x) {
    DenseMatrix out(x.dim);
    for (std::size_t i = 0; i < x.dim; ++i) {
        for (std::size_t j = 0; j < x.dim; ++j) {
            out(i, j) = std::conj(x(j, i));
        }
    }
    return out;
}

inline DenseMatrix kron(const DenseMatrix& x, const DenseMatrix& y) {
    DenseMatrix out(x.dim * y.dim);
    for (std::size_t i = 0; i < x.dim; ++i) {
        for (std::size_t j = 0; j < x.dim; ++j) {
            for (std::size_t k = 0; k < y.dim; ++k) {
                for (std::size_t l = 0; l < y.dim; ++l) {
                    out(i * y.dim + k, j * y.dim + l) = x(i, j) * y(k, l);
                }
            }
        }
    }
    return out;
}

inline DenseMatrix add(const DenseMatrix& x, const DenseMatrix& y) {
    DenseMatrix out = x;
    for (std::size_t i = 0; i < out.a.size(); ++i) {
        out.a[i] += y.a[i];
    }
    return out;
}

inline DenseMatrix pauli(char p) {
    DenseMatrix m(2);
    switch (p) {
    case 'X': m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case 'Y': m(0, 1) = cd(0, -1); m(1, 0) = cd(0, 1); break;
    case 'Z': m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    default: m = DenseMatrix::identity(2); break;
    }
    return m;
}

// exp(-i phi P / 2) = cos(phi/2) I - i sin(phi/2) P, valid since P^2 = I.
inline DenseMatrix pauli_rotation(char p, double phi) {
    DenseMatrix out = DenseMatrix::identity(2);
    const DenseMatrix P = pauli(p);
    for (std::size_t i = 0; i < 4; ++i) {
        out.a[i] = std::cos(phi / 2.0) * out.a[i] - cd(0, 1) * std::sin(phi / 2.0) * P.a[i];
    }
    return out;
}

inline char axis_of(GateKind kind) {
    switch (kind) {
    case GateKind::RX: case GateKind::CRX: case GateKind::CNOT: return 'X';
    case GateKind::RY: case GateKind::CRY: return 'Y';
    case GateKind::RZ: case GateKind::CRZ: return 'Z';
    }
    return 'I';
}

// Operator acting as `op` on qubit q (qubit 0 leftmost in the tensor product)
// and identity elsewhere.
inline DenseMatrix embed(const DenseMatrix& op, std::size_t q, std::size_t n) {
    DenseMatrix out = DenseMatrix::identity(1);
    for (std::size_t w = 0; w < n; ++w) {
        out = kron(out, w == q ? op : DenseMatrix::identity(2));
    }
    return out;
}

inline DenseMatrix embed_controlled(const DenseMatrix& op, std::size_t c, std::size_t t,
                                    std::size_t n) {
    DenseMatrix p0(2), p1(2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    DenseMatrix off = DenseMatrix::identity(1);
    DenseMatrix on = DenseMatrix::identity(1);
    for (std::size_t w = 0; w < n; ++w) {
        off = kron(off, w == c ? p0 : DenseMatrix::identity(2));
        on = kron(on, w == c ? p1 : (w == t ? op : DenseMatrix::identity(2)));
    }
    return add(off, on);
}

inline DenseMatrix gate_unitary(const Gate& g, double angle, std::size_t n) {
    if (g.kind == GateKind::CNOT) {
        return embed_controlled(pauli('X'), g.wires[0], g.wires[1], n);
    }
    const DenseMatrix r = pauli_rotation(axis_of(g.kind), angle);
    if (arity(g.kind) == 1) {
        return embed(r, g.wires[0], n);
    }
    return embed_controlled(r, g.wires[0], g.wires[1], n);
}

inline double oracle_angle(const Gate& g, std::span<const double> params,
                           std::span<const double> x) {
    switch (g.binding.type) {
    case Binding::Type::Feature: return x[g.binding.index];
    case Binding::Type::Param: return params[g.binding.index];
    case Binding::Type::None: return 0.0;
    }
    return 0.0;
}

/// Product of every gate's full unitary, last gate leftmost.
inline DenseMatrix circuit_unitary(const Ansatz& a, std::span<const double> params,
                                   std::span<const double> x) {
    const std::size_t dim = std::size_t{1} << a.n_qubits;
    DenseMatrix u = DenseMatrix::identity(dim);
    for (const Gate& g : a.gates) {
        u = multiply(gate_unitary(g, oracle_angle(g, params, x), a.n_qubits), u);
    }
    return u;
}

/// <0| U^dagger Z_0 U |0>.
inline double oracle_predict(const Ansatz& a, std::span<const double> params,
                             std::span<const double> x) {
    const DenseMatrix u = circuit_unitary(a, params, x);
    const DenseMatrix z0 = embed(pauli('Z'), 0, a.n_qubits);
    // First column of U is U|0>.
    cd value = 0.0;
    for (std::size_t i = 0; i < u.dim; ++i) {
        for (std::size_t j = 0; j < u.dim; ++j) {
            value += std::conj(u(i, 0)) * z0(i, j) * u(j, 0);
        }
    }
    return value.real();
}

inline double max_abs_deviation_from_identity(const DenseMatrix& m) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m.dim; ++i) {
        for (std::size_t j = 0; j < m.dim; ++j) {
            const cd expected = i == j ? cd(1.0) : cd(0.0);
            worst = std::max(worst, std::abs(m(i, j) - expected));
        }
    }
    return worst;
}

}  // namespace lqas::testutil
