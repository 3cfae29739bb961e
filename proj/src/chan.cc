// Copyright 2026 The qtwin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qtwin/chan.h"

#include <cmath>
#include <string>

#include "qtwin/error.h"

namespace qtwin {

namespace {

constexpr double kPruneNorm = 1e-14;

std::vector<Matrix> pruned(std::vector<Matrix> kraus) {
    std::vector<Matrix> out;
    for (auto &k : kraus) {
        if (k.norm() >= kPruneNorm) {
            out.push_back(std::move(k));
        }
    }
    return out;
}

Matrix pauli(int which) {
    Matrix m(2, 2);
    switch (which) {
        case 0:
            m << 1, 0, 0, 1;
            break;
        case 1:
            m << 0, 1, 1, 0;
            break;
        case 2:
            m << 0, cplx(0, -1), cplx(0, 1), 0;
            break;
        default:
            m << 1, 0, 0, -1;
    }
    return m;
}

void check_probability(double p, const char *what) {
    if (!(p >= 0 && p <= 1)) {
        throw Error(ErrorCode::BadProbability, std::string(what) + " = " + std::to_string(p) + " outside [0,1]");
    }
}

}  // namespace

Channel::Channel(int num_qubits, std::vector<Matrix> kraus) : num_qubits_(num_qubits), kraus_(std::move(kraus)) {
    if (num_qubits < 1 || num_qubits > 2) {
        throw Error(ErrorCode::DimensionMismatch, "channels act on one or two qubits");
    }
    for (const auto &k : kraus_) {
        if (k.rows() != dim() || k.cols() != dim()) {
            throw Error(ErrorCode::DimensionMismatch, "Kraus operator is not " + std::to_string(dim()) + "x" + std::to_string(dim()));
        }
    }
}

Channel Channel::identity(int num_qubits) {
    int d = 1 << num_qubits;
    return Channel(num_qubits, {Matrix::Identity(d, d)});
}

Matrix Channel::apply(const Matrix &rho) const {
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto &k : kraus_) {
        out += k * rho * k.adjoint();
    }
    return out;
}

double Channel::completeness_error() const {
    Matrix sum = Matrix::Zero(dim(), dim());
    for (const auto &k : kraus_) {
        sum += k.adjoint() * k;
    }
    return max_abs(sum - Matrix::Identity(dim(), dim()));
}

double Channel::process_fidelity() const {
    double total = 0;
    for (const auto &k : kraus_) {
        total += std::norm(k.trace());
    }
    return total / (dim() * dim());
}

Channel depolarizing_channel(double p, int num_qubits) {
    check_probability(p, "depolarizing probability");
    if (num_qubits < 1 || num_qubits > 2) {
        throw Error(ErrorCode::DimensionMismatch, "depolarizing channel supports one or two qubits");
    }
    const int d = 1 << num_qubits;
    const int terms = d * d;
    const double identity_weight = 1 - p * (terms - 1) / terms;
    const double pauli_weight = p / terms;
    std::vector<Matrix> kraus;
    for (int idx = 0; idx < terms; idx++) {
        Matrix op = num_qubits == 1 ? pauli(idx) : kron(pauli(idx / 4), pauli(idx % 4));
        kraus.push_back(std::sqrt(idx == 0 ? identity_weight : pauli_weight) * op);
    }
    return Channel(num_qubits, pruned(std::move(kraus)));
}

Channel thermal_relaxation_channel(double t1, double t2, double t) {
    if (!(t1 > 0) || !(t2 > 0) || !(t >= 0)) {
        throw Error(ErrorCode::BadProbability, "thermal relaxation needs t1 > 0, t2 > 0, t >= 0");
    }
    if (t2 > 2 * t1) {
        throw Error(ErrorCode::NotCPTP, "t2 = " + std::to_string(t2) + " exceeds 2*t1 = " + std::to_string(2 * t1));
    }
    const double gamma = -std::expm1(-t / t1);
    // Dephasing rate left after amplitude damping has removed exp(-t/(2 t1)).
    const double p_phase = -0.5 * std::expm1(-t * (1 / t2 - 1 / (2 * t1)));

    Matrix a0(2, 2);
    a0 << 1, 0, 0, std::sqrt(1 - gamma);
    Matrix a1(2, 2);
    a1 << 0, std::sqrt(gamma), 0, 0;
    Channel damping(1, pruned({a0, a1}));
    Channel dephasing(1, pruned({std::sqrt(1 - p_phase) * pauli(0), std::sqrt(p_phase) * pauli(3)}));
    return compose(damping, dephasing);
}

Channel compose(const Channel &first, const Channel &second) {
    if (first.num_qubits() != second.num_qubits()) {
        throw Error(ErrorCode::DimensionMismatch, "cannot compose channels on different qubit counts");
    }
    std::vector<Matrix> kraus;
    for (const auto &k2 : second.kraus()) {
        for (const auto &k1 : first.kraus()) {
            kraus.push_back(k2 * k1);
        }
    }
    return Channel(first.num_qubits(), pruned(std::move(kraus)));
}

Channel tensor(const Channel &a, const Channel &b) {
    std::vector<Matrix> kraus;
    for (const auto &ka : a.kraus()) {
        for (const auto &kb : b.kraus()) {
            kraus.push_back(kron(kb, ka));
        }
    }
    return Channel(a.num_qubits() + b.num_qubits(), pruned(std::move(kraus)));
}

AssignmentMatrix readout_matrix(double p_meas1_prep0, double p_meas0_prep1) {
    check_probability(p_meas1_prep0, "prob meas1 prep0");
    check_probability(p_meas0_prep1, "prob meas0 prep1");
    AssignmentMatrix m;
    m.a = {{{1 - p_meas1_prep0, p_meas1_prep0}, {p_meas0_prep1, 1 - p_meas0_prep1}}};
    return m;
}

}  // namespace qtwin
