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

#ifndef QTWIN_CHAN_H
#define QTWIN_CHAN_H

#include <array>
#include <vector>

#include "qtwin/linalg.h"

namespace qtwin {

/// A CPTP map on one or two qubits in Kraus form, rho -> sum_k K rho K^dagger.
/// Local qubit 0 is the least-significant bit of the Kraus matrix index.
class Channel {
   public:
    /// Throws DimensionMismatch if a Kraus matrix is not 2^n x 2^n.
    Channel(int num_qubits, std::vector<Matrix> kraus);

    static Channel identity(int num_qubits);

    int num_qubits() const {
        return num_qubits_;
    }
    int dim() const {
        return 1 << num_qubits_;
    }
    const std::vector<Matrix> &kraus() const {
        return kraus_;
    }

    Matrix apply(const Matrix &rho) const;

    /// max |sum_k K^dagger K - I|.
    double completeness_error() const;

    /// (1/d^2) sum_k |Tr K|^2.
    double process_fidelity() const;

   private:
    int num_qubits_;
    std::vector<Matrix> kraus_;
};

/// Row-stochastic readout confusion, a[i][j] = P(measured j | prepared i).
struct AssignmentMatrix {
    std::array<std::array<double, 2>, 2> a{{{1, 0}, {0, 1}}};

    bool operator==(const AssignmentMatrix &) const = default;
};

/// rho -> (1-p) rho + p I/d as a Pauli mixture. Throws BadProbability.
Channel depolarizing_channel(double p, int num_qubits);

/// Amplitude damping followed by pure dephasing, zero excited-state population.
/// Populations relax as exp(-t/t1), coherences as exp(-t/t2).
/// Throws NotCPTP when t2 > 2 t1, BadProbability on non-positive t1, t2 or negative t.
Channel thermal_relaxation_channel(double t1, double t2, double t);

/// `first` then `second`: Kraus set {K2_j K1_i}. Throws DimensionMismatch.
Channel compose(const Channel &first, const Channel &second);

/// Kraus set {A_i (x) B_j} with `a` on local qubit 0 and `b` above it.
Channel tensor(const Channel &a, const Channel &b);

AssignmentMatrix readout_matrix(double p_meas1_prep0, double p_meas0_prep1);

}  // namespace qtwin

#endif
