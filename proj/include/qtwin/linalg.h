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

#ifndef QTWIN_LINALG_H
#define QTWIN_LINALG_H

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace qtwin {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// kron(high, low): `low` acts on the least-significant local qubit.
Matrix kron(const Matrix &high, const Matrix &low);

double max_abs(const Matrix &m);

/// Applies the 2^k x 2^k matrix `op` to the k listed qubits of a 2^n amplitude
/// vector in place. Bit j of the local index corresponds to qubits[j].
void apply_local(std::span<cplx> amplitudes, std::span<const int> qubits, const Matrix &op);

/// min over phi of max|a - e^{i phi} b|, with phi taken from the trace inner product.
double phase_insensitive_distance(const Matrix &a, const Matrix &b);

}  // namespace qtwin

#endif
