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

#include "qtwin/linalg.h"

#include <algorithm>
#include <cmath>
#include <vector>

namespace qtwin {

Matrix kron(const Matrix &high, const Matrix &low) {
    Matrix out(high.rows() * low.rows(), high.cols() * low.cols());
    for (Eigen::Index i = 0; i < high.rows(); i++) {
        for (Eigen::Index j = 0; j < high.cols(); j++) {
            out.block(i * low.rows(), j * low.cols(), low.rows(), low.cols()) = high(i, j) * low;
        }
    }
    return out;
}

double max_abs(const Matrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void apply_local(std::span<cplx> amplitudes, std::span<const int> qubits, const Matrix &op) {
    const size_t k = qubits.size();
    const size_t local_dim = size_t{1} << k;
    std::vector<size_t> offsets(local_dim, 0);
    for (size_t j = 0; j < local_dim; j++) {
        for (size_t b = 0; b < k; b++) {
            if ((j >> b) & 1) {
                offsets[j] |= size_t{1} << qubits[b];
            }
        }
    }
    std::vector<int> sorted(qubits.begin(), qubits.end());
    std::sort(sorted.begin(), sorted.end());
    const size_t outer = amplitudes.size() >> k;
    std::vector<cplx> in(local_dim);
    for (size_t t = 0; t < outer; t++) {
        // Spread t over the bit positions not occupied by the target qubits.
        size_t base = t;
        for (int q : sorted) {
            size_t low = base & ((size_t{1} << q) - 1);
            base = ((base >> q) << (q + 1)) | low;
        }
        for (size_t j = 0; j < local_dim; j++) {
            in[j] = amplitudes[base | offsets[j]];
        }
        for (size_t r = 0; r < local_dim; r++) {
            cplx acc = 0;
            for (size_t c = 0; c < local_dim; c++) {
                acc += op(r, c) * in[c];
            }
            amplitudes[base | offsets[r]] = acc;
        }
    }
}

double phase_insensitive_distance(const Matrix &a, const Matrix &b) {
    cplx overlap = (b.adjoint() * a).trace();
    cplx phase = std::abs(overlap) > 1e-300 ? overlap / std::abs(overlap) : cplx(1, 0);
    return max_abs(a - phase * b);
}

}  // namespace qtwin
