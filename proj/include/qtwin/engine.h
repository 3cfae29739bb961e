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

#ifndef QTWIN_ENGINE_H
#define QTWIN_ENGINE_H

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qtwin/chan.h"
#include "qtwin/rng.h"
#include "qtwin/twin.h"
#include "qtwin/xpile.h"

namespace qtwin {

/// Exact outcome probabilities; index bit v is virtual qubit v.
struct OutcomeDistribution {
    size_t num_qubits = 0;
    std::vector<double> probs;
};

/// Outcome string -> shots. Strings have one character per qubit, qubit 0 rightmost.
struct Counts {
    size_t num_qubits = 0;
    uint64_t shots = 0;
    std::map<std::string, uint64_t> counts;

    bool operator==(const Counts &) const = default;

    static Counts from_dense(size_t num_qubits, std::span<const uint64_t> dense);
    std::vector<uint64_t> dense() const;
};

std::string outcome_string(uint64_t index, size_t num_qubits);

/// Dense 2^n x 2^n density matrix.
class DensityMatrix {
   public:
    /// Starts in |0...0><0...0|.
    explicit DensityMatrix(size_t num_qubits);

    size_t num_qubits() const {
        return num_qubits_;
    }

    void apply_unitary(std::span<const int> qubits, const Matrix &u);
    void apply_channel(std::span<const int> qubits, const Channel &channel);
    /// `superop` acts on vec(rho) restricted to `qubits`; see superoperator().
    void apply_superoperator(std::span<const int> qubits, const Matrix &superop);

    cplx trace() const;
    Matrix matrix() const;
    std::vector<double> diagonal() const;

   private:
    void hermitize();

    size_t num_qubits_;
    std::vector<cplx> data_;  // data_[row * dim + col]
};

/// sum_k K (x) conj(K), indexed (row_local << k) | col_local.
Matrix superoperator(const Channel &channel);
Matrix superoperator(const Matrix &unitary);

using DensityObserver = std::function<void(size_t op_index, const DensityMatrix &state)>;

/// Exact noisy evolution followed by exact readout confusion. The observer, when
/// set, sees the state after every op. Throws TooLarge above 10 qubits,
/// InvariantViolation if the trace drifts by more than 1e-9.
OutcomeDistribution simulate_density(
    const TranspiledCircuit &tc, const NoiseModel &model, const DensityObserver &observer = {});

/// Multinomial sample of `shots` outcomes.
/// Inverse-CDF draws from a fixed distribution.
class OutcomeSampler {
   public:
    explicit OutcomeSampler(const OutcomeDistribution &dist);
    size_t draw(Rng &rng) const;

   private:
    std::vector<double> cdf_;
    double total_ = 0;
    size_t last_ = 0;
};

Counts sample_counts(const OutcomeDistribution &dist, uint64_t shots, uint64_t seed);

struct TrajectoryStats {
    // Largest |norm - 1| of any trajectory state after renormalisation.
    double max_norm_error = 0;
};

/// Monte Carlo wavefunction unravelling: each shot picks one Kraus operator per
/// noisy op with probability |K psi|^2, then samples the final state and applies
/// readout flips. Shot s uses its own stream derived from (seed, s).
/// Throws TooLarge above 20 qubits.
Counts simulate_trajectories(
    const TranspiledCircuit &tc, const NoiseModel &model, uint64_t shots, uint64_t seed,
    TrajectoryStats *stats = nullptr);

/// Kraus set with at most d^2 operators, from the eigendecomposition of the Choi matrix.
std::vector<Matrix> canonical_kraus(const Channel &channel);

/// Half the L1 distance between empirical frequencies and the exact distribution.
double total_variation(const Counts &counts, const OutcomeDistribution &dist);

}  // namespace qtwin

#endif
