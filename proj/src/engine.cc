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

#include "qtwin/engine.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>

#include "qtwin/error.h"
#include "qtwin/rng.h"

namespace qtwin {

namespace {

// Base indices (target bits zero) and per-local-index offsets for a k-qubit op.
struct LocalIndex {
    std::vector<size_t> bases;
    std::vector<size_t> offsets;

    LocalIndex(size_t total_bits, std::span<const int> qubits) {
        const size_t k = qubits.size();
        offsets.assign(size_t{1} << k, 0);
        for (size_t j = 0; j < offsets.size(); j++) {
            for (size_t b = 0; b < k; b++) {
                if ((j >> b) & 1) {
                    offsets[j] |= size_t{1} << qubits[b];
                }
            }
        }
        size_t mask = 0;
        for (int q : qubits) {
            mask |= size_t{1} << q;
        }
        for (size_t i = 0; i < (size_t{1} << total_bits); i++) {
            if ((i & mask) == 0) {
                bases.push_back(i);
            }
        }
    }
};

// Row-major operator of at most two qubits for the trajectory hot loop.
struct Block {
    int dim = 0;
    std::array<cplx, 16> m{};

    explicit Block(const Matrix &op) : dim(static_cast<int>(op.rows())) {
        for (int r = 0; r < dim; r++) {
            for (int c = 0; c < dim; c++) {
                m[r * dim + c] = op(r, c);
            }
        }
    }
};

template <int D>
void apply_fixed(std::span<cplx> amps, const LocalIndex &idx, const std::array<cplx, 16> &m) {
    cplx in[D];
    for (size_t base : idx.bases) {
        for (int j = 0; j < D; j++) {
            in[j] = amps[base | idx.offsets[j]];
        }
        for (int r = 0; r < D; r++) {
            cplx acc = 0;
            for (int c = 0; c < D; c++) {
                acc += m[r * D + c] * in[c];
            }
            amps[base | idx.offsets[r]] = acc;
        }
    }
}

void apply_block(std::span<cplx> amps, const LocalIndex &idx, const Block &b) {
    if (b.dim == 2) {
        apply_fixed<2>(amps, idx, b.m);
    } else {
        apply_fixed<4>(amps, idx, b.m);
    }
}

template <typename M>
void apply_with(std::span<cplx> amps, const LocalIndex &idx, const M &op) {
    const size_t d = idx.offsets.size();
    cplx in[16];
    for (size_t base : idx.bases) {
        for (size_t j = 0; j < d; j++) {
            in[j] = amps[base | idx.offsets[j]];
        }
        for (size_t r = 0; r < d; r++) {
            cplx acc = 0;
            for (size_t c = 0; c < d; c++) {
                acc += op(r, c) * in[c];
            }
            amps[base | idx.offsets[r]] = acc;
        }
    }
}

std::vector<int> compact_qubits(const GateOp &op) {
    return op.qubits;
}

// sigma[v] = compact qubit holding virtual v at measurement time.
std::vector<int> measurement_map(const TranspiledCircuit &tc) {
    std::map<int, int> compact_of;
    for (size_t v = 0; v < tc.layout.size(); v++) {
        compact_of[tc.layout[v]] = static_cast<int>(v);
    }
    std::vector<int> sigma;
    for (int p : tc.final_layout) {
        auto it = compact_of.find(p);
        if (it == compact_of.end()) {
            throw Error(ErrorCode::InconsistentInputs, "final layout leaves the initial layout");
        }
        sigma.push_back(it->second);
    }
    return sigma;
}

const AssignmentMatrix &readout_or_identity(const NoiseModel &model, int physical) {
    static const AssignmentMatrix kIdentity;
    const AssignmentMatrix *a = model.readout_for(physical);
    return a ? *a : kIdentity;
}

}  // namespace

std::string outcome_string(uint64_t index, size_t num_qubits) {
    std::string s(num_qubits, '0');
    for (size_t v = 0; v < num_qubits; v++) {
        if ((index >> v) & 1) {
            s[num_qubits - 1 - v] = '1';
        }
    }
    return s;
}

Counts Counts::from_dense(size_t num_qubits, std::span<const uint64_t> dense) {
    Counts c;
    c.num_qubits = num_qubits;
    for (size_t i = 0; i < dense.size(); i++) {
        if (dense[i]) {
            c.counts[outcome_string(i, num_qubits)] = dense[i];
            c.shots += dense[i];
        }
    }
    return c;
}

std::vector<uint64_t> Counts::dense() const {
    std::vector<uint64_t> out(size_t{1} << num_qubits, 0);
    for (const auto &[s, n] : counts) {
        uint64_t idx = 0;
        for (size_t v = 0; v < num_qubits; v++) {
            if (s[num_qubits - 1 - v] == '1') {
                idx |= uint64_t{1} << v;
            }
        }
        out[idx] += n;
    }
    return out;
}

Matrix superoperator(const Channel &channel) {
    const int d = channel.dim();
    Matrix s = Matrix::Zero(d * d, d * d);
    for (const auto &k : channel.kraus()) {
        s += kron(k, k.conjugate());
    }
    return s;
}

Matrix superoperator(const Matrix &unitary) {
    return kron(unitary, unitary.conjugate());
}

DensityMatrix::DensityMatrix(size_t num_qubits) : num_qubits_(num_qubits), data_(size_t{1} << (2 * num_qubits), 0) {
    data_[0] = 1;
}

void DensityMatrix::apply_superoperator(std::span<const int> qubits, const Matrix &superop) {
    std::vector<int> positions(qubits.begin(), qubits.end());
    for (int q : qubits) {
        positions.push_back(q + static_cast<int>(num_qubits_));
    }
    LocalIndex idx(2 * num_qubits_, positions);
    apply_with(data_, idx, superop);
    hermitize();
}

void DensityMatrix::apply_unitary(std::span<const int> qubits, const Matrix &u) {
    apply_superoperator(qubits, superoperator(u));
}

void DensityMatrix::apply_channel(std::span<const int> qubits, const Channel &channel) {
    apply_superoperator(qubits, superoperator(channel));
}

// rho = (rho + rho^dagger) / 2 keeps the stored matrix exactly Hermitian.
void DensityMatrix::hermitize() {
    const size_t dim = size_t{1} << num_qubits_;
    for (size_t r = 0; r < dim; r++) {
        data_[r * dim + r] = cplx(data_[r * dim + r].real(), 0);
        for (size_t c = r + 1; c < dim; c++) {
            cplx avg = 0.5 * (data_[r * dim + c] + std::conj(data_[c * dim + r]));
            data_[r * dim + c] = avg;
            data_[c * dim + r] = std::conj(avg);
        }
    }
}

cplx DensityMatrix::trace() const {
    const size_t dim = size_t{1} << num_qubits_;
    cplx t = 0;
    for (size_t r = 0; r < dim; r++) {
        t += data_[r * dim + r];
    }
    return t;
}

Matrix DensityMatrix::matrix() const {
    const Eigen::Index dim = Eigen::Index{1} << num_qubits_;
    Matrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; r++) {
        for (Eigen::Index c = 0; c < dim; c++) {
            m(r, c) = data_[r * dim + c];
        }
    }
    return m;
}

std::vector<double> DensityMatrix::diagonal() const {
    const size_t dim = size_t{1} << num_qubits_;
    std::vector<double> d(dim);
    for (size_t r = 0; r < dim; r++) {
        d[r] = data_[r * dim + r].real();
    }
    return d;
}

OutcomeDistribution simulate_density(const TranspiledCircuit &tc, const NoiseModel &model, const DensityObserver &observer) {
    const size_t n = tc.num_virtual();
    if (n > 10) {
        throw Error(ErrorCode::TooLarge, "density engine limited to 10 qubits, got " + std::to_string(n));
    }
    const Circuit compact = tc.compact();
    DensityMatrix rho(n);
    for (size_t i = 0; i < tc.circuit.ops.size(); i++) {
        const GateOp &physical = tc.circuit.ops[i];
        const std::vector<int> local = compact_qubits(compact.ops[i]);
        Matrix s = superoperator(gate_matrix(physical));
        if (const Channel *ch = model.gate_channel(physical.label, physical.qubits)) {
            s = superoperator(*ch) * s;
        }
        rho.apply_superoperator(local, s);
        double drift = std::abs(rho.trace() - cplx(1, 0));
        if (drift > 1e-9) {
            throw Error(
                ErrorCode::InvariantViolation,
                "trace drifted by " + std::to_string(drift) + " after op " + std::to_string(i) + " (" + physical.label + ")");
        }
        if (observer) {
            observer(i, rho);
        }
    }

    const std::vector<double> diag = rho.diagonal();
    const std::vector<int> sigma = measurement_map(tc);
    OutcomeDistribution dist{n, std::vector<double>(diag.size(), 0.0)};
    for (size_t i = 0; i < diag.size(); i++) {
        size_t x = 0;
        for (size_t v = 0; v < n; v++) {
            if ((i >> sigma[v]) & 1) {
                x |= size_t{1} << v;
            }
        }
        dist.probs[x] += std::max(diag[i], 0.0);
    }
    for (size_t v = 0; v < n; v++) {
        const auto &a = readout_or_identity(model, tc.final_layout[v]).a;
        const size_t bit = size_t{1} << v;
        for (size_t i = 0; i < dist.probs.size(); i++) {
            if (i & bit) {
                continue;
            }
            double p0 = dist.probs[i];
            double p1 = dist.probs[i | bit];
            dist.probs[i] = p0 * a[0][0] + p1 * a[1][0];
            dist.probs[i | bit] = p0 * a[0][1] + p1 * a[1][1];
        }
    }
    return dist;
}

OutcomeSampler::OutcomeSampler(const OutcomeDistribution &dist) : cdf_(dist.probs.size()) {
    double acc = 0;
    for (size_t i = 0; i < cdf_.size(); i++) {
        acc += dist.probs[i];
        cdf_[i] = acc;
    }
    total_ = acc;
    // The last outcome with non-zero weight absorbs rounding at the top end.
    for (size_t i = 0; i < dist.probs.size(); i++) {
        if (dist.probs[i] > 0) {
            last_ = i;
        }
    }
}

size_t OutcomeSampler::draw(Rng &rng) const {
    double u = uniform01(rng) * total_;
    size_t idx = std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin();
    return std::min(idx, last_);
}

Counts sample_counts(const OutcomeDistribution &dist, uint64_t shots, uint64_t seed) {
    OutcomeSampler sampler(dist);
    Rng rng(seed);
    std::vector<uint64_t> dense(dist.probs.size(), 0);
    for (uint64_t s = 0; s < shots; s++) {
        dense[sampler.draw(rng)]++;
    }
    return Counts::from_dense(dist.num_qubits, dense);
}

std::vector<Matrix> canonical_kraus(const Channel &channel) {
    const int d = channel.dim();
    if (static_cast<int>(channel.kraus().size()) <= d * d) {
        return channel.kraus();
    }
    Matrix choi = Matrix::Zero(d * d, d * d);
    for (const auto &k : channel.kraus()) {
        Eigen::Map<const Vector> v(k.data(), d * d);
        choi += v * v.adjoint();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(choi);
    std::vector<Matrix> out;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); i++) {
        double lambda = eig.eigenvalues()(i);
        if (lambda > 1e-15) {
            Vector v = std::sqrt(lambda) * eig.eigenvectors().col(i);
            out.push_back(Eigen::Map<const Matrix>(v.data(), d, d));
        }
    }
    return out;
}

namespace {

struct CompiledOp {
    LocalIndex index;
    std::vector<Block> kraus;    // gate unitary folded in; a single entry means unitary
};

}  // namespace

Counts simulate_trajectories(
    const TranspiledCircuit &tc, const NoiseModel &model, uint64_t shots, uint64_t seed, TrajectoryStats *stats) {
    const size_t n = tc.num_virtual();
    if (n > 20) {
        throw Error(ErrorCode::TooLarge, "trajectory engine limited to 20 qubits, got " + std::to_string(n));
    }
    const Circuit compact = tc.compact();
    std::vector<CompiledOp> program;
    for (size_t i = 0; i < tc.circuit.ops.size(); i++) {
        const GateOp &physical = tc.circuit.ops[i];
        Matrix u = gate_matrix(physical);
        CompiledOp op{LocalIndex(n, compact.ops[i].qubits), {}};
        if (const Channel *ch = model.gate_channel(physical.label, physical.qubits)) {
            // Heaviest branch first so the lazy selection below usually stops after one term.
            std::vector<std::pair<double, Matrix>> branches;
            for (const auto &k : canonical_kraus(*ch)) {
                Matrix ku = k * u;
                branches.emplace_back((ku.adjoint() * ku).trace().real(), std::move(ku));
            }
            std::stable_sort(branches.begin(), branches.end(), [](const auto &a, const auto &b) {
                return a.first > b.first;
            });
            for (const auto &[w, ku] : branches) {
                op.kraus.emplace_back(ku);
            }
        } else {
            op.kraus.emplace_back(u);
        }
        program.push_back(std::move(op));
    }

    const std::vector<int> sigma = measurement_map(tc);
    std::vector<std::array<std::array<double, 2>, 2>> readout;
    for (size_t v = 0; v < n; v++) {
        readout.push_back(readout_or_identity(model, tc.final_layout[v]).a);
    }

    const size_t dim = size_t{1} << n;
    auto run_range = [&](uint64_t begin, uint64_t end, std::vector<uint64_t> &dense, double &norm_error) {
        std::vector<cplx> psi(dim);
        std::vector<cplx> scratch(dim);
        std::vector<cplx> fallback(dim);
        double p_chosen = 0;
        double p_fallback = 0;
        for (uint64_t shot = begin; shot < end; shot++) {
            Rng rng(mix_seed(seed, shot));
            std::fill(psi.begin(), psi.end(), cplx(0, 0));
            psi[0] = 1;
            for (const auto &op : program) {
                if (op.kraus.size() == 1) {
                    apply_block(psi, op.index, op.kraus[0]);
                    continue;
                }
                // The state is normalised, so branch probabilities sum to one and only
                // the prefix up to the drawn point needs evaluating. Each candidate is
                // applied to a scratch copy whose squared norm is its probability.
                const double u = uniform01(rng);
                double acc = 0;
                bool taken = false;
                p_fallback = 0;
                for (size_t k = 0; k < op.kraus.size() && !taken; k++) {
                    std::copy(psi.begin(), psi.end(), scratch.begin());
                    apply_block(scratch, op.index, op.kraus[k]);
                    double p = 0;
                    for (const auto &amp : scratch) {
                        p += std::norm(amp);
                    }
                    acc += p;
                    if (p > 0 && (u < acc || k + 1 == op.kraus.size())) {
                        taken = true;
                    } else if (p > 0) {
                        fallback.swap(scratch);
                        p_fallback = p;
                    }
                    if (taken) {
                        psi.swap(scratch);
                        p_chosen = p;
                    }
                }
                if (!taken) {
                    // Rounding left the cumulative sum just short of u.
                    if (p_fallback <= 0) {
                        throw Error(ErrorCode::InvariantViolation, "trajectory state lost its norm");
                    }
                    psi.swap(fallback);
                    p_chosen = p_fallback;
                }
                const double scale = 1 / std::sqrt(p_chosen);
                double norm = 0;
                for (auto &amp : psi) {
                    amp *= scale;
                    norm += std::norm(amp);
                }
                norm_error = std::max(norm_error, std::abs(std::sqrt(norm) - 1));
            }
            double u = uniform01(rng);
            size_t idx = dim - 1;
            for (size_t i = 0; i < dim; i++) {
                double p = std::norm(psi[i]);
                if (u < p) {
                    idx = i;
                    break;
                }
                u -= p;
            }
            size_t outcome = 0;
            for (size_t v = 0; v < n; v++) {
                int bit = static_cast<int>((idx >> sigma[v]) & 1);
                if (uniform01(rng) < readout[v][bit][1 - bit]) {
                    bit ^= 1;
                }
                outcome |= static_cast<size_t>(bit) << v;
            }
            dense[outcome]++;
        }
    };

    // Shots are independent streams, so splitting them across workers does not change the result.
    const uint64_t workers = std::max<uint64_t>(1, std::min<uint64_t>(std::thread::hardware_concurrency(), shots / 2048));
    std::vector<std::vector<uint64_t>> partial(workers, std::vector<uint64_t>(dim, 0));
    std::vector<double> norm_errors(workers, 0.0);
    std::vector<std::thread> threads;
    for (uint64_t w = 1; w < workers; w++) {
        threads.emplace_back(run_range, shots * w / workers, shots * (w + 1) / workers, std::ref(partial[w]), std::ref(norm_errors[w]));
    }
    run_range(0, shots / workers, partial[0], norm_errors[0]);
    for (auto &t : threads) {
        t.join();
    }
    std::vector<uint64_t> dense(dim, 0);
    for (const auto &p : partial) {
        for (size_t i = 0; i < dim; i++) {
            dense[i] += p[i];
        }
    }
    if (stats) {
        stats->max_norm_error = *std::max_element(norm_errors.begin(), norm_errors.end());
    }
    return Counts::from_dense(n, dense);
}

double total_variation(const Counts &counts, const OutcomeDistribution &dist) {
    std::vector<uint64_t> dense = counts.dense();
    double tv = 0;
    for (size_t i = 0; i < dense.size(); i++) {
        double f = counts.shots ? static_cast<double>(dense[i]) / counts.shots : 0.0;
        tv += std::abs(f - (i < dist.probs.size() ? dist.probs[i] : 0.0));
    }
    return 0.5 * tv;
}

}  // namespace qtwin
