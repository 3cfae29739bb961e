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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qtwin/error.h"
#include "test_util.h"

using namespace qtwin;
using namespace qtwin::testing;

namespace {

Matrix ket_bra(int dim, int r, int c) {
    Matrix m = Matrix::Zero(dim, dim);
    m(r, c) = 1;
    return m;
}

Matrix plus_state() {
    Matrix m(2, 2);
    m << 0.5, 0.5, 0.5, 0.5;
    return m;
}

// Closed-form action of amplitude damping followed by dephasing on a 2x2 operator.
Matrix relax_oracle(const Matrix &rho, double t1, double t2, double t) {
    double e1 = std::exp(-t / t1);
    double e2 = std::exp(-t / t2);
    Matrix out(2, 2);
    out(0, 0) = rho(0, 0) + (1 - e1) * rho(1, 1);
    out(1, 1) = e1 * rho(1, 1);
    out(0, 1) = e2 * rho(0, 1);
    out(1, 0) = e2 * rho(1, 0);
    return out;
}

}  // namespace

TEST(chan, depolarizing_examples) {
    std::mt19937_64 rng(1);
    Matrix rho = random_density(2, rng);
    EXPECT_LE(max_abs(depolarizing_channel(0, 1).apply(rho) - rho), 1e-15);
    EXPECT_LE(max_abs(depolarizing_channel(1, 1).apply(ket_bra(2, 0, 0)) - Matrix::Identity(2, 2) / 2.0), 1e-15);
    Matrix out = depolarizing_channel(0.1, 1).apply(plus_state());
    EXPECT_NEAR(out(0, 1).real(), 0.45, 1e-15);
    EXPECT_NEAR(out(0, 1).imag(), 0.0, 1e-15);
}

TEST(chan, depolarizing_pauli_weights) {
    Channel ch = depolarizing_channel(0.2, 2);
    ASSERT_EQ(ch.kraus().size(), 16u);
    // |Tr K_0|^2 / d^2 is the identity weight.
    EXPECT_NEAR(ch.process_fidelity(), 1 - 0.2 * 15.0 / 16.0, 1e-14);
}

TEST(chan, depolarizing_fixes_maximally_mixed) {
    std::mt19937_64 rng(2);
    for (int n : {1, 2}) {
        const int d = 1 << n;
        for (int i = 0; i < 20; i++) {
            double p = uniform(rng, 0, 1);
            Matrix mixed = Matrix::Identity(d, d) / static_cast<double>(d);
            EXPECT_LE(max_abs(depolarizing_channel(p, n).apply(mixed) - mixed), 1e-15);
        }
    }
}

TEST(chan, depolarizing_matches_definition) {
    std::mt19937_64 rng(3);
    for (int n : {1, 2}) {
        const int d = 1 << n;
        for (int i = 0; i < 20; i++) {
            double p = uniform(rng, 0, 1);
            Matrix rho = random_density(d, rng);
            Matrix expect = (1 - p) * rho + p * Matrix::Identity(d, d) / static_cast<double>(d);
            EXPECT_LE(max_abs(kraus_sum(depolarizing_channel(p, n), rho) - expect), 1e-14);
        }
    }
}

TEST(chan, bad_probability) {
    for (double p : {-0.1, 1.1, std::nan("")}) {
        try {
            depolarizing_channel(p, 1);
            FAIL() << p;
        } catch (const Error &e) {
            EXPECT_EQ(e.code(), ErrorCode::BadProbability);
        }
    }
    try {
        readout_matrix(1.2, 0);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::BadProbability);
    }
}

TEST(chan, thermal_relaxation_examples) {
    std::mt19937_64 rng(4);
    Matrix rho = random_density(2, rng);
    EXPECT_LE(max_abs(thermal_relaxation_channel(2e-4, 1.5e-4, 0).apply(rho) - rho), 1e-15);

    Channel ch = thermal_relaxation_channel(2e-4, 1.5e-4, 1e-7);
    Matrix pop = ch.apply(ket_bra(2, 1, 1));
    EXPECT_NEAR(pop(1, 1).real(), 0.99950012, 1e-8);
    EXPECT_NEAR(pop(1, 1).real(), std::exp(-5e-4), 1e-15);
    Matrix coh = ch.apply(ket_bra(2, 0, 1));
    EXPECT_NEAR(coh(0, 1).real(), 0.99933356, 1e-8);
    EXPECT_NEAR(coh(0, 1).real(), std::exp(-1e-7 / 1.5e-4), 1e-15);

    Matrix relaxed = thermal_relaxation_channel(2e-4, 1e-4, 100 * 2e-4).apply(ket_bra(2, 1, 1));
    EXPECT_LE(max_abs(relaxed - ket_bra(2, 0, 0)), 1e-12);
}

TEST(chan, thermal_relaxation_rejects_t2_above_bound) {
    try {
        thermal_relaxation_channel(1e-4, 2.5e-4, 1e-7);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NotCPTP);
    }
}

TEST(chan, thermal_relaxation_closed_form_randomized) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 500; i++) {
        double t1 = uniform(rng, 1e-6, 5e-4);
        double t2 = uniform(rng, 1e-3, 2) * t1;
        double t = uniform(rng, 0, 3) * t1;
        Channel ch = thermal_relaxation_channel(t1, t2, t);
        ASSERT_LE(ch.completeness_error(), 1e-12);
        for (int r = 0; r < 2; r++) {
            for (int c = 0; c < 2; c++) {
                Matrix basis = ket_bra(2, r, c);
                ASSERT_LE(max_abs(kraus_sum(ch, basis) - relax_oracle(basis, t1, t2, t)), 1e-12);
            }
        }
    }
}

TEST(chan, compose_examples) {
    std::mt19937_64 rng(6);
    Channel relax = thermal_relaxation_channel(1e-4, 8e-5, 3e-7);
    Channel composed = compose(Channel::identity(1), relax);
    for (int r = 0; r < 2; r++) {
        for (int c = 0; c < 2; c++) {
            EXPECT_LE(max_abs(composed.apply(ket_bra(2, r, c)) - relax.apply(ket_bra(2, r, c))), 1e-15);
        }
    }
    // Pure amplitude damping: t2 = 2 t1 leaves no extra dephasing.
    double t1 = 1e-4;
    Channel a1 = thermal_relaxation_channel(t1, 2 * t1, 2e-5);
    Channel a2 = thermal_relaxation_channel(t1, 2 * t1, 5e-5);
    double g1 = 1 - std::exp(-2e-5 / t1);
    double g2 = 1 - std::exp(-5e-5 / t1);
    Matrix out = compose(a1, a2).apply(ket_bra(2, 1, 1));
    EXPECT_NEAR(out(1, 1).real(), (1 - g1) * (1 - g2), 1e-15);
    EXPECT_LE(compose(depolarizing_channel(0.3, 2), depolarizing_channel(0.1, 2)).completeness_error(), 1e-12);
    EXPECT_THROW(compose(Channel::identity(1), Channel::identity(2)), Error);
}

TEST(chan, compose_order_first_then_second) {
    std::mt19937_64 rng(7);
    Channel relax = thermal_relaxation_channel(1e-4, 5e-5, 4e-5);
    Channel depol = depolarizing_channel(0.2, 1);
    Matrix rho = random_density(2, rng);
    EXPECT_LE(max_abs(compose(relax, depol).apply(rho) - depol.apply(relax.apply(rho))), 1e-15);
}

TEST(chan, tensor_examples) {
    Channel id2 = tensor(Channel::identity(1), Channel::identity(1));
    ASSERT_EQ(id2.num_qubits(), 2);
    std::mt19937_64 rng(8);
    Matrix rho = random_density(4, rng);
    EXPECT_LE(max_abs(id2.apply(rho) - rho), 1e-15);
    Channel mixed = tensor(depolarizing_channel(0.1, 1), thermal_relaxation_channel(1, 1, 0.1));
    for (const auto &k : mixed.kraus()) {
        EXPECT_EQ(k.rows(), 4);
    }

    double t1a = 1e-4, t1b = 2e-4, t = 3e-5;
    Channel both = tensor(thermal_relaxation_channel(t1a, t1a, t), thermal_relaxation_channel(t1b, t1b, t));
    Matrix out = both.apply(ket_bra(4, 3, 3));
    EXPECT_NEAR(out(3, 3).real(), std::exp(-t / t1a) * std::exp(-t / t1b), 1e-15);
}

TEST(chan, tensor_first_argument_on_local_qubit_zero) {
    // Full relaxation on `a` only: |11> -> |10> (index 2) when a owns bit 0.
    Channel a = thermal_relaxation_channel(1e-6, 1e-6, 1);
    Channel both = tensor(a, Channel::identity(1));
    Matrix out = both.apply(ket_bra(4, 3, 3));
    EXPECT_NEAR(out(2, 2).real(), 1.0, 1e-12);
}

TEST(chan, readout_matrix_examples) {
    EXPECT_EQ(readout_matrix(0, 0), AssignmentMatrix{});
    AssignmentMatrix m = readout_matrix(0.02, 0.03);
    EXPECT_DOUBLE_EQ(m.a[0][0], 0.98);
    EXPECT_DOUBLE_EQ(m.a[0][1], 0.02);
    EXPECT_DOUBLE_EQ(m.a[1][0], 0.03);
    EXPECT_DOUBLE_EQ(m.a[1][1], 0.97);
}

TEST(chan, cptp_closure_randomized) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 200; i++) {
        double t1 = uniform(rng, 1e-5, 5e-4);
        Channel ra = thermal_relaxation_channel(t1, uniform(rng, 0.01, 2) * t1, uniform(rng, 0, 1e-6));
        Channel rb = thermal_relaxation_channel(t1, uniform(rng, 0.01, 2) * t1, uniform(rng, 0, 1e-6));
        Channel two = compose(tensor(ra, rb), depolarizing_channel(uniform(rng, 0, 0.1), 2));
        ASSERT_LE(two.completeness_error(), 1e-12);
        Matrix rho = random_density(4, rng);
        Matrix out = kraus_sum(two, rho);
        ASSERT_NEAR(std::abs(out.trace() - rho.trace()), 0.0, 1e-12);
        ASSERT_GE(min_eigenvalue(out), -1e-10);
    }
}
