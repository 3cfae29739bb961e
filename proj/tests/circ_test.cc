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

#include "qtwin/circ.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "qtwin/calib.h"
#include "qtwin/error.h"
#include "test_util.h"

using namespace qtwin;
using namespace qtwin::testing;

namespace {

const std::vector<std::string> kAllGates = {"id", "x",  "y",  "z",  "h", "s",  "sdg", "t",    "tdg", "sx",
                                            "rx", "ry", "rz", "p",  "u", "cx", "cz",  "swap", "ecr"};

std::vector<double> random_params(const std::string &label, std::mt19937_64 &rng) {
    std::vector<double> p(gate_param_count(label));
    for (auto &v : p) {
        v = uniform(rng, -7, 7);
    }
    return p;
}

// Dense embedding of a gate built from scratch: bit j of the local index is qubits[j].
Matrix embed(const Matrix &g, const std::vector<int> &qubits, int n) {
    const int dim = 1 << n;
    Matrix out = Matrix::Zero(dim, dim);
    for (int col = 0; col < dim; col++) {
        int lc = 0;
        for (size_t j = 0; j < qubits.size(); j++) {
            lc |= ((col >> qubits[j]) & 1) << j;
        }
        for (int lr = 0; lr < g.rows(); lr++) {
            int row = col;
            for (size_t j = 0; j < qubits.size(); j++) {
                row = (row & ~(1 << qubits[j])) | (((lr >> j) & 1) << qubits[j]);
            }
            out(row, col) += g(lr, lc);
        }
    }
    return out;
}

}  // namespace

TEST(circ, gate_matrix_examples) {
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    EXPECT_EQ(gate_matrix("x"), x);
    Matrix ecr = gate_matrix("ecr");
    EXPECT_LE(max_abs(ecr * ecr - Matrix::Identity(4, 4)), 1e-15);
    std::vector<double> zero{0.0};
    EXPECT_LE(phase_insensitive_distance(gate_matrix("rz", zero), Matrix::Identity(2, 2)), 1e-15);
}

TEST(circ, ecr_defining_formula) {
    Matrix i2 = Matrix::Identity(2, 2);
    Matrix x(2, 2), y(2, 2);
    x << 0, 1, 1, 0;
    y << 0, cplx(0, -1), cplx(0, 1), 0;
    // (I (x) X - X (x) Y) / sqrt 2 with the first factor on the high bit.
    Matrix expect = (kron(i2, x) - kron(x, y)) / std::sqrt(2.0);
    EXPECT_LE(max_abs(gate_matrix("ecr") - expect), 1e-15);
}

TEST(circ, cx_control_is_first_qubit) {
    // cx on (0, 1): control local bit 0 -> flips bit 1 when bit 0 is set.
    Matrix cx = gate_matrix("cx");
    EXPECT_EQ(cx(3, 1), cplx(1, 0));
    EXPECT_EQ(cx(1, 3), cplx(1, 0));
    EXPECT_EQ(cx(0, 0), cplx(1, 0));
    EXPECT_EQ(cx(2, 2), cplx(1, 0));
}

TEST(circ, every_gate_unitary) {
    std::mt19937_64 rng(1);
    for (const auto &label : kAllGates) {
        for (int trial = 0; trial < 10; trial++) {
            Matrix u = gate_matrix(label, random_params(label, rng));
            ASSERT_EQ(u.rows(), 1 << gate_arity(label));
            EXPECT_LE(max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())), 1e-12) << label;
        }
    }
}

TEST(circ, unknown_gate) {
    try {
        gate_matrix("toffoli");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownGate);
    }
    Circuit c{1, {{"bogus", {0}, {}}}, false};
    EXPECT_THROW(c.validate(), Error);
}

TEST(circ, validate_checks_arity_params_and_range) {
    EXPECT_THROW((Circuit{2, {{"cx", {0}, {}}}, false}.validate()), Error);
    EXPECT_THROW((Circuit{2, {{"rz", {0}, {}}}, false}.validate()), Error);
    EXPECT_THROW((Circuit{2, {{"x", {2}, {}}}, false}.validate()), Error);
    EXPECT_THROW((Circuit{2, {{"cx", {1, 1}, {}}}, false}.validate()), Error);
    EXPECT_NO_THROW((Circuit{2, {{"u", {1}, {1, 2, 3}}}, false}.validate()));
}

TEST(circ, random_circuit_deterministic_and_layered) {
    for (uint64_t seed : {0ull, 1ull, 42ull, 1234567ull}) {
        for (size_t n : {1u, 2u, 5u}) {
            Circuit a = random_circuit(n, 10, seed);
            EXPECT_EQ(a, random_circuit(n, 10, seed));
            EXPECT_TRUE(a.measured);
            EXPECT_NO_THROW(a.validate());
            // Every layer touches every qubit exactly once.
            size_t layers = 0;
            std::set<int> covered;
            for (const auto &op : a.ops) {
                for (int q : op.qubits) {
                    ASSERT_TRUE(covered.insert(q).second);
                }
                if (covered.size() == n) {
                    layers++;
                    covered.clear();
                }
            }
            EXPECT_TRUE(covered.empty());
            EXPECT_EQ(layers, 10u);
            for (const auto &op : a.ops) {
                for (double p : op.params) {
                    EXPECT_GE(p, 0.0);
                    EXPECT_LT(p, 2 * std::numbers::pi);
                }
            }
        }
    }
    EXPECT_NE(random_circuit(5, 10, 1), random_circuit(5, 10, 2));
}

TEST(circ, random_circuit_golden) {
    Circuit golden = circuit_from_json(nlohmann::json::parse(read_text_file(fixture("random_5_10_42.json"))));
    EXPECT_EQ(random_circuit(5, 10, 42), golden);
}

TEST(circ, circuit_unitary_examples) {
    EXPECT_LE(max_abs(circuit_unitary(Circuit{3, {}, false}) - Matrix::Identity(8, 8)), 0.0);
    EXPECT_LE(max_abs(circuit_unitary(Circuit{1, {{"h", {0}, {}}, {"h", {0}, {}}}, false}) - Matrix::Identity(2, 2)),
              1e-12);
    Matrix expect = Matrix::Zero(4, 4);
    expect(0, 1) = expect(1, 0) = expect(2, 3) = expect(3, 2) = 1;
    EXPECT_EQ(circuit_unitary(Circuit{2, {{"x", {0}, {}}}, false}), expect);
    try {
        circuit_unitary(Circuit{11, {}, false});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::TooLarge);
    }
}

TEST(circ, circuit_unitary_matches_dense_embedding) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 30; trial++) {
        Circuit c = random_circuit(4, 4, rng());
        c.measured = false;
        Matrix expect = Matrix::Identity(16, 16);
        for (const auto &op : c.ops) {
            expect = embed(gate_matrix(op), op.qubits, 4) * expect;
        }
        EXPECT_LE(max_abs(circuit_unitary(c) - expect), 1e-12);
    }
}

TEST(circ, circuit_unitary_homomorphic) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; trial++) {
        Circuit c = random_circuit(3, 6, rng());
        size_t cut = rng() % (c.ops.size() + 1);
        Circuit a{3, {c.ops.begin(), c.ops.begin() + cut}, false};
        Circuit b{3, {c.ops.begin() + cut, c.ops.end()}, false};
        EXPECT_LE(max_abs(circuit_unitary(c) - circuit_unitary(b) * circuit_unitary(a)), 1e-12);
    }
}

TEST(circ, json_round_trip) {
    Circuit c = random_circuit(4, 7, 99);
    EXPECT_EQ(circuit_from_json(nlohmann::json::parse(circuit_to_json(c).dump())), c);
    EXPECT_THROW(circuit_from_json(nlohmann::json::parse(R"({"num_qubits": 2})")), Error);
    EXPECT_THROW(circuit_from_json(nlohmann::json::parse(R"({"num_qubits": 1, "ops": [{"label": "x"}]})")), Error);
}
