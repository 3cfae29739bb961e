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

#include "qtwin/twin.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qtwin/error.h"
#include "test_util.h"

using namespace qtwin;
using namespace qtwin::testing;

namespace {

struct Fixture {
    CalibrationTable table;
    CouplingMap map;
};

Fixture three_qubit() {
    CalibrationTable t = load_calibration(fixture("three_qubit.csv"));
    CouplingMap m = reconstruct_coupling(t).map;
    return {t, m};
}

Matrix ket_bra(int dim, int r, int c) {
    Matrix m = Matrix::Zero(dim, dim);
    m(r, c) = 1;
    return m;
}

// Relaxation for duration t, then depolarizing with strength lam, in closed form.
Matrix sx_noise_oracle(const Matrix &rho, double t1, double t2, double t, double lam) {
    double e1 = std::exp(-t / t1);
    double e2 = std::exp(-t / t2);
    Matrix r(2, 2);
    r(0, 0) = rho(0, 0) + (1 - e1) * rho(1, 1);
    r(1, 1) = e1 * rho(1, 1);
    r(0, 1) = e2 * rho(0, 1);
    r(1, 0) = e2 * rho(1, 0);
    return (1 - lam) * r + lam * r.trace() * Matrix::Identity(2, 2) / 2.0;
}

}  // namespace

TEST(twin, sx_channel_matches_closed_form) {
    Fixture f = three_qubit();
    NoiseModel m = build_noise_model(f.table, f.map);
    const Channel *sx = m.gate_channel("sx", {0});
    ASSERT_NE(sx, nullptr);
    for (int r = 0; r < 2; r++) {
        for (int c = 0; c < 2; c++) {
            Matrix basis = ket_bra(2, r, c);
            EXPECT_LE(max_abs(kraus_sum(*sx, basis) - sx_noise_oracle(basis, 200e-6, 150e-6, 50e-9, 0.001)), 1e-15);
        }
    }
}

TEST(twin, rz_has_no_channel) {
    Fixture f = three_qubit();
    NoiseModel m = build_noise_model(f.table, f.map);
    for (int q = 0; q < 3; q++) {
        EXPECT_EQ(m.gate_channel("rz", {q}), nullptr);
    }
}

TEST(twin, ecr_directionality) {
    Fixture f = three_qubit();
    NoiseModel m = build_noise_model(f.table, f.map);
    EXPECT_NE(m.gate_channel("ecr", {0, 1}), nullptr);
    EXPECT_NE(m.gate_channel("ecr", {1, 2}), nullptr);
    EXPECT_EQ(m.gate_channel("ecr", {1, 0}), nullptr);
    EXPECT_EQ(m.gate_channel("ecr", {0, 2}), nullptr);
}

TEST(twin, ecr_channel_matches_closed_form) {
    Fixture f = three_qubit();
    NoiseModel m = build_noise_model(f.table, f.map);
    const Channel *ecr = m.gate_channel("ecr", {0, 1});
    ASSERT_NE(ecr, nullptr);
    const double t = 660e-9;
    const double lam = 0.008;
    std::mt19937_64 rng(1);
    Matrix rho = random_density(4, rng);
    // Relaxation on both qubits (Kraus products), then two-qubit depolarizing.
    double e1 = std::exp(-t / 200e-6);
    double e2 = std::exp(-t / 150e-6);
    Matrix relaxed = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j < 4; j++) {
            // Per-qubit elementwise action, applied qubit by qubit on basis |i><j|.
            Matrix e = ket_bra(4, i, j);
            Matrix acc = e;
            for (int q = 0; q < 2; q++) {
                Matrix next = Matrix::Zero(4, 4);
                for (int a = 0; a < 4; a++) {
                    for (int b = 0; b < 4; b++) {
                        if (acc(a, b) == cplx(0, 0)) {
                            continue;
                        }
                        int ba = (a >> q) & 1;
                        int bb = (b >> q) & 1;
                        if (ba == 1 && bb == 1) {
                            next(a, b) += e1 * acc(a, b);
                            next(a ^ (1 << q), b ^ (1 << q)) += (1 - e1) * acc(a, b);
                        } else if (ba != bb) {
                            next(a, b) += e2 * acc(a, b);
                        } else {
                            next(a, b) += acc(a, b);
                        }
                    }
                }
                acc = next;
            }
            relaxed += rho(i, j) * acc;
        }
    }
    Matrix expect = (1 - lam) * relaxed + lam * relaxed.trace() * Matrix::Identity(4, 4) / 4.0;
    EXPECT_LE(max_abs(kraus_sum(*ecr, rho) - expect), 1e-14);
}

TEST(twin, readout_and_basis) {
    Fixture f = three_qubit();
    NoiseModel m = build_noise_model(f.table, f.map);
    const AssignmentMatrix *a = m.readout_for(2);
    ASSERT_NE(a, nullptr);
    EXPECT_DOUBLE_EQ(a->a[0][1], 0.02);
    EXPECT_DOUBLE_EQ(a->a[1][0], 0.03);
    EXPECT_EQ(m.basis_gates, (std::vector<std::string>{"cz", "ecr", "id", "rx", "rz", "rzz", "sx", "x", "measure"}));
    EXPECT_EQ(m.source.device_name, "three_qubit");
    EXPECT_FALSE(m.source.csv_digest.empty());
}

TEST(twin, depol_param_examples) {
    Channel id1 = Channel::identity(1);
    EXPECT_EQ(depol_param(0, id1, 2, DepolMode::Direct), 0.0);
    EXPECT_EQ(depol_param(0, id1, 2, DepolMode::Adjusted), 0.0);
    EXPECT_NEAR(depol_param(0.001, id1, 2, DepolMode::Adjusted), 0.002, 1e-15);
    EXPECT_EQ(depol_param(0.001, id1, 2, DepolMode::Direct), 0.001);

    std::vector<std::string> warnings;
    Channel strong = thermal_relaxation_channel(1e-5, 1e-5, 1e-6);
    EXPECT_EQ(depol_param(1e-4, strong, 2, DepolMode::Adjusted, &warnings), 0.0);
    EXPECT_EQ(warnings.size(), 1u);
}

TEST(twin, adjusted_mode_hits_target_fidelity) {
    Fixture f = three_qubit();
    TwinOptions adj;
    adj.depol_mode = DepolMode::Adjusted;
    NoiseModel m = build_noise_model(f.table, f.map, adj);
    // F_t = ((1 - r)(d + 1) - 1) / d: sx r = 0.001, d = 2 -> 0.9985; ecr r = 0.008, d = 4 -> 0.99.
    EXPECT_NEAR(m.gate_channel("sx", {0})->process_fidelity(), 0.9985, 1e-12);
    EXPECT_NEAR(m.gate_channel("ecr", {0, 1})->process_fidelity(), 0.99, 1e-12);
    EXPECT_TRUE(m.warnings.empty());
}

TEST(twin, reject_policy_throws_when_clamping) {
    std::string csv =
        "Qubit,T1 (us),T2 (us),Prob meas0 prep1,Prob meas1 prep0,Readout length (ns),sx error,"
        "Single-qubit gate length (ns)\n0,10,10,0,0,1,0.00001,100\n";
    CalibrationTable t = validate_table(parse_calibration_csv(csv, "d"));
    CouplingMap m = reconstruct_coupling(t).map;
    TwinOptions opts;
    opts.depol_mode = DepolMode::Adjusted;
    EXPECT_NO_THROW(build_noise_model(t, m, opts));
    opts.clamp_policy = ClampPolicy::Reject;
    EXPECT_THROW(build_noise_model(t, m, opts), Error);
}

TEST(twin, excludes_id_error_when_asked) {
    Fixture f = three_qubit();
    TwinOptions opts;
    opts.include_id_error = false;
    NoiseModel m = build_noise_model(f.table, f.map, opts);
    EXPECT_EQ(m.gate_channel("id", {0}), nullptr);
    EXPECT_NE(m.gate_channel("sx", {0}), nullptr);
}

TEST(twin, non_operational_qubits_excluded) {
    std::string csv =
        "Qubit,T1 (us),T2 (us),Prob meas0 prep1,Prob meas1 prep0,Readout length (ns),sx error,"
        "Single-qubit gate length (ns),ECR error,Gate length (ns),Operational\n"
        "0,100,50,0,0,1,0.001,35,0_1:0.01,0_1:300,Yes\n"
        "1,100,50,0,0,1,0.001,35,1_2:0.01,1_2:300,No\n"
        "2,100,50,0,0,1,0.001,35,,,Yes\n";
    CalibrationTable t = validate_table(parse_calibration_csv(csv, "d"));
    NoiseModel m = build_noise_model(t, reconstruct_coupling(t).map);
    EXPECT_EQ(m.operational, (std::set<int>{0, 2}));
    EXPECT_EQ(m.gate_channel("sx", {1}), nullptr);
    EXPECT_EQ(m.gate_channel("ecr", {0, 1}), nullptr);
    EXPECT_TRUE(m.coupling.edges().empty());
    for (const auto &[key, ch] : m.gate_channels) {
        for (int q : key.qubits) {
            EXPECT_TRUE(m.operational.count(q));
        }
    }
}

TEST(twin, inconsistent_map_and_missing_duration) {
    Fixture f = three_qubit();
    CouplingMap wrong(3, {{1, 0}});
    try {
        build_noise_model(f.table, wrong);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::InconsistentInputs);
    }
    std::string csv =
        "Qubit,T1 (us),T2 (us),Prob meas0 prep1,Prob meas1 prep0,Readout length (ns),sx error,"
        "Single-qubit gate length (ns),ECR error\n"
        "0,100,50,0,0,1,0.001,35,0_1:0.01\n1,100,50,0,0,1,0.001,35,\n";
    CalibrationTable t = validate_table(parse_calibration_csv(csv, "d"));
    try {
        build_noise_model(t, reconstruct_coupling(t).map);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingCalibration);
    }
}

TEST(twin, every_channel_cptp_and_deterministic) {
    for (const char *name : {"synth_falcon_a.csv", "synth_falcon_b.csv"}) {
        CalibrationTable t = load_calibration(data_file(name));
        CouplingMap map = reconstruct_coupling(t).map;
        for (DepolMode mode : {DepolMode::Direct, DepolMode::Adjusted}) {
            TwinOptions o;
            o.depol_mode = mode;
            NoiseModel a = build_noise_model(t, map, o);
            NoiseModel b = build_noise_model(t, map, o);
            ASSERT_EQ(a.gate_channels.size(), b.gate_channels.size());
            for (const auto &[key, ch] : a.gate_channels) {
                EXPECT_LE(ch.completeness_error(), 1e-12);
                const Channel *other = b.gate_channel(key.label, key.qubits);
                ASSERT_NE(other, nullptr);
                ASSERT_EQ(ch.kraus().size(), other->kraus().size());
                for (size_t k = 0; k < ch.kraus().size(); k++) {
                    EXPECT_EQ(ch.kraus()[k], other->kraus()[k]);
                }
                if (key.qubits.size() == 2) {
                    EXPECT_TRUE(a.coupling.has_directed_edge(key.qubits[0], key.qubits[1]));
                }
            }
        }
    }
}

TEST(twin, noiseless_twin_is_empty) {
    Fixture f = three_qubit();
    TwinOptions o;
    o.noiseless = true;
    NoiseModel m = build_noise_model(f.table, f.map, o);
    EXPECT_TRUE(m.gate_channels.empty());
    EXPECT_TRUE(m.readout.empty());
    EXPECT_EQ(m.coupling, f.map);
}
