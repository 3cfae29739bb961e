# Copyright 2026 The qtwin Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the synthetic calibration snapshots under data/.

The values are drawn around typical published figures for a 27-qubit
heavy-hex device; nothing here is real device data.
"""

import argparse
import csv
import math
import pathlib
import random

HEAVY_HEX_27 = [
    (0, 1), (1, 2), (1, 4), (2, 3), (3, 5), (4, 7), (5, 8), (6, 7), (7, 10),
    (8, 9), (8, 11), (10, 12), (11, 14), (12, 13), (12, 15), (13, 14), (14, 16),
    (15, 18), (16, 19), (17, 18), (18, 21), (19, 20), (19, 22), (21, 23),
    (22, 25), (23, 24), (24, 25), (25, 26),
]

HEADER = [
    "Qubit", "T1 (us)", "T2 (us)", "Frequency (GHz)", "Anharmonicity (GHz)",
    "Readout assignment error", "Prob meas0 prep1", "Prob meas1 prep0",
    "Readout length (ns)", "ID error", "√x (sx) error", "Pauli-X error",
    "RX error", "Z-axis rotation (rz) error", "Single-qubit gate length (ns)",
    "ECR error", "Gate length (ns)", "Operational",
]


def lognormal(rng, median, spread):
    return median * math.exp(rng.gauss(0.0, spread))


def make_device(seed, flip_fraction, down):
    rng = random.Random(seed)
    n = 27
    # Each physical link is calibrated in one direction only.
    pairs = {q: [] for q in range(n)}
    for a, b in HEAVY_HEX_27:
        if rng.random() < flip_fraction:
            a, b = b, a
        err = min(lognormal(rng, 7.5e-3, 0.35), 0.05)
        length = rng.choice([533.333, 604.444, 660.0, 703.111])
        pairs[a].append((b, err, length))
    rows = []
    for q in range(n):
        t1 = max(rng.gauss(250.0, 60.0), 60.0)
        t2 = min(t1 * rng.uniform(0.35, 1.2), 1.9 * t1)
        p01 = min(lognormal(rng, 0.018, 0.45), 0.12)
        p10 = min(lognormal(rng, 0.008, 0.45), 0.08)
        sx = min(lognormal(rng, 2.6e-4, 0.4), 5e-3)
        entries = sorted(pairs[q])
        rows.append([
            q,
            f"{t1:.2f}",
            f"{t2:.2f}",
            f"{rng.uniform(4.6, 5.2):.5f}",
            f"{rng.uniform(-0.345, -0.305):.5f}",
            f"{(p01 + p10) / 2:.6g}",
            f"{p01:.6g}",
            f"{p10:.6g}",
            "1560",
            f"{sx:.6g}",
            f"{sx:.6g}",
            f"{sx:.6g}",
            f"{sx:.6g}",
            "0",
            "60",
            ";".join(f"{q}_{t}:{e:.6g}" for t, e, _ in entries),
            ";".join(f"{q}_{t}:{l:g}" for t, _, l in entries),
            "No" if q in down else "Yes",
        ])
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=pathlib.Path(__file__).resolve().parent.parent / "data", type=pathlib.Path)
    args = parser.parse_args()
    devices = {
        "synth_falcon_a.csv": make_device(11, 0.0, set()),
        "synth_falcon_b.csv": make_device(29, 0.5, {20}),
    }
    for name, rows in devices.items():
        with open(args.out / name, "w", newline="", encoding="utf-8") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(HEADER)
            w.writerows(rows)


if __name__ == "__main__":
    main()
