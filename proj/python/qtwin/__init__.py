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

"""Python access to the qtwin C++ core.

Circuits and sweep results cross the boundary as JSON text; the helpers here
accept and return plain Python objects instead.
"""

import json

from . import _core
from ._core import (
    CalibrationTable,
    ClampPolicy,
    CouplingMap,
    DepolMode,
    Error,
    NoiseModel,
    TranspiledCircuit,
    TwinOptions,
    build_noise_model,
    classify_tier,
    load_calibration,
    parse_calibration_csv,
    reconstruct_coupling,
    render_report,
    run_matrix,
    sample_counts,
    shortest_path,
    similarity_matrix,
    simulate_density,
    simulate_trajectories,
    weighted_jaccard,
)

__all__ = [
    "CalibrationTable",
    "ClampPolicy",
    "CouplingMap",
    "DepolMode",
    "Error",
    "NoiseModel",
    "TranspiledCircuit",
    "TwinOptions",
    "build_noise_model",
    "classify_tier",
    "load_calibration",
    "parse_calibration_csv",
    "random_circuit",
    "reconstruct_coupling",
    "render_report",
    "run_matrix",
    "sample_counts",
    "shortest_path",
    "similarity_matrix",
    "simulate_density",
    "simulate_trajectories",
    "sweep_shots",
    "transpile",
    "verify_equivalence",
    "weighted_jaccard",
]


def _text(circuit):
    return circuit if isinstance(circuit, str) else json.dumps(circuit)


def random_circuit(num_qubits, depth, seed):
    return json.loads(_core.random_circuit(num_qubits, depth, seed))


def transpile(circuit, model, level, seed=0):
    return _core.transpile(_text(circuit), model, level, seed)


def verify_equivalence(circuit, transpiled):
    return _core.verify_equivalence(_text(circuit), transpiled)


def sweep_shots(transpiled, model, ladder=(), repetitions=100, seed=0):
    return json.loads(_core.sweep_shots(transpiled, model, list(ladder), repetitions, seed))
