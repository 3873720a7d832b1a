#!/usr/bin/env python3
# Copyright 2026 The choicoh Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the JSON fixtures used by the C++ tests (numpy only)."""

import json
import pathlib

import numpy as np

HERE = pathlib.Path(__file__).parent


def rows(m):
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in r] for r in m]


def choi(kraus, dA, dB):
    # row index j*dB + alpha holds K[alpha, j]
    j = np.zeros((dA * dB, dA * dB), dtype=complex)
    for k in kraus:
        v = np.array([k[a, i] for i in range(dA) for a in range(dB)])
        j += np.outer(v, v.conj())
    return j


def write(name, obj):
    (HERE / name).write_text(json.dumps(obj, indent=1) + "\n")


def main():
    eye2 = np.eye(2)
    j_id = choi([eye2], 2, 2)
    write("identity_qubit.json", {"kind": "channel", "dims": [2, 2], "matrix": rows(j_id)})
    write("identity_qubit_kraus.json", {"kind": "channel", "dims": [2, 2], "kraus": [rows(eye2)]})
    write("identity_qutrit.json", {"kind": "channel", "dims": [3, 3],
                                   "matrix": rows(choi([np.eye(3)], 3, 3))})
    write("scaled_identity.json", {"kind": "channel", "dims": [2, 2], "matrix": rows(2 * j_id)})

    p = np.array([[0.5, 0.5], [0.25, 0.75]])
    write("classical.json", {"kind": "channel", "dims": [2, 2],
                             "matrix": rows(np.diag(p.reshape(-1)))})
    write("dephasing_qubit.json", {"kind": "channel", "dims": [2, 2],
                                   "matrix": rows(np.diag([1.0, 0.0, 0.0, 1.0]))})

    v = np.array([[np.exp(2j * np.pi * j * a / 2) / np.sqrt(2) for j in range(2)] for a in range(2)])
    write("maxcoh_2x2.json", {"kind": "channel", "dims": [2, 2], "matrix": rows(choi([v], 2, 2))})

    # Completely dephasing superchannel: Kraus |i><i| on the flattened 4-dim space.
    n = 4
    ups = np.zeros((n * n, n * n))
    for i in range(n):
        ups[i * n + i, i * n + i] = 1.0
    write("upsilon_super_2x2.json", {"kind": "superchannel", "dims": [2, 2, 2, 2], "matrix": rows(ups)})

    write("plus_state.json", {"kind": "state", "dims": [2], "matrix": rows(0.5 * np.ones((2, 2)))})
    (HERE / "malformed.json").write_text('{"kind": "channel", "dims": [2, 2], "matrix": [[[1, 0]\n')


if __name__ == "__main__":
    main()
