# Copyright 2026 The Neumark Optics Authors
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

"""Writes the JSON fixtures under fixtures/. Deterministic."""

import json
import pathlib

import numpy as np

OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def cplx(z):
    return [float(np.real(z)), float(np.imag(z))]


def mat(m):
    return [[cplx(x) for x in row] for row in np.asarray(m)]


def vec(v):
    return [cplx(x) for x in np.asarray(v)]


def write(name, obj):
    (OUT / name).write_text(json.dumps(obj, indent=2) + "\n")


def povm(elements):
    return {"dim": int(elements[0].shape[0]), "elements": [mat(e) for e in elements]}


def pure_ensemble(states, priors=None):
    priors = priors or [1.0 / len(states)] * len(states)
    return {"dim": int(len(states[0])),
            "states": [{"type": "pure", "data": vec(s), "prior": p} for s, p in zip(states, priors)]}


def usd_povm(states, fraction=0.9):
    """Conclusive elements along the dual basis, scaled to keep Pi_0 >= 0."""
    psi = np.column_stack(states)
    dual = psi @ np.linalg.inv(psi.conj().T @ psi)
    proj = [np.outer(dual[:, k], dual[:, k].conj()) for k in range(psi.shape[1])]
    scale = fraction / np.linalg.eigvalsh(sum(proj)).max()
    return [scale * p for p in proj]


def bloch(theta, phi):
    return np.array([np.cos(theta / 2), np.sin(theta / 2) * np.exp(1j * phi)])


def register(q1, q2, which):
    c = q1 if which == 1 else q2
    return np.kron(np.kron(q1, q2), c)


def antisym(first, second):
    p = np.zeros((8, 8))
    for x in range(8):
        bits = [(x >> (2 - k)) & 1 for k in range(3)]
        y = list(bits)
        y[first], y[second] = bits[second], bits[first]
        sx = y[0] * 4 + y[1] * 2 + y[2]
        p[x, x] += 0.5
        p[x, sx] -= 0.5
    return p


def main():
    OUT.mkdir(exist_ok=True)
    eye3 = np.eye(3)
    write("projective_povm.json", povm([np.outer(eye3[k], eye3[k]) for k in range(3)]))
    write("basis_ensemble.json", pure_ensemble([eye3[k] for k in range(3)]))

    for k, name in ((2.0 / 3.0, "unknown_qubits_povm.json"), (1.0, "unknown_qubits_povm_k1.json")):
        write(name, povm([k * antisym(1, 2), k * antisym(0, 2)]))
    pairs = {
        "registers_generic.json": (bloch(1.1, 0.7), bloch(2.3, 4.0)),
        "registers_orthogonal.json": (bloch(0.0, 0.0), bloch(np.pi, 0.0)),
        "registers_same.json": (bloch(0.9, 1.3), bloch(0.9, 1.3)),
    }
    for name, (q1, q2) in pairs.items():
        write(name, pure_ensemble([register(q1, q2, 1), register(q1, q2, 2)]))

    s = 0.4
    pair = [np.array([1.0, 0.0]), np.array([np.cos(s), np.sin(s)])]
    write("pair_povm.json", povm(usd_povm(pair, fraction=1.0)))
    write("pair_ensemble.json", pure_ensemble(pair, [0.5, 0.5]))
    write("pair_mismatched_ensemble.json",
          pure_ensemble([pair[0], np.array([np.cos(0.7), np.sin(0.7)])]))
    bad = usd_povm(pair, fraction=1.0)
    bad[0] = bad[0] + np.array([[0.0, 1e-3], [0.0, 0.0]])
    write("pair_nonhermitian_povm.json", povm(bad))

    rng = np.random.default_rng(7)
    raw = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    trio = [raw[:, k] / np.linalg.norm(raw[:, k]) for k in range(3)]
    write("random3_povm.json", povm(usd_povm(trio, fraction=0.95)))
    write("random3_ensemble.json", pure_ensemble(trio, [0.2, 0.3, 0.5]))

    # rho_1 supported on span{|0>, |1>}, rho_2 pure along (|0> + |2>)/sqrt(2).
    v = np.array([1.0, 0.0, 1.0]) / np.sqrt(2)
    w = np.array([1.0, 0.0, -1.0]) / np.sqrt(2)
    e = np.eye(3)
    pi1 = 0.5 * (np.outer(e[1], e[1]) + np.outer(w, w))
    pi2 = 0.5 * np.outer(e[2], e[2])
    rho1 = np.diag([0.6, 0.4, 0.0]).astype(complex)
    rho1[0, 1] = 0.1j
    rho1[1, 0] = -0.1j
    write("mixed_povm.json", povm([pi1, pi2]))
    write("mixed_ensemble.json", {"dim": 3, "states": [
        {"type": "mixed", "data": mat(rho1), "prior": 0.5},
        {"type": "pure", "data": vec(v), "prior": 0.5},
    ]})
    write("dimension_mismatch_ensemble.json", pure_ensemble([np.eye(2)[0], np.eye(2)[1]]))


if __name__ == "__main__":
    main()
