#!/usr/bin/env python3
# Copyright 2026 The Qracle Authors.
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
"""Regenerates data/h2_sto3g.txt.

Needs pyscf. For each bond length the STO-3G integrals are mapped to a
4-qubit operator (interleaved spin orbitals, Jordan-Wigner with the Z tail on
higher sites) and decomposed into Pauli strings via Tr(P H) / 2^n.
"""
import argparse
import functools
import itertools

import numpy as np
from pyscf import ao2mo, gto, scf

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}
N_QUBITS = 4


def kron_all(ms):
    return functools.reduce(np.kron, ms)


def annihilator(j, n):
    ops = [I2] * j + [(X + 1j * Y) / 2] + [Z] * (n - j - 1)
    return kron_all(ops)


def qubit_hamiltonian(bond):
    mol = gto.M(atom=f"H 0 0 0; H 0 0 {bond}", basis="sto-3g", unit="Angstrom",
                verbose=0)
    mf = scf.RHF(mol).run()
    c = mf.mo_coeff
    h1 = c.T @ mf.get_hcore() @ c
    eri = ao2mo.restore(1, ao2mo.kernel(mol, c), c.shape[1])  # chemist (pq|rs)
    n_spatial = h1.shape[0]
    n = 2 * n_spatial
    a = [annihilator(j, n) for j in range(n)]
    ad = [m.conj().T for m in a]
    h = mol.energy_nuc() * np.eye(2**n, dtype=complex)
    for p, q in itertools.product(range(n), repeat=2):
        if p % 2 == q % 2:
            h += h1[p // 2, q // 2] * ad[p] @ a[q]
    for p, q, r, s in itertools.product(range(n), repeat=4):
        if p % 2 != s % 2 or q % 2 != r % 2:
            continue
        v = eri[p // 2, s // 2, q // 2, r // 2]
        if v != 0.0:
            h += 0.5 * v * ad[p] @ ad[q] @ a[r] @ a[s]
    return h


def decompose(h):
    terms = []
    for letters in itertools.product("IXYZ", repeat=N_QUBITS):
        p = kron_all([PAULI[c] for c in letters])
        coeff = np.trace(p @ h) / 2**N_QUBITS
        if abs(coeff) > 1e-12:
            terms.append(("".join(letters), coeff))
    return terms


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data/h2_sto3g.txt")
    args = ap.parse_args()
    with open(args.out, "w") as f:
        f.write("# H2 STO-3G qubit Hamiltonians (Hartree), 4 qubits\n")
        for k in range(150):
            bond = round(0.5 + 0.03 * k, 2)
            h = qubit_hamiltonian(bond)
            e0 = np.linalg.eigvalsh(h)[0]
            f.write(f"\n# bond_length={bond:.2f}\n")
            f.write(f"# ground_energy={e0:.12f}\n")
            for letters, c in decompose(h):
                f.write(f"{c.real:+.15e}{c.imag:+.15e}i {letters}\n")


if __name__ == "__main__":
    main()
