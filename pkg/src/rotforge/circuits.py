"""Encoder, distillation circuits (uncompressed DP_l and compressed MEK_l) and
the state-injection gadget.

Register layout is ``(c, 1, 2, 3, 4)`` on indices ``0..4``.  Qubit ``c`` starts
in ``|+>``, qubits 1 and 2 in ``|0>`` and qubits 3 and 4 carry the two noisy
``|M_l>`` inputs, which are also the two outputs.

Reconstructed gate lists, in time order (``CH_j`` is the controlled Hadamard
``R3^dag_j, CX_{c,j}, R3_j`` with both R3 gates noisy, and the pivot is
``X_4`` followed by ``R_{l-1}`` on qubit 4)::

    DP_l : E, CH_1..CH_4, E^dag, pivot, E, CH_1..CH_4, E^dag, measure
    MEK_l: E, CH_3, CH_4, CX_{c,1}, E^dag, pivot, E, R2^dag_1, CX_{c,1}, R2_1,
           CH_3, CH_4, E^dag, measure

MEK_l follows from DP_l by cancelling the pair of CH_2 gates (the pivot block
acts trivially on qubits c and 2) and by pushing both R3 pairs on qubit 1
through the pivot block, which anticommutes with Y_1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .quantum import (
    CX,
    I2,
    KET_0,
    KET_PLUS,
    PAULI_X,
    PAULI_Y,
    PauliString,
    Gate,
    embed,
    equal_up_to_phase,
    h_operator,
    kron_all,
    magic_ket,
    r_gate,
    rot_y,
    theta,
)

N_QUBITS = 5
QUBIT_LABELS = ("c", "1", "2", "3", "4")
C, Q1, Q2, Q3, Q4 = range(5)

# Generator images (Z_i, X_i) -> (E Z_i E^dag, E X_i E^dag) on qubits 1..4.
ENCODER_TABLE = {
    "Z1": "ZZZZ", "X1": "XIXX",
    "Z2": "XXXX", "X2": "IZII",
    "Z3": "ZIIZ", "X3": "XIXI",
    "Z4": "XIIX", "X4": "ZIZI",
}


@dataclass(frozen=True)
class CliffordSpec:
    """Conjugation table of a Clifford on ``width`` qubits (generators to images)."""

    images: dict[str, PauliString]
    width: int

    @classmethod
    def from_labels(cls, table: dict[str, str]) -> "CliffordSpec":
        width = len(next(iter(table.values())))
        return cls({k: PauliString.from_label(v) for k, v in table.items()}, width)

    def generator(self, key: str) -> PauliString:
        return PauliString.single(key[0], int(key[1:]) - 1, self.width)

    def check_commutation(self) -> bool:
        keys = sorted(self.images)
        for a in keys:
            for b in keys:
                if self.generator(a).commutes_with(self.generator(b)) != self.images[a].commutes_with(self.images[b]):
                    return False
        return True


def clifford_from_table(spec: CliffordSpec) -> np.ndarray:
    """Unitary U (up to global phase) with U P U^dag = images[P] for every generator."""
    n = spec.width
    if not spec.check_commutation():
        raise ValueError("table does not preserve commutation relations")
    dim = 2**n
    # U|0...0> is the joint +1 eigenvector of the Z-images
    proj = np.eye(dim, dtype=complex)
    for q in range(n):
        proj = proj @ (np.eye(dim) + spec.images[f"Z{q + 1}"].matrix()) / 2
    col = int(np.argmax(np.linalg.norm(proj, axis=0)))
    v0 = proj[:, col] / np.linalg.norm(proj[:, col])
    u = np.zeros((dim, dim), dtype=complex)
    xs = [spec.images[f"X{q + 1}"].matrix() for q in range(n)]
    for b in range(dim):
        v = v0
        for q in range(n):
            if (b >> (n - 1 - q)) & 1:
                v = xs[q] @ v
        u[:, b] = v
    return u


ENCODER_SPEC = CliffordSpec.from_labels(ENCODER_TABLE)


def build_encoder() -> tuple[CliffordSpec, Gate]:
    """The 4-qubit encoder as (conjugation table, gate on qubits 1..4)."""
    u = clifford_from_table(ENCODER_SPEC)
    return ENCODER_SPEC, Gate(u, (Q1, Q2, Q3, Q4), "E")


# ---------------------------------------------------------------------------
# Circuit elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Prep:
    qubit: int
    label: str  # "+", "0" or "M" (noisy magic input)


@dataclass(frozen=True)
class Clifford:
    gate: Gate


@dataclass(frozen=True)
class NoisyR3:
    """R3 or R3^dag by injection; a failed injection appends a Y."""

    index: int
    gate: Gate


@dataclass(frozen=True)
class Pivot:
    """H_l = R_{l-1} X on one qubit; a failed R_{l-1} appends a Y."""

    gate: Gate


@dataclass(frozen=True)
class Measure:
    qubit: int
    basis: str
    outcome: int = 1


Element = Prep | Clifford | NoisyR3 | Pivot | Measure


@dataclass(frozen=True, eq=False)
class CompiledStep:
    kind: str  # "u", "site", "pivot"
    unitary: np.ndarray
    qubit: int = -1
    index: int = -1


@dataclass(frozen=True, eq=False)
class Circuit:
    name: str
    level: int
    elements: tuple
    n_qubits: int = N_QUBITS
    outputs: tuple[int, int] = (Q3, Q4)

    @property
    def noisy_sites(self) -> list[NoisyR3]:
        return [e for e in self.elements if isinstance(e, NoisyR3)]

    @property
    def pivots(self) -> list[Pivot]:
        return [e for e in self.elements if isinstance(e, Pivot)]

    @property
    def preps(self) -> list[Prep]:
        return [e for e in self.elements if isinstance(e, Prep)]

    @property
    def measurements(self) -> list[Measure]:
        return [e for e in self.elements if isinstance(e, Measure)]

    @property
    def n_sites(self) -> int:
        return len(self.noisy_sites)

    @cached_property
    def steps(self) -> tuple[CompiledStep, ...]:
        """Gates embedded in the full register, consecutive ideal gates fused."""
        out: list[CompiledStep] = []
        pending = None
        for e in self.elements:
            if isinstance(e, Clifford):
                u = e.gate.full(self.n_qubits)
                pending = u if pending is None else u @ pending
                continue
            if isinstance(e, (NoisyR3, Pivot)):
                if pending is not None:
                    out.append(CompiledStep("u", pending))
                    pending = None
                kind = "site" if isinstance(e, NoisyR3) else "pivot"
                out.append(
                    CompiledStep(
                        kind,
                        e.gate.full(self.n_qubits),
                        e.gate.support[0],
                        e.index if isinstance(e, NoisyR3) else -1,
                    )
                )
        if pending is not None:
            out.append(CompiledStep("u", pending))
        return tuple(out)

    @cached_property
    def y_errors(self) -> dict[int, np.ndarray]:
        return {q: embed(PAULI_Y, (q,), self.n_qubits) for q in range(self.n_qubits)}

    def ideal_unitary(self) -> np.ndarray:
        u = np.eye(2**self.n_qubits, dtype=complex)
        for s in self.steps:
            u = s.unitary @ u
        return u

    def accepted_kraus(self) -> np.ndarray:
        """Zero-noise Kraus operator on the output pair after all postselections."""
        return accepted_kraus(self.ideal_unitary(), self)


_PREP_KETS = {"+": KET_PLUS, "0": KET_0}
_MEAS_KETS = {("X", 1): KET_PLUS, ("Z", 1): KET_0}


def accepted_kraus(unitary: np.ndarray, circuit: Circuit) -> np.ndarray:
    """Contract ancilla preparations and postselected measurements into a 4x4 map."""
    n = circuit.n_qubits
    t = unitary.reshape((2,) * (2 * n))
    ancillas = [p.qubit for p in circuit.preps if p.label != "M"]
    for p in sorted(circuit.preps, key=lambda p: -p.qubit):
        if p.label == "M":
            continue
        t = np.tensordot(t, _PREP_KETS[p.label], axes=([n + p.qubit], [0]))
    meas = {m.qubit: m for m in circuit.measurements}
    for q in sorted(ancillas, reverse=True):
        m = meas[q]
        t = np.tensordot(_MEAS_KETS[(m.basis, m.outcome)].conj(), t, axes=([0], [q]))
    return t.reshape(4, 4)


def _controlled_h(target: int, first_index: int) -> list:
    r3 = r_gate(3)
    return [
        NoisyR3(first_index, r3.dagger.on(target)),
        Clifford(CX.on(C, target)),
        NoisyR3(first_index + 1, r3.on(target)),
    ]


def _pivot(level: int, sign: int = 1) -> list:
    # sign=-1 flips the rotation angle; only used to exercise verification
    r = rot_y(sign * theta(level - 1))
    return [Pivot(Gate(r.unitary @ PAULI_X, (Q4,), f"H{level}"))]


def _preps() -> list:
    return [Prep(C, "+"), Prep(Q1, "0"), Prep(Q2, "0"), Prep(Q3, "M"), Prep(Q4, "M")]


def _measures() -> list:
    return [Measure(C, "X"), Measure(Q1, "Z"), Measure(Q2, "Z")]


def _check_level(level: int) -> None:
    if level < 3:
        raise ValueError("distillation circuits need level >= 3")


def build_dpl_circuit(level: int, pivot_sign: int = 1) -> Circuit:
    """Uncompressed DP_l: 16 noisy R3 sites and one pivot (no grey-box checks)."""
    _check_level(level)
    _, enc = build_encoder()
    els: list = _preps() + [Clifford(enc)]
    idx = 0
    for q in (Q1, Q2, Q3, Q4):
        els += _controlled_h(q, idx)
        idx += 2
    els += [Clifford(enc.dagger)] + _pivot(level, pivot_sign) + [Clifford(enc)]
    for q in (Q1, Q2, Q3, Q4):
        els += _controlled_h(q, idx)
        idx += 2
    els += [Clifford(enc.dagger)] + _measures()
    return Circuit(f"DP_{level}", level, tuple(els))


def build_mekl_circuit(level: int, pivot_sign: int = 1) -> Circuit:
    """Compressed MEK_l: 8 noisy R3 sites (all on qubits 3, 4) and one pivot."""
    _check_level(level)
    _, enc = build_encoder()
    r2 = r_gate(2)
    els: list = _preps() + [Clifford(enc)]
    els += _controlled_h(Q3, 0) + _controlled_h(Q4, 2)
    els += [Clifford(CX.on(C, Q1)), Clifford(enc.dagger)]
    els += _pivot(level, pivot_sign)
    els += [Clifford(enc), Clifford(r2.dagger.on(Q1)), Clifford(CX.on(C, Q1)), Clifford(r2.on(Q1))]
    els += _controlled_h(Q3, 4) + _controlled_h(Q4, 6)
    els += [Clifford(enc.dagger)] + _measures()
    return Circuit(f"MEK_{level}", level, tuple(els))


# ---------------------------------------------------------------------------
# Verification of the compression identities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    passed: bool
    deviation: float


def _check(dev: float, tol: float = 1e-10) -> Check:
    return Check(bool(dev < tol), float(dev))


def _max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a)))


def _expm_pauli(angle: float, pauli: PauliString) -> np.ndarray:
    """exp(i angle P) for a Hermitian Pauli string P."""
    p = pauli.matrix()
    return math.cos(angle) * np.eye(p.shape[0]) + 1j * math.sin(angle) * p


def pivot_block(level: int, pivot_sign: int = 1) -> np.ndarray:
    """V = E exp(i theta_{l-1} Y_4) X_4 E^dag on qubits 1..4."""
    _, enc = build_encoder()
    e = enc.unitary
    r = rot_y(pivot_sign * theta(level - 1)).unitary
    h4 = kron_all([I2, I2, I2, r @ PAULI_X])
    return e @ h4 @ e.conj().T


def pivot_block_formula(level: int) -> np.ndarray:
    """exp(-i theta_{l-1} Y1 Z3 X4) Z1 Z3."""
    return _expm_pauli(-theta(level - 1), PauliString("YIZX")) @ PauliString("ZIZI").matrix()


def kraus_distance(k1: np.ndarray, k2: np.ndarray) -> float:
    """Entrywise distance between single-Kraus channels after phase alignment."""
    ov = np.trace(k2.conj().T @ k1)
    phase = ov / abs(ov) if abs(ov) > 1e-15 else 1.0
    return _max_abs(k1 - phase * k2)


def verify_compression_identities(level: int, pivot_sign: int = 1) -> dict[str, Check]:
    """Measured deviations of the V form, V/Q anticommutation and DP == MEK."""
    _check_level(level)
    v = pivot_block(level, pivot_sign)
    out = {"v_form": _check(_max_abs(v - pivot_block_formula(level)))}
    y1 = PauliString("YIII").matrix()
    out["v_anticommute"] = _check(_max_abs(v @ y1 + y1 @ v))
    # the same fact in rotated form: exp(i t3 Y1) V exp(-i t3 Y1) = exp(i t2 Y1) V
    r3y = _expm_pauli(theta(3), PauliString("YIII"))
    r2y = _expm_pauli(theta(2), PauliString("YIII"))
    out["v_rotation"] = _check(_max_abs(r3y @ v @ r3y.conj().T - r2y @ v))
    # Q on (c, 1, 2, 3, 4) = CX_{c1} R2^dag_1 V CX_{c1}
    cx = CX.on(C, Q1).full(N_QUBITS)
    v5 = embed(v, (Q1, Q2, Q3, Q4), N_QUBITS)
    r2d = embed(r_gate(2).dagger.unitary, (Q1,), N_QUBITS)
    q = cx @ r2d @ v5 @ cx
    y1_5 = embed(PAULI_Y, (Q1,), N_QUBITS)
    out["q_anticommute"] = _check(_max_abs(q @ y1_5 + y1_5 @ q))
    dp = build_dpl_circuit(level, pivot_sign)
    mek = build_mekl_circuit(level, pivot_sign)
    out["d_equals_e"] = _check(
        max(
            kraus_distance(dp.accepted_kraus(), mek.accepted_kraus()),
            equal_up_to_phase(dp.ideal_unitary(), mek.ideal_unitary()),
        )
    )
    return out


def parity_projector(level: int) -> np.ndarray:
    """(I + H_l (x) H_l) / 2 on the output pair."""
    h = h_operator(level)
    return (np.eye(4) + np.kron(h, h)) / 2


def transversal_hadamard_table() -> dict[str, PauliString]:
    """Conjugation action of E^dag H^{(x)4} E on the eight single-qubit generators."""
    _, enc = build_encoder()
    e = enc.unitary
    hh = kron_all([np.array([[1, 1], [1, -1]]) / math.sqrt(2)] * 4)
    s = e.conj().T @ hh @ e
    out = {}
    for q in range(4):
        for letter in "ZX":
            out[f"{letter}{q + 1}"] = PauliString.single(letter, q, 4).conjugate_by(s)
    return out


# ---------------------------------------------------------------------------
# State injection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InjectionPlan:
    level: int
    consumption: tuple[tuple[int, float], ...] = field(default=())

    @property
    def total(self) -> float:
        return sum(c for _, c in self.consumption)


def injection_plan(level: int) -> InjectionPlan:
    """Expected magic states consumed by one R_level injection with corrections."""
    if level < 3:
        raise ValueError("injection needs level >= 3")
    return InjectionPlan(level, tuple((k, 2.0 ** (k - level)) for k in range(level, 2, -1)))


def mekl_cocktail(level: int) -> dict[int, float]:
    """Per-attempt raw-input multiset of one MEK_l round (pivot expanded)."""
    out = {3: 8.0}
    out[level] = out.get(level, 0.0) + 2.0
    if level - 1 >= 3:
        for k, c in injection_plan(level - 1).consumption:
            out[k] = out.get(k, 0.0) + c
    return out


def dpl_cocktail(level: int) -> dict[int, float]:
    out = mekl_cocktail(level)
    out[3] += 8.0
    return out


# Gadget: the data qubit controls (in the Y basis) an X on the magic qubit,
# which is then measured in Y.  Conjugating the Z-rotation teleportation
# gadget by exp(i pi/4 X) maps Z -> Y and leaves |+> and X fixed.


def _y_basis_cx() -> np.ndarray:
    g = math.cos(math.pi / 4) * I2 + 1j * math.sin(math.pi / 4) * PAULI_X
    gg = np.kron(g, g)
    return gg @ CX.unitary @ gg.conj().T


def inject(level: int, data: np.ndarray, magic: np.ndarray | None = None) -> dict[int, tuple[float, np.ndarray]]:
    """Run the injection gadget on a data ket.

    Returns ``{outcome: (probability, normalised data ket)}`` for Y outcomes
    +1 and -1.  One outcome applies R_level, the other R_level^dag.
    """
    magic = magic_ket(level) if magic is None else magic
    psi = _y_basis_cx() @ np.kron(data, magic)
    out = {}
    for outcome in (1, -1):
        ket = np.array([1, 1j * outcome], dtype=complex) / math.sqrt(2)
        v = np.tensordot(psi.reshape(2, 2), ket.conj(), axes=([1], [0]))
        p = float(np.vdot(v, v).real)
        out[outcome] = (p, v / math.sqrt(p) if p > 0 else v)
    return out


def injected_outcomes(level: int) -> dict[int, str]:
    """Which Y outcome of the gadget yields R_l and which yields R_l^dag."""
    data = np.array([0.6, 0.8j], dtype=complex)
    r = r_gate(level).unitary
    labels = {}
    for outcome, (_, v) in inject(level, data).items():
        labels[outcome] = "R" if abs(abs(np.vdot(r @ data, v)) - 1) < 1e-10 else "Rdag"
    return labels


def inject_with_corrections(level: int, data: np.ndarray, rng: np.random.Generator) -> tuple[np.ndarray, list[int]]:
    """Repeat-until-success injection of R_level; returns the final ket and the levels used."""
    used = []
    target = level
    v = data
    while target >= 3:
        outcomes = inject(target, v)
        labels = injected_outcomes(target)
        used.append(target)
        probs = [outcomes[1][0], outcomes[-1][0]]
        pick = 1 if rng.random() < probs[0] else -1
        v = outcomes[pick][1]
        if labels[pick] == "R":
            return v, used
        target -= 1
    # R_2 and below are Clifford corrections applied perfectly
    v = r_gate(target).unitary @ v
    return v, used
