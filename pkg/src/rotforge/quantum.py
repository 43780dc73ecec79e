"""Dense linear-algebra substrate for few-qubit circuits.

Qubit 0 is the most significant tensor factor throughout, so a two-qubit
basis state ``|ab>`` has index ``2*a + b``.  Everything here is double
precision and dense; the largest register in this package has 5 qubits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

ATOL = 1e-10

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
PAULI_MATRICES = {"I": I2, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}

KET_0 = np.array([1, 0], dtype=complex)
KET_1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / math.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=complex) / math.sqrt(2)


def theta(level: int) -> float:
    """Rotation angle pi / 2**level of the level-``level`` gate."""
    return math.pi / 2.0**level


# ---------------------------------------------------------------------------
# Pauli strings
# ---------------------------------------------------------------------------

# (a, b) -> (phase, c) with sigma_a sigma_b = phase * sigma_c
_PAULI_PRODUCT = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}
_PHASES = (1, -1, 1j, -1j)


@dataclass(frozen=True)
class PauliString:
    """Signed tensor product of single-qubit Paulis, e.g. ``-Y1 X2``.

    ``letters[q]`` acts on qubit ``q``; ``phase`` is one of +1, -1, +i, -i.
    """

    letters: str
    phase: complex = 1

    def __post_init__(self):
        if not self.letters or set(self.letters) - set("IXYZ"):
            raise ValueError(f"bad Pauli letters {self.letters!r}")
        phase = complex(self.phase)
        if not any(abs(phase - p) < 1e-12 for p in _PHASES):
            raise ValueError(f"phase must be one of +-1, +-i, got {self.phase}")
        object.__setattr__(self, "phase", complex(round(phase.real), round(phase.imag)))

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse ``"+XIZ"``, ``"-iYY"`` or plain ``"XZ"``."""
        phase: complex = 1
        s = label.strip()
        if s.startswith("-"):
            phase, s = -1, s[1:]
        elif s.startswith("+"):
            s = s[1:]
        if s.startswith("i"):
            phase, s = phase * 1j, s[1:]
        return cls(s, phase)

    @classmethod
    def single(cls, letter: str, qubit: int, width: int) -> "PauliString":
        letters = ["I"] * width
        letters[qubit] = letter
        return cls("".join(letters))

    @classmethod
    def from_sparse(cls, ops: dict[int, str], width: int, phase: complex = 1) -> "PauliString":
        letters = ["I"] * width
        for q, p in ops.items():
            letters[q] = p
        return cls("".join(letters), phase)

    @property
    def width(self) -> int:
        return len(self.letters)

    @property
    def weight(self) -> int:
        return sum(c != "I" for c in self.letters)

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.width != other.width:
            raise ValueError("width mismatch")
        phase = self.phase * other.phase
        out = []
        for a, b in zip(self.letters, other.letters):
            p, c = _PAULI_PRODUCT[(a, b)]
            phase *= p
            out.append(c)
        return PauliString("".join(out), phase)

    def __neg__(self) -> "PauliString":
        return PauliString(self.letters, -self.phase)

    def commutes_with(self, other: "PauliString") -> bool:
        anti = sum(a != "I" and b != "I" and a != b for a, b in zip(self.letters, other.letters))
        return anti % 2 == 0

    def matrix(self) -> np.ndarray:
        out = np.array([[self.phase]], dtype=complex)
        for c in self.letters:
            out = np.kron(out, PAULI_MATRICES[c])
        return out

    @classmethod
    def from_matrix(cls, m: np.ndarray, atol: float = 1e-9) -> "PauliString":
        """Decompose ``m`` as a signed Pauli string; raises if it is not one."""
        n = int(round(math.log2(m.shape[0])))
        # the Pauli is found letter by letter from the nonzero pattern of m
        letters = []
        col0 = int(np.argmax(np.abs(m[:, 0])))
        # the X-part of the string is the bit pattern of the nonzero row in column 0
        xbits = [(col0 >> (n - 1 - q)) & 1 for q in range(n)]
        # Z-part from the relative sign of column (1<<k) entries against column 0
        zbits = []
        for q in range(n):
            col = 1 << (n - 1 - q)
            row = col0 ^ col
            ratio = m[row, col] / m[col0, 0] if abs(m[col0, 0]) > atol else 0
            zbits.append(0 if abs(ratio - 1) < 1e-6 else 1)
        for x, z in zip(xbits, zbits):
            letters.append({(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}[(x, z)])
        base = cls("".join(letters))
        bm = base.matrix()
        phase = np.trace(bm.conj().T @ m) / m.shape[0]
        if not any(abs(phase - p) < 1e-6 for p in _PHASES):
            raise ValueError("matrix is not a signed Pauli string")
        cand = PauliString(base.letters, phase)
        if not np.allclose(cand.matrix(), m, atol=atol):
            raise ValueError("matrix is not a signed Pauli string")
        return cand

    def conjugate_by(self, unitary: np.ndarray) -> "PauliString":
        """Return ``U P U^dagger``; raises ValueError if the image is not Pauli."""
        return PauliString.from_matrix(unitary @ self.matrix() @ unitary.conj().T)

    def __str__(self) -> str:
        sign = {1: "+", -1: "-", 1j: "+i", -1j: "-i"}[self.phase]
        return sign + self.letters


# ---------------------------------------------------------------------------
# Tensor plumbing
# ---------------------------------------------------------------------------


def apply_to_tensor(op: np.ndarray, psi: np.ndarray, support: Sequence[int], n: int) -> np.ndarray:
    """Apply a ``2^k`` operator on ``support`` to the leading n axes of ``psi``.

    ``psi`` has shape ``(2,)*n + rest``; the trailing axes are carried along.
    """
    k = len(support)
    opt = op.reshape((2,) * (2 * k))
    out = np.tensordot(opt, psi, axes=(list(range(k, 2 * k)), list(support)))
    return np.moveaxis(out, list(range(k)), list(support))


def embed(op: np.ndarray, support: Sequence[int], n: int) -> np.ndarray:
    """Full ``2^n`` matrix of ``op`` acting on ``support``."""
    dim = 2**n
    eye = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    return apply_to_tensor(op, eye, support, n).reshape(dim, dim)


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def equal_up_to_phase(u: np.ndarray, v: np.ndarray) -> float:
    """Deviation ``1 - |tr(U^dagger V)|/dim``, zero iff V = e^{i phi} U for unitaries."""
    return float(1.0 - abs(np.trace(u.conj().T @ v)) / u.shape[0])


# ---------------------------------------------------------------------------
# Gates
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Gate:
    unitary: np.ndarray
    support: tuple[int, ...] = (0,)
    name: str = ""

    def __post_init__(self):
        u = np.array(self.unitary, dtype=complex)
        if u.shape != (2 ** len(self.support),) * 2:
            raise ValueError(f"unitary shape {u.shape} does not match support {self.support}")
        if len(set(self.support)) != len(self.support):
            raise ValueError("repeated qubit in support")
        if not np.allclose(u @ u.conj().T, np.eye(u.shape[0]), atol=1e-12):
            raise ValueError(f"gate {self.name or '?'} is not unitary")
        u.setflags(write=False)
        object.__setattr__(self, "unitary", u)
        object.__setattr__(self, "support", tuple(int(q) for q in self.support))

    def on(self, *qubits: int) -> "Gate":
        return Gate(self.unitary, tuple(qubits), self.name)

    @property
    def dagger(self) -> "Gate":
        return Gate(self.unitary.conj().T, self.support, self.name + "^dag")

    def full(self, n: int) -> np.ndarray:
        return embed(self.unitary, self.support, n)


def rot_y(angle: float) -> Gate:
    """``exp(i * angle * Y)``."""
    if not math.isfinite(angle):
        raise ValueError("angle must be finite")
    c, s = math.cos(angle), math.sin(angle)
    return Gate(np.array([[c, s], [-s, c]], dtype=complex), (0,), f"Ry({angle:.6g})")


def r_gate(level: int) -> Gate:
    """R_level = exp(i pi Y / 2^level)."""
    g = rot_y(theta(level))
    return Gate(g.unitary, (0,), f"R{level}")


def h_operator(level: int) -> np.ndarray:
    """Hermitian unitary R_{level-1} X = cos(t) X + sin(t) Z with t = theta(level-1)."""
    return rot_y(theta(level - 1)).unitary @ PAULI_X


def magic_ket(level: int) -> np.ndarray:
    """|M_level> = R_level |+>."""
    return r_gate(level).unitary @ KET_PLUS


def magic_bar_ket(level: int) -> np.ndarray:
    """|Mbar_level> = R_level |->, the orthogonal partner."""
    return r_gate(level).unitary @ KET_MINUS


CX = Gate(
    np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    (0, 1),
    "CX",
)


# ---------------------------------------------------------------------------
# Density operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Possibly subnormalised density matrix; trace < 1 records postselection."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        dim = m.shape[0]
        if m.shape != (dim, dim) or dim & (dim - 1) or dim < 2:
            raise ValueError(f"bad density matrix shape {m.shape}")
        if not np.allclose(m, m.conj().T, atol=ATOL):
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(m).real
        if tr > 1 + ATOL or tr < -ATOL:
            raise ValueError(f"trace {tr} outside [0, 1]")
        if np.linalg.eigvalsh((m + m.conj().T) / 2).min() < -ATOL:
            raise ValueError("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0]).bit_length() - 1

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @classmethod
    def pure(cls, psi: np.ndarray) -> "DensityOperator":
        psi = np.asarray(psi, dtype=complex)
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def product(cls, states: Sequence["DensityOperator"]) -> "DensityOperator":
        return cls(kron_all([s.matrix for s in states]))

    def normalized(self) -> "DensityOperator":
        tr = self.trace
        if tr <= 0:
            raise ValueError("cannot normalise a zero operator")
        return DensityOperator(self.matrix / tr)


def diagonal_noisy_magic(level: int, eps: float) -> DensityOperator:
    """rho_{level,eps} = (1-eps)|M><M| + eps|Mbar><Mbar|."""
    m, mb = magic_ket(level), magic_bar_ket(level)
    return DensityOperator((1 - eps) * np.outer(m, m.conj()) + eps * np.outer(mb, mb.conj()))


def apply_gate(rho: DensityOperator, gate: Gate) -> DensityOperator:
    n = rho.n
    if max(gate.support) >= n or min(gate.support) < 0:
        raise ValueError(f"gate support {gate.support} outside {n}-qubit register")
    u = gate.full(n)
    return DensityOperator(u @ rho.matrix @ u.conj().T)


def projector(observable: str | PauliString, outcome: int) -> np.ndarray:
    """Single-qubit projector onto the ``outcome`` (+1/-1) eigenspace."""
    if isinstance(observable, PauliString):
        if observable.width != 1 or observable.phase != 1 or observable.letters == "I":
            raise ValueError("observable must be an unsigned single-qubit X, Y or Z")
        observable = observable.letters
    if observable not in ("X", "Y", "Z"):
        raise ValueError("observable must be X, Y or Z")
    if outcome not in (1, -1):
        raise ValueError("outcome must be +1 or -1")
    return (I2 + outcome * PAULI_MATRICES[observable]) / 2


def postselect(rho: DensityOperator, qubit: int, observable: str | PauliString, outcome: int) -> DensityOperator:
    """P rho P for the outcome projector P; deliberately not renormalised."""
    if not 0 <= qubit < rho.n:
        raise ValueError("qubit out of range")
    p = embed(projector(observable, outcome), (qubit,), rho.n)
    return DensityOperator(p @ rho.matrix @ p)


def partial_trace_matrix(m: np.ndarray, drop: int | Sequence[int]) -> np.ndarray:
    """Trace out the qubits in ``drop`` from a square (not necessarily Hermitian) matrix."""
    drop = [drop] if isinstance(drop, int) else list(drop)
    n = int(m.shape[0]).bit_length() - 1
    keep = [q for q in range(n) if q not in drop]
    t = m.reshape((2,) * (2 * n))
    # contract ket axis q with bra axis n+q for every dropped qubit
    letters = "abcdefghijklmnopqrstuvwxyz"
    ket = [letters[q] for q in range(n)]
    bra = [letters[n + q] for q in range(n)]
    for q in drop:
        bra[q] = ket[q]
    out = "".join(ket[q] for q in keep) + "".join(bra[q] for q in keep)
    r = np.einsum("".join(ket) + "".join(bra) + "->" + out, t)
    d = 2 ** len(keep)
    return r.reshape(d, d)


def partial_trace(rho: DensityOperator, drop: int) -> DensityOperator:
    if rho.n < 2:
        raise ValueError("need at least two qubits")
    if not 0 <= drop < rho.n:
        raise ValueError("qubit out of range")
    return DensityOperator(partial_trace_matrix(rho.matrix, drop))


def trace_norm(m: np.ndarray) -> float:
    return float(np.linalg.svd(m, compute_uv=False).sum())


def trace_distance(rho: DensityOperator | np.ndarray, sigma: DensityOperator | np.ndarray) -> float:
    a = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho)
    b = sigma.matrix if isinstance(sigma, DensityOperator) else np.asarray(sigma)
    if a.shape != b.shape:
        raise ValueError("dimension mismatch")
    return 0.5 * trace_norm(a - b)


def diagonal_error(rho: DensityOperator, psi: np.ndarray) -> float:
    """1 - <psi|rho|psi>; equals the trace distance when rho is diagonal in psi's basis."""
    psi = np.asarray(psi, dtype=complex)
    return float(1.0 - np.real(psi.conj() @ rho.matrix @ psi))


# ---------------------------------------------------------------------------
# Noisy rotations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NoisyRotationChannel:
    """rho -> (1-eta) U rho U^dag + eta Y U rho U^dag Y with U = exp(i angle Y)."""

    angle: float
    eta: float

    def __post_init__(self):
        if not 0 <= self.eta <= 0.5:
            raise ValueError("eta must lie in [0, 1/2]")

    def kraus(self) -> list[np.ndarray]:
        u = rot_y(self.angle).unitary
        return [math.sqrt(1 - self.eta) * u, math.sqrt(self.eta) * PAULI_Y @ u]

    def apply(self, rho: DensityOperator, qubit: int = 0) -> DensityOperator:
        n = rho.n
        out = sum(embed(k, (qubit,), n) @ rho.matrix @ embed(k, (qubit,), n).conj().T for k in self.kraus())
        return DensityOperator(out)

    def pauli_weights(self) -> dict[str, float]:
        """Pauli-channel weights of (ideal)^-1 composed with this channel."""
        u = rot_y(self.angle).unitary
        weights = {}
        for name, p in PAULI_MATRICES.items():
            # chi-matrix diagonal: sum_k |tr(P^dag U^dag K)|^2 / 4
            weights[name] = sum(abs(np.trace(p.conj().T @ u.conj().T @ k)) ** 2 for k in self.kraus()) / 4
        return weights

    def diamond_distance_to_ideal(self) -> float:
        """Exact for Pauli-diagonal noise: the total non-identity Pauli weight."""
        w = self.pauli_weights()
        off = {k: v for k, v in w.items() if k != "I"}
        return float(sum(off.values()))
