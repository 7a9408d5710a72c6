"""Pauli-string and Pauli-sum algebra with dense realization.

Operators are weighted sums of Pauli words (strings over I, X, Y, Z).
Coefficients stay real; the factors +/-1 and +/-i produced by products and
commutators are folded into a per-string phase, normalized to {1, i} during
canonicalization.  Anti-Hermitian results (e.g. commutators of Hermitian
sums) therefore appear as real-weighted i-phased strings.

The qubit with index 0 is the leftmost letter of a word and the first
factor of the Kronecker product in the dense realization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DimensionError, ValidityError

MERGE_TOL = 1e-14
DENSE_QUBIT_CAP = 12
HERMITIAN_TOL = 1e-12

PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}

# Single-qubit products a*b -> (phase, letter).
_PRODUCT = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("Y", "I"): (1, "Y"), ("Z", "I"): (1, "Z"),
    ("X", "X"): (1, "I"), ("Y", "Y"): (1, "I"), ("Z", "Z"): (1, "I"),
    ("X", "Y"): (1j, "Z"), ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"), ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"), ("X", "Z"): (-1j, "Y"),
}

_PHASES = (1 + 0j, -1 + 0j, 1j, -1j)


@dataclass(frozen=True)
class PauliString:
    """A phased word over {I, X, Y, Z}, one letter per qubit."""

    letters: str
    phase: complex = 1 + 0j

    def __post_init__(self):
        if not self.letters or any(c not in "IXYZ" for c in self.letters):
            raise ValidityError(f"invalid Pauli word {self.letters!r}")
        if self.phase not in _PHASES:
            raise ValidityError(f"phase must be a fourth root of unity, got {self.phase!r}")
        object.__setattr__(self, "phase", complex(self.phase))

    @property
    def qubit_count(self) -> int:
        return len(self.letters)

    def to_dense(self) -> np.ndarray:
        m = np.array([[self.phase]], dtype=complex)
        for c in self.letters:
            m = np.kron(m, PAULI_MATS[c])
        return m

    def __repr__(self):
        pre = {1 + 0j: "", -1 + 0j: "-", 1j: "i*", -1j: "-i*"}[self.phase]
        return f"{pre}{self.letters}"


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Group product of two Pauli strings, phase accumulated."""
    if a.qubit_count != b.qubit_count:
        raise DimensionError(f"qubit counts differ: {a.qubit_count} vs {b.qubit_count}")
    phase = a.phase * b.phase
    out = []
    for ca, cb in zip(a.letters, b.letters):
        p, c = _PRODUCT[(ca, cb)]
        phase *= p
        out.append(c)
    return PauliString("".join(out), phase)


def strings_commute(a: PauliString, b: PauliString) -> bool:
    """True when the words commute (even number of anticommuting sites)."""
    odd = sum(1 for ca, cb in zip(a.letters, b.letters)
              if ca != "I" and cb != "I" and ca != cb)
    return odd % 2 == 0


@dataclass(frozen=True)
class PauliSum:
    """Canonicalized real-weighted sum of phased Pauli strings."""

    qubit_count: int
    terms: tuple  # of (float coefficient, PauliString)

    @staticmethod
    def from_terms(terms, qubit_count: int | None = None) -> "PauliSum":
        """Build and canonicalize from (coefficient, word-or-PauliString) pairs."""
        norm_terms = []
        for coeff, s in terms:
            if isinstance(s, str):
                s = PauliString(s)
            norm_terms.append((coeff, s))
        if qubit_count is None:
            if not norm_terms:
                raise ValidityError("qubit_count required for an empty sum")
            qubit_count = norm_terms[0][1].qubit_count
        for _, s in norm_terms:
            if s.qubit_count != qubit_count:
                raise DimensionError("all terms must share one qubit count")
        return PauliSum(qubit_count, _canonicalize(norm_terms))

    @staticmethod
    def zero(qubit_count: int) -> "PauliSum":
        return PauliSum(qubit_count, ())

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_hermitian(self) -> bool:
        """True when every canonical term carries phase +1 (real weights)."""
        return all(s.phase == 1 for _, s in self.terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if self.qubit_count != other.qubit_count:
            raise DimensionError("qubit counts differ")
        return PauliSum(self.qubit_count, _canonicalize(list(self.terms) + list(other.terms)))

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + other.scale(-1.0)

    def scale(self, factor: float) -> "PauliSum":
        return PauliSum(self.qubit_count,
                        _canonicalize([(factor * c, s) for c, s in self.terms]))

    def __matmul__(self, other: "PauliSum") -> "PauliSum":
        if self.qubit_count != other.qubit_count:
            raise DimensionError("qubit counts differ")
        prods = [(ca * cb, multiply(sa, sb))
                 for ca, sa in self.terms for cb, sb in other.terms]
        return PauliSum(self.qubit_count, _canonicalize(prods))

    def __repr__(self):
        if not self.terms:
            return f"PauliSum(0 on {self.qubit_count} qubits)"
        return " + ".join(f"{c:g}*{s!r}" for c, s in self.terms)


def _canonicalize(terms) -> tuple:
    """Fold signs into coefficients, merge equal (word, phase) pairs, drop tiny terms."""
    acc: dict[tuple[str, complex], float] = {}
    for coeff, s in terms:
        phase, c = s.phase, float(coeff)
        if phase == -1:
            phase, c = 1 + 0j, -c
        elif phase == -1j:
            phase, c = 1j, -c
        key = (s.letters, phase)
        acc[key] = acc.get(key, 0.0) + c
    out = [(c, PauliString(w, p)) for (w, p), c in acc.items() if abs(c) > MERGE_TOL]
    out.sort(key=lambda t: (t[1].letters, t[1].phase != 1))
    return tuple(out)


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """[a, b] = ab - ba as a canonicalized PauliSum."""
    if a.qubit_count != b.qubit_count:
        raise DimensionError("qubit counts differ")
    terms = []
    for ca, sa in a.terms:
        for cb, sb in b.terms:
            if strings_commute(sa, sb):
                continue
            # anticommuting words: ab - ba = 2ab
            terms.append((2.0 * ca * cb, multiply(sa, sb)))
    return PauliSum(a.qubit_count, _canonicalize(terms))


def to_dense(h: PauliSum) -> np.ndarray:
    """Dense complex matrix of a PauliSum (2^n-dimensional)."""
    if h.qubit_count > DENSE_QUBIT_CAP:
        raise CapacityError(
            f"{h.qubit_count} qubits exceeds the dense cap of {DENSE_QUBIT_CAP}")
    dim = 2 ** h.qubit_count
    m = np.zeros((dim, dim), dtype=complex)
    for coeff, s in h.terms:
        m += coeff * s.to_dense()
    return m


def operator_norm(m: np.ndarray) -> float:
    """Largest singular value; via eigvalsh when Hermitian within 1e-12."""
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0.0
    if np.abs(m - m.conj().T).max() <= HERMITIAN_TOL:
        return float(np.abs(np.linalg.eigvalsh(m)).max()) if m.shape[0] else 0.0
    return float(np.linalg.svd(m, compute_uv=False).max())


def parse_pauli_text(text: str) -> PauliSum:
    """Parse the one-term-per-line text format: ``<real coefficient> <word>``.

    Lines starting with ``#`` and blank lines are ignored.  All words must
    have equal length; the result is canonicalized.
    """
    terms = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValidityError(f"line {lineno}: expected '<coefficient> <word>', got {raw!r}")
        try:
            coeff = float(parts[0])
        except ValueError as exc:
            raise ValidityError(f"line {lineno}: bad coefficient {parts[0]!r}") from exc
        word = parts[1].upper()
        if width is None:
            width = len(word)
        elif len(word) != width:
            raise DimensionError(f"line {lineno}: word length {len(word)} != {width}")
        terms.append((coeff, PauliString(word)))
    if not terms:
        raise ValidityError("no terms found in Pauli text")
    return PauliSum.from_terms(terms)


def format_pauli_text(h: PauliSum) -> str:
    """Inverse of parse_pauli_text for Hermitian (phase-free) sums."""
    if not h.is_hermitian():
        raise ValidityError("text format only covers real-weighted, phase-free sums")
    lines = [f"{c:.17g} {s.letters}" for c, s in h.terms]
    return "\n".join(lines) + "\n"


def pauli_sum_from_file(path) -> PauliSum:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_pauli_text(fh.read())
