"""Built-in benchmark Hamiltonian pairs.

Molecular problem Hamiltonians are entered coefficient-for-coefficient
from their printed minimal-basis encodings; every preset drives from the
uniform transverse-field mixer unless stated otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LookupError_
from .pauli import PauliSum


@dataclass(frozen=True)
class Preset:
    name: str
    h1: PauliSum
    h2: PauliSum
    default_T: float
    notes: str


def _word(n: int, **at) -> str:
    letters = ["I"] * n
    for idx, c in at.items():
        letters[int(idx)] = c
    return "".join(letters)


def _uniform_x(n: int) -> PauliSum:
    return PauliSum.from_terms(
        [(1.0, "".join("X" if k == i else "I" for k in range(n))) for i in range(n)])


def _ring_zz(n: int, coeff: float = 1.0) -> list:
    return [(coeff, "".join("Z" if k in (i, (i + 1) % n) else "I" for k in range(n)))
            for i in range(n)]


def _tfim(n: int, zz: float, z: float, x: float) -> PauliSum:
    terms = list(_ring_zz(n, zz))
    for i in range(n):
        terms.append((z, "".join("Z" if k == i else "I" for k in range(n))))
        terms.append((x, "".join("X" if k == i else "I" for k in range(n))))
    return PauliSum.from_terms(terms)


_H2_JW = PauliSum.from_terms([
    (-0.106, "IIII"),
    (0.045, "XYYX"), (-0.045, "XXYY"), (0.045, "YXXY"), (-0.045, "YYXX"),
    (0.17, "ZIII"), (0.17, "IZII"),
    (0.168, "ZZII"),
    (0.12, "ZIZI"), (0.12, "IZIZ"),
    (0.166, "ZIIZ"), (0.166, "IZZI"),
    (-0.22, "IIZI"), (-0.22, "IIIZ"),
    (0.174, "IIZZ"),
])

_H2_BK = PauliSum.from_terms([
    (-0.106, "IIII"),
    (0.045, "XZXI"), (0.045, "XZXZ"), (0.045, "YZYI"), (0.045, "YZYZ"),
    (-0.22, "IZZZ"), (-0.22, "IIZI"),
    (0.17, "ZIII"), (0.17, "ZZII"),
    (0.166, "ZZZI"), (0.166, "ZZZZ"),
    (0.12, "ZIZI"), (0.12, "ZIZZ"),
    (0.168, "IZII"),
    (0.174, "IZIZ"),
])

_H2_CHECKSUM = PauliSum.from_terms([
    (-0.106, "III"),
    (0.091, "XYY"), (-0.091, "YYX"),
    (0.17, "ZII"), (0.17, "IZI"),
    (0.342, "ZZI"),
    (0.24, "ZIZ"),
    (0.331, "IZZ"),
    (-0.22, "ZZZ"), (-0.22, "IIZ"),
])

_H2_UPDOWN = PauliSum.from_terms([
    (-0.347, "II"),
    (0.182, "XX"),
    (0.011, "ZZ"),
    (0.39, "ZI"), (0.39, "IZ"),
])

PRESETS = {
    "two-level": Preset(
        "two-level", PauliSum.from_terms([(1.0, "X")]), PauliSum.from_terms([(1.0, "Z")]),
        100.0, "single-qubit X -> Z ramp, the canonical scaling benchmark"),
    "ising8": Preset(
        "ising8", _uniform_x(8), PauliSum.from_terms(_ring_zz(8)),
        100.0, "8-qubit periodic antiferromagnetic Ising ring"),
    "tfim6": Preset(
        "tfim6", _uniform_x(6), _tfim(6, 1.0, 0.8, 0.9),
        100.0, "6-qubit periodic TFIM, couplings 1.0 / 0.8 / 0.9"),
    "h2-jw": Preset(
        "h2-jw", _uniform_x(4), _H2_JW,
        200.0, "H2 molecule, minimal basis, Jordan-Wigner encoding (4 qubits)"),
    "h2-bk": Preset(
        "h2-bk", _uniform_x(4), _H2_BK,
        200.0, "H2 molecule, minimal basis, Bravyi-Kitaev encoding (4 qubits)"),
    "h2-checksum": Preset(
        "h2-checksum", _uniform_x(3), _H2_CHECKSUM,
        200.0, "H2 molecule, even-weight checksum code (3 qubits)"),
    "h2-updown": Preset(
        "h2-updown", _uniform_x(2), _H2_UPDOWN,
        200.0, "H2 molecule, odd-weight checksum on both spin sectors (2 qubits)"),
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise LookupError_(f"unknown preset {name!r}; known: {known}") from None


def describe(preset: Preset) -> str:
    lines = [f"{preset.name}: {preset.notes}",
             f"  qubits: {preset.h1.qubit_count}   default T: {preset.default_T:g}",
             "  H1 terms:"]
    lines += [f"    {c:+.6g} {s.letters}" for c, s in preset.h1.terms]
    lines.append("  H2 terms:")
    lines += [f"    {c:+.6g} {s.letters}" for c, s in preset.h2.terms]
    return "\n".join(lines)
