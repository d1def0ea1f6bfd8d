"""Periods of the holomorphic 2-form on root classes, and Weyl chambers.

For E_k the period (divided by 2 pi i) is fixed on a generating set of the
root lattice and extended by Z-linearity:

    E_{i+1} - E_i  ->  a_{i+1} - a_i
    P = H - E1 - E2 - X  ->  a1 + a2
    Q (E6)  ->  a2 + a3 + a4 + a5 - a0
    R (E7)  ->  a3 + a4 + a5 + a6 - a0
    S (E8)  ->  a2 + ... + a7 - a0

Arithmetic is generic: Fraction moduli give exact periods.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import lattice
from .dk_sphere import ChamberError, d_chamber_walls
from .lattice import DivClass

__all__ = [
    "ModuliE",
    "ChamberReport",
    "generator_classes",
    "generator_periods",
    "period",
    "period_vector",
    "decomposition_identities",
    "chamber_check",
    "simple_root_areas",
    "normalized_root_basis",
]


@dataclass(frozen=True)
class ModuliE:
    k: int
    a: tuple
    a0: object = 0

    def __post_init__(self):
        if self.k not in (6, 7, 8):
            raise ValueError(f"E_k needs k in (6, 7, 8), got {self.k}")
        a = tuple(self.a)
        if len(a) != self.k - 1:
            raise ValueError(f"E_{self.k} needs {self.k - 1} parameters a1..a{self.k - 1}, got {len(a)}")
        if len(set(a)) != len(a):
            raise ValueError("the a_i must be distinct")
        object.__setattr__(self, "a", a)

    def ai(self, i: int):
        return self.a[i - 1]

    def scaled(self, lam) -> "ModuliE":
        return ModuliE(self.k, tuple(lam * v for v in self.a), lam * self.a0)


def generator_classes(k: int, model=None) -> dict[str, DivClass]:
    """Z-basis of the E_k root lattice on which periods are prescribed."""
    model = model or lattice.model_for("E", k)
    H, X, Y = model["H"], model["X"], model["Y"]
    E = lambda i: model[f"E{i}"]  # noqa: E731
    gens = {"P": H - E(1) - E(2) - X}
    if k == 6:
        gens["Q"] = 2 * H - E(2) - E(3) - E(4) - E(5) - X - Y
    elif k == 7:
        gens["R"] = 2 * H - E(3) - E(4) - E(5) - E(6) - X - Y
    else:
        gens["S"] = 3 * H - E(2) - E(3) - E(4) - E(5) - E(6) - E(7) - 2 * X - Y
    for i in range(1, k - 1):
        gens[f"E{i + 1}-E{i}"] = E(i + 1) - E(i)
    return gens


def generator_periods(moduli: ModuliE) -> dict[str, object]:
    a, a0, k = moduli.ai, moduli.a0, moduli.k
    out = {"P": a(1) + a(2)}
    if k == 6:
        out["Q"] = a(2) + a(3) + a(4) + a(5) - a0
    elif k == 7:
        out["R"] = a(3) + a(4) + a(5) + a(6) - a0
    else:
        out["S"] = sum(a(i) for i in range(2, 8)) - a0
    for i in range(1, k - 1):
        out[f"E{i + 1}-E{i}"] = a(i + 1) - a(i)
    return out


def _solve_integer(columns: list[tuple[int, ...]], target: tuple[int, ...]) -> list[int]:
    """Integer n with sum n_j columns_j = target, by exact elimination."""
    rows, cols = len(target), len(columns)
    m = [[Fraction(columns[j][i]) for j in range(cols)] + [Fraction(target[i])] for i in range(rows)]
    pivots, r = [], 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        m[r] = [v / piv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [vi - f * vr for vi, vr in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    if any(m[i][cols] != 0 for i in range(r, rows)):
        raise ValueError("class is not in the span of the root lattice")
    sol = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        sol[c] = m[i][cols]
    if any(v.denominator != 1 for v in sol):
        raise ValueError("class is a rational but not an integral root combination")
    return [int(v) for v in sol]


def period(moduli: ModuliE, cls: DivClass):
    """Period of ``cls`` divided by ``2 pi i``."""
    gens = generator_classes(moduli.k, cls.model)
    values = generator_periods(moduli)
    names = list(gens)
    n = _solve_integer([gens[g].coeffs for g in names], cls.coeffs)
    return sum((c * values[g] for c, g in zip(n, names) if c), 0)


def normalized_root_basis(k: int) -> tuple[list[str], list[DivClass]]:
    """Dynkin basis with signs flipped so that Gram = -Cartan.

    The global sign is chosen so that the chain ``E_{i+1} - E_i`` keeps its
    sign, which puts every chamber at increasing a_1 < ... < a_{k-1}.
    """
    basis = lattice.orthogonal_root_basis("E", k)
    eps = lattice.verify_dynkin(basis, f"E{k}").sign_vector
    if eps[-1] < 0:
        eps = [-e for e in eps]
    labels, classes = [], []
    for e, lab, c in zip(eps, basis.labels, basis.classes):
        if e > 0:
            labels.append(lab)
            classes.append(c)
        else:
            labels.append(lab[1:] if lab.startswith("-") and "+" not in lab else f"-({lab})")
            classes.append(-c)
    return labels, classes


def period_vector(moduli: ModuliE) -> tuple[list[str], list]:
    labels, classes = normalized_root_basis(moduli.k)
    return labels, [period(moduli, c) for c in classes]


def decomposition_identities(k: int) -> dict:
    """Integer identities writing P, Q/R/S as sums of ``E_ij - X`` and ``E_ij - Y``."""
    model = lattice.model_for("E", k)
    H, X, Y = model["H"], model["X"], model["Y"]

    def Eij(i, j):
        return H - model[f"E{i}"] - model[f"E{j}"]

    gens = generator_classes(k, model)
    checks = [("P = E12 - X", gens["P"] == Eij(1, 2) - X)]
    if k == 6:
        checks.append(("Q = (E23 - X) + (E45 - Y)", gens["Q"] == (Eij(2, 3) - X) + (Eij(4, 5) - Y)))
    elif k == 7:
        checks.append(("R = (E34 - X) + (E56 - Y)", gens["R"] == (Eij(3, 4) - X) + (Eij(5, 6) - Y)))
    else:
        checks.append((
            "S = (E23 - X) + (E45 - X) + (E67 - Y)",
            gens["S"] == (Eij(2, 3) - X) + (Eij(4, 5) - X) + (Eij(6, 7) - Y),
        ))
    return {
        "k": k,
        "checks": [{"name": n, "passed": ok} for n, ok in checks],
        "passed": all(ok for _, ok in checks),
    }


@dataclass
class ChamberReport:
    type_label: str
    params: list
    ok: bool
    violated: list[str]
    periods: list | None = None
    labels: list[str] | None = None

    def to_dict(self) -> dict:
        return {
            "type": self.type_label,
            "k": int(self.type_label[1:]),
            "params": [float(v) for v in self.params],
            "chamber": self.ok,
            "violated": self.violated,
            "periods": None if self.periods is None else [float(v) for v in self.periods],
            "labels": self.labels,
        }


def chamber_check(type_label: str, moduli) -> ChamberReport:
    """Weyl-chamber predicate with the full list of violated inequalities.

    ``moduli`` is a root sequence for A and D and a :class:`ModuliE` for E.
    """
    letter = type_label.strip().upper()[:1]
    if letter == "A":
        a = list(moduli.original if hasattr(moduli, "original") else moduli)
        viol = [f"a{i + 2} > a{i + 1}" for i in range(len(a) - 1) if not a[i + 1] > a[i]]
        if len(a) % 2:
            viol.append("even number of points")
        return ChamberReport(f"A{len(a) - 1}", a, not viol, viol)
    if letter == "D":
        a = list(moduli.a if hasattr(moduli, "a") else moduli)
        viol = d_chamber_walls(a)
        return ChamberReport(f"D{len(a)}", a, not viol, viol)
    if letter == "E":
        labels, vals = period_vector(moduli)
        viol = [f"period({lab}) > 0" for lab, v in zip(labels, vals) if not v > 0]
        return ChamberReport(f"E{moduli.k}", list(moduli.a) + [moduli.a0], not viol, viol,
                             vals, labels)
    raise ValueError(f"unknown type {type_label!r}")


def simple_root_areas(type_label: str, moduli) -> tuple[list[str], list[float]]:
    """Symplectic areas ``2 pi * period`` of the Dynkin spheres, in Dynkin order.

    A: ``2 pi (a_{i+1} - a_i)``; D: ``x2 - x1, x1 + x2, x3 - x2, ...``;
    E: the sign-normalized basis of :func:`normalized_root_basis`.
    """
    rep = chamber_check(type_label, moduli)
    if not rep.ok:
        raise ChamberError(rep.violated)
    letter = type_label.strip().upper()[:1]
    two_pi = 2 * math.pi
    if letter == "A":
        a = rep.params
        labels = [f"a{i + 2}-a{i + 1}" for i in range(len(a) - 1)]
        return labels, [two_pi * (a[i + 1] - a[i]) for i in range(len(a) - 1)]
    if letter == "D":
        a = rep.params
        labels = ["x2-x1", "x1+x2"] + [f"x{i + 2}-x{i + 1}" for i in range(1, len(a) - 1)]
        vals = [a[1] - a[0], a[0] + a[1]] + [a[i + 1] - a[i] for i in range(1, len(a) - 1)]
        return labels, [two_pi * v for v in vals]
    return rep.labels, [two_pi * float(v) for v in rep.periods]
