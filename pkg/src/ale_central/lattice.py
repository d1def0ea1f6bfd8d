"""Integer intersection lattices of the compactified surfaces.

Two model shapes are supported:

* the plane blown up at ``n`` points, basis ``(H, E_1, ..., E_n)`` with Gram
  matrix ``diag(1, -1, ..., -1)`` (basis names can be overridden, e.g.
  ``H, E1..E4, X, F`` for the D4 cubic);
* the ruled model ``(C, D1, E1, ..., E_{2l})`` with ``C^2 = 0``,
  ``C.D1 = 1``, ``D1^2 = -l`` and ``E_i^2 = -1``.

Everything here is pure lattice theory: a class is an integer vector and no
effectivity or irreducibility is ever checked.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

__all__ = [
    "LatticeError",
    "SurfaceModel",
    "DivClass",
    "DynkinReport",
    "RootBasis",
    "KNOWN_LINE_COUNTS",
    "make_blown_up_plane",
    "make_ruled_model",
    "model_for",
    "pair",
    "anticanonical",
    "enumerate_lines",
    "named_d4_classes",
    "check_equivalences",
    "boundary_classes",
    "central_divisor",
    "orthogonal_root_basis",
    "verify_dynkin",
    "dynkin_graph",
    "cartan_matrix",
    "root_discriminant",
    "anticanonical_configuration",
    "parse_type",
]

KNOWN_LINE_COUNTS = {0: 0, 1: 1, 2: 3, 3: 6, 4: 10, 5: 16, 6: 27, 7: 56, 8: 240}


class LatticeError(ValueError):
    pass


def parse_type(type_label: str, k: int | None = None) -> tuple[str, int]:
    """Split ``"E6"`` into ``("E", 6)``; ``("D", 5)`` style input is also accepted."""
    m = re.fullmatch(r"\s*([ADEade])\s*_?\s*(\d*)\s*", str(type_label))
    if not m:
        raise LatticeError(f"unknown Dynkin type {type_label!r}")
    letter = m.group(1).upper()
    rank = int(m.group(2)) if m.group(2) else k
    if k is not None and m.group(2) and int(m.group(2)) != k:
        raise LatticeError(f"type {type_label!r} conflicts with k={k}")
    if rank is None:
        raise LatticeError(f"type {type_label!r} needs a rank")
    if letter == "E" and rank not in (6, 7, 8):
        raise LatticeError(f"E_k requires k in (6, 7, 8), got {rank}")
    if letter == "D" and rank < 4:
        raise LatticeError(f"D_k requires k >= 4, got {rank}")
    if letter == "A" and (rank < 1 or rank % 2 == 0):
        raise LatticeError(f"A_k requires odd k >= 1, got {rank}")
    return letter, rank


@dataclass(frozen=True)
class SurfaceModel:
    basis_names: tuple[str, ...]
    gram: tuple[tuple[int, ...], ...]
    kind: str = "plane"
    ell: int | None = None

    def __post_init__(self):
        names = tuple(self.basis_names)
        gram = tuple(tuple(int(v) for v in row) for row in self.gram)
        n = len(names)
        if len(set(names)) != n:
            raise LatticeError("basis names must be distinct")
        if len(gram) != n or any(len(row) != n for row in gram):
            raise LatticeError("gram matrix shape does not match basis")
        if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(n)):
            raise LatticeError("gram matrix must be symmetric")
        object.__setattr__(self, "basis_names", names)
        object.__setattr__(self, "gram", gram)

    @property
    def rank(self) -> int:
        return len(self.basis_names)

    @property
    def gram_array(self) -> np.ndarray:
        return np.array(self.gram, dtype=np.int64)

    def index(self, name: str) -> int:
        try:
            return self.basis_names.index(name)
        except ValueError:
            raise LatticeError(f"{name!r} not in basis {self.basis_names}") from None

    def __getitem__(self, name: str) -> "DivClass":
        v = [0] * self.rank
        v[self.index(name)] = 1
        return DivClass(self, tuple(v))

    def __contains__(self, name: str) -> bool:
        return name in self.basis_names

    def zero(self) -> "DivClass":
        return DivClass(self, (0,) * self.rank)

    def element(self, coeffs: dict[str, int] | Sequence[int]) -> "DivClass":
        if isinstance(coeffs, dict):
            v = [0] * self.rank
            for name, c in coeffs.items():
                v[self.index(name)] += int(c)
            return DivClass(self, tuple(v))
        return DivClass(self, tuple(int(c) for c in coeffs))

    def exceptional_names(self) -> list[str]:
        """Names of the E_i classes (``E1``, ``E2``, ...), in index order."""
        return [n for n in self.basis_names if re.fullmatch(r"E\d+", n)]

    def to_dict(self) -> dict:
        return {"basis_names": list(self.basis_names), "gram": [list(r) for r in self.gram]}


@dataclass(frozen=True)
class DivClass:
    model: SurfaceModel = field(repr=False)
    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) != self.model.rank:
            raise LatticeError(
                f"class has {len(coeffs)} coefficients, model rank is {self.model.rank}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    def _same(self, other: "DivClass"):
        if not isinstance(other, DivClass):
            raise TypeError(f"expected DivClass, got {type(other).__name__}")
        if other.model != self.model:
            raise LatticeError("classes live on different surface models")

    def __add__(self, other):
        self._same(other)
        return DivClass(self.model, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._same(other)
        return DivClass(self.model, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return DivClass(self.model, tuple(-a for a in self.coeffs))

    def __mul__(self, n: int):
        if isinstance(n, DivClass):
            raise TypeError("use pair(c1, c2) or c1 @ c2 for the intersection number")
        return DivClass(self.model, tuple(int(n) * a for a in self.coeffs))

    __rmul__ = __mul__

    def __matmul__(self, other: "DivClass") -> int:
        return pair(self, other)

    def square(self) -> int:
        return pair(self, self)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def as_dict(self) -> dict[str, int]:
        return {n: c for n, c in zip(self.model.basis_names, self.coeffs) if c}

    def to_dict(self) -> dict:
        return {"basis_names": list(self.model.basis_names), "coeffs": list(self.coeffs)}

    def __str__(self):
        parts = []
        for name, c in zip(self.model.basis_names, self.coeffs):
            if c == 0:
                continue
            mag = "" if abs(c) == 1 else str(abs(c))
            parts.append(("-" if c < 0 else "+") + mag + name)
        if not parts:
            return "0"
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


def pair(c1: DivClass, c2: DivClass) -> int:
    c1._same(c2)
    g = c1.model.gram
    n = len(c1.coeffs)
    return sum(
        c1.coeffs[i] * g[i][j] * c2.coeffs[j]
        for i in range(n) if c1.coeffs[i]
        for j in range(n) if c2.coeffs[j]
    )


def make_blown_up_plane(n: int, names: Sequence[str] | None = None) -> SurfaceModel:
    if n < 0:
        raise LatticeError("number of blown-up points must be >= 0")
    if names is None:
        names = ["H"] + [f"E{i}" for i in range(1, n + 1)]
    names = list(names)
    if len(names) != n + 1:
        raise LatticeError(f"expected {n + 1} basis names, got {len(names)}")
    gram = [[0] * (n + 1) for _ in range(n + 1)]
    gram[0][0] = 1
    for i in range(1, n + 1):
        gram[i][i] = -1
    return SurfaceModel(tuple(names), tuple(map(tuple, gram)), "plane")


def make_ruled_model(ell: int) -> SurfaceModel:
    if ell < 1:
        raise LatticeError("ruled model needs l >= 1")
    names = ["C", "D1"] + [f"E{i}" for i in range(1, 2 * ell + 1)]
    n = len(names)
    gram = [[0] * n for _ in range(n)]
    gram[0][1] = gram[1][0] = 1
    gram[1][1] = -ell
    for i in range(2, n):
        gram[i][i] = -1
    return SurfaceModel(tuple(names), tuple(map(tuple, gram)), "ruled", ell)


def model_for(type_label: str, k: int | None = None) -> SurfaceModel:
    """The compactification lattice used for each Dynkin type.

    E_k: plane with basis ``H, E1..E_{k-1}, X, Y, F``; D_k: plane with
    ``H, E1..E_k, X, F`` (k = 4 is the cubic); A_k, k = 2l - 1: ruled model.
    """
    letter, k = parse_type(type_label, k)
    if letter == "E":
        names = ["H"] + [f"E{i}" for i in range(1, k)] + ["X", "Y", "F"]
        return make_blown_up_plane(k + 2, names)
    if letter == "D":
        names = ["H"] + [f"E{i}" for i in range(1, k + 1)] + ["X", "F"]
        return make_blown_up_plane(k + 2, names)
    return make_ruled_model((k + 1) // 2)


def anticanonical(model: SurfaceModel) -> DivClass:
    """The anticanonical class -K."""
    if model.kind == "plane":
        v = [-1] * model.rank
        v[0] = 3
        return DivClass(model, tuple(v))
    if model.kind == "ruled":
        coeffs = {"C": model.ell + 2, "D1": 2}
        coeffs.update({e: -1 for e in model.exceptional_names()})
        return model.element(coeffs)
    raise LatticeError(f"unknown model shape {model.kind!r}")


def _solutions(n: int, total: int, sq: int, lo: int, hi: int):
    """All integer vectors b in [lo, hi]^n with sum(b) = total, sum(b^2) = sq."""
    if n == 0:
        if total == 0 and sq == 0:
            yield ()
        return
    for b in range(lo, hi + 1):
        rt, rq, rn = total - b, sq - b * b, n - 1
        if rq < 0:
            continue
        if rn == 0:
            if rt == 0 and rq == 0:
                yield (b,)
            continue
        # Cauchy-Schwarz and box bounds on the remaining coordinates
        if rt * rt > rn * rq or abs(rt) > rn * max(abs(lo), abs(hi)):
            continue
        if rq > rn * max(lo * lo, hi * hi):
            continue
        for rest in _solutions(rn, rt, rq, lo, hi):
            yield (b,) + rest


def _lines_in_box(model: SurfaceModel, bound: int, e_bound: int) -> list[DivClass]:
    n = model.rank - 1
    found = []
    for a in range(-bound, bound + 1):
        # L = aH - sum b_i E_i: a^2 - sum b^2 = -1, 3a - sum b = 1
        for b in _solutions(n, 3 * a - 1, a * a + 1, -e_bound, e_bound):
            found.append(DivClass(model, (a,) + tuple(-x for x in b)))
    return sorted(found, key=lambda c: c.coeffs)


def enumerate_lines(model: SurfaceModel, bound: int = 7, e_bound: int = 3,
                    confirm: bool = True) -> list[DivClass]:
    """All classes L with L^2 = -1 and -K.L = 1 on a blown-up plane.

    Exhaustive over |H-coefficient| <= ``bound`` and |E_i-coefficient| <=
    ``e_bound``.  With ``confirm`` the search is repeated with both bounds
    raised by 2 and must return the same set, and for n <= 8 the count must
    match the del Pezzo table; otherwise :class:`LatticeError` is raised.
    """
    if model.kind != "plane":
        raise LatticeError("line enumeration needs a blown-up plane model")
    n = model.rank - 1
    lines = _lines_in_box(model, bound, e_bound)
    if confirm:
        wider = _lines_in_box(model, bound + 2, e_bound + 2)
        if [c.coeffs for c in wider] != [c.coeffs for c in lines]:
            raise LatticeError(
                f"bound too small: {len(lines)} classes at ({bound}, {e_bound}), "
                f"{len(wider)} at ({bound + 2}, {e_bound + 2})"
            )
        if n in KNOWN_LINE_COUNTS and len(lines) != KNOWN_LINE_COUNTS[n]:
            raise LatticeError(
                f"found {len(lines)} lines for n={n}, expected {KNOWN_LINE_COUNTS[n]}"
            )
    return lines


D4_BASIS = ("H", "E1", "E2", "E3", "E4", "X", "F")


def _require_basis(model: SurfaceModel, names: Iterable[str]):
    missing = [n for n in names if n not in model]
    if model.kind != "plane" or missing:
        raise LatticeError(f"model lacks basis classes {missing}")


def named_d4_classes(model: SurfaceModel) -> dict[str, DivClass]:
    """The named lines of the D4 cubic viewed as the plane blown up at
    e1..e4, x, f.  Returns all 27 lines keyed by name.

    ``E`` is the conic missing x, ``G`` the line xf, ``Ebar{i}`` the line
    x e_i, ``E{i}{j}`` the line e_i e_j, ``E{i}f`` the line e_i f, ``C{i}``
    the conic missing e_i and ``C0`` the conic missing f.
    """
    if model.basis_names != D4_BASIS:
        raise LatticeError(f"expected basis {D4_BASIS}, got {model.basis_names}")
    H, X, F = model["H"], model["X"], model["F"]
    Es = [model[f"E{i}"] for i in range(1, 5)]
    sumE = Es[0] + Es[1] + Es[2] + Es[3]
    out = {f"E{i}": Es[i - 1] for i in range(1, 5)}
    out["X"] = X
    out["F"] = F
    out["E"] = 2 * H - sumE - F
    out["G"] = H - X - F
    out["C0"] = 2 * H - sumE - X
    for i in range(1, 5):
        out[f"Ebar{i}"] = H - X - Es[i - 1]
        out[f"E{i}f"] = H - Es[i - 1] - F
        out[f"C{i}"] = 2 * H - (sumE - Es[i - 1]) - X - F
    for i, j in itertools.combinations(range(1, 5), 2):
        out[f"E{i}{j}"] = H - Es[i - 1] - Es[j - 1]
    return out


@dataclass
class EquivalenceReport:
    divisor: DivClass
    representatives: dict[str, DivClass]
    checks: list[tuple[str, bool]]
    candidate_divisor: DivClass
    candidate_square: int
    square: int
    canonical_degree: int
    genus: int

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [{"name": n, "passed": ok} for n, ok in self.checks],
            "divisor": self.divisor.to_dict(),
            "D2": self.square,
            "KD": self.canonical_degree,
            "genus": self.genus,
            "candidate_divisor": self.candidate_divisor.to_dict(),
            "candidate_D2": self.candidate_square,
            "candidate_matches": self.candidate_divisor == self.divisor,
        }


def check_equivalences(model: SurfaceModel) -> EquivalenceReport:
    """Exact checks on the D4 pencil divisor F + C1 + C2."""
    L = named_d4_classes(model)
    reps = {
        "F+C1+C2": L["F"] + L["C1"] + L["C2"],
        "G+C0+E34": L["G"] + L["C0"] + L["E34"],
        "E+Ebar3+Ebar4": L["E"] + L["Ebar3"] + L["Ebar4"],
    }
    D = reps["F+C1+C2"]
    antiK = anticanonical(model)
    sq = D.square()
    KD = -pair(antiK, D)
    genus2 = KD + sq  # 2g - 2
    # sign variant of D with E3, E4 flipped, reported for comparison
    candidate = model.element({"H": 4, "E1": -1, "E2": -1, "E3": 1, "E4": 1, "X": -2, "F": -1})
    checks = [
        ("F+C1+C2 = G+C0+E34", reps["F+C1+C2"] == reps["G+C0+E34"]),
        ("G+C0+E34 = E+Ebar3+Ebar4", reps["G+C0+E34"] == reps["E+Ebar3+Ebar4"]),
        ("D^2 = 1", sq == 1),
        ("-K.D = 3", pair(antiK, D) == 3),
        ("K.D + D^2 = -2", genus2 == -2),
        ("X + Ebar1 + C1 = -K", L["X"] + L["Ebar1"] + L["C1"] == antiK),
    ]
    return EquivalenceReport(
        D, reps, checks, candidate, candidate.square(), sq, KD, genus2 // 2 + 1
    )


def boundary_classes(model: SurfaceModel) -> dict[str, DivClass]:
    """Curves at infinity: E, F, G on plane models; C, D1, D2 on the ruled model."""
    if model.kind == "ruled":
        C, D1 = model["C"], model["D1"]
        sumE = model.zero()
        for e in model.exceptional_names():
            sumE = sumE + model[e]
        return {"C": C, "D1": D1, "D2": model.ell * C + D1 - sumE}
    _require_basis(model, ("H", "X", "F"))
    H, X, F = model["H"], model["X"], model["F"]
    sumE = model.zero()
    for e in model.exceptional_names():
        sumE = sumE + model[e]
    G = H - X - F
    if "Y" in model:
        G = G - model["Y"]
    return {"E": 2 * H - sumE - F, "F": F, "G": G}


def central_divisor(type_label: str, k: int | None = None,
                    model: SurfaceModel | None = None) -> DivClass:
    """The polar divisor of the conformal coordinate of the central sphere."""
    letter, k = parse_type(type_label, k)
    model = model or model_for(letter, k)
    if letter == "A":
        ell = (k + 1) // 2
        if model.kind != "ruled" or model.ell != ell:
            raise LatticeError(f"A_{k} needs the ruled model with l={ell}")
        D = model["D1"]
        for i in range(1, ell + 1):
            D = D + model["C"] - model[f"E{i}"]
        return D
    top = k - 1 if letter == "E" else k
    needed = ["H", "X", "F"] + [f"E{i}" for i in range(1, top + 1)]
    _require_basis(model, needed)
    D = boundary_classes(model)["E"]
    for i in range(3, top + 1):
        D = D + model["H"] - model["X"] - model[f"E{i}"]
    return D


@dataclass(frozen=True)
class RootBasis:
    """Simple-root classes for a Dynkin type, in a fixed order.

    ``central`` indexes the vertex represented by the central sphere; every
    other element is orthogonal to the central divisor.
    """
    type_label: str
    model: SurfaceModel
    labels: tuple[str, ...]
    classes: tuple[DivClass, ...]
    central: int

    def __iter__(self):
        return iter(self.classes)

    def __len__(self):
        return len(self.classes)

    def as_dict(self) -> dict[str, DivClass]:
        return dict(zip(self.labels, self.classes))


def orthogonal_root_basis(type_label: str, k: int | None = None,
                          model: SurfaceModel | None = None) -> RootBasis:
    letter, k = parse_type(type_label, k)
    model = model or model_for(letter, k)
    E = lambda i: model[f"E{i}"]  # noqa: E731
    label = f"{letter}{k}"
    if letter == "A":
        n = 2 * ((k + 1) // 2)
        labels = tuple(f"E{i + 1}-E{i}" for i in range(1, n))
        classes = tuple(E(i + 1) - E(i) for i in range(1, n))
        return RootBasis(label, model, labels, classes, (k + 1) // 2 - 1)
    H, X = model["H"], model["X"]
    P = H - E(1) - E(2) - X
    top = k if letter == "D" else k - 1
    chain_labels = [f"E{i + 1}-E{i}" for i in range(1, top)]
    chain = [E(i + 1) - E(i) for i in range(1, top)]
    if letter == "D":
        return RootBasis(label, model, ("P", *chain_labels), (P, *chain), 2)
    Y = model["Y"]
    if k == 6:
        Q = 2 * H - E(2) - E(3) - E(4) - E(5) - X - Y
        head_labels, head = ("Q", "-P"), (Q, -P)
    elif k == 7:
        R = 2 * H - E(3) - E(4) - E(5) - E(6) - X - Y
        head_labels, head = ("P+R", "R"), (P + R, R)
    else:
        S = 3 * H - E(2) - E(3) - E(4) - E(5) - E(6) - E(7) - 2 * X - Y
        head_labels, head = ("S", "-P"), (S, -P)
    return RootBasis(label, model, head_labels + tuple(chain_labels), head + tuple(chain), 3)


def dynkin_graph(type_label: str, k: int | None = None) -> nx.Graph:
    """Unsigned Dynkin graph; for D and E it is a tree with one trivalent node."""
    letter, k = parse_type(type_label, k)
    g = nx.Graph()
    g.add_nodes_from(range(k))
    if letter == "A":
        g.add_edges_from((i, i + 1) for i in range(k - 1))
        return g
    arms = (1, 1, k - 3) if letter == "D" else (1, 2, k - 4)
    nxt = 1
    for length in arms:
        prev = 0
        for _ in range(length):
            g.add_edge(prev, nxt)
            prev, nxt = nxt, nxt + 1
    return g


def cartan_matrix(type_label: str, k: int | None = None) -> np.ndarray:
    g = dynkin_graph(type_label, k)
    return 2 * np.eye(g.number_of_nodes(), dtype=np.int64) - nx.to_numpy_array(
        g, nodelist=sorted(g.nodes), dtype=np.int64
    )


def root_discriminant(type_label: str, k: int | None = None) -> int:
    letter, k = parse_type(type_label, k)
    return {"A": k + 1, "D": 4, "E": 9 - k}[letter]


def _int_det(m: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant, exact for integer matrices."""
    a = [list(map(int, row)) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for i in range(n - 1):
        if a[i][i] == 0:
            swap = next((r for r in range(i + 1, n) if a[r][i] != 0), None)
            if swap is None:
                return 0
            a[i], a[swap] = a[swap], a[i]
            sign = -sign
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[n - 1][n - 1]


@dataclass
class DynkinReport:
    type_label: str
    basis: list[DivClass]
    gram_of_basis: list[list[int]]
    self_intersections: list[int]
    adjacency: list[tuple[int, int]]
    graph_iso_to_dynkin: bool
    sign_vector: list[int] | None
    discriminant: int
    expected_discriminant: int

    @property
    def passed(self) -> bool:
        return (
            all(s == -2 for s in self.self_intersections)
            and self.graph_iso_to_dynkin
            and self.sign_vector is not None
            and self.discriminant == self.expected_discriminant
        )

    def to_dict(self) -> dict:
        model = self.basis[0].model if self.basis else None
        return {
            "type_label": self.type_label,
            "passed": self.passed,
            "basis_names": list(model.basis_names) if model else [],
            "basis": [list(c.coeffs) for c in self.basis],
            "gram": self.gram_of_basis,
            "self_intersections": self.self_intersections,
            "adjacency": [list(e) for e in self.adjacency],
            "graph_iso_to_dynkin": self.graph_iso_to_dynkin,
            "sign_vector": self.sign_vector,
            "discriminant": self.discriminant,
            "expected_discriminant": self.expected_discriminant,
        }


def verify_dynkin(basis: Sequence[DivClass] | RootBasis, type_label: str,
                  k: int | None = None) -> DynkinReport:
    """Check that ``basis`` spans a root lattice of the given type.

    The sign vector ``eps`` satisfies ``eps_i eps_j (b_i.b_j) = -Cartan_ij``
    after matching the basis graph to the Dynkin graph; the first entry is
    fixed to +1 to break the global sign.
    """
    classes = list(basis)
    n = len(classes)
    letter, rank = parse_type(type_label, k if k is not None else n)
    label = f"{letter}{rank}"
    gram = [[pair(b1, b2) for b2 in classes] for b1 in classes]
    selfs = [gram[i][i] for i in range(n)]
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if gram[i][j] != 0]
    simple_edges = all(abs(gram[i][j]) == 1 for i, j in edges)
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    iso = rank == n and simple_edges and nx.is_isomorphic(g, dynkin_graph(letter, rank))

    sign_vector = None
    if iso and all(s == -2 for s in selfs):
        for tail in itertools.product((1, -1), repeat=n - 1):
            eps = (1,) + tail
            if all(eps[i] * eps[j] * gram[i][j] == 1 for i, j in edges):
                sign_vector = list(eps)
                break
    return DynkinReport(
        type_label=label,
        basis=classes,
        gram_of_basis=gram,
        self_intersections=selfs,
        adjacency=edges,
        graph_iso_to_dynkin=bool(iso),
        sign_vector=sign_vector,
        # det(-Gram) is the Cartan determinant: a diagonal sign change leaves it fixed
        discriminant=_int_det([[-v for v in row] for row in gram]),
        expected_discriminant=root_discriminant(letter, rank),
    )


def anticanonical_configuration(type_label: str, k: int | None = None) -> dict:
    """Self-intersections of the curves at infinity after blowing up E ∩ F ∩ G.

    Adds a class ``C`` for that blow-up to the E_k / D_k plane model and
    returns the proper transforms together with the check
    ``-K = 2C + E' + F' + G'``.
    """
    letter, k = parse_type(type_label, k)
    if letter == "A":
        raise LatticeError("the A_k compactification uses the ruled model")
    base = model_for(letter, k)
    model = make_blown_up_plane(base.rank, base.basis_names + ("C",))
    b = boundary_classes(model)
    C = model["C"]
    Ep, Fp, Gp = b["E"] - C, b["F"] - C, b["G"] - C
    antiK = anticanonical(model)
    return {
        "model": model,
        "E'": Ep,
        "F'": Fp,
        "G'": Gp,
        "C": C,
        "squares": {"E'": Ep.square(), "F'": Fp.square(), "G'": Gp.square(), "C": C.square()},
        "anticanonical_ok": antiK == 2 * C + Ep + Fp + Gp,
        "meets_C": {n: pair(C, v) for n, v in (("E'", Ep), ("F'", Fp), ("G'", Gp))},
        "mutual": {
            "E'F'": pair(Ep, Fp), "E'G'": pair(Ep, Gp), "F'G'": pair(Fp, Gp),
        },
    }
