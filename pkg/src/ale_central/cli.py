"""``ale-central`` command-line front end.

Exit codes: 0 all assertions passed, 1 an assertion failed, 2 invalid
parameters (including a Weyl-chamber violation, with the wall named on
stderr), 3 I/O error.  JSON output carries ``"schema": 1``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__, ak_sphere, dk_sphere, exact, geom, lattice, periods

SCHEMA = 1
COMMANDS = ("verify-lattice", "verify-resolution", "sample", "periods", "alf", "all")
DEFAULT_D_PARAMS = "0.5,1.3,2.1,3.4"
DEFAULT_A_PARAMS = "-1,1"


class UsageError(ValueError):
    pass


@dataclass
class Outcome:
    report: dict
    ok: bool
    table: tuple[tuple[str, ...], list] | None = None
    stderr: list[str] = field(default_factory=list)


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        n_p, n_t = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 100x100, got {text!r}") from None
    if n_p < 1 or n_t < 1:
        raise argparse.ArgumentTypeError("grid sizes must be positive")
    return n_p, n_t


def _parse_params(text: str | None) -> list[Fraction]:
    if text is None:
        return []
    try:
        return [Fraction(v.strip()) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse --params {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ale-central",
        description="Exact lattice and resolution checks plus metric sampling for ADE instantons.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--type", dest="type_label", default=None,
                        help="A, D, E6, E7, E8 (rank may be appended, e.g. A3, D5)")
    parser.add_argument("--params", default=None, help="comma separated moduli, e.g. -1,1")
    parser.add_argument("--a0", default="0", help="E_k tangent parameter a0")
    parser.add_argument("--k", type=int, default=None, help="rank for A or D lattices")
    parser.add_argument("--grid", type=_parse_grid, default=(100, 100), help="NxM sample grid")
    parser.add_argument("--out", default=None, help="output path (stdout if omitted)")
    parser.add_argument("--format", choices=("json", "csv"), default=None)
    parser.add_argument("--seed", type=int, default=20240601)
    parser.add_argument("--tol", type=float, default=None, help="override the assertion tolerance")
    return parser


def _fix_negative_values(argv: list[str]) -> list[str]:
    """Attach values such as ``-1,1`` to their flag so argparse keeps them."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--params", "--a0") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _threads() -> int:
    raw = os.environ.get("ALE_CENTRAL_THREADS")
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"ALE_CENTRAL_THREADS must be an integer, got {raw!r}") from None


def _type(args, default: str | None = None) -> tuple[str, int | None]:
    label = args.type_label or default
    if label is None:
        raise UsageError("--type is required")
    letter = label.strip()[:1].upper()
    rest = label.strip()[1:].lstrip("_")
    if letter not in "ADE":
        raise UsageError(f"unknown type {label!r}")
    rank = int(rest) if rest else args.k
    return letter, rank


# verify-lattice -------------------------------------------------------------

def _dynkin_report(letter: str, k: int) -> dict:
    basis = lattice.orthogonal_root_basis(letter, k)
    rep = lattice.verify_dynkin(basis, f"{letter}{k}")
    D = lattice.central_divisor(letter, k, basis.model)
    bnd = lattice.boundary_classes(basis.model)
    orth = {name: [lattice.pair(c, b) for b in basis] for name, c in bnd.items()}
    d_pairs = [lattice.pair(D, b) for b in basis]
    off_center = [v for i, v in enumerate(d_pairs) if i != basis.central]
    out = rep.to_dict()
    out.update({
        "labels": list(basis.labels),
        "central_index": basis.central,
        "central_divisor": D.to_dict(),
        "central_pairings": d_pairs,
        "boundary_pairings": orth,
    })
    out["passed"] = (
        rep.passed
        and all(v == 0 for v in off_center)
        and abs(d_pairs[basis.central]) == 1
        and all(v == 0 for vals in orth.values() for v in vals)
    )
    return out


def _lines_report() -> dict:
    counts = {}
    for n in range(0, 9):
        counts[str(n)] = len(lattice.enumerate_lines(lattice.make_blown_up_plane(n)))
    ok = all(counts[str(n)] == lattice.KNOWN_LINE_COUNTS[n] for n in range(9))
    return {"counts": counts, "passed": ok}


def cmd_verify_lattice(args) -> Outcome:
    if args.type_label is None:
        sections = {"lines": _lines_report()}
        eq = lattice.check_equivalences(lattice.model_for("D4"))
        sections["d4_equivalences"] = eq.to_dict()
        for lab in ("A3", "A5", "D4", "D5", "D6", "D7", "D8", "E6", "E7", "E8"):
            sections[lab] = _dynkin_report(lab[0], int(lab[1:]))
        ok = all(s["passed"] for s in sections.values())
        return Outcome({"command": "verify-lattice", "sections": sections, "passed": ok}, ok)
    letter, k = _type(args)
    if k is None:
        if letter == "D":
            k = 4
        else:
            raise UsageError(f"type {letter} needs a rank (e.g. --type {letter}3 or --k)")
    try:
        report = _dynkin_report(letter, k)
    except lattice.LatticeError as e:
        raise UsageError(str(e)) from None
    if letter == "D" and k == 4:
        report["d4_equivalences"] = lattice.check_equivalences(lattice.model_for("D4")).to_dict()
        report["passed"] = report["passed"] and report["d4_equivalences"]["passed"]
    report["command"] = "verify-lattice"
    return Outcome(report, report["passed"])


# verify-resolution ----------------------------------------------------------

def cmd_verify_resolution(args) -> Outcome:
    letter, _ = _type(args, "D")
    if letter != "D":
        raise UsageError("verify-resolution covers type D (Tyurina's resolution)")
    roots = _parse_params(args.params or "1,2,3,4")
    if len(roots) < 2:
        raise UsageError("type D needs at least two parameters")
    data = exact.tyurina_data(roots)
    rep = exact.verify_blowup_relation(data)
    exact.factor_g(data)
    walls = dk_sphere.d_chamber_walls([float(v) for v in roots])
    report = rep.to_dict()
    report.update({
        "command": "verify-resolution",
        "polynomials": {"P": repr(data.P), "Q": repr(data.Q), "S": repr(data.S), "G": repr(data.G)},
        "p": str(data.p),
        "in_chamber": not walls,
        "violated": walls,
    })
    return Outcome(report, rep.passed)


# sample ---------------------------------------------------------------------

def _chunks(n: int, parts: int) -> list[tuple[int, int]]:
    step = math.ceil(n / parts)
    return [(i, min(n, i + step)) for i in range(0, n, step)]


def _sample_a(args, tol) -> Outcome:
    roots = [float(v) for v in _parse_params(args.params or DEFAULT_A_PARAMS)]
    try:
        moduli = ak_sphere.ModuliA.from_roots(roots)
    except ValueError as e:
        raise dk_sphere.ChamberError([str(e)]) from None
    n_z, n_t = args.grid
    lo, hi = ak_sphere.sphere_interval(moduli)
    zs = ak_sphere.grid_nodes(lo, hi, n_z)
    ts = ak_sphere.grid_nodes(0.0, 2 * math.pi, n_t)

    def work(span):
        Z, T = np.meshgrid(zs[span[0]:span[1]], ts, indexing="ij")
        return ak_sphere.sphere_metric(moduli, Z.ravel(), T.ravel())

    with ThreadPoolExecutor(_threads()) as pool:
        parts = list(pool.map(work, _chunks(n_z, _threads())))
    rows = [r for part in parts for r in part.rows()]
    V = np.concatenate([np.ravel(p.V) for p in parts])
    gzz = np.concatenate([np.ravel(p.g_zz) for p in parts])
    gtt = np.concatenate([np.ravel(p.g_tt) for p in parts])
    prod_resid = float(np.max(np.abs(gzz * gtt - 1.0)))
    recon = float(np.max(np.abs(gzz / V - 1.0)))
    ok = bool(np.all(V > 0)) and prod_resid <= tol and recon <= tol
    report = {
        "type": f"A{len(roots) - 1}",
        "roots": roots,
        "normalized_roots": list(moduli.roots),
        "grid": [n_z, n_t],
        "min_V": float(V.min()),
        "max_gzz_gtt_minus_1": prod_resid,
        "max_reconstruction_rel_error": recon,
        "passed": ok,
    }
    return Outcome(report, ok, (ak_sphere.CSV_COLUMNS, rows))


def _sample_d(args, tol) -> Outcome:
    a = [float(v) for v in _parse_params(args.params or DEFAULT_D_PARAMS)]
    moduli = dk_sphere.ModuliD(tuple(a))
    if not dk_sphere.compact_intervals(moduli):
        raise UsageError("type D sampling needs k >= 3 (no compact real sphere otherwise)")
    n_s, n_t = args.grid
    lo, hi = dk_sphere.sphere_interval(moduli, 1)
    ss = lo + (np.arange(n_s) + 0.5) * (hi - lo) / n_s
    ts = (np.arange(n_t) + 0.5) * 2 * math.pi / n_t

    def work(span):
        S, T = np.meshgrid(ss[span[0]:span[1]], ts, indexing="ij")
        return dk_sphere.conformal_chart(moduli, 1, S.ravel(), T.ravel())

    with ThreadPoolExecutor(_threads()) as pool:
        parts = list(pool.map(work, _chunks(n_s, _threads())))
    rows = [r for part in parts for r in part.rows()]
    x, y, z = (np.concatenate([np.ravel(getattr(p, f)) for p in parts]) for f in "xyz")
    _, r2 = dk_sphere.surface_residual(moduli, x, y, z)
    det = np.concatenate([np.ravel(p.g_ss * p.g_thth - p.g_sth**2) for p in parts])
    surf = float(np.max(r2))
    dens = float(np.max(np.abs(det - 1.0)))
    ok = surf <= 1e-10 and dens <= tol
    report = {
        "type": f"D{len(a)}",
        "params": a,
        "grid": [n_s, n_t],
        "s_interval": [lo, hi],
        "max_surface_residual": surf,
        "max_area_density_error": dens,
        "passed": ok,
    }
    return Outcome(report, ok, (dk_sphere.CSV_COLUMNS, rows))


def cmd_sample(args) -> Outcome:
    letter, _ = _type(args)
    tol = args.tol if args.tol is not None else 1e-9
    if letter == "A":
        out = _sample_a(args, tol)
    elif letter == "D":
        out = _sample_d(args, tol)
    else:
        raise UsageError("sample covers types A and D")
    out.report["command"] = "sample"
    return out


# periods --------------------------------------------------------------------

def cmd_periods(args) -> Outcome:
    letter, k = _type(args)
    params = _parse_params(args.params)
    if letter == "E":
        if k not in (6, 7, 8):
            raise UsageError("E types are E6, E7 and E8")
        a0 = _parse_params(args.a0)[0] if args.a0 else Fraction(0)
        moduli = periods.ModuliE(k, tuple(params), a0)
        rep = periods.chamber_check(f"E{k}", moduli)
        out = rep.to_dict()
        out["periods_exact"] = [str(v) for v in rep.periods]
        out["decomposition"] = periods.decomposition_identities(k)
        out.update({"k": k, "a0": float(a0)})
    else:
        if not params:
            raise UsageError("--params is required")
        rep = periods.chamber_check(letter, [float(v) for v in params])
        out = rep.to_dict()
        out["k"] = len(params) - 1 if letter == "A" else len(params)
        if rep.ok:
            labels, areas = periods.simple_root_areas(letter, [float(v) for v in params])
            out["labels"] = labels
            out["periods"] = [v / (2 * math.pi) for v in areas]
            out["areas"] = areas
    out["command"] = "periods"
    table = (("label", "period"), list(zip(out["labels"] or [], out["periods"] or [])))
    result = Outcome(out, rep.ok, table)
    if not rep.ok:
        result.stderr.append("chamber violation: " + "; ".join(rep.violated))
    return result


# alf ------------------------------------------------------------------------

def cmd_alf(args) -> Outcome:
    letter, _ = _type(args)
    tol = args.tol if args.tol is not None else 1e-10
    if letter == "A":
        roots = [float(v) for v in _parse_params(args.params or DEFAULT_A_PARAMS)]
        moduli = ak_sphere.ModuliA.from_roots(roots)
        n_z, n_t = args.grid
        lo, hi = ak_sphere.sphere_interval(moduli)
        Z, T = np.meshgrid(ak_sphere.grid_nodes(lo, hi, n_z),
                           ak_sphere.grid_nodes(0, 2 * math.pi, n_t), indexing="ij")
        smp = ak_sphere.alf_chart(moduli, Z.ravel(), T.ravel())
        V1 = 1.0 + ak_sphere.potential(moduli, smp.z)
        err = float(max(np.max(np.abs(smp.g_zz / V1 - 1)), np.max(np.abs(smp.g_tt * V1 - 1))))
        rng = np.random.default_rng(args.seed)
        xs = rng.normal(size=8) + 1j * rng.normal(size=8)
        zs = rng.normal(size=8) + 1j * rng.normal(size=8)
        tr = ak_sphere.alf_transform_check(moduli, xs, zs)
        ok = err <= tol and tr["surface_residual"] <= 1e-12 and tr["density_residual"] <= 1e-12
        report = {"type": f"A{len(roots) - 1}", "metric_rel_error": err, "transform": tr,
                  "passed": ok}
    elif letter == "D":
        a = [float(v) for v in _parse_params(args.params or DEFAULT_D_PARAMS)]
        moduli = dk_sphere.ModuliD(tuple(a))
        lo, hi = dk_sphere.sphere_interval(moduli, 1)
        rng = random.Random(args.seed)
        flows = []
        for _ in range(3):
            s = rng.uniform(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo))
            th = rng.uniform(0.2, math.pi - 0.2)
            res = dk_sphere.alf_flow(moduli, dk_sphere.sphere_point(moduli, 1, s, th))
            omega = dk_sphere.alf_flow_omega_check(moduli, 1, s, th)
            flows.append({"s": s, "theta": th, **res.to_dict(), "omega_residual": omega})
        ok = all(f["z_drift"] <= 1e-8 and f["max_surface_residual"] <= 1e-6
                 and f["omega_residual"] <= 1e-6 for f in flows)
        report = {"type": f"D{len(a)}", "flows": flows, "passed": ok}
    else:
        raise UsageError("alf covers types A and D")
    report["command"] = "alf"
    return Outcome(report, ok)


# all ------------------------------------------------------------------------

def cmd_all(args) -> Outcome:
    rng = random.Random(args.seed)
    sections = {"lattice": cmd_verify_lattice(argparse.Namespace(type_label=None)).report}
    failures = []
    for _ in range(50):
        k = rng.randint(2, 8)
        roots = [Fraction(rng.randint(-50, 50), rng.randint(1, 12)) for _ in range(k)]
        if not exact.verify_blowup_relation(exact.tyurina_data(roots)).passed:
            failures.append([str(r) for r in roots])
    sections["resolution"] = {"random_cases": 50, "failures": failures, "passed": not failures}

    a1 = ak_sphere.ModuliA.from_roots([-1, 1])
    gb = geom.gauss_bonnet(ak_sphere.metric_sampler(a1), (400, 1))
    z = ak_sphere.grid_nodes(-1, 1, 100)
    kap = ak_sphere.sphere_metric(a1, z, 0.0).kappa
    sections["a1_round_sphere"] = {
        "max_kappa_error": float(np.max(np.abs(kap - 1))),
        "area": ak_sphere.symplectic_area(a1)["quadrature"],
        "gauss_bonnet": gb.value,
        "passed": bool(np.max(np.abs(kap - 1)) <= 1e-5
                       and abs(gb.value - 4 * math.pi) <= 1e-3 * 4 * math.pi),
    }
    d4 = dk_sphere.ModuliD(tuple(float(v) for v in DEFAULT_D_PARAMS.split(",")))
    gbd = geom.gauss_bonnet(dk_sphere.metric_sampler(d4), (100, 100))
    cmp = dk_sphere.d4_t_compare(d4, seed=args.seed)
    sections["d4_sphere"] = {
        "gauss_bonnet": gbd.value,
        "t_compare": cmp,
        "passed": abs(gbd.value - 4 * math.pi) <= 1e-2 * 4 * math.pi and cmp["matched"] != "none",
    }
    sections["periods"] = {
        f"E{k}": periods.decomposition_identities(k) for k in (6, 7, 8)
    }
    sections["periods"]["passed"] = all(v["passed"] for v in sections["periods"].values())
    lam, res = geom.evolve_round(1, 1)
    sections["round_evolution"] = {"lambda": str(lam), "residual": str(res), "passed": res == 0}
    ok = all(s["passed"] for s in sections.values())
    return Outcome({"command": "all", "seed": args.seed, "sections": sections, "passed": ok}, ok)


HANDLERS = {
    "verify-lattice": cmd_verify_lattice,
    "verify-resolution": cmd_verify_resolution,
    "sample": cmd_sample,
    "periods": cmd_periods,
    "alf": cmd_alf,
    "all": cmd_all,
}


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _render(outcome: Outcome, fmt: str) -> str:
    if fmt == "csv":
        if outcome.table is None:
            raise UsageError("csv output is available for sample and periods only")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        cols, rows = outcome.table
        writer.writerow(cols)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
        return buf.getvalue()
    payload = {"schema": SCHEMA, **outcome.report}
    if outcome.table is not None and outcome.report.get("command") == "sample":
        cols, rows = outcome.table
        payload["columns"] = list(cols)
        payload["rows"] = [list(r) for r in rows]
    return json.dumps(payload, indent=2, default=_json_default) + "\n"


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_fix_negative_values(argv))
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        outcome = HANDLERS[args.command](args)
        fmt = args.format or ("csv" if args.command == "sample" and args.out
                              and args.out.endswith(".csv") else "json")
        text = _render(outcome, fmt)
    except dk_sphere.ChamberError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (UsageError, lattice.LatticeError, ValueError) as e:
        print(f"error: invalid parameters: {e}", file=sys.stderr)
        return 2
    for line in outcome.stderr:
        print(line, file=sys.stderr)
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            if fmt == "csv" and args.command == "sample":
                summary = {"schema": SCHEMA, **outcome.report, "out": args.out}
                print(json.dumps(summary, indent=2, default=_json_default))
        else:
            sys.stdout.write(text)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    if outcome.stderr and not outcome.ok:
        return 2
    return 0 if outcome.ok else 1


if __name__ == "__main__":
    sys.exit(main())
