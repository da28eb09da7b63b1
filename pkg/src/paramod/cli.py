"""Command-line interface: ``paramod modular-data | branching | verify``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource cap.
"""
from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import platform
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .affinekit import dominant_weights
from .errors import InvalidAlgebraError, ParamodError, ResourceLimitError, VerificationError, WeylCapExceeded
from .latticekit import quotient_order, root_quotient, scale, standard_lattices
from .parafermion import (
    branching_function,
    expected_class_count,
    label_classes,
    modular_residuals,
    parafermion_S,
    verify_orbifold_identity,
    verify_S_transform,
    verlinde_fusion,
)
from .qseries import eta_series, lattice_S_matrix, theta_eval
from .rootsys import build_algebra

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

DEFAULT_TOL = {
    "sdual": 1e-6,
    "eta": 1e-8,
    "theta": 1e-6,
    "orbifold": 1e-6,
    "verlinde": 1e-6,
    "counts": 0.5,
}


class UsageError(ParamodError):
    pass


@dataclass(frozen=True)
class RunConfig:
    series: str | None
    rank: int | None
    level: int
    depth: int
    tau: complex
    tolerance: float | None
    fmt: str
    output: Path | None

    def __post_init__(self):
        if self.depth < 1:
            raise UsageError("--depth must be >= 1")
        if self.tau.imag <= 0:
            raise UsageError("--tau must have positive imaginary part")
        if self.tolerance is not None and self.tolerance <= 0:
            raise UsageError("--tolerance must be positive")
        if self.level < 1:
            raise UsageError("--level must be >= 1")

    def algebra(self):
        if self.series is None or self.rank is None:
            raise UsageError("this command needs SERIES and RANK, e.g. 'A 1'")
        return build_algebra(self.series, self.rank)


def parse_tau(text: str) -> complex:
    """Accept '0.1+1.05i', '1.3i', '1.1j', '0.2-0.9i'."""
    s = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse tau {text!r}") from None


def parse_weight(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(x) for x in text.split(",") if x != "")
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"cannot parse weight {text!r}; use comma-separated coordinates") from None


def round15(x: float) -> float:
    return float(f"{x:.15g}")


def complex_json(z: complex) -> dict:
    return {"re": round15(z.real) + 0.0, "im": round15(z.imag) + 0.0}


def frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def coords_str(w) -> str:
    return ",".join(str(c) for c in w)


# -- payload builders ----------------------------------------------------------------

def modular_data_payload(cfg: RunConfig) -> tuple[dict, int]:
    alg = cfg.algebra()
    k = cfg.level
    data = parafermion_S(alg, k)
    std = standard_lattices(alg)
    n_dom = len(dominant_weights(alg, k))
    n_beta = root_quotient(alg, k).order
    pq = quotient_order(std.P, std.Q)
    payload = {
        "algebra": alg.name,
        "level": k,
        "central_charge": frac_str(data.central_charge),
        "labels": [
            {
                "Lambda": coords_str(lab.Lambda.weight),
                "beta": coords_str(lab.beta),
                "T": frac_str(t),
                "class_size": len(data.classes.classes[i]),
            }
            for i, (lab, t) in enumerate(zip(data.labels, data.T_phases))
        ],
        "S": [[complex_json(z) for z in row] for row in data.S],
        "counts": {
            "dominant_weights": n_dom,
            "root_quotient": n_beta,
            "P_mod_Q": pq,
            "expected": str(expected_class_count(alg, k)),
            "found": len(data),
        },
        "residuals": {key: round15(v) for key, v in modular_residuals(data).items()},
    }
    return payload, EXIT_OK


def branching_payload(cfg: RunConfig, Lambda, lam) -> tuple[dict, int]:
    alg = cfg.algebra()
    if len(Lambda) != alg.rank or len(lam) != alg.rank:
        raise UsageError(f"weights must have {alg.rank} coordinates")
    series = branching_function(alg, cfg.level, Lambda, lam, cfg.depth)
    payload = {
        "offset": frac_str(series.offset),
        "coeffs": [int(c) for c in series.coeffs],
        "depth": series.depth,
    }
    if series.is_zero:
        payload["warning"] = "lambda - Lambda is not in the root lattice; the branching function is zero"
    return payload, EXIT_OK


def _row(item, residual, tol, **extra) -> dict:
    row = {"item": item, "residual": round15(residual), "tolerance": tol, "pass": bool(residual < tol)}
    row.update(extra)
    return row


def verify_payload(cfg: RunConfig, which: str) -> tuple[dict, int]:
    tol = cfg.tolerance if cfg.tolerance is not None else DEFAULT_TOL[which]
    tau = cfg.tau
    rows = []
    if which == "eta":
        eta = eta_series(cfg.depth)
        lhs = eta.evaluate(-1 / tau)
        rhs = cmath.sqrt(-1j * tau) * eta.evaluate(tau)
        rows.append(_row("eta(-1/tau) vs sqrt(-i tau) eta(tau)", abs(lhs - rhs), tol))
    elif which == "theta":
        alg = cfg.algebra()
        lat = scale(standard_lattices(alg).Q_L, cfg.level)
        ls = lattice_S_matrix(lat)
        h = [Fraction(1, 7 + i) for i in range(alg.rank)]
        hh = lat.form(h, h)
        hf = [float(x) for x in h]
        vals = np.array([theta_eval(lat, r, hf, tau) for r in ls.cosets.reps])
        for a, r in enumerate(ls.cosets.reps):
            lhs = theta_eval(lat, r, [x / tau for x in hf], -1 / tau)
            rhs = cmath.sqrt(-1j * tau) ** alg.rank * cmath.exp(1j * math.pi * float(hh) / tau) * (
                ls.matrix[a] @ vals
            )
            rows.append(_row(f"coset {coords_str(r)}", abs(lhs - rhs), tol))
    elif which == "sdual":
        alg = cfg.algebra()
        rep = verify_S_transform(alg, cfg.level, tau, cfg.depth)
        for r in rep.rows:
            rows.append(_row(r.label, r.residual, tol, tail_bound=round15(r.tail_bound)))
    elif which == "orbifold":
        alg = cfg.algebra()
        cos = root_quotient(alg, cfg.level)
        for lab in dominant_weights(alg, cfg.level):
            for j, b in enumerate(cos.reps):
                rep = verify_orbifold_identity(alg, cfg.level, lab, j, tau, cfg.depth)
                rows.append(_row(f"({coords_str(lab.weight)};{coords_str(b)})", rep.residual, tol))
    elif which == "verlinde":
        alg = cfg.algebra()
        data = parafermion_S(alg, cfg.level)
        s, vac = data.S, data.S[0]
        raw = np.einsum("am,bm,cm->abc", s, s, s.conj() / vac)
        err = float(np.abs(raw - np.round(raw.real)).max())
        rows.append(_row("integrality", err, tol))
        if err < tol:
            fusion = verlinde_fusion(data, tol)
            rows.append(_row("nonnegativity", float(max(0, -fusion.min())), tol))
    elif which == "counts":
        alg = cfg.algebra()
        lc = label_classes(alg, cfg.level)
        expected = expected_class_count(alg, cfg.level)
        rows.append(_row("class count", float(abs(len(lc.classes) - expected)), tol,
                         found=len(lc.classes), expected=str(expected)))
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(which)
    ok = all(r["pass"] for r in rows)
    payload = {
        "check": which,
        "algebra": None if cfg.series is None else f"{cfg.series}{cfg.rank}",
        "level": cfg.level,
        "tau": complex_json(tau),
        "depth": cfg.depth,
        "pass": ok,
        "max_residual": round15(max(r["residual"] for r in rows)),
        "rows": rows,
    }
    return payload, EXIT_OK if ok else EXIT_FAIL


# -- rendering -----------------------------------------------------------------------

def render(payload: dict, kind: str, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if fmt == "csv":
        return _render_csv(payload, kind)
    return _render_text(payload, kind)


def _render_csv(payload: dict, kind: str) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if kind == "modular-data":
        n = len(payload["labels"])
        w.writerow(["index", "Lambda", "beta", "T"] + [f"S{j}_{p}" for j in range(n) for p in ("re", "im")])
        for i, lab in enumerate(payload["labels"]):
            row = [i, lab["Lambda"], lab["beta"], lab["T"]]
            for z in payload["S"][i]:
                row += [repr(z["re"]), repr(z["im"])]
            w.writerow(row)
    elif kind == "branching":
        w.writerow(["exponent", "coefficient"])
        off = Fraction(payload["offset"])
        for n, c in enumerate(payload["coeffs"]):
            w.writerow([frac_str(off + n), c])
    else:
        w.writerow(["item", "residual", "tolerance", "pass"])
        for r in payload["rows"]:
            w.writerow([r["item"], repr(r["residual"]), r["tolerance"], r["pass"]])
    return buf.getvalue()


def _fmt_complex(z: dict) -> str:
    return f"{z['re']:+.6f}{z['im']:+.6f}i"


def _render_text(payload: dict, kind: str) -> str:
    out = []
    if kind == "modular-data":
        c = payload["counts"]
        out.append(f"K({payload['algebra']}, {payload['level']})  c = {payload['central_charge']}")
        out.append(
            f"labels: {c['found']} = {c['dominant_weights']} * {c['root_quotient']} / {c['P_mod_Q']}"
            f" (expected {c['expected']})"
        )
        for i, lab in enumerate(payload["labels"]):
            out.append(f"  [{i}] Lambda=({lab['Lambda']}) beta=({lab['beta']})  T = {lab['T']} mod 1")
        out.append("S =")
        for row in payload["S"]:
            out.append("  " + "  ".join(_fmt_complex(z) for z in row))
        out.append("residuals: " + ", ".join(f"{k}={v:.2e}" for k, v in payload["residuals"].items()))
    elif kind == "branching":
        out.append(f"offset {payload['offset']}, depth {payload['depth']}")
        out.append("coeffs " + " ".join(str(c) for c in payload["coeffs"]))
        if "warning" in payload:
            out.append("warning: " + payload["warning"])
    else:
        status = "PASS" if payload["pass"] else "FAIL"
        out.append(f"verify {payload['check']}: {status} (max residual {payload['max_residual']:.3e})")
        for r in payload["rows"]:
            mark = "ok " if r["pass"] else "BAD"
            out.append(f"  {mark} {r['item']}: {r['residual']:.3e} < {r['tolerance']:g}")
    return "\n".join(out) + "\n"


# -- entry point ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="paramod", description="Modular data of parafermion algebras K(g,k).")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, algebra_required=True):
        if algebra_required:
            sp.add_argument("series", help="Cartan series A..G")
            sp.add_argument("rank", type=int)
        else:
            sp.add_argument("series", nargs="?", default=None)
            sp.add_argument("rank", nargs="?", type=int, default=None)
        sp.add_argument("--level", "-k", type=int, default=1)
        sp.add_argument("--depth", type=int, default=40)
        sp.add_argument("--tau", type=parse_tau, default=complex(0.1, 1.05))
        sp.add_argument("--tolerance", type=float, default=None)
        sp.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="text")
        sp.add_argument("--output", "-o", type=Path, default=None, help="write here (plus a .meta.json sidecar)")

    md = sub.add_parser("modular-data", help="labels, T-phases and S-matrix")
    common(md)
    br = sub.add_parser("branching", help="branching function of M^{Lambda,lambda}")
    common(br)
    br.add_argument("--Lambda", dest="Lambda", type=parse_weight, required=True, help="e.g. 1,0")
    br.add_argument("--lam", type=parse_weight, required=True, help="e.g. 1,0")
    vf = sub.add_parser("verify", help="numeric checks")
    vf.add_argument("which", choices=tuple(DEFAULT_TOL))
    common(vf, algebra_required=False)
    return p


def _write(cfg: RunConfig, text: str, argv: list[str]) -> None:
    if cfg.output is None:
        sys.stdout.write(text)
        return
    cfg.output.write_text(text, encoding="utf-8")
    meta = {
        "tool": "paramod",
        "version": __version__,
        "argv": argv,
        "python": platform.python_version(),
        "numpy": np.__version__,
    }
    meta_path = cfg.output.with_name(cfg.output.name + ".meta.json")
    meta_path.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig(
            series=args.series.upper() if args.series else None,
            rank=args.rank,
            level=args.level,
            depth=args.depth,
            tau=args.tau,
            tolerance=args.tolerance,
            fmt=args.fmt,
            output=args.output,
        )
        if args.command == "modular-data":
            payload, code = modular_data_payload(cfg)
        elif args.command == "branching":
            payload, code = branching_payload(cfg, args.Lambda, args.lam)
        else:
            payload, code = verify_payload(cfg, args.which)
    except (UsageError, InvalidAlgebraError, ValueError) as exc:
        print(f"paramod: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (WeylCapExceeded, ResourceLimitError) as exc:
        print(f"paramod: resource limit: {exc}", file=sys.stderr)
        return EXIT_CAP
    except VerificationError as exc:
        print(f"paramod: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _write(cfg, render(payload, args.command, cfg.fmt), argv)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
