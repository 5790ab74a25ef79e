"""Command-line interface: ``pepscanon <command> ...``."""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import tensorfile
from .applications import area_law_check, ground_space_dimension, lsm_check, parent_hamiltonian, wilson_check
from .demos import DEMOS, run_demo
from .errors import (
    DeskScaleExceeded,
    NonUniqueGauge,
    NotFoundBelowCap,
    TensorNetworkError,
)
from .gauge import mps_gauge, peps_gauge
from .injectivity import is_injective_mps, is_injective_peps, minimal_injective_length
from .lattice import MpsSpec
from .states import EXAMPLE_NAMES, PAULI, example_states, spin_matrices
from .symmetry import SPATIAL_KINDS, certify_local, certify_spatial
from .tensor_core import Tolerance

EXIT_OK, EXIT_PARSE, EXIT_SCALE, EXIT_PRECONDITION, EXIT_DEGENERATE = 0, 2, 3, 4, 5


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    return x


class Report:
    """Verdicts (each tagged with the statement it checks), residuals, tolerances, seed."""

    def __init__(self, argv, tol: Tolerance, seed):
        self.command = list(argv)
        self.tolerances = {"relative_rank_cut": tol.relative_rank_cut, "residual_cut": tol.residual_cut}
        self.seed = seed
        self.verdicts = []
        self.residuals = {}
        self.outputs = []

    def verdict(self, name, value, tag):
        self.verdicts.append({"name": name, "value": _jsonable(value), "tag": tag})

    def to_dict(self):
        return {"command": self.command, "verdicts": self.verdicts, "residuals": _jsonable(self.residuals),
                "tolerances": self.tolerances, "seed": self.seed, "outputs": self.outputs}

    def render(self, as_json: bool) -> str:
        if as_json:
            return json.dumps(self.to_dict(), indent=1)
        lines = ["command: " + " ".join(self.command)]
        for v in self.verdicts:
            lines.append(f"  {v['name']}: {v['value']}  [{v['tag']}]")
        for k, r in self.residuals.items():
            lines.append(f"  residual {k}: {r}")
        for path in self.outputs:
            lines.append(f"  wrote {path}")
        lines.append(f"  tolerances: {self.tolerances}  seed: {self.seed}")
        return "\n".join(lines)


def _tol(args):
    return Tolerance(args.rel_cut, args.res_cut)


def cmd_inject(args, rep):
    spec = tensorfile.read_spec(args.file)
    tol = _tol(args)
    if isinstance(spec, MpsSpec):
        if args.length:
            r = is_injective_mps(spec, args.length, tol)
            rep.verdict(f"length {args.length}", r.summary(), "injectivity")
        else:
            L0 = minimal_injective_length(spec, args.cap_length, tol)
            rep.verdict("minimal injective length", L0, "injectivity")
        return EXIT_OK
    H, K = args.region or (1, 1)
    r = is_injective_peps(spec, H, K, tol)
    rep.verdict(f"region {H}x{K}", r.summary(), "injectivity")
    return EXIT_OK


def cmd_gauge(args, rep):
    a = tensorfile.read_spec(args.file_a)
    b = tensorfile.read_spec(args.file_b)
    tol = _tol(args)
    if isinstance(a, MpsSpec) != isinstance(b, MpsSpec):
        raise ValueError("both files must hold the same kind of network")
    if isinstance(a, MpsSpec):
        cert = mps_gauge(a, b, tol)
        mats = {"R": cert.R}
        rep.verdict("R A_i R^-1 = scalar B_i", "certified", "gauge-uniqueness:MPS")
    else:
        cert = peps_gauge(a, b, tol)
        mats = {"Y": cert.Y, "Z": cert.Z}
        rep.verdict("A gauged by (Y, Z) = scalar B", "certified", "gauge-uniqueness:PEPS")
    rep.verdict("intertwiner dim", cert.intertwiner_dim, "gauge-uniqueness")
    rep.verdict("scalar", cert.scalar, "gauge-uniqueness")
    rep.verdict("theorem lattice size met", cert.theorem_size_met, "gauge-uniqueness")
    rep.residuals["tensor"] = cert.residual
    rep.residuals["condition"] = cert.condition
    if args.emit:
        os.makedirs(args.emit, exist_ok=True)
        for name, mat in mats.items():
            path = os.path.join(args.emit, f"{name}.json")
            tensorfile.write(path, mat, "matrix", {"name": name})
            rep.outputs.append(path)
    return EXIT_OK


def cmd_symmetry(args, rep):
    spec = tensorfile.read_spec(args.file)
    tol = _tol(args)
    if args.u:
        cert = certify_local(spec, tensorfile.read_matrix(args.u), tol)
        rep.verdict("theta (principal value)", cert.theta, "local-symmetry")
    else:
        cert = certify_spatial(spec, args.spatial, tol)
        rep.verdict("kind", cert.kind, "spatial-symmetry")
    for name, (ok, r) in cert.constraint_report.items():
        rep.verdict(name, ok, "symmetry-constraint")
        rep.residuals[name] = r
    rep.residuals["tensor"] = cert.residual
    return EXIT_OK


def _sz_for(args, spec):
    if args.sz:
        return tensorfile.read_matrix(args.sz)
    sz = spin_matrices(args.spin)[2]
    if sz.shape[0] != spec.d:
        mult, rem = divmod(spec.d, sz.shape[0])
        if rem:
            raise ValueError(f"physical dimension {spec.d} is not a multiple of 2J+1; pass --sz")
        sz = np.kron(sz, np.eye(mult))
    return sz


def cmd_lsm(args, rep):
    spec = tensorfile.read_spec(args.file)
    v = lsm_check(spec, args.spin, _sz_for(args, spec), _tol(args))
    rep.verdict("magnetization m", v.m, "lsm")
    rep.verdict("symmetric", v.symmetric, "lsm")
    rep.verdict("injective (some affordable region)", v.injective, "lsm")
    rep.verdict("J - m integer", v.J_minus_m_integer, "lsm")
    rep.verdict("consistent", v.consistent, "lsm")
    rep.residuals["symmetry"] = v.symmetry_residual
    if v.theta_linearity is not None:
        rep.residuals["theta linearity"] = v.theta_linearity
    return EXIT_OK


def cmd_wilson(args, rep):
    spec = tensorfile.read_spec(args.file)
    u = tensorfile.read_matrix(args.u) if args.u else PAULI[args.pauli]
    w = wilson_check(spec, u, _tol(args))
    rep.verdict("(i) column loop invariant", w.loop_vertical_invariant, "wilson")
    rep.verdict("(ii) row loop invariant", w.loop_horizontal_invariant, "wilson")
    rep.verdict("(iii) single site not invariant", w.single_site_noninvariant, "wilson")
    rep.verdict("non-injectivity implied", w.non_injectivity_implied, "wilson")
    rep.verdict("contradiction with injectivity tests", w.contradiction, "wilson")
    rep.residuals.update(w.residuals)
    return EXIT_OK


def cmd_parent(args, rep):
    spec = tensorfile.read_spec(args.file)
    tol = _tol(args)
    region = tuple(args.region) if args.region else ((2,) if isinstance(spec, MpsSpec) else (2, 2))
    lattice = tuple(args.lattice) if args.lattice else None
    h = parent_hamiltonian(spec, region, tol, lattice=lattice)
    rep.verdict("term rank", h.term_rank, "parent-hamiltonian")
    rep.verdict("ground space dimension", ground_space_dimension(h, tol=tol), "parent-hamiltonian")
    rep.residuals["frustration"] = h.frustration_residual
    rep.residuals["projector"] = h.projector_residual()
    return EXIT_OK


def cmd_arealaw(args, rep):
    spec = tensorfile.read_spec(args.file)
    lattice = tuple(args.lattice) if args.lattice else None
    r = area_law_check(spec, tuple(args.region), _tol(args), lattice=lattice)
    rep.verdict("S0 (bits)", r.S0, "area-law")
    rep.verdict("boundary bound (bits)", r.boundary_bound, "area-law")
    rep.verdict("saturated", r.saturated, "area-law")
    rep.verdict("injective", r.injective, "area-law")
    return EXIT_OK


def cmd_demo(args, rep):
    names = list(DEMOS) if args.name == "all" else [args.name]
    failed = False
    for name in names:
        for check in run_demo(name, _tol(args)):
            rep.verdict(f"{name}: {check.label}", "PASS" if check.passed else "FAIL", check.tag)
            failed |= not check.passed
    return EXIT_PRECONDITION if failed else EXIT_OK


def cmd_export(args, rep):
    spec = example_states(args.name)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(tensorfile.spec_to_text(spec, args.name) + "\n")
    rep.outputs.append(args.out)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="pepscanon", description="Injectivity, gauges and symmetries of MPS/PEPS.")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--rel-cut", type=float, default=1e-9, help="relative singular-value cut for ranks")
    p.add_argument("--res-cut", type=float, default=1e-9, help="residual acceptance threshold")
    p.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("inject", help="rank test of the boundary-to-bulk map")
    s.add_argument("file")
    s.add_argument("--length", type=int)
    s.add_argument("--region", type=int, nargs=2, metavar=("H", "K"))
    s.add_argument("--cap-length", type=int, default=6)
    s.set_defaults(func=cmd_inject)

    s = sub.add_parser("gauge", help="gauge relating two representations of one state")
    s.add_argument("file_a")
    s.add_argument("file_b")
    s.add_argument("--emit", metavar="DIR", help="write gauge matrices as tensor files")
    s.set_defaults(func=cmd_gauge)

    s = sub.add_parser("symmetry", help="certify an on-site or spatial symmetry")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--u", metavar="MATRIX_FILE")
    g.add_argument("--spatial", choices=SPATIAL_KINDS)
    s.set_defaults(func=cmd_symmetry)

    s = sub.add_parser("lsm", help="magnetization obstruction check")
    s.add_argument("file")
    s.add_argument("--spin", type=float, required=True)
    s.add_argument("--sz", metavar="MATRIX_FILE")
    s.set_defaults(func=cmd_lsm)

    s = sub.add_parser("wilson", help="loop-operator conditions")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--u", metavar="MATRIX_FILE")
    g.add_argument("--pauli", choices=("X", "Y", "Z"), default="X")
    s.set_defaults(func=cmd_wilson)

    s = sub.add_parser("parent", help="parent Hamiltonian and its ground-space dimension")
    s.add_argument("file")
    s.add_argument("--region", type=int, nargs="+")
    s.add_argument("--lattice", type=int, nargs="+")
    s.set_defaults(func=cmd_parent)

    s = sub.add_parser("arealaw", help="0-Renyi entropy against the boundary bound")
    s.add_argument("file")
    s.add_argument("--region", type=int, nargs=2, required=True)
    s.add_argument("--lattice", type=int, nargs=2)
    s.set_defaults(func=cmd_arealaw)

    s = sub.add_parser("demo", help="run a bundled pipeline")
    s.add_argument("name", choices=(*DEMOS, "all"))
    s.set_defaults(func=cmd_demo)

    s = sub.add_parser("export", help="write a bundled example state")
    s.add_argument("name", choices=EXAMPLE_NAMES)
    s.add_argument("out")
    s.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = _tol(args)
    except ValueError as exc:
        parser.error(str(exc))
    rep = Report(argv, tol, args.seed)
    np.random.seed(args.seed)
    try:
        code = args.func(args, rep)
    except tensorfile.TensorFileError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DeskScaleExceeded as exc:
        print(f"DeskScaleExceeded: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except (NonUniqueGauge, NotFoundBelowCap) as exc:
        print(f"{type(exc).__name__}: {exc}" if not isinstance(exc, NonUniqueGauge) else str(exc), file=sys.stderr)
        return EXIT_DEGENERATE
    except (TensorNetworkError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    print(rep.render(args.json))
    return code


if __name__ == "__main__":
    sys.exit(main())
