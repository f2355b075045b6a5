"""Command-line front end.

Every subcommand runs one module pipeline and writes JSON (or CSV, COO text,
SVG where noted) to ``--output`` or standard output. Domain errors exit with
status 1 and a JSON error record on standard error; usage errors exit with 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import hexagons, lax, lattice, operators, partitions, spectra
from .errors import CrystalKagomeError
from .hexagons import WeightTable
from .lattice import (CREATE_FROM, CREATE_TO, LatticeState, Window, hexagon_sites,
                      hexagons_in_class, occupied)

# -- SVG rendering ------------------------------------------------------------

SCALE = 24
ROW_GAP = 48
RADIUS = 5


def _xy(site: lattice.SiteId, window: Window) -> tuple[float, float]:
    x = (site.pos if site.kind == "X" else site.pos / 2) - window.m_min + 1
    row = site.row + (0.5 if site.kind == "Y" else 0.0)
    y = (window.a_max + 1.5 - row) * ROW_GAP
    return x * SCALE, y


def render_state_svg(state: LatticeState, window: Window | None = None) -> str:
    """Static SVG of a lattice state.

    Y rows are solid lines, X rows dashed; particles are filled circles and
    holes open ones. Hexagons where a box can be added or removed are
    shaded. Output depends only on the input, so it is byte-stable.
    """
    window = state.window if window is None else window
    for s in state.flips:
        if not window.contains_site(s):
            raise lattice.WindowTooSmall(f"flip {tuple(s)} lies outside {window}")
    sites = window.sites()
    width = (2 * (window.m_max - window.m_min) + 8) * SCALE / 2 + SCALE
    height = (window.a_max - window.a_min + 3) * ROW_GAP
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" height="{height:g}" '
           f'viewBox="0 0 {width:g} {height:g}">',
           f'<rect width="{width:g}" height="{height:g}" fill="white"/>']
    for positions, css in ((CREATE_FROM, "addable"), (CREATE_TO, "removable")):
        color = "#cde8ff" if css == "addable" else "#ffd9c2"
        for a, m in hexagons_in_class(state, positions):
            ring = hexagon_sites(a, m)
            pts = " ".join("{:g},{:g}".format(*_xy(ring[i], window)) for i in (0, 2, 4, 5, 3, 1))
            out.append(f'<polygon class="{css}" data-anchor="{a},{m}" points="{pts}" '
                       f'fill="{color}" stroke="#888888"/>')
    rows = sorted({(s.kind, s.row) for s in sites})
    for kind, row in rows:
        xs = [_xy(s, window) for s in sites if (s.kind, s.row) == (kind, row)]
        x0, x1, y = min(p[0] for p in xs), max(p[0] for p in xs), xs[0][1]
        dash = ' stroke-dasharray="4,3"' if kind == "X" else ""
        out.append(f'<line x1="{x0:g}" y1="{y:g}" x2="{x1:g}" y2="{y:g}" stroke="black"{dash}/>')
    for s in sites:
        x, y = _xy(s, window)
        fill = "black" if occupied(state, s) else "white"
        out.append(f'<circle id="{s.kind}_{s.row}_{s.pos}" cx="{x:g}" cy="{y:g}" r="{RADIUS}" '
                   f'fill="{fill}" stroke="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- argument helpers ---------------------------------------------------------

def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def _positive(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def _json_arg(text: str):
    path = Path(text)
    if path.is_file():
        text = path.read_text()
    return json.loads(text)


def _add_table_args(p: argparse.ArgumentParser, suffix: str = "") -> None:
    dest = suffix.replace("-", "_")
    g = p.add_mutually_exclusive_group()
    g.add_argument(f"--weights{suffix}", dest=f"weights{dest}", help="weight-table JSON file")
    g.add_argument(f"--descendant{suffix}", dest=f"descendant{dest}", type=_complex,
                   metavar="U", help="use descendant weights at spectral parameter U")


def _table(args, suffix: str = "", rng: np.random.Generator | None = None) -> WeightTable:
    dest = suffix.replace("-", "_")
    path = getattr(args, f"weights{dest}", None)
    u = getattr(args, f"descendant{dest}", None)
    if path:
        return WeightTable.from_json(Path(path).read_text())
    if u is not None:
        return lax.descendant_weights(u, args.anisotropy)
    if rng is None:
        rng = np.random.default_rng(args.seed)
    return WeightTable.random(rng)


def _params(args) -> operators.CouplingParams:
    return operators.CouplingParams(J=args.J, V=args.V, q=args.q)


def _pp_from_args(args) -> partitions.PlanePartition:
    return partitions.PlanePartition.from_heights(_json_arg(args.pp))


# -- subcommand handlers ------------------------------------------------------

def _dumps(obj) -> str:
    return json.dumps(obj) + "\n"


def cmd_pp(args) -> str:
    if args.action == "enumerate":
        return _dumps([pp.heights() for pp in partitions.enumerate_partitions(args.n)])
    if args.action == "count":
        return f"{len(partitions.enumerate_partitions(args.n))}\n"
    return _dumps(list(partitions.macmahon_coeffs(args.n_max).coeffs))


def cmd_lattice(args) -> str:
    if args.state:
        state = LatticeState.from_json(_json_arg(args.state))
    else:
        pp = _pp_from_args(args)
        window = Window.for_boxes(args.window_boxes if args.window_boxes is not None else len(pp))
        state = lattice.partition_to_state(pp, window)
    if args.action == "state":
        return _dumps(state.to_json())
    return render_state_svg(state)


def cmd_ham(args) -> str:
    if args.action == "matrix":
        H = spectra.build_hamiltonian(spectra.build_basis(args.n_max), _params(args))
        return H.to_coo_text() if args.format == "coo" else H.to_json() + "\n"
    res = spectra.ground_state_residual(args.n_max, args.q, J=args.J, V=args.V)
    return _dumps({"n_max": args.n_max, "q": args.q, "J": args.J,
                   "V": args.J if args.V is None else args.V, "residual": res})


def cmd_spec(args) -> str:
    params = _params(args)
    if args.action == "eigs":
        H = spectra.build_hamiltonian(spectra.build_basis(args.n_max), params)
        vals = spectra.lowest_eigenvalues(H, min(args.k, H.dim), method=args.method)
        if args.format == "csv":
            return "index,eigenvalue\n" + "".join(f"{i},{v:.17g}\n" for i, v in enumerate(vals))
        return _dumps(vals)
    z = spectra.quantum_partition_function(args.n_max, params, args.beta)
    return _dumps({"n_max": args.n_max, "beta": args.beta, "Z": z})


def cmd_hex(args) -> str:
    if args.action == "list":
        rows = [(c.label, sorted(c.positions)) for c in hexagons.enumerate_allowed()]
        if args.format == "csv":
            return "label,positions\n" + "".join(
                f"{lb},{' '.join(map(str, pos))}\n" for lb, pos in rows)
        return _dumps([{"label": lb, "positions": pos} for lb, pos in rows])
    if args.action == "classify":
        positions = [int(p) for p in args.positions.split(",") if p.strip()]
        if any(not 1 <= p <= 6 for p in positions):
            raise ValueError("positions must lie in 1..6")
        cls = hexagons.classify(lattice.HexagonConfig.from_positions(positions))
        return _dumps({"positions": sorted(set(positions)),
                       "class": None if cls is None else cls.label})
    spec = hexagons.TorusSpec(args.M, args.N, args.rules)
    if args.action == "torus-count":
        n = sum(1 for _ in hexagons.enumerate_torus_configs(spec))
        return _dumps({"M": args.M, "N": args.N, "rules": args.rules, "count": n})
    table = _table(args)
    z = hexagons.classical_partition_function(spec, table, method=args.method)
    return _dumps({"M": args.M, "N": args.N, "rules": args.rules, "Z": [z.real, z.imag]})


def cmd_tm(args) -> str:
    if args.action == "build":
        t = lax.transfer_matrix(_table(args), args.M, args.offset, args.rules)
        return t.to_json() + "\n"
    rng = np.random.default_rng(args.seed)
    tu = lax.transfer_matrix(_table(args, "-u", rng), args.M, "even", args.rules).entries
    tv = lax.transfer_matrix(_table(args, "-v", rng), args.M, args.offset_v, args.rules).entries
    return _dumps({"M": args.M, "rules": args.rules, "offset_v": args.offset_v,
                   "commutator_norm": lax.commutator_norm(tu, tv)})


def _residual_record(R: lax.RMatrix, residual: float) -> dict:
    return {"residual": residual, "kernel_dim": R.kernel_dim,
            "singular_values": list(R.singular_values)}


def cmd_fcr(args) -> str:
    rng = np.random.default_rng(args.seed)
    Wu, Wv = _table(args, "-u", rng), _table(args, "-v", rng)
    if args.action == "solve":
        R = lax.solve_R(Wu, Wv)
        rec = _residual_record(R, lax.fcr_residual(R, Wu, Wv))
        rec["R"] = lax.complex_matrix_to_json(R.entries)
        return _dumps(rec)
    R = lax.complex_matrix_from_json(_json_arg(args.r))
    return _dumps({"residual": lax.fcr_residual(R, Wu, Wv)})


def cmd_rtt(args) -> str:
    rng = np.random.default_rng(args.seed)
    Wu, Wv = _table(args, "-u", rng), _table(args, "-v", rng)
    if args.r:
        R = lax.RMatrix(lax.complex_matrix_from_json(_json_arg(args.r)), 1, ())
    else:
        R = lax.solve_R(Wu, Wv)
    res = lax.rtt_residual(R, lax.monodromy(Wu, args.M), lax.monodromy(Wv, args.M))
    return _dumps({"M": args.M, **_residual_record(R, res)})


def cmd_descend(args) -> str:
    return lax.descendant_weights(args.u, args.anisotropy).to_json() + "\n"


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crystal-kagome", description=__doc__.splitlines()[0])
    parser.add_argument("-o", "--output", help="write output here instead of stdout")
    parser.add_argument("--seed", type=int, default=0, help="seed for random weight tables")
    sub = parser.add_subparsers(dest="group", required=True)

    def group(name, handler, actions, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(handler=handler)
        s = p.add_subparsers(dest="action", required=True)
        return {a: s.add_parser(a) for a in actions}

    def couplings(p):
        p.add_argument("--J", type=float, default=1.0)
        p.add_argument("--V", type=float, default=1.0)
        p.add_argument("--q", type=_positive, default=1.0)

    pp = group("pp", cmd_pp, ("enumerate", "count", "macmahon"), "plane partitions")
    for a in ("enumerate", "count"):
        pp[a].add_argument("--n", type=int, required=True)
    pp["macmahon"].add_argument("--n-max", type=int, required=True)

    lt = group("lattice", cmd_lattice, ("state", "render"), "lattice states")
    for p in lt.values():
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--pp", help="height matrix as JSON text or file, e.g. [[2,1],[1]]")
        src.add_argument("--state", help="state JSON text or file")
        p.add_argument("--window-boxes", type=int, help="size the window for this many boxes")

    hm = group("ham", cmd_ham, ("matrix", "ground-check"), "Hamiltonian")
    hm["matrix"].add_argument("--n-max", type=int, required=True)
    couplings(hm["matrix"])
    hm["matrix"].add_argument("--format", choices=("coo", "json"), default="json")
    hm["ground-check"].add_argument("--n-max", type=int, required=True)
    hm["ground-check"].add_argument("--q", type=_positive, required=True)
    hm["ground-check"].add_argument("--J", type=float, default=1.0)
    hm["ground-check"].add_argument("--V", type=float, default=None, help="defaults to J")

    sp = group("spec", cmd_spec, ("eigs", "zq"), "spectra")
    for p in sp.values():
        p.add_argument("--n-max", type=int, required=True)
        couplings(p)
    sp["eigs"].add_argument("--k", type=int, default=6)
    sp["eigs"].add_argument("--method", choices=("auto", "dense", "iterative"), default="auto")
    sp["eigs"].add_argument("--format", choices=("json", "csv"), default="json")
    sp["zq"].add_argument("--beta", type=float, required=True)

    hx = group("hex", cmd_hex, ("list", "classify", "torus-count", "zclassical"), "hexagon model")
    hx["list"].add_argument("--format", choices=("json", "csv"), default="json")
    hx["classify"].add_argument("--positions", required=True, help="comma-separated, e.g. 1,4,5")
    for a in ("torus-count", "zclassical"):
        hx[a].add_argument("--M", type=int, required=True)
        hx[a].add_argument("--N", type=int, required=True)
        hx[a].add_argument("--rules", choices=("kagome", "vertical"), default="vertical")
    _add_table_args(hx["zclassical"])
    hx["zclassical"].add_argument("--anisotropy", type=_complex, default=0.5)
    hx["zclassical"].add_argument("--method", choices=("auto", "exhaustive", "transfer"), default="auto")

    tm = group("tm", cmd_tm, ("build", "commutator"), "transfer matrices")
    for p in tm.values():
        p.add_argument("--M", type=int, required=True)
        p.add_argument("--rules", choices=("kagome", "vertical"), default="vertical")
        p.add_argument("--anisotropy", type=_complex, default=0.5)
    tm["build"].add_argument("--offset", choices=("even", "odd"), default="even")
    _add_table_args(tm["build"])
    tm["commutator"].add_argument("--offset-v", choices=("even", "odd"), default="even")
    _add_table_args(tm["commutator"], "-u")
    _add_table_args(tm["commutator"], "-v")

    fc = group("fcr", cmd_fcr, ("solve", "residual"), "commutation relation")
    for p in fc.values():
        p.add_argument("--anisotropy", type=_complex, default=0.5)
        _add_table_args(p, "-u")
        _add_table_args(p, "-v")
    fc["residual"].add_argument("--r", required=True, help="R matrix JSON text or file")

    rt = group("rtt", cmd_rtt, ("check",), "monodromy relation")
    rt["check"].add_argument("--M", type=int, required=True)
    rt["check"].add_argument("--anisotropy", type=_complex, default=0.5)
    rt["check"].add_argument("--r", help="R matrix JSON; solved from the tables if omitted")
    _add_table_args(rt["check"], "-u")
    _add_table_args(rt["check"], "-v")

    ds = group("descend", cmd_descend, ("weights",), "descendant weights")
    ds["weights"].add_argument("--u", type=_complex, required=True)
    ds["weights"].add_argument("--anisotropy", type=_complex, default=0.5)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.handler(args)
    except CrystalKagomeError as exc:
        sys.stderr.write(_dumps({"error": exc.code, "message": str(exc)}))
        return 1
    except (ValueError, json.JSONDecodeError, FileNotFoundError) as exc:
        sys.stderr.write(_dumps({"error": "UsageError", "message": str(exc)}))
        return 2
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
