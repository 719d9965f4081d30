"""Command-line front end.

Subcommands: spectrum, numrange, grid, quasimode, mehler, projector, edge,
conjecture, verify.  Complex numbers are written "re,im" on the command
line; a flat INI config file can preset any option and explicit flags win.
``NSO_WORKERS`` (or --workers) sets the scan worker count; identical
configurations produce byte-identical exports regardless of it.

Exit codes: 0 success, 1 validation/verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import configparser
import sys

import numpy as np

from . import acceptance, mehler, projectors, quasimode, resolvent, spectral
from .discretization import build_matrix, dump_matrix, reliable_eigenvalues
from .errors import NsolabError


def parse_complex(text):
    parts = str(text).split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")


def parse_floats(text):
    try:
        return tuple(float(p) for p in str(text).split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}")


def parse_ints(text):
    try:
        return tuple(int(p) for p in str(text).split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated ints, got {text!r}")


def _check_dim(dim):
    if dim < 16 or dim > 1024 or dim & (dim - 1):
        raise NsolabError(f"truncation dim must be a power of two in [16, 1024], got {dim}")
    return dim


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="nso-lab",
        description="Numerical laboratory for the complex harmonic oscillator "
                    "-(d/dx)^2 + c x^2, Re(c) > 0.",
    )
    ap.add_argument("--config", help="INI config file; explicit flags override it")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--c", type=parse_complex, default=None,
                       help="coupling as 're,im' (default 0,1)")
        p.add_argument("--dim", type=int, default=None,
                       help="truncation dimension (power of two, 16..1024)")
        p.add_argument("--workers", type=int, default=None,
                       help="scan workers (default NSO_WORKERS or 1)")
        p.add_argument("--out", default=None, help="output path")

    p = sub.add_parser("spectrum", help="print eigenvalues sqrt(c)(2n+1)")
    common(p)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--check", action="store_true",
                   help="cross-check against the truncated operator")

    p = sub.add_parser("numrange", help="numerical-range membership and boundary")
    common(p)
    p.add_argument("--z", type=parse_complex, default=None, help="point to classify")
    p.add_argument("--boundary", type=parse_floats, default=None,
                   metavar="TMIN,TMAX,COUNT", help="sweep the boundary curve")

    p = sub.add_parser("grid", help="resolvent-norm grid for pseudospectra")
    common(p)
    p.add_argument("--rect", type=parse_floats, default=None, metavar="RE0,RE1,IM0,IM1")
    p.add_argument("--res", type=parse_ints, default=None, metavar="NX,NY")
    p.add_argument("--eps", type=parse_floats, default=None,
                   help="decreasing epsilon levels for the contour export")
    p.add_argument("--contours", default=None, help="JSON contour export path")

    p = sub.add_parser("quasimode", help="quasi-mode certificates over an eta sweep")
    common(p)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--etas", type=parse_floats, default=None)

    p = sub.add_parser("mehler", help="heat-kernel coefficients, norms and decay scans")
    common(p)
    p.add_argument("--tau", type=parse_complex, default=None)
    p.add_argument("--tau2", type=parse_complex, default=None,
                   help="second parameter for the semigroup-law defect")
    p.add_argument("--nodes", type=int, default=None)
    p.add_argument("--decay-edge", choices=("lower", "upper"), default=None)
    p.add_argument("--t-grid", type=parse_floats, default=None)

    p = sub.add_parser("projector", help="instability-index table")
    common(p)
    p.add_argument("--n-max", type=int, default=None)

    p = sub.add_parser("edge", help="resolvent norms along a sector edge line")
    common(p)
    p.add_argument("--edge", choices=("lower", "upper"), default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--eta-max", type=float, default=None)
    p.add_argument("--eta-step", type=float, default=None)

    p = sub.add_parser("conjecture", help="exploratory inclusion-region data scan")
    common(p)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--only", type=parse_ints, default=None,
                   help="subset of check numbers, e.g. 2,3")

    p = sub.add_parser("dump-matrix", help="write the truncated operator to a file")
    common(p)
    return ap


_DEFAULTS = {
    "c": 1j,
    "dim": 128,
    "count": 5,
    "rect": (0.0, 6.0, 0.0, 6.0),
    "res": (41, 41),
    "eps": (10.0, 1.0, 0.1),
    "alpha": 1.0,
    "gamma": 1.0,
    "etas": (10.0, 100.0, 1000.0),
    "tau": complex(1.0, 0.0),
    "nodes": 160,
    "t_grid": tuple(float(t) for t in np.arange(1.0, 21.0)),
    "n_max": 3,
    "edge": "lower",
    "eps_edge": 0.3,
    "eta_max": 40.0,
    "eta_step": 1.0,
    "m": 0,
    "p": 0.25,
    "delta": 0.5,
}

_PARSERS = {
    "c": parse_complex,
    "rect": parse_floats,
    "res": parse_ints,
    "eps": parse_floats,
    "etas": parse_floats,
    "tau": parse_complex,
    "tau2": parse_complex,
    "t_grid": parse_floats,
    "dim": int,
    "count": int,
    "nodes": int,
    "n_max": int,
    "m": int,
    "workers": int,
    "alpha": float,
    "gamma": float,
    "eta_max": float,
    "eta_step": float,
    "p": float,
    "delta": float,
    "out": str,
    "contours": str,
    "edge": str,
}


def _merged(args, key, section):
    """Flag value if given, else config-file value, else built-in default."""
    val = getattr(args, key, None)
    if val is not None:
        return val
    edge_eps = key == "eps" and section == "edge"  # scalar, unlike the grid levels
    cfg = getattr(args, "_config", None)
    if cfg is not None:
        for sec in (section, "common"):
            if cfg.has_option(sec, key):
                parser = float if edge_eps else _PARSERS.get(key, str)
                return parser(cfg.get(sec, key))
    if edge_eps:
        return _DEFAULTS["eps_edge"]
    return _DEFAULTS.get(key)


def _workers(args, section):
    w = _merged(args, "workers", section)
    if w is not None:
        return max(1, int(w))
    return resolvent.default_workers()


def _coupling(args, section):
    return spectral.Coupling(_merged(args, "c", section))


def _fmt_complex(z):
    z = complex(z)
    return f"{z.real!r} {z.imag!r}"


def _cmd_spectrum(args):
    cp = _coupling(args, "spectrum")
    count = _merged(args, "count", "spectrum")
    vals = spectral.eigenvalues(cp, count)
    if args.check:
        dim = _check_dim(_merged(args, "dim", "spectrum"))
        vals, diags = reliable_eigenvalues(cp, dim, count)
        for n, (v, d) in enumerate(zip(vals, diags)):
            print(f"{n} {_fmt_complex(v)} relgap={d.rel_gap:.3e}")
    else:
        for n, v in enumerate(vals):
            print(f"{n} {_fmt_complex(v)}")
    return 0


def _cmd_numrange(args):
    cp = _coupling(args, "numrange")
    if args.z is not None:
        pt = spectral.numerical_range_point(cp, args.z)
        print(f"{pt.classification} t1={pt.t1!r} t2={pt.t2!r}")
        return 0
    spec = _merged(args, "boundary", "numrange") or (1e-2, 1e2, 41)
    tmin, tmax, count = spec
    out = _merged(args, "out", "numrange")
    rows = [spectral.numerical_range_boundary(cp, t)
            for t in np.geomspace(tmin, tmax, int(count))]
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("re,im\n")
            for z in rows:
                fh.write(f"{z.real!r},{z.imag!r}\n")
    else:
        for z in rows:
            print(_fmt_complex(z))
    return 0


def _cmd_grid(args):
    cp = _coupling(args, "grid")
    dim = _check_dim(_merged(args, "dim", "grid"))
    grid = resolvent.pseudospectra_grid(
        cp, _merged(args, "rect", "grid"), _merged(args, "res", "grid"),
        _merged(args, "eps", "grid"), dim, workers=_workers(args, "grid"))
    out = _merged(args, "out", "grid")
    if out:
        resolvent.grid_to_csv(grid, out)
    contours = _merged(args, "contours", "grid")
    if contours:
        resolvent.contour_to_json(grid, contours)
    reliable = sum(1 for s in grid.samples if s.reliable)
    print(f"grid {grid.resolution[0]}x{grid.resolution[1]}: {reliable}/"
          f"{len(grid.samples)} reliable nodes")
    return 0


def _cmd_quasimode(args):
    cp = _coupling(args, "quasimode")
    alpha = _merged(args, "alpha", "quasimode")
    gamma = _merged(args, "gamma", "quasimode")
    reports = [quasimode.quasimode_report(
        quasimode.QuasimodeParams(cp, alpha, gamma, eta))
        for eta in _merged(args, "etas", "quasimode")]
    for r in reports:
        print(f"eta={r.params.eta!r} ratio={r.ratio!r} lower_bound={r.lower_bound!r}")
    out = _merged(args, "out", "quasimode")
    if out:
        quasimode.sweep_to_csv(reports, out)
    return 0


def _cmd_mehler(args):
    cp = _coupling(args, "mehler")
    decay_edge = _merged(args, "decay_edge", "mehler") if hasattr(args, "decay_edge") \
        else None
    if decay_edge:
        scan = mehler.edge_decay_scan(cp, decay_edge, _merged(args, "t_grid", "mehler"))
        print(f"fitted_exponent={scan.meta['fitted_exponent']!r} "
              f"reference={scan.meta['reference_rate']!r}")
        out = _merged(args, "out", "mehler")
        if out:
            mehler.decay_to_csv(scan, out)
        return 0
    tau = _merged(args, "tau", "mehler")
    if args.tau2 is not None:
        defect = mehler.semigroup_law_check(cp, tau, args.tau2)
        print(f"semigroup_law_defect={defect!r}")
        return 0
    kern = mehler.kernel_coefficients(cp, tau)
    print(f"lambda={_fmt_complex(kern.lam)} w1={_fmt_complex(kern.w1)} "
          f"w2={_fmt_complex(kern.w2)} w3={_fmt_complex(kern.w3)} valid={kern.valid}")
    if kern.valid:
        nodes = _merged(args, "nodes", "mehler")
        ny = mehler.nystrom_build(kern, nodes)
        print(f"hs_closed={mehler.hs_norm(kern)!r} "
              f"hs_quadrature={mehler.hs_norm(kern, 'quadrature')!r} "
              f"operator_norm={ny.norm!r}")
        for n in range(3):
            print(f"action_error[{n}]={mehler.semigroup_action_check(kern, n)!r}")
    return 0


def _cmd_projector(args):
    cp = _coupling(args, "projector")
    dim = _check_dim(_merged(args, "dim", "projector"))
    rows = projectors.index_table(cp, _merged(args, "n_max", "projector"), dim)
    for n, kc, kb, gap in rows:
        print(f"n={n} kappa_contour={kc!r} kappa_biorthogonal={kb!r} relgap={gap!r}")
    out = _merged(args, "out", "projector")
    if out:
        projectors.index_table_to_csv(rows, out)
    return 0


def _cmd_edge(args):
    cp = _coupling(args, "edge")
    dim = _check_dim(_merged(args, "dim", "edge"))
    step = _merged(args, "eta_step", "edge")
    etas = np.arange(0.0, _merged(args, "eta_max", "edge") + step / 2, step)
    scan = resolvent.edge_scan(cp, _merged(args, "edge", "edge"), etas,
                               _merged(args, "eps", "edge"), dim,
                               workers=_workers(args, "edge"))
    print(f"sup_norm={scan.meta['sup_norm']!r}")
    out = _merged(args, "out", "edge")
    if out:
        resolvent.scan_to_csv(scan, out)
    return 0


def _cmd_conjecture(args):
    cp = _coupling(args, "conjecture")
    dim = _check_dim(_merged(args, "dim", "conjecture"))
    scan = resolvent.conjecture_scan(
        cp, _merged(args, "m", "conjecture"), _merged(args, "p", "conjecture"),
        _merged(args, "delta", "conjecture"), dim,
        workers=_workers(args, "conjecture"))
    print(f"b={scan.meta['b']!r} E={scan.meta['E']!r} "
          f"residual={scan.meta['curve_residual']!r} samples={len(scan.samples)}")
    out = _merged(args, "out", "conjecture")
    if out:
        resolvent.scan_to_csv(scan, out)
    return 0


def _cmd_verify(args):
    results = acceptance.run_all(numbers=set(args.only) if args.only else None)
    return 0 if results and all(r.passed for r in results) else 1


def _cmd_dump_matrix(args):
    cp = _coupling(args, "dump-matrix")
    dim = _check_dim(_merged(args, "dim", "dump-matrix"))
    out = _merged(args, "out", "dump-matrix")
    if not out:
        raise NsolabError("dump-matrix needs --out")
    dump_matrix(build_matrix(cp, dim), out)
    print(f"wrote {dim}x{dim} truncation to {out}")
    return 0


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "numrange": _cmd_numrange,
    "grid": _cmd_grid,
    "quasimode": _cmd_quasimode,
    "mehler": _cmd_mehler,
    "projector": _cmd_projector,
    "edge": _cmd_edge,
    "conjecture": _cmd_conjecture,
    "verify": _cmd_verify,
    "dump-matrix": _cmd_dump_matrix,
}


def main(argv=None):
    ap = _build_parser()
    args = ap.parse_args(argv)
    if args.config:
        cfg = configparser.ConfigParser()
        if not cfg.read(args.config):
            print(f"config file not found: {args.config}", file=sys.stderr)
            return 2
        args._config = cfg
    else:
        args._config = None
    try:
        return _COMMANDS[args.command](args)
    except NsolabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
