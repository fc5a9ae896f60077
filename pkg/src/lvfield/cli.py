"""Command-line driver: ``lvfield verify|compute|list-suites``.

Config file (YAML, path from ``--config`` or $LVFIELD_CONFIG)::

    common:
      seed: 7
    js-identities:
      window: 8
    schrodinger-virasoro:
      cases: [["1/2", "1/3"]]

``common`` keys apply to every suite that accepts them; command-line flags
override both.  Rationals are written as strings.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

import yaml

from . import cuntz as cz
from . import jsmap as js
from . import liealg as la
from . import pairings as pr
from . import weyl as wy
from .kernel import IndexWindow
from .suites import SUITES, ConfigError, run_suite

CONFIG_ENV = "LVFIELD_CONFIG"

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def load_config(path: str | None) -> dict:
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    try:
        data = yaml.safe_load(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"bad YAML in {path}: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    for key in data:
        if key != "common" and key not in SUITES and key != "compute":
            raise ConfigError(f"unknown config section {key!r}")
    return data


def suite_params(config: dict, suite: str, flags: dict) -> dict:
    accepted = SUITES[suite][1]
    params = {k: v for k, v in (config.get("common") or {}).items() if k in accepted}
    params.update(config.get(suite) or {})
    params.update({k: v for k, v in flags.items() if v is not None})
    return params


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args, config) -> int:
    flags = {
        "window": args.window,
        "seed": args.seed,
        "n": args.n,
        "max_exp": args.max_exp,
        "quadrature_nodes": args.quadrature_nodes,
        "instances": args.instances,
    }
    params = suite_params(config, args.suite, flags)
    report = run_suite(args.suite, params)
    _emit(report.to_json(), args.out)
    c = report.counts()
    print(f"{args.suite}: {c['pass']} passed, {c['fail']} failed, {c['skipped']} skipped", file=sys.stderr)
    for chk in report.checks:
        if not chk.ok:
            print(f"  FAIL {chk.name}" + (f" ({chk.witness})" if chk.witness else ""), file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


# --- compute ------------------------------------------------------------------------------


def _parse_params(items) -> dict:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _d_matrix(args, params) -> str:
    basis = args.basis
    w = args.window or 4
    if basis == "x2dx":
        A = pr.x2dx_matrix(IndexWindow(1, w))
    elif basis == "sine":
        win = IndexWindow(1, w)
        c = {int(k[2:]): Fraction(v) for k, v in params.items() if k.startswith("c_")}
        A = pr.sine_operator_matrix(params.get("lambda", "0"), pr.VectorCoeffs(win, {k: v for k, v in c.items() if k in win}), win)
    elif basis == "laurent":
        A = pr.monomial_field_matrix(int(params.get("n", 1)), IndexWindow(-w, w))
    elif basis == "circle":
        A = pr.circle_field_matrix(int(params.get("n", 0)), IndexWindow(-w, w))
    elif basis == "sv":
        s = Fraction(params.get("s", "0"))
        A = pr.sv_action_matrix(int(params.get("m", 0)), params.get("rho", "0"), s, IndexWindow(-w + s, w + s))
    elif basis == "map":
        A = pr.map_induced_matrix([int(v) for v in params["h"].split(",")])
    else:
        raise ConfigError(f"unknown basis {basis!r}")
    cells = [[str(v) for v in row] for row in A.rows()]
    width = max((len(c) for row in cells for c in row), default=1)
    lines = [f"# <A e_a, f_b>, rows a, columns b, window {A.window}"]
    lines += ["  ".join(c.rjust(width) for c in row) for row in cells]
    return "\n".join(lines) + "\n"


_ATOM = re.compile(r"^(?P<fn>D|del|delbar)\((?:E(?P<ab>\d\d)|E\[(?P<a>[^,\]]+),(?P<b>[^\]]+)\]|e(?P<i>\d)|e\[(?P<j>[^\]]+)\])\)$")


def _split_factors(op: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in op:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "*" and depth == 0:
            parts.append(cur.strip())
            cur = ""
        else:
            cur += ch
    parts.append(cur.strip())
    return [p for p in parts if p]


def _matrix_atom(m):
    a, b = (m.group("ab")[0], m.group("ab")[1]) if m.group("ab") else (m.group("a").strip(), m.group("b").strip())
    win = IndexWindow(min(Fraction(a), Fraction(b)), max(Fraction(a), Fraction(b)))
    return pr.PairingMatrix.unit(win, Fraction(a), Fraction(b))


def _vector_atom(m):
    i = Fraction(m.group("i") or m.group("j").strip())
    return pr.VectorCoeffs.unit(IndexWindow(i, i), i)


def _weyl_op(op: str) -> wy.WeylElement:
    out = wy.WeylElement.scalar(1)
    for f in _split_factors(op):
        m = _ATOM.match(f)
        if m and m.group("fn") == "D" and (m.group("ab") or m.group("a")):
            el = js.D(_matrix_atom(m))
        elif m and m.group("fn") == "del" and (m.group("i") or m.group("j")):
            el = js.partial(_vector_atom(m))
        elif m and m.group("fn") == "delbar" and (m.group("i") or m.group("j")):
            el = js.partial_bar(_vector_atom(m))
        else:
            el = wy.from_text(f[1:-1] if f.startswith("{") and f.endswith("}") else f)
        out = wy.multiply(out, el)
    return out


def _cuntz_op(op: str) -> cz.CuntzElement:
    out = cz.CuntzElement.one()
    for f in _split_factors(op):
        m = _ATOM.match(f)
        if m and m.group("fn") == "D" and (m.group("ab") or m.group("a")):
            el = cz.cuntz_D(_matrix_atom(m))
        elif m and m.group("fn") == "del" and (m.group("i") or m.group("j")):
            el = cz.cuntz_del(_vector_atom(m))
        elif m and m.group("fn") == "delbar" and (m.group("i") or m.group("j")):
            el = cz.cuntz_delbar(_vector_atom(m))
        else:
            el = cz.from_text(f[1:-1] if f.startswith("{") and f.endswith("}") else f)
        out = out * el
    return out


def _algebra(name: str, seed: int):
    import random

    if name == "sl2":
        return la.sl2()
    if name.startswith("abelian"):
        return la.abelian(int(name[7:] or 2))
    if name == "solvable":
        return la.random_solvable(random.Random(seed), 4)
    raise ConfigError(f"unknown algebra {name!r} (sl2, abelianN, solvable)")


def _cocycle_table(args) -> str:
    L = _algebra(args.algebra, args.seed or 0)
    if args.u not in L:
        raise ConfigError(f"{args.u!r} is not a basis label of {L.name} ({', '.join(map(str, L.labels))})")
    spec = js.WeightSpec(args.degree, IndexWindow(0, L.dim - 1))
    tab = js.cocycle_table(L.basis_vector(args.u), L, spec)
    cells = [[str(v) for v in row] for row in tab]
    width = max(len(c) for row in cells for c in row)
    labels = [str(a) for a in L.labels]
    lw = max(len(a) for a in labels)
    lines = [f"# phi_{args.u}(w, z) on {L.name}, weight degree {args.degree}; rows w, columns z"]
    lines.append(" " * lw + "  " + "  ".join(a.rjust(width) for a in labels))
    for a, row in zip(labels, cells):
        lines.append(a.rjust(lw) + "  " + "  ".join(c.rjust(width) for c in row))
    return "\n".join(lines) + "\n"


def cmd_compute(args, config) -> int:
    params = {**((config.get("compute") or {}).get(args.what) or {}), **_parse_params(args.param)}
    params = {k: str(v) for k, v in params.items()}
    if args.what == "d-matrix":
        text = _d_matrix(args, params)
    elif args.what == "weyl-element":
        if not args.op:
            raise ConfigError("--op is required")
        text = wy.to_text(_weyl_op(args.op)) + "\n"
    elif args.what == "cuntz-element":
        if not args.op:
            raise ConfigError("--op is required")
        text = cz.to_text(_cuntz_op(args.op)) + "\n"
    else:
        text = _cocycle_table(args)
    _emit(text, args.out)
    return EXIT_OK


def cmd_list(args, config) -> int:
    for name, (_, defaults) in SUITES.items():
        opts = ", ".join(f"{k}={v}" for k, v in defaults.items())
        print(f"{name:22s} {opts}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lvfield", description="Exact verification of linear vector field realizations.")
    p.add_argument("--config", help=f"YAML config file (default: ${CONFIG_ENV})")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite and write a JSON report")
    v.add_argument("suite", choices=list(SUITES))
    v.add_argument("--window", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--n", type=int, help="branching factor (wavelet)")
    v.add_argument("--max-exp", type=int, dest="max_exp", help="monomial range |k| <= max-exp (wavelet)")
    v.add_argument("--quadrature-nodes", type=int, dest="quadrature_nodes")
    v.add_argument("--instances", type=int)
    v.add_argument("--out", help="report path (default stdout)")
    v.add_argument("--config", dest="sub_config", help=argparse.SUPPRESS)

    c = sub.add_parser("compute", help="print an object in canonical text form")
    c.add_argument("what", choices=["d-matrix", "weyl-element", "cuntz-element", "cocycle-table"])
    c.add_argument("--basis", default="x2dx", help="x2dx, sine, laurent, circle, sv, map")
    c.add_argument("--window", type=int)
    c.add_argument("--param", action="append", help="key=value, e.g. lambda=1/2, c_3=2, n=2, rho=1/3, h=1,2,0")
    c.add_argument("--op", help='e.g. "D(E12)", "del(e1) * delbar(e2)", "x[1] d[2]"')
    c.add_argument("--algebra", default="sl2")
    c.add_argument("--u", default="h")
    c.add_argument("--degree", type=int, default=2)
    c.add_argument("--seed", type=int)
    c.add_argument("--out")
    c.add_argument("--config", dest="sub_config", help=argparse.SUPPRESS)

    sub.add_parser("list-suites", help="list suites and their default parameters")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(getattr(args, "sub_config", None) or args.config)
        if args.command == "verify":
            return cmd_verify(args, config)
        if args.command == "compute":
            return cmd_compute(args, config)
        return cmd_list(args, config)
    except (ConfigError, ValueError, KeyError) as exc:
        print(f"lvfield: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
