"""
Command line interface.

    fluxtube spectrum   --alpha 1 --e-max 5 --m -4..4 --format csv
    fluxtube match-scan --alpha 0.5 --r-tube 0.4 --m -2..2
    fluxtube indices    --alpha-grid -3:3:0.05
    fluxtube ab         --alpha 1.5 --r-tube 1e-3
    fluxtube verify     --suite all

Exit status is 0 on success, 1 for invalid input and 2 when ``verify``
finds a failing check.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import ab, finite_tube, spectrum, verify
from .radial import Channel, FluxConfig

COMMANDS = ("spectrum", "match-scan", "indices", "ab", "verify")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; 2 is reserved for failed checks here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    alpha: Optional[float] = None
    kappa: float = 0.0
    r_tube: Optional[float] = None
    e_max: Optional[float] = None
    m_min: int = -6
    m_max: int = 6
    output_format: str = "json"
    output_path: Optional[str] = None

    @classmethod
    def from_namespace(cls, ns) -> "RunConfig":
        m = getattr(ns, "m", (-6, 6))
        cfg = cls(ns.command, getattr(ns, "alpha", None), getattr(ns, "kappa", 0.0),
                  getattr(ns, "r_tube", None), getattr(ns, "e_max", None), m[0], m[1],
                  getattr(ns, "output_format", "json"), ns.output_path)
        cfg.validate()
        return cfg

    def validate(self):
        for name in ("alpha", "kappa", "r_tube", "e_max"):
            v = getattr(self, name)
            if v is not None and not math.isfinite(v):
                raise ValueError(f"{name} must be finite")
        if self.r_tube is not None and not self.r_tube > 0:
            raise ValueError("r_tube must be positive")
        if self.e_max is not None and not self.e_max > 0:
            raise ValueError("e_max must be positive")


def _int_value(text: str) -> int:
    v = float(text)
    if v != int(v):
        raise ValueError(f"expected an integer, got {text}")
    return int(v)


def parse_m_range(text: str) -> tuple:
    """'a..b' -> (a, b); a single number gives (a, a)."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            out = (_int_value(lo), _int_value(hi))
        else:
            v = _int_value(text)
            out = (v, v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad m range {text!r}, expected a..b")
    if out[0] > out[1]:
        raise argparse.ArgumentTypeError(f"empty m range {text!r}")
    return out


def parse_grid(text: str) -> list:
    """'lo:hi:step' -> values lo, lo+step, ... <= hi, built in exact decimal
    arithmetic so that integers and half-integers land exactly."""
    try:
        lo, hi, step = (Fraction(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}, expected lo:hi:step")
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}")
    count = int((hi - lo) / step)
    return [float(lo + i * step) for i in range(count + 1)]


_NUM = re.compile(r"^-[0-9.]")


def _join_negative_values(argv: Sequence[str]) -> list:
    # "--m -4..4" would be read as an unknown flag; glue such values on
    out = []
    args = list(argv)
    i = 0
    while i < len(args):
        a = args[i]
        if (a.startswith("--") and "=" not in a and i + 1 < len(args)
                and _NUM.match(args[i + 1])):
            out.append(f"{a}={args[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fluxtube", description="Singular magnetic flux tube: spectra, "
                "indices and checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common_out(sp):
        sp.add_argument("--format", dest="output_format", choices=("json", "csv"),
                        default="json")
        sp.add_argument("--output", dest="output_path", default=None,
                        help="write to this file instead of stdout")

    sp = sub.add_parser("spectrum", help="enumerate the R -> 0 spectrum")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--kappa", type=float, default=0.0)
    sp.add_argument("--e-max", type=float, default=5.0)
    sp.add_argument("--m", type=parse_m_range, default=(-6, 6), help="range a..b")
    common_out(sp)

    sp = sub.add_parser("match-scan", help="finite-R eigenvalues from the matching condition")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--r-tube", type=float, required=True)
    sp.add_argument("--kappa", type=float, default=0.0)
    sp.add_argument("--e-max", type=float, default=finite_tube.DEFAULT_E_MAX)
    sp.add_argument("--step", type=float, default=finite_tube.DEFAULT_STEP)
    sp.add_argument("--m", type=parse_m_range, default=(-3, 3))
    sp.add_argument("--sigma", choices=("-0.5", "0.5", "both"), default="both")
    common_out(sp)

    sp = sub.add_parser("indices", help="I_s and I_AB on an alpha grid")
    sp.add_argument("--alpha-grid", type=parse_grid, default=parse_grid("-3:3:0.05"))
    common_out(sp)

    sp = sub.add_parser("ab", help="k = 0 modes of the pure Aharonov-Bohm system")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--r-tube", type=float, default=1e-3)
    common_out(sp)

    sp = sub.add_parser("verify", help="run the verification suite")
    sp.add_argument("--suite", choices=verify.suite_names(), default="all")
    sp.add_argument("--output", dest="output_path", default=None)
    return p


def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _cmd_spectrum(ns) -> str:
    tab = spectrum.enumerate_spectrum(ns.alpha, ns.kappa, ns.e_max, *ns.m)
    return tab.to_csv() if ns.output_format == "csv" else tab.to_json(indent=1)


def _cmd_match_scan(ns) -> str:
    cfg = FluxConfig(ns.alpha, ns.r_tube, ns.kappa)
    sigmas = (-0.5, 0.5) if ns.sigma == "both" else (float(ns.sigma),)
    rows = []
    for sigma in sigmas:
        for m in range(ns.m[0], ns.m[1] + 1):
            ch = Channel(sigma, m)
            for r in finite_tube.scan_roots(cfg, ch, 0.0, ns.e_max, ns.step):
                rows.append((sigma, m, r.energy + ns.kappa * sigma, r.energy,
                             r.residual_at_root, r.bracket[0], r.bracket[1]))
    header = ("sigma", "m", "E", "E_kappa0", "residual", "bracket_lo", "bracket_hi")
    if ns.output_format == "csv":
        return _rows_csv(header, [[repr(v) if isinstance(v, float) else v for v in r]
                                  for r in rows])
    return json.dumps({"alpha": ns.alpha, "r_tube": ns.r_tube, "kappa": ns.kappa,
                       "roots": [dict(zip(header, r)) for r in rows]}, indent=1)


def _cmd_indices(ns) -> str:
    rows = [(a, s, i_ab) for a, i_ab, s in ab.index_curve(ns.alpha_grid)]
    header = ("alpha", "I_s", "I_AB")
    if ns.output_format == "csv":
        return _rows_csv(header, [(repr(a), s, i) for a, s, i in rows])
    return json.dumps([dict(zip(header, r)) for r in rows], indent=1)


def _cmd_ab(ns) -> str:
    modes = ab.ab_zero_modes(ns.alpha, ns.r_tube)
    if ns.output_format == "csv":
        header = ("sigma", "m", "m_plus_alpha", "regime", "nu")
        return _rows_csv(header, [[d[k] for k in header] for d in (m.as_dict() for m in modes)])
    d = json.loads(ab.zero_modes_to_json(modes)) if modes else {"modes": []}
    d.update(alpha=ns.alpha, r_tube=ns.r_tube, index_ab=ab.index_ab(ns.alpha),
             index_singular=spectrum.index_singular(ns.alpha))
    return json.dumps(d, indent=1)


_HANDLERS = {"spectrum": _cmd_spectrum, "match-scan": _cmd_match_scan,
             "indices": _cmd_indices, "ab": _cmd_ab}


def _emit(text: str, path: Optional[str]):
    if path:
        with open(path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(_join_negative_values(argv))
    except SystemExit as e:
        return int(e.code or 0)
    if ns.command == "verify":
        rep = verify.run_suite(ns.suite)
        _emit(rep.to_json(indent=1), ns.output_path)
        return 0 if rep.passed else 2
    try:
        RunConfig.from_namespace(ns)
        text = _HANDLERS[ns.command](ns)
    except (ValueError, ArithmeticError) as e:
        print(f"fluxtube {ns.command}: {e}", file=sys.stderr)
        return 1
    _emit(text, ns.output_path)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
