"""Command-line front end.

Exit codes: 0 ok, 2 input error, 3 check failure.  Every command writes a
RunManifest JSON sidecar next to its output.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import __version__
from .errors import EmptyFamily, SerreLabError

EXIT_OK, EXIT_INPUT, EXIT_CHECK = 0, 2, 3
SCHEMA_VERSION = 1
PRNG = "MT19937 (Python random.Random)"

OMEGA_COLUMNS = ["p", "N", "class_index", "M", "lambda", "Tbar", "Dbar", "enumerated",
                 "formula", "main_term_num", "main_term_den", "residual"]
FROB_COLUMNS = ["p", "r", "s", "a", "b", "delta", "s11", "s12", "s21", "s22",
                "N", "m11", "m12", "m21", "m22"]
CHEB_COLUMNS = ["X", "N", "class_index", "M", "lambda", "Tbar", "Dbar", "family_size",
                "sampled", "seed", "mean_square_num", "mean_square_den",
                "bound_ratio_num", "bound_ratio_den"]
CERTIFY_COLUMNS = ["r", "s", "W", "M_W", "cond1", "cond2", "cond3", "cond4", "verdict",
                   "witness", "prime_bound", "sample_bound"]
CENSUS_COLUMNS = ["X", "total", "certified_serre", "not_serre", "fail_cond1", "fail_cond2",
                  "fail_cond3", "fail_cond4", "prime_bound"]
ES_COLUMNS = ["s", "A", "B", "disc", "j", "f1_root", "f1_divisible", "disc_matches",
              "j_matches", "r", "s_model"]


class CheckFailed(Exception):
    pass


@dataclass
class RunManifest:
    command: str
    config: dict
    version: str
    schema_version: int
    prng: str
    started: float
    finished: float = 0.0
    output_digest: str = ""


# -------------------- config --------------------

def read_config(path: str) -> dict:
    """Flat `key = value` lines; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SerreLabError(f"bad config line: {line!r}")
            k, v = (x.strip() for x in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("SERRE_LAB_THREADS", "1")))
    except ValueError:
        return 1


# -------------------- output --------------------

def _frac(x: Fraction) -> tuple[int, int]:
    x = Fraction(x)
    return x.numerator, x.denominator


def render(rows: list[dict], columns: list[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2, sort_keys=False, default=str) + "\n"
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


# -------------------- commands --------------------

def cmd_frob(a) -> list[dict]:
    from .ec_fp import new_curve
    from .frobenius import sigma_matrix
    E = new_curve(a.p, a.r, a.s)
    F = sigma_matrix(E)
    (w, x), (y, z) = F.sigma
    row = dict(p=F.p, r=a.r, s=a.s, a=F.a, b=F.b, delta=F.delta, s11=w, s12=x, s21=y, s22=z)
    if a.mod:
        m = F.sigma_mod(a.mod)
        row.update(N=a.mod, m11=m[0], m12=m[1], m21=m[2], m22=m[3])
    return [row]


def cmd_omega(a) -> list[dict]:
    from .experiments import omega_report
    from .zmod import is_prime
    if not is_prime(a.p) or a.p < 5:
        raise SerreLabError(f"p={a.p} must be a prime >= 5")
    rows = []
    for rep in omega_report(a.p, a.level, enumerate_=not a.no_enumerate):
        if a.class_index is not None and rep.class_index != a.class_index:
            continue
        d = rep.descriptor
        num, den = _frac(rep.main_term)
        rows.append({"p": rep.p, "N": rep.N, "class_index": rep.class_index, "M": d.M,
                     "lambda": d.lam, "Tbar": d.Tbar, "Dbar": d.Dbar,
                     "enumerated": rep.enumerated, "formula": rep.formula,
                     "main_term_num": num, "main_term_den": den, "residual": rep.residual})
    if a.check and any(r["enumerated"] is not None and r["enumerated"] != r["formula"]
                       for r in rows):
        a._rows = rows
        raise CheckFailed("enumerated and formula counts differ")
    return rows


def cmd_cheb(a) -> list[dict]:
    from .experiments import chebotarev_mean_square
    from .families import enumerate_family
    from .gl2 import class_table
    T = class_table(a.level)
    if not 0 <= a.class_index < len(T):
        raise SerreLabError(f"class index {a.class_index} out of range at level {a.level}")
    desc = T.classes[a.class_index].descriptor
    fam = list(enumerate_family(a.family_height))
    rep = chebotarev_mean_square(a.X, a.level, desc, fam, seed=a.seed,
                                 sample_size=a.sample, workers=a.threads)
    ms, br = _frac(rep.mean_square), _frac(rep.bound_ratio)
    return [{"X": rep.X, "N": rep.N, "class_index": rep.class_index, "M": desc.M,
             "lambda": desc.lam, "Tbar": desc.Tbar, "Dbar": desc.Dbar,
             "family_size": rep.family_size, "sampled": rep.sampled, "seed": rep.seed,
             "mean_square_num": ms[0], "mean_square_den": ms[1],
             "bound_ratio_num": br[0], "bound_ratio_den": br[1]}]


def cmd_certify(a) -> list[dict]:
    from .families import canonical_model
    from .serre import certify_serre_curve
    E = canonical_model(a.r, a.s)
    v = certify_serre_curve(E, a.prime_bound, a.sample_bound, exhaustive=a.exhaustive)
    return [{"r": E.r, "s": E.s, "W": v.serre.W.value, "M_W": v.serre.M_W,
             "cond1": v.conditions[1], "cond2": v.conditions[2], "cond3": v.conditions[3],
             "cond4": v.conditions[4], "verdict": v.verdict, "witness": v.witness,
             "prime_bound": v.prime_bound, "sample_bound": v.sample_bound}]


def cmd_census(a) -> list[dict]:
    from .experiments import serre_census
    rep = serre_census(a.X, a.prime_bound, a.sample_bound, workers=a.threads)
    f = rep.failures_by_condition
    return [{"X": rep.X, "total": rep.total, "certified_serre": rep.certified_serre,
             "not_serre": rep.not_serre, "fail_cond1": f.get(1, 0), "fail_cond2": f.get(2, 0),
             "fail_cond3": f.get(3, 0), "fail_cond4": f.get(4, 0),
             "prime_bound": rep.prime_bound}]


def cmd_family_es(a) -> list[dict]:
    from .families import es_rational_curve, verify_es_identities
    if a.s_den == 0:
        raise SerreLabError("denominator must be nonzero")
    s = Fraction(a.s_num, a.s_den)
    rep = verify_es_identities(s)
    E = es_rational_curve(s)
    row = {"s": str(rep.s), "A": str(rep.A), "B": str(rep.B), "disc": str(rep.disc),
           "j": str(rep.j), "f1_root": str(rep.factor_root), "f1_divisible": rep.f1_divisible,
           "disc_matches": rep.disc_matches, "j_matches": rep.j_matches,
           "r": E.r, "s_model": E.s}
    if a.verify and not rep.ok:
        a._rows = [row]
        raise CheckFailed("an E_s identity failed")
    return [row]


COMMANDS = {
    "frob": (cmd_frob, FROB_COLUMNS),
    "omega": (cmd_omega, OMEGA_COLUMNS),
    "cheb": (cmd_cheb, CHEB_COLUMNS),
    "certify": (cmd_certify, CERTIFY_COLUMNS),
    "census": (cmd_census, CENSUS_COLUMNS),
    "family-es": (cmd_family_es, ES_COLUMNS),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", choices=["csv", "json"], default="json")
    common.add_argument("--output", help="write the table here instead of stdout")
    common.add_argument("--manifest", help="manifest path (default: <output>.manifest.json)")
    common.add_argument("--no-manifest", action="store_true")
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--threads", type=int, default=default_threads())

    ap = _Parser(prog="serre-lab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("frob", parents=[common], help="Frobenius data of one curve mod p")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--mod", type=int)

    p = sub.add_parser("omega", parents=[common], help="Omega_C(p) by enumeration and formula")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--class-index", type=int)
    p.add_argument("--check", action="store_true")
    p.add_argument("--no-enumerate", action="store_true")

    p = sub.add_parser("cheb", parents=[common], help="Chebotarev mean square over C(Y)")
    p.add_argument("--X", type=int, required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--class-index", type=int, required=True)
    p.add_argument("--family-height", type=int, default=2)
    p.add_argument("--sample", type=int)
    p.add_argument("--seed", type=int, default=0)

    for name, hlp in (("certify", "Serre-curve conditions for one curve"),
                      ("census", "Serre-curve census over C(X)")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        if name == "certify":
            p.add_argument("--r", type=int, required=True)
            p.add_argument("--s", type=int, required=True)
            p.add_argument("--exhaustive", action="store_true")
        else:
            p.add_argument("--X", type=int, required=True)
        p.add_argument("--prime-bound", type=int, default=37)
        p.add_argument("--sample-bound", type=int, default=500)

    p = sub.add_parser("family-es", parents=[common], help="identities for the family E_s")
    p.add_argument("--s-num", type=int, required=True)
    p.add_argument("--s-den", type=int, default=1)
    p.add_argument("--verify", action="store_true")
    return ap


def parse(argv) -> argparse.Namespace:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.config:
        try:
            cfg = read_config(args.config)
        except OSError as exc:
            ap.error(str(exc))
        # precedence: flags > config > defaults
        sp = ap._subparsers._group_actions[0].choices[args.command]
        known = {a.dest: a for a in sp._actions}
        unknown = sorted(set(cfg) - set(known))
        if unknown:
            ap.error(f"unknown config keys: {', '.join(unknown)}")
        typed = {}
        for k, v in cfg.items():
            act = known[k]
            if act.const is True and act.nargs == 0:
                typed[k] = v.lower() in ("1", "true", "yes")
            else:
                typed[k] = act.type(v) if act.type else v
        sp.set_defaults(**typed)
        args = ap.parse_args(argv)
    return args


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parse(argv)
    fn, columns = COMMANDS[args.command]
    manifest = RunManifest(args.command, {}, __version__, SCHEMA_VERSION, PRNG, time.time())
    manifest.config = {k: v for k, v in sorted(vars(args).items())
                       if k not in ("command", "output", "manifest", "no_manifest")}
    code = EXIT_OK
    try:
        rows = fn(args)
    except (CheckFailed, EmptyFamily) as exc:
        rows = getattr(args, "_rows", [])
        print(f"check failed: {exc}", file=sys.stderr)
        code = EXIT_CHECK
    except SerreLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = render(rows, columns, args.out)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not args.no_manifest:
        manifest.finished = time.time()
        manifest.output_digest = "sha256:" + hashlib.sha256(text.encode()).hexdigest()
        path = args.manifest or ((args.output or args.command) + ".manifest.json")
        with open(path, "w") as fh:
            json.dump(asdict(manifest), fh, indent=2, default=str)
            fh.write("\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
