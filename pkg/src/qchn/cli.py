"""Command-line entry point: ``qchn <command> ...``.

Exit codes: 0 all verdicts hold, 1 some verdict fails (the report is still
written), 2 usage or input error, 3 arithmetic failure (no usable q-sample).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from . import __version__
from .chn import CONTROLS, FAMILIES, verify
from .classical import classical_demo
from .projectors import antisymmetrizer, symmetrizer
from .rmatrix import HeckeData, HeckeError, load_rmatrix
from .scalars import Q, PoleError, format_scalar, sample_points
from .tensorspace import TensorOp, digits, generic_rank

log = logging.getLogger("qchn")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ARITH = 0, 1, 2, 3
MAX_RESIDUAL_ENTRIES = 20


class UsageError(Exception):
    pass


# -- report plumbing -----------------------------------------------------------


def _config(args: argparse.Namespace) -> dict:
    skip = {"func", "out", "verbose"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _report(args, certificates: list, verdict: str | None = None) -> dict:
    certificates = sorted(certificates, key=lambda c: c["identity"])
    if verdict is None:
        verdict = "holds" if all(c["verdict"] == "holds" for c in certificates) else "fails"
    return {"tool_version": __version__, "config": _config(args), "certificates": certificates, "verdict": verdict}


def write_report(report: dict, out: str | None) -> None:
    """Dump deterministically; replace ``out`` atomically, or print to stdout."""
    text = json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if not out:
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=path.name + ".", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _finish(args, report: dict) -> int:
    write_report(report, args.out)
    return EXIT_OK if report["verdict"] == "holds" else EXIT_FAIL


# -- shared argument handling --------------------------------------------------


def _add_source(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--standard", type=int, metavar="N", help="standard GL(N) R-matrix")
    g.add_argument("--rmatrix", metavar="FILE", help="R-matrix JSON file")


def _add_samples(p: argparse.ArgumentParser) -> None:
    p.add_argument("--samples", type=int, default=3, help="number of q-samples (>= 3)")
    p.add_argument("--seed", type=int, default=0)


def _add_out(p: argparse.ArgumentParser, *flags: str) -> None:
    p.add_argument(*(flags or ("--out",)), dest="out", metavar="FILE", help="report path (default: stdout)")


def _source(args) -> HeckeData:
    if args.rmatrix is not None:
        try:
            return load_rmatrix(args.rmatrix)
        except OSError as exc:
            raise UsageError(f"cannot read {args.rmatrix}: {exc}") from exc
    if args.standard < 1:
        raise UsageError("--standard needs N >= 1")
    return HeckeData.standard(args.standard)


def _samples(args) -> list:
    if args.samples < 3:
        raise UsageError("--samples must be at least 3")
    return sample_points(args.samples, seed=args.seed)


def _fmt(v) -> str:
    return format_scalar(v) if hasattr(v, "eval_at") else str(Fraction(v))


def _residual_record(identity: str, res: TensorOp) -> dict:
    ents = sorted(res.entries.items())
    rec = {"identity": identity, "verdict": "holds" if not ents else "fails", "nonzero_entries": len(ents)}
    if ents:
        rec["residual"] = [
            {"row": list(digits(r, res.n, res.k)), "col": list(digits(c, res.n, res.k)), "value": _fmt(v)}
            for (r, c), v in ents[:MAX_RESIDUAL_ENTRIES]
        ]
    return rec


def _rmatrix_checks(hd: HeckeData) -> list:
    return [
        _residual_record(f"{hd.name}/rmatrix/ybe", hd.ybe_residual()),
        _residual_record(f"{hd.name}/rmatrix/hecke", hd.hecke_residual()),
    ]


# -- commands ------------------------------------------------------------------


def cmd_verify_rmatrix(args) -> int:
    hd = _source(args)
    certs = _rmatrix_checks(hd)
    if all(c["verdict"] == "holds" for c in certs):
        rec = {"identity": f"{hd.name}/rmatrix/height"}
        try:
            h = hd.ensure_height(args.max_k)
            d_r, d_l = hd.ensure_d()
            rec.update(verdict="holds", height=h, d_right=d_r.to_json_dict(), d_left=d_l.to_json_dict())
        except HeckeError as exc:
            rec.update(verdict="fails", reason=str(exc))
        certs.append(rec)
    return _finish(args, _report(args, certs))


def cmd_projectors(args) -> int:
    hd = _source(args)
    if args.upto < 1:
        raise UsageError("--upto must be positive")
    build = antisymmetrizer if args.kind == "antisym" else symmetrizer
    samples = _samples(args)
    certs = []
    for k in range(1, args.upto + 1):
        p = build(hd.rhat, k, hd.q)
        ranks = {}
        for s in samples:
            try:
                ranks[f"{s.numerator}/{s.denominator}"] = generic_rank(p, [s])
            except PoleError:
                ranks[f"{s.numerator}/{s.denominator}"] = None
        idem = (p @ p - p).is_zero()
        certs.append({
            "identity": f"{hd.name}/projectors/{args.kind}/k={k}",
            "trace": _fmt(p.trace()),
            "rank_at_samples": ranks,
            "nonzero_entries": len(p.entries),
            "idempotent": idem,
            "verdict": "holds" if idem else "fails",
        })
    return _finish(args, _report(args, certs))


def _controls(args) -> dict:
    return {c: True for c in CONTROLS if getattr(args, c, False)}


def cmd_verify(args) -> int:
    hd = _source(args)
    fams = FAMILIES[args.algebra]
    if args.family not in fams:
        raise UsageError(f"family {args.family!r} not available for {args.algebra}; choose from {sorted(fams)}")
    variant = args.variant or fams[args.family][0]
    if variant not in fams[args.family]:
        raise UsageError(f"variant must be one of {list(fams[args.family])}")
    if args.j < 1 or (args.l is not None and args.l < 1):
        raise UsageError("--j and --l must be positive")
    samples = _samples(args)
    if args.rmatrix is not None:
        checks = _rmatrix_checks(hd)
        if any(c["verdict"] != "holds" for c in checks):
            log.error("R-matrix fails validation; identity not verified")
            return _finish(args, _report(args, checks))
    cert = verify(hd, args.algebra, args.family, variant, args.j, samples, l=args.l, **_controls(args))
    return _finish(args, _report(args, [cert.to_json_dict()]))


def _classical_record(n: int, trials: int, seed: int) -> dict:
    rep = classical_demo(n, trials, seed)
    bad = sum(1 for r in rep["results"] for v in r["residuals"].values() if v != "0")
    bad += sum(1 for r in rep["results"] if not r["e_k_match"])
    return {
        "identity": "classical/demo",
        "params": {"n_max": n, "trials": trials, "seed": seed},
        "nonzero_residuals": bad,
        "verdict": rep["verdict"],
    }


def cmd_classical_demo(args) -> int:
    if args.n < 1 or args.trials < 1:
        raise UsageError("--n and --trials must be positive")
    rep = classical_demo(args.n, args.trials, args.seed)
    report = {"tool_version": __version__, "config": _config(args), "certificates": [], "verdict": rep["verdict"]}
    report["classical"] = rep
    return _finish(args, report)


# -- suite ---------------------------------------------------------------------

SUITE_FAMILIES = ("chn", "newton", "ch", "inverse", "qdet", "commute", "re-chn")
COMMUTE_MAX_DEGREE = 5


def perturbed_standard(n: int) -> HeckeData:
    """Standard R-matrix with q added to its first diagonal entry."""
    rhat = HeckeData.standard(n).rhat
    ent = dict(rhat.entries)
    ent[(0, 0)] = ent[(0, 0)] + Q
    return HeckeData(TensorOp(n, 2, ent), name=f"perturbed-{n}")


def default_grid(ns, families, max_j: int | None = None) -> list:
    """Positive entries ``(n, kind, family, variant, j, l)``."""
    grid = []
    for n in ns:
        top = min(4, n + 1) if max_j is None else min(max_j, n + 1)
        js = range(1, top + 1)
        for fam in families:
            kind, family = ("re", "chn") if fam == "re-chn" else ("rtt", fam)
            for v in FAMILIES[kind][family]:
                if family in ("ch", "qdet"):
                    grid.append((n, kind, family, v, 1, None))
                elif family == "commute":
                    grid += [(n, kind, family, v, k, l) for k in js for l in js if k < l and k + l <= COMMUTE_MAX_DEGREE]
                else:
                    grid += [(n, kind, family, v, j, None) for j in js]
    return grid


def negative_controls() -> list:
    """Entries ``(hd, kind, family, variant, j, controls)`` that must fail."""
    hd = HeckeData.standard(2)
    out = [(hd, "rtt", "chn", v, 2, {"flip_side": True}) for v in FAMILIES["rtt"]["chn"]]
    out += [(hd, "rtt", "inverse", v, 2, {"drop_q_power": True}) for v in FAMILIES["rtt"]["inverse"]]
    out += [(hd, "rtt", "ch", v, 1, {"swap_d": True}) for v in FAMILIES["rtt"]["ch"]]
    # at j = 2 the le residual vanishes in the free algebra for any R-matrix
    out.append((perturbed_standard(2), "rtt", "chn", "le", 3, {}))
    return out


def _entry(cert, expected: str) -> dict:
    d = cert.to_json_dict()
    d["expected"] = expected
    d["as_expected"] = d["verdict"] == expected
    return d


def cmd_suite(args) -> int:
    if any(n < 1 for n in args.n):
        raise UsageError("--n values must be positive")
    unknown = set(args.families) - set(SUITE_FAMILIES)
    if unknown:
        raise UsageError(f"unknown families {sorted(unknown)}; choose from {list(SUITE_FAMILIES)}")
    samples = _samples(args)
    grid = default_grid(args.n, args.families, args.max_j)
    if not grid:
        raise UsageError("empty verification grid")
    data = {n: HeckeData.standard(n) for n in sorted(set(args.n))}
    hooks = set(args.flip_side_of)
    certs = []
    for n, kind, family, v, j, l in grid:
        hd = data[n]
        ident = f"{hd.name}/{kind}/{family}/{v}/" + (f"k={j},l={l}" if l else f"j={j}")
        controls = {}
        if ident in hooks:
            if family != "chn":
                raise UsageError(f"--flip-side-of applies only to chn entries, not {ident}")
            controls["flip_side"] = True
            hooks.discard(ident)
        log.info("verifying %s", ident)
        certs.append(_entry(verify(hd, kind, family, v, j, samples, l=l, **controls), "holds"))
    if hooks:
        raise UsageError(f"--flip-side-of ids not in grid: {sorted(hooks)}")
    if not args.no_controls:
        for hd, kind, family, v, j, controls in negative_controls():
            certs.append(_entry(verify(hd, kind, family, v, j, samples, **controls), "fails"))
    if args.trials > 0:
        rec = _classical_record(args.classical_n, args.trials, args.seed)
        rec.update(expected="holds", as_expected=rec["verdict"] == "holds")
        certs.append(rec)
    verdict = "holds" if all(c["as_expected"] for c in certs) else "fails"
    return _finish(args, _report(args, certs, verdict))


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qchn", description="Exact verification of quantum matrix identities.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-rmatrix", help="check braid and Hecke relations, height and D-matrices")
    _add_source(p)
    p.add_argument("--max-k", type=int, default=6)
    _add_out(p, "--out", "--report")
    p.set_defaults(func=cmd_verify_rmatrix)

    p = sub.add_parser("projectors", help="report the q-antisymmetrizer or q-symmetrizer tower")
    _add_source(p)
    p.add_argument("--kind", choices=("antisym", "sym"), default="antisym")
    p.add_argument("--upto", type=int, required=True, metavar="K")
    _add_samples(p)
    _add_out(p, "--report", "--out")
    p.set_defaults(func=cmd_projectors)

    p = sub.add_parser("verify", help="certify one identity by ideal membership")
    _add_source(p)
    p.add_argument("--algebra", choices=sorted(FAMILIES), default="rtt")
    p.add_argument("--family", required=True, choices=sorted({f for fs in FAMILIES.values() for f in fs}))
    p.add_argument("--variant")
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--l", type=int, help="second degree for the commute family")
    for c in CONTROLS:
        p.add_argument("--" + c.replace("_", "-"), action="store_true", help="negative control")
    _add_samples(p)
    _add_out(p, "--out", "--report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classical-demo", help="classical identities on seeded random rational matrices")
    p.add_argument("--n", type=int, default=4, help="largest matrix size")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    _add_out(p, "--out", "--report")
    p.set_defaults(func=cmd_classical_demo)

    p = sub.add_parser("suite", help="default grid, negative controls and the classical demo")
    p.add_argument("--n", type=int, nargs="*", default=[1, 2, 3])
    p.add_argument("--families", nargs="*", default=list(SUITE_FAMILIES))
    p.add_argument("--max-j", type=int)
    p.add_argument("--no-controls", action="store_true")
    p.add_argument("--trials", type=int, default=200, help="classical demo trials (0 skips it)")
    p.add_argument("--classical-n", type=int, default=4)
    p.add_argument("--flip-side-of", action="append", default=[], metavar="ID", help=argparse.SUPPRESS)
    _add_samples(p)
    _add_out(p, "--out", "--report")
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv: list | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except PoleError as exc:
        log.error("%s", exc)
        return EXIT_ARITH
    except (UsageError, HeckeError, ValueError, KeyError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
