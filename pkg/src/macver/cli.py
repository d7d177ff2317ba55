"""Command-line front end: ``macver {info,roots,fold,verify,expand,table}``.

Exit status is 0 on success, 1 when an identity fails to verify and 2 for
usage or capacity errors.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import identities as ids
from .affine_roots import (NOMENCLATURE_SCHEMES, AffineType, build_affine, legal_labels,
                           nomenclature, roots_up_to, special_indices)
from .errors import CapacityError, DomainError, MacverError, UsageError
from .finite_roots import build_finite
from .folding import MEAN, SUM, fold_affine, fold_BC, folding_source, folding_table, source_affine
from .qseries import EtaFactor, eta_product

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2
_AFFINE_RE = re.compile(r"^[A-Za-z]+\d+\(\d+\)$")


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    return value


def _positive_fraction(text: str) -> Fraction:
    value = _fraction(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, frozenset, set)):
        seq = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(v) for v in seq]
    return x


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(_jsonable(payload), sort_keys=True, ensure_ascii=True))
    else:
        print(text)


def _affine(label: str, scale=1):
    try:
        atype = AffineType.parse(label)
    except UsageError:
        raise UsageError(f"unknown type label {label!r}; legal labels: {' '.join(legal_labels())}")
    return build_affine(atype, scale)


def _display(args, atype) -> str:
    if args.alias and args.alias != "saito":
        return nomenclature(atype).get(args.alias)
    return str(atype)


# -- verbs ---------------------------------------------------------------------------

def cmd_info(args) -> int:
    sys_ = _affine(args.label, args.scale)
    wv = ids.weyl_vector_data(sys_)
    rs = sys_.weyl_quotient
    info = {
        "type": _display(args, sys_.type),
        "rank": sys_.rank,
        "gcm": [list(r) for r in sys_.gcm],
        "labels": list(sys_.labels),
        "colabels": list(sys_.colabels),
        "coxeter_number": sys_.coxeter_number,
        "dual_coxeter_number": sys_.dual_coxeter_number,
        "special_indices": sorted(special_indices(sys_)),
        "quotient": f"{sys_.quotient.family}{sys_.quotient.rank}",
        "rho_delta": wv.rho_delta,
        "leading_exponent": rs.norm(rs.rho) / (2 * wv.rho_delta),
    }
    if not sys_.type.is_bc:
        info["strange_value"] = wv.strange_value
    lines = [f"{info['type']}  rank {info['rank']}  quotient {info['quotient']}",
             "GCM:"]
    lines += ["  " + " ".join(f"{v:3d}" for v in row) for row in sys_.gcm]
    lines += [f"labels    {info['labels']}   h = {info['coxeter_number']}",
              f"colabels  {info['colabels']}   h^v = {info['dual_coxeter_number']}",
              f"special indices {info['special_indices']}",
              f"I(rho, delta) = {wv.rho_delta}   leading exponent = {info['leading_exponent']}"]
    _emit(args, info, "\n".join(lines))
    return EXIT_OK


def cmd_roots(args) -> int:
    if _AFFINE_RE.match(args.label):
        sys_ = _affine(args.label, args.scale)
        roots = roots_up_to(sys_, args.max_level)
        rows = [{"finite": list(r.finite), "level": r.level, "stratum": r.stratum} for r in roots]
        text = "\n".join(f"{tuple(int(x) for x in r.finite)} + {r.level} delta  [{r.stratum}]" for r in roots)
        _emit(args, {"type": str(sys_.type), "roots": rows}, text + f"\n{len(rows)} roots")
        return EXIT_OK
    rs = build_finite(args.label)
    rows = [{"root": list(r), "stratum": rs.stratum_of(r)} for r in rs.positive_roots]
    text = "\n".join(f"{tuple(r['root'])}  [{r['stratum']}]" for r in rows)
    _emit(args, {"type": args.label, "positive_roots": rows, "count": len(rs.roots)},
          text + f"\n{len(rs.roots)} roots ({len(rows)} positive)")
    return EXIT_OK


def cmd_fold(args) -> int:
    atype = _affine(args.label).type
    kinds = [args.kind] if args.kind else [SUM, MEAN]
    out = {"target": str(atype), "folds": {}}
    if atype.is_bc:
        out["source"] = f"D{2 * atype.rank + 2}(1)"
        for k in kinds:
            out["folds"][k] = fold_BC(atype.rank, k).types
    elif atype.tier == 1:
        raise UsageError(f"{atype} is untwisted; only twisted types arise by folding")
    else:
        rs, sigma = folding_source(atype)
        aff = source_affine(rs)
        out["source"] = f"{rs.family}{rs.rank}(1)"
        out["automorphism"] = sigma.name
        for k in kinds:
            out["folds"][k] = fold_affine(aff, sigma, k).types
    text = [f"source {out['source']}"]
    text += [f"  {k:4s} -> {', '.join(v)}" for k, v in out["folds"].items()]
    _emit(args, out, "\n".join(text))
    return EXIT_OK


def _report_text(rep: ids.IdentityReport, label: str) -> str:
    head = f"{rep.identity} {label}: {'verified' if rep.verdict else 'MISMATCH'}"
    if rep.order is not None:
        head += f" through order {rep.order}"
    lines = [head, f"lattice points {rep.lattice_points}   {rep.wall_ms:.0f} ms"]
    if rep.identity == "macdonald":
        shown = [(e, c) for e, c in rep.rhs.items()][:6]
        lines.append("leading terms: " + ", ".join(f"{c} q^{e}" for e, c in shown))
    if rep.first_mismatch:
        lines.append(f"first mismatch: {rep.first_mismatch}")
    return "\n".join(lines)


def cmd_verify(args) -> int:
    kind = args.identity
    if kind == "denominator" and not _AFFINE_RE.match(args.label):
        rep = ids.denominator_finite(build_finite(args.label), args.weyl_cap)
        label = args.label
    else:
        sys_ = _affine(args.label, args.scale)
        label = _display(args, sys_.type)
        if args.lattice_scale is not None and not (kind == "macdonald" and sys_.type.is_bc):
            raise UsageError("--lattice-scale applies to 'verify macdonald' on BC types only")
        if kind == "denominator":
            order = args.order if args.order is not None else 5
            rep = ids.denominator_affine(sys_, order, args.weyl_cap)
        elif kind == "macdonald":
            order = args.order if args.order is not None else 20
            rep = ids.macdonald(sys_, order, args.threads, args.lattice_scale)
        else:
            return _verify_strange(args, sys_, label)
    payload = rep.to_dict()
    payload["type"] = label
    _emit(args, payload, _report_text(rep, label))
    return EXIT_OK if rep.verdict else EXIT_MISMATCH


def _verify_strange(args, sys_, label: str) -> int:
    wv = ids.weyl_vector_data(sys_)
    rs = sys_.weyl_quotient
    if sys_.type.is_bc:
        value = rs.norm(rs.rho) / (2 * wv.rho_delta)
        expected = Fraction(sys_.rank * (sys_.rank + 1), 12)
    else:
        value, expected = wv.strange_value, Fraction(ids.source_dimension(sys_), 24)
    ok = value == expected
    payload = {"identity": "strange", "type": label, "value": value, "expected": expected,
               "verdict": "pass" if ok else "fail"}
    _emit(args, payload, f"strange formula {label}: {value} vs {expected}: {'ok' if ok else 'MISMATCH'}")
    return EXIT_OK if ok else EXIT_MISMATCH


_ETA_RE = re.compile(r"eta\(\s*([0-9/]+)\s*\)(?:\^\s*(-?\d+))?")


def parse_eta_product(text: str) -> list[EtaFactor]:
    """``"eta(1/2)^2 * eta(1)^-1 * eta(2)^2"`` -> factors."""
    parts = [p.strip() for p in text.split("*") if p.strip()]
    if not parts:
        raise UsageError("empty eta product")
    out = []
    for p in parts:
        m = _ETA_RE.fullmatch(p)
        if not m:
            raise UsageError(f"cannot parse eta factor {p!r}")
        out.append(EtaFactor(Fraction(m.group(1)), int(m.group(2) or 1)))
    return out


def cmd_expand(args) -> int:
    order = args.order if args.order is not None else 20
    if _AFFINE_RE.match(args.target):
        sys_ = _affine(args.target, args.scale)
        rep = ids.macdonald(sys_, order, args.threads, args.lattice_scale)
        payload = {"type": str(sys_.type), "lhs": rep.lhs.to_dict(), "rhs": rep.rhs.to_dict()}
        text = f"lhs {rep.lhs}\nrhs {rep.rhs}"
    else:
        factors = parse_eta_product(args.target)
        lead = sum((f.weight for f in factors), Fraction(0))
        series = eta_product(factors, lead + order)
        payload = series.to_dict()
        text = repr(series)
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)
    return EXIT_OK


def cmd_table(args) -> int:
    if args.which == "folding":
        rows = folding_table(tuple(args.ranks))
        ok = all(r["expected"][k] in r[k] for r in rows for k in r["expected"])
        lines = [f"{'source':8s} {'sigma':10s} {'Tr^H':10s} {'Tr_H':10s} {'Tr^H aff':12s} {'Tr_H aff':12s}"]
        for r in rows:
            lines.append(f"{r['source']:8s} {r['automorphism']:10s} {'/'.join(r['sum_finite']):10s} "
                         f"{'/'.join(r['mean_finite']):10s} {'/'.join(r['sum_affine']):12s} "
                         f"{'/'.join(r['mean_affine']):12s}")
        _emit(args, {"rows": rows, "matches_expected": ok}, "\n".join(lines))
        return EXIT_OK if ok else EXIT_MISMATCH
    rows = []
    for lab in legal_labels(args.max_rank):
        a = nomenclature(lab)
        rows.append({s: a.get(s) for s in NOMENCLATURE_SCHEMES})
    lines = ["  ".join(f"{s:18s}" for s in NOMENCLATURE_SCHEMES)]
    lines += ["  ".join(f"{r[s]:18s}" for s in NOMENCLATURE_SCHEMES) for r in rows]
    _emit(args, {"rows": rows}, "\n".join(lines))
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------

def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("MACVER_THREADS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=_positive_int, default=None,
                        help="truncation order N (compare through q^(c+N)); default 20, 5 for affine denominators")
    common.add_argument("--scale", type=_positive_fraction, default=Fraction(1), help="multiplier of the Gram form")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--weyl-cap", type=_positive_int, default=10**6, help="largest Weyl group to enumerate")
    common.add_argument("--threads", type=_positive_int, default=_default_threads(),
                        help="worker processes for lattice sums (env MACVER_THREADS)")
    common.add_argument("--lattice-scale", type=_positive_fraction, default=None,
                        help="override the BC lattice multiplier (probing only)")
    common.add_argument("--as", dest="alias", choices=NOMENCLATURE_SCHEMES, default=None,
                        help="print type names in another nomenclature")

    p = argparse.ArgumentParser(prog="macver", description="Affine root systems and Macdonald identities.")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("info", parents=[common], help="labels, Coxeter numbers, Weyl vector data")
    s.add_argument("label")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("roots", parents=[common], help="list roots of a finite or affine type")
    s.add_argument("label")
    s.add_argument("--max-level", type=int, default=1)
    s.set_defaults(func=cmd_roots)

    s = sub.add_parser("fold", parents=[common], help="obtain a twisted or BC type by folding")
    s.add_argument("label")
    s.add_argument("--kind", choices=[SUM, MEAN], default=None)
    s.set_defaults(func=cmd_fold)

    s = sub.add_parser("verify", parents=[common], help="verify an identity")
    s.add_argument("identity", choices=["denominator", "macdonald", "strange"])
    s.add_argument("label")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("expand", parents=[common], help="q-series JSON of an eta product or Macdonald sides")
    s.add_argument("target", help="affine label or eta product such as 'eta(1)^3*eta(2)^-1'")
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("table", parents=[common], help="folding table or nomenclature table")
    s.add_argument("which", choices=["folding", "nomenclature"])
    s.add_argument("--ranks", type=int, nargs="+", default=[2, 3, 4])
    s.add_argument("--max-rank", type=int, default=8)
    s.set_defaults(func=cmd_table)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"error: {exc} (raise --weyl-cap to at least {exc.required})", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, DomainError, MacverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
