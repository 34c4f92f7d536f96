"""Command line front end: ``ainfcat VERB ...``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
usage errors and malformed documents.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .ainfty import CategoryError, check_ainfty, cohomology_category
from .bc import BoundingError, solve_mc
from .domains import DomainError, boundary_strata, build_family, ledger_params, sigma_degree
from .graded import LedgerError, load_ledger, parse_ledger
from .hoch import WindowError, hh_compute
from .report import Report
from .verify import (DocumentError, load_document, verify_cardy, verify_co_algebra, verify_leibniz_star,
                     verify_oc_module)

__all__ = ["cli_run", "main"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _degrees(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    try:
        return list(range(int(lo), int(hi) + 1)) if sep else [int(lo)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from None


def _param(text: str) -> tuple[str, int]:
    k, sep, v = text.partition("=")
    try:
        if not sep:
            raise ValueError
        return k.strip(), int(v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected name=integer, got {text!r}") from None


def _parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--trunc", type=int, default=None, help="filtration truncation order")
    common.add_argument("--length", type=int, default=None, help="word length window")
    common.add_argument("--degrees", type=_degrees, default=None, help="degree range a..b")

    p = _Parser(prog="ainfcat", description="Checks for filtered A-infinity categories and their operations.")
    verbs = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    check = verbs.add_parser("check", help="A-infinity relations").add_subparsers(dest="what", required=True,
                                                                                 parser_class=_Parser)
    check.add_parser("ainfty", parents=[common]).add_argument("doc")

    hh = verbs.add_parser("hh", parents=[common], help="Hochschild ranks")
    hh.add_argument("kind", choices=("cohomology", "homology"))
    hh.add_argument("doc")

    cup = verbs.add_parser("cup-table", parents=[common], help="composition table of the cohomology category")
    cup.add_argument("doc")

    bc = verbs.add_parser("bc", help="bounding cochains").add_subparsers(dest="what", required=True,
                                                                        parser_class=_Parser)
    solve = bc.add_parser("solve", parents=[common])
    solve.add_argument("doc")
    solve.add_argument("--object", default=None)
    solve.add_argument("--over", choices=("Z", "Q"), default="Z")

    signs = verbs.add_parser("signs", help="sign ledgers").add_subparsers(dest="what", required=True,
                                                                         parser_class=_Parser)
    led = signs.add_parser("ledger", parents=[common])
    led.add_argument("ledger", help="packaged ledger name or a path")
    led.add_argument("-p", "--param", type=_param, action="append", default=[])

    dom = verbs.add_parser("domains", help="domain families").add_subparsers(dest="what", required=True,
                                                                            parser_class=_Parser)
    bd = dom.add_parser("boundary", parents=[common])
    bd.add_argument("--family", required=True)
    bd.add_argument("--s", type=int, default=0)
    bd.add_argument("--bulk", type=int, default=0)
    bd.add_argument("--stab", type=int, default=0)

    ver = verbs.add_parser("verify", parents=[common], help="identity templates on an operation bundle")
    ver.add_argument("template", choices=("co-algebra", "oc-module", "cardy", "leibniz"))
    ver.add_argument("doc")
    ver.add_argument("--n", type=int, default=None)
    return p


def _category(args):
    doc = load_document(args.doc)
    if doc.category is None:
        raise DocumentError("the document has no category", "category")
    return doc


def _run_check(args) -> Report:
    cat = _category(args).category
    return check_ainfty(cat, args.trunc, args.length if args.length is not None else 6)


def _run_hh(args) -> Report:
    cat = _category(args).category
    degrees = args.degrees if args.degrees is not None else [0]
    rep = Report(f"hh {args.kind}", window={"degrees": f"{degrees[0]}..{degrees[-1]}"})
    try:
        res = hh_compute(cat, degrees, args.kind, args.length)
    except WindowError as exc:
        rep.add(kind="window refused", detail=str(exc))
        return rep
    rep.window["length"] = res.window["length"]
    rep.checked = len(degrees)
    rep.info["ranks"] = {str(k): v for k, v in sorted(res.ranks.items())}
    return rep


def _run_cup(args) -> Report:
    cat = _category(args).category
    rep = Report("cup-table")
    try:
        H = cohomology_category(cat)
    except CategoryError as exc:
        rep.add(kind="refused", detail=str(exc))
        return rep
    rows = H.table_rows()
    rep.checked = len(rows)
    rep.info["rows"] = [f"{'/'.join(r['objects'])} [{r['left']}]*[{r['right']}] = ({', '.join(r['result'])})"
                        for r in rows]
    if not H.is_associative():
        rep.add(kind="cohomology composition is not associative")
    return rep


def _run_bc(args) -> Report:
    cat = _category(args).category
    obj = args.object if args.object is not None else cat.objects[0]
    if obj not in cat.objects:
        raise DocumentError(f"unknown object {obj!r}", "category.objects")
    res = solve_mc(cat, obj, args.trunc, args.over)
    rep = Report("bc solve", window={"order": res.order, "over": res.over})
    rep.checked = len(res.orders)
    d = res.as_dict()
    rep.info["solution"] = d["solution"]
    if not res.solved:
        w, vec = res.obstruction or (None, None)
        rep.add(kind="obstructed", weight=w, obstruction=d["orders"][-1]["obstruction"] if vec else None)
    return rep


def _run_signs(args) -> Report:
    from importlib import resources

    params = dict(args.param)
    path = Path(args.ledger)
    try:
        if path.exists():
            script = load_ledger(path, params)
        else:
            res = resources.files("ainfcat").joinpath("ledgers", f"{args.ledger}.ledger")
            if not res.is_file():
                raise UsageError(f"no ledger named {args.ledger!r}")
            env = {**ledger_params(args.ledger), **params}
            script = parse_ledger(res.read_text(), env, name=args.ledger)
    except LedgerError as exc:
        raise DocumentError(str(exc)) from exc
    rep = Report(f"ledger {script.name}", window={k: v for k, v in sorted(script.params.items())})
    rep.checked = len(script.ledger.moves)
    try:
        end, sign = script.run()
    except LedgerError as exc:
        rep.add(kind="ledger failed", detail=str(exc))
        return rep
    rep.info["end"] = str(end)
    rep.info["sign"] = sign
    for m in script.ledger.moves:
        if m.kind == "axiom" and m.citation:
            rep.info.setdefault("axioms", []).append(f"line {m.line}: {m.citation} (sign {m.sign:+d})")
    if script.expect_sign is not None and sign != script.expect_sign:
        rep.add(kind="sign mismatch", expected=script.expect_sign, got=sign)
    return rep


def _run_domains(args) -> Report:
    s = args.s
    fam = build_family(args.family, s, args.bulk, args.stab)
    rep = Report(f"boundary of {fam.name}", window={"dim": fam.dim})
    rep.info["degree"] = str(sigma_degree(fam))
    facets = boundary_strata(fam)
    rep.checked = len(facets)
    rep.info["facets"] = [f"{f.sign:+d} {f.name} [{f.kind}]" for f in facets]
    return rep


def _run_verify(args) -> Report:
    doc = _category(args)
    bundle = doc.bundle
    if bundle is None:
        raise DocumentError("the document has no bundle", "bundle")
    if args.length is not None:
        bundle.max_len = args.length
    if args.trunc is not None:
        bundle.trunc = args.trunc
    if args.template == "leibniz":
        return verify_leibniz_star(bundle.qc, bundle.star)
    if args.template == "co-algebra":
        return verify_co_algebra(bundle)
    if args.template == "oc-module":
        return verify_oc_module(bundle)
    return verify_cardy(bundle, args.n)


_RUNNERS = {"check": _run_check, "hh": _run_hh, "cup-table": _run_cup, "bc": _run_bc, "signs": _run_signs,
            "domains": _run_domains, "verify": _run_verify}


def cli_run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _parser().parse_args(list(argv) if argv is not None else None)
        rep = _RUNNERS[args.verb](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return 2
    except DocumentError as exc:
        print(f"document error: {exc}", file=err)
        return 2
    except (DomainError, BoundingError, CategoryError) as exc:
        print(f"error: {exc}", file=err)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    print(rep.to_json() if args.format == "json" else rep.to_text(), file=out)
    return 0 if rep.passed else 1


def main() -> None:
    sys.exit(cli_run())


if __name__ == "__main__":
    main()
