"""Command-line frontend: invariants, theorem verification, decomposition,
and catalog sweeps, with persistent caching.

Exit codes: 0 success, 2 usage or parse error, 3 budget exhausted,
4 verification failure, 5 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import config
from .cache import ResultCache, dump_record, resolve_cache_dir
from .constructions import construction4_decompose, phiunique_consequences
from .errors import ResourceLimitError, ZerosumsError
from .groups import (
    FiniteAbelianGroup,
    kernel_structure,
    make_hom,
    multiplication_hom,
    normalize_group,
    projection_hom,
    quotient_structure,
    reduction_hom,
)
from .invariants import (
    Budget,
    InvariantResult,
    K_star,
    big_cross_K,
    d_star,
    davenport,
    k1,
    k1_star,
    k_star,
    little_cross_k,
    n1_star,
    narkiewicz_n1,
    to_record,
    upper_bounds,
    verify_family,
)
from .multisets import IndexedMultiset
from .reports import (
    format_value,
    render_catalog_table,
    render_family_report,
    render_invariant_table,
)
from .search import SearchStats

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_VERIFY = 4
EXIT_RESOURCE = 5

_FORMULAS = {
    "Dstar": lambda g: Fraction(d_star(g)),
    "N1star": lambda g: Fraction(n1_star(g)),
    "Kstar": K_star,
    "kstar": k_star,
    "K1star": k1_star,
}

_SEARCHES = ("D", "N1", "K", "k", "K1")

_BOUNDS = (
    "bound:girard",
    "bound:gaowang-log",
    "bound:k-plus-inv-exp",
    "bound:asymptote-gap",
)


class UsageError(ZerosumsError, ValueError):
    pass


def parse_group_spec(spec: str) -> FiniteAbelianGroup:
    """Comma-separated moduli; "p^e" tokens are allowed, e.g. "2^2,3"."""
    moduli = []
    for token in spec.split(","):
        token = token.strip()
        if not token:
            raise UsageError(f"empty token in group spec {spec!r}")
        try:
            if "^" in token:
                base, _, exp = token.partition("^")
                moduli.append(int(base) ** int(exp))
            else:
                moduli.append(int(token))
        except ValueError as exc:
            raise UsageError(f"malformed group spec token {token!r}") from exc
    try:
        return normalize_group(moduli)
    except ZerosumsError as exc:
        raise UsageError(str(exc)) from exc


def parse_hom_spec(group: FiniteAbelianGroup, spec: str):
    """proj:IDX | mod:d1,d2,... | mul:K | images:TARGET:JSON"""
    kind, _, rest = spec.partition(":")
    try:
        if kind == "proj":
            return projection_hom(group, int(rest))
        if kind == "mod":
            return reduction_hom(group, [int(x) for x in rest.split(",")])
        if kind == "mul":
            return multiplication_hom(group, int(rest))
        if kind == "images":
            target_spec, _, payload = rest.partition(":")
            target = parse_group_spec(target_spec)
            return make_hom(group, target, json.loads(payload))
    except (ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"malformed hom spec {spec!r}: {exc}") from exc
    raise UsageError(f"unknown hom spec kind {kind!r}")


def _budget(args) -> Budget | None:
    if args.budget_nodes is None and args.budget_seconds is None:
        return None
    return Budget(max_nodes=args.budget_nodes, max_seconds=args.budget_seconds)


def _compute_invariant(
    group: FiniteAbelianGroup, name: str, cache, budget, workers
) -> InvariantResult:
    if name in _FORMULAS:
        return InvariantResult(
            group, name, _FORMULAS[name](group), None, SearchStats(), "formula"
        )
    if name == "D":
        return davenport(group, cache=cache)
    if name == "K":
        return big_cross_K(group, cache=cache)
    if name == "k":
        return little_cross_k(group, cache=cache)
    if name == "K1":
        return k1(group, cache=cache, budget=budget, workers=workers)
    if name == "N1":
        return narkiewicz_n1(group, cache=cache, budget=budget, workers=workers)
    if name.startswith("bound:"):
        bounds = upper_bounds(group, cache=cache)
        key = {
            "bound:girard": "girard_two_little_k",
            "bound:gaowang-log": "gao_wang_log",
            "bound:k-plus-inv-exp": "little_k_plus_inv_exponent",
            "bound:asymptote-gap": "asymptote_gap",
        }.get(name)
        if key is None:
            raise UsageError(f"unknown bound {name!r}")
        value = bounds[key]
        rational = value if isinstance(value, Fraction) else value.upper_rational()
        return InvariantResult(group, name, rational, None, SearchStats(), "formula")
    raise UsageError(f"unknown invariant {name!r}")


def cmd_invariant(args) -> int:
    group = parse_group_spec(args.group)
    cache = ResultCache(resolve_cache_dir(args.cache_dir))
    result = _compute_invariant(
        group, args.invariant, cache, _budget(args), args.workers
    )
    if args.format == "json":
        sys.stdout.write(dump_record(to_record(result)))
    else:
        print(render_invariant_table(result, args.witness))
        print(f"elapsed {result.stats.millis} ms", file=sys.stderr)
    return EXIT_OK if result.complete else EXIT_BUDGET


def cmd_verify(args) -> int:
    params: dict = {}
    if args.theorem == "gaowang":
        if not args.orders:
            raise UsageError("--orders is required for gaowang")
        lo, _, hi = args.orders.partition("..")
        params["orders"] = range(int(lo), int(hi or lo) + 1)
    elif args.theorem in ("mainthm1", "mainthm2", "n1k1"):
        needed = {
            "mainthm1": ("p", "m", "n"),
            "mainthm2": ("p", "m", "q", "n"),
            "n1k1": ("p", "n"),
        }[args.theorem]
        for field in needed:
            value = getattr(args, field)
            if value is None:
                raise UsageError(f"--{field} is required for {args.theorem}")
            params[field] = value
    elif args.theorem == "maximal-split-pq":
        if not args.pq:
            raise UsageError("--pq is required for maximal-split-pq")
        try:
            p, q = (int(x) for x in args.pq.split(","))
        except ValueError as exc:
            raise UsageError(f"malformed --pq {args.pq!r}") from exc
        params.update(p=p, q=q)
    else:
        raise UsageError(f"unknown theorem {args.theorem!r}")
    cache = ResultCache(resolve_cache_dir(args.cache_dir))
    report = verify_family(
        args.theorem, params, cache=cache, budget=_budget(args), workers=args.workers
    )
    if args.format == "json":
        payload = {
            "theorem": report.theorem,
            "instances": [
                {
                    "label": i.label,
                    "lhs": i.lhs,
                    "rhs": i.rhs,
                    "passed": i.passed,
                    "note": i.note,
                }
                for i in report.instances
            ],
            "all_passed": report.all_passed,
        }
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        print(render_family_report(report))
    return EXIT_OK if report.all_passed else EXIT_VERIFY


def cmd_decompose(args) -> int:
    try:
        payload = json.loads(Path(args.multiset).read_text(encoding="utf-8"))
        group = parse_group_spec(payload["group"])
        ms = IndexedMultiset.from_elements(group, payload["elements"])
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read multiset file {args.multiset!r}: {exc}") from exc
    phi = parse_hom_spec(group, args.hom)
    decomposition = construction4_decompose(ms, phi)
    cache = ResultCache(resolve_cache_dir(args.cache_dir))
    ker = kernel_structure(phi)
    quot = quotient_structure(phi)
    parts = {
        "K1_kernel": k1(ker, cache=cache).value,
        "N1_kernel": narkiewicz_n1(ker, cache=cache).value,
        "K1_quotient": k1(quot, cache=cache).value,
        "K_quotient": big_cross_K(quot, cache=cache).value,
    }
    rows = phiunique_consequences(decomposition, parts)
    ok = all(r["passed"] for r in rows)
    if args.format == "json":
        payload = decomposition.to_lists()
        payload["consequences"] = [
            {
                "item": r["item"],
                "statement": r["statement"],
                "lhs": format_value(r["lhs"]),
                "rhs": format_value(r["rhs"]),
                "passed": r["passed"],
            }
            for r in rows
        ]
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        d = decomposition.to_lists()
        print(f"kernel part  {d['kernel_part']['elements']}")
        print(f"packing (t={d['t']})")
        for sub in d["packing"]:
            print(f"  {sub['elements']}")
        print(f"residue      {d['residue']['elements']}")
        for r in rows:
            mark = "pass" if r["passed"] else "FAIL"
            print(
                f"  [{mark}] ({r['item']}) {r['statement']}: "
                f"{format_value(r['lhs'])} <= {format_value(r['rhs'])}"
            )
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_catalog(args) -> int:
    from .groups import abelian_groups_up_to

    cache = ResultCache(resolve_cache_dir(args.cache_dir))
    budget = _budget(args)
    rows = []
    any_incomplete = False
    for group in abelian_groups_up_to(args.max_order):
        row: dict = {"group": group.key}
        provenances = set()
        starred = {
            "D*": Fraction(d_star(group)),
            "N1*": Fraction(n1_star(group)),
            "K*": K_star(group),
            "k*": k_star(group),
            "K1*": k1_star(group),
        }
        for label, value in starred.items():
            row[label] = format_value(value)
        atom_ok = group.order <= config.ATOM_ORDER_CAP
        search_ok = group.order <= config.SEARCH_ORDER_CAP
        for label, func, enabled in (
            ("D", davenport, atom_ok),
            ("K", big_cross_K, atom_ok),
            ("k", little_cross_k, atom_ok),
        ):
            if enabled:
                res = func(group, cache=cache)
                row[label] = format_value(res.value)
                provenances.add(res.provenance)
            else:
                row[label] = "-"
        k1_value = None
        for label, func, enabled in (
            ("N1", narkiewicz_n1, search_ok),
            ("K1", k1, search_ok),
        ):
            if enabled:
                res = func(group, cache=cache, budget=budget, workers=args.workers)
                provenances.add(res.provenance)
                if res.complete:
                    row[label] = format_value(res.value)
                    if label == "K1":
                        k1_value = res.value
                else:
                    row[label] = f">={format_value(res.value)} (incomplete)"
                    any_incomplete = True
            else:
                row[label] = "-"
        if k1_value is not None:
            row["K1 gap"] = format_value(k1_value - k1_star(group))
        else:
            row["K1 gap"] = "-"
        row["provenance"] = (
            "cached" if provenances == {"cached"} else "computed"
        )
        rows.append(row)
    if args.format == "json":
        sys.stdout.write(json.dumps(rows, sort_keys=True, indent=2) + "\n")
    else:
        if rows:
            print(render_catalog_table(rows))
        else:
            print("(empty catalog)")
    return EXIT_BUDGET if any_incomplete else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zerosums",
        description="Exact zero-sum invariants of finite abelian groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--budget-nodes", type=int, default=None)
        p.add_argument("--budget-seconds", type=float, default=None)
        p.add_argument("--max-size", type=int, default=None,
                       help="multiset size cap (bitmask width)")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--format", choices=("table", "json"), default="table")
        p.add_argument("--verify-mode", action="store_true",
                       help="run both unique-factorization algorithms and compare")
        p.add_argument("--cache-dir", default=None,
                       help="cache directory (default: $ZEROSUMS_CACHE_DIR)")

    p_inv = sub.add_parser("invariant", help="compute one invariant of one group")
    p_inv.add_argument("-g", "--group", required=True,
                       help="comma-separated moduli, e.g. 4,2 or 2^2,3")
    p_inv.add_argument("-i", "--invariant", required=True,
                       help="D N1 K k K1 Dstar N1star Kstar kstar K1star bound:...")
    p_inv.add_argument("--witness", action="store_true")
    common(p_inv)
    p_inv.set_defaults(func=cmd_invariant)

    p_ver = sub.add_parser("verify", help="verify a theorem family on a grid")
    p_ver.add_argument("--theorem", required=True,
                       help="gaowang mainthm1 mainthm2 n1k1 maximal-split-pq")
    p_ver.add_argument("--orders", default=None, help="order range, e.g. 2..9")
    p_ver.add_argument("--p", type=int, default=None)
    p_ver.add_argument("--q", type=int, default=None)
    p_ver.add_argument("--m", type=int, default=None)
    p_ver.add_argument("--n", type=int, default=None)
    p_ver.add_argument("--pq", default=None, help="two primes, e.g. 2,3")
    common(p_ver)
    p_ver.set_defaults(func=cmd_verify)

    p_dec = sub.add_parser("decompose", help="kernel-packing decomposition")
    p_dec.add_argument("--multiset", required=True,
                       help='JSON file {"group": "4", "elements": [[1],[2],[3],[2]]}')
    p_dec.add_argument("--hom", required=True,
                       help="proj:IDX | mod:d1,d2,... | mul:K | images:TARGET:JSON")
    common(p_dec)
    p_dec.set_defaults(func=cmd_decompose)

    p_cat = sub.add_parser("catalog", help="invariant sweep over small groups")
    p_cat.add_argument("--max-order", type=int, required=True)
    common(p_cat)
    p_cat.set_defaults(func=cmd_catalog)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.max_size is not None:
        config.MAX_MULTISET_SIZE = args.max_size
    if args.verify_mode:
        config.VERIFICATION_MODE = True
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ZerosumsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
