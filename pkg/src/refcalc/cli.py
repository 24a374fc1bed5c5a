"""Command-line front end over the whole package.

Exit codes: 0 for success or a true decision, 1 for a false/negative
decision (including a failed check suite), 2 for parse or sort errors,
3 for undecided outcomes (budget exhaustion, no applicable rule,
unsupported input), 4 for internal invariant violations.  Every error
also prints a one-line JSON diagnostic to stderr.  --json switches
stdout to one-line JSON; values from a key=value config file sit
between flags and built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .checks import SUITES, run_suite
from .errors import (
    ClassMismatchError,
    NoRuleError,
    ParseError,
    RefcalcError,
    UnsupportedError,
)
from .oracle import (
    DERIVABLE,
    UNRESOLVED,
    OracleBudgets,
    countermodel_to_json,
    decide_oracle,
    proof_to_json,
)
from .ordinals import (
    add,
    compare,
    eps,
    format_ordinal,
    omega_pow,
    omega_tower,
    parse_ordinal,
)
from .rc import format_formula, parse_formula
from .theories import (
    WormFlavor,
    format_theory,
    interpret_worm,
    parse_class,
    parse_theory,
    proof_theoretic_ordinal,
    reduce,
    reflection_rank,
    trace_json,
)
from .worms import format_worm, parse_worm, worm_ordinal

# Stamped into the sequent cache; bump when the deciding procedure
# changes so stale verdicts are discarded rather than trusted.
_PROCEDURE_TAG = "oracle-1"


@dataclass
class RunConfig:
    proof_depth: int
    size_cap: Optional[int]
    max_worlds: int
    max_letter: int = 2
    max_len: int = 4
    size: int = 3
    json_mode: bool = False
    cache_path: Optional[str] = None

    def budgets(self) -> OracleBudgets:
        return OracleBudgets(
            proof_depth=self.proof_depth,
            size_cap=self.size_cap,
            max_worlds=self.max_worlds,
        )


_CONFIG_KEYS = {
    "proof_depth": int,
    "size_cap": int,
    "max_worlds": int,
    "max_letter": int,
    "max_len": int,
    "size": int,
    "json": bool,
    "cache": str,
}


def _read_config_file(path: str) -> dict:
    values = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"config line without '=': {raw.strip()!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _CONFIG_KEYS:
            raise ParseError(f"unknown config key {key!r}")
        kind = _CONFIG_KEYS[key]
        if kind is bool:
            if val not in ("true", "false"):
                raise ParseError(f"config key {key!r} wants true/false, got {val!r}")
            values[key] = val == "true"
        elif kind is int:
            try:
                values[key] = int(val)
            except ValueError:
                raise ParseError(f"config key {key!r} wants an integer, got {val!r}")
        else:
            values[key] = val
    return values


def _config_from(args: argparse.Namespace) -> RunConfig:
    defaults = OracleBudgets()
    cfg = RunConfig(
        proof_depth=defaults.proof_depth,
        size_cap=defaults.size_cap,
        max_worlds=defaults.max_worlds,
    )
    if args.config:
        fromfile = _read_config_file(args.config)
        cfg.proof_depth = fromfile.get("proof_depth", cfg.proof_depth)
        cfg.size_cap = fromfile.get("size_cap", cfg.size_cap)
        cfg.max_worlds = fromfile.get("max_worlds", cfg.max_worlds)
        cfg.max_letter = fromfile.get("max_letter", cfg.max_letter)
        cfg.max_len = fromfile.get("max_len", cfg.max_len)
        cfg.size = fromfile.get("size", cfg.size)
        cfg.json_mode = fromfile.get("json", cfg.json_mode)
        cfg.cache_path = fromfile.get("cache", cfg.cache_path)
    for flag, attr in (
        ("proof_depth", "proof_depth"),
        ("size_cap", "size_cap"),
        ("max_worlds", "max_worlds"),
        ("max_letter", "max_letter"),
        ("max_len", "max_len"),
        ("size", "size"),
        ("json", "json_mode"),
        ("cache", "cache_path"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            setattr(cfg, attr, value)
    if cfg.proof_depth < 1 or cfg.max_worlds < 1:
        raise ValueError("oracle budgets must be positive")
    if cfg.size_cap is not None and cfg.size_cap < 1:
        raise ValueError("size cap must be positive")
    if cfg.max_letter < 0 or cfg.max_len < 0 or cfg.size < 1:
        raise ValueError("enumeration bounds must be non-negative")
    return cfg


def _diag(kind: str, detail: str) -> None:
    print(json.dumps({"error": kind, "detail": detail}), file=sys.stderr)


def _emit(cfg: RunConfig, payload: dict, text: str) -> None:
    if cfg.json_mode:
        print(json.dumps(payload))
    else:
        print(text)


def _trace_lines(trace) -> str:
    rows = trace_json(trace)
    return "\n".join(
        f"  {r['rule']:3} {r['before']} => {r['after']}  # {r['citation']}"
        for r in rows
    )


# --- the sequent cache -------------------------------------------------------


class _SequentCache:
    """File-backed map from canonical sequent text to its decision,
    discarded wholesale when the deciding procedure's tag changes."""

    def __init__(self, path: Path, entries: dict):
        self.path = path
        self.entries = entries

    @staticmethod
    def open(path: Optional[str]) -> Optional["_SequentCache"]:
        if path is None:
            return None
        p = Path(path)
        entries: dict = {}
        if p.exists():
            try:
                blob = json.loads(p.read_text())
            except (OSError, json.JSONDecodeError):
                blob = None
            if isinstance(blob, dict) and blob.get("procedure") == _PROCEDURE_TAG:
                entries = {k: bool(v) for k, v in blob.get("sequents", {}).items()}
        return _SequentCache(p, entries)

    def get(self, key: str) -> Optional[bool]:
        return self.entries.get(key)

    def put(self, key: str, value: bool) -> None:
        self.entries[key] = value
        blob = {"procedure": _PROCEDURE_TAG, "sequents": self.entries}
        self.path.write_text(json.dumps(blob, sort_keys=True))


# --- handlers ------------------------------------------------------------------


def _cmd_rc_prove(args, cfg: RunConfig) -> int:
    a = parse_formula(args.lhs)
    b = parse_formula(args.rhs)
    key = f"{format_formula(a)} |- {format_formula(b)}"
    cache = _SequentCache.open(cfg.cache_path)
    if cache is not None and not args.certify:
        hit = cache.get(key)
        if hit is not None:
            _emit(cfg, {"sequent": key, "derivable": hit, "cached": True},
                  "true" if hit else "false")
            return 0 if hit else 1
    verdict = decide_oracle(a, b, cfg.budgets())
    if verdict.status == UNRESOLVED:
        _diag("unresolved", f"budgets exhausted on {key}")
        _emit(cfg, {"sequent": key, "status": "unresolved"}, "unresolved")
        return 3
    truth = verdict.status == DERIVABLE
    if cache is not None:
        cache.put(key, truth)
    payload = {"sequent": key, "derivable": truth}
    text = "true" if truth else "false"
    if args.certify:
        certificate = (
            proof_to_json(verdict.proof)
            if truth
            else countermodel_to_json(verdict.model)
        )
        payload["certificate"] = certificate
        text += "\n" + json.dumps(certificate)
    _emit(cfg, payload, text)
    return 0 if truth else 1


def _cmd_worm_ord(args, cfg: RunConfig) -> int:
    w = parse_worm(args.worm)
    text = format_ordinal(worm_ordinal(w))
    _emit(cfg, {"worm": format_worm(w), "ordinal": text}, text)
    return 0


def _cmd_worm_compare(args, cfg: RunConfig) -> int:
    a = parse_worm(args.a)
    b = parse_worm(args.b)
    order = compare(worm_ordinal(a), worm_ordinal(b)).name
    _emit(cfg, {"a": format_worm(a), "b": format_worm(b), "order": order}, order)
    return 0


def _cmd_ord(args, cfg: RunConfig) -> int:
    if args.sub == "compare":
        order = compare(parse_ordinal(args.a), parse_ordinal(args.b)).name
        _emit(cfg, {"order": order}, order)
        return 0
    if args.sub == "add":
        value = add(parse_ordinal(args.a), parse_ordinal(args.b))
    elif args.sub == "omega":
        value = omega_pow(parse_ordinal(args.a))
    elif args.sub == "eps":
        value = eps(parse_ordinal(args.a))
    else:
        value = omega_tower(args.height, parse_ordinal(args.a))
    text = format_ordinal(value)
    _emit(cfg, {"ordinal": text}, text)
    return 0


def _cmd_theory_reduce(args, cfg: RunConfig) -> int:
    e = parse_theory(args.expr)
    target = parse_class(args.target)
    try:
        final, trace = reduce(e, target)
    except NoRuleError as ex:
        final, trace = ex.partial
        _diag("no_rule_applies", str(ex))
        _emit(
            cfg,
            {
                "status": "no_rule_applies",
                "partial": format_theory(final),
                "trace": trace_json(trace),
            },
            f"stuck at {format_theory(final)}\n{_trace_lines(trace)}".rstrip(),
        )
        return 3
    body = format_theory(final)
    lines = _trace_lines(trace)
    _emit(
        cfg,
        {"result": body, "trace": trace_json(trace)},
        body + ("\n" + lines if lines else ""),
    )
    return 0


def _cmd_theory_rank(args, cfg: RunConfig) -> int:
    result = reflection_rank(parse_theory(args.expr), base=args.base)
    text = format_ordinal(result.value)
    _emit(
        cfg,
        {"rank": text, "base": args.base, "trace": trace_json(result.trace)},
        text + "\n" + _trace_lines(result.trace),
    )
    return 0


def _cmd_theory_wo(args, cfg: RunConfig) -> int:
    result = proof_theoretic_ordinal(parse_theory(args.expr))
    text = format_ordinal(result.value)
    _emit(
        cfg,
        {"ordinal": text, "trace": trace_json(result.trace)},
        text + "\n" + _trace_lines(result.trace),
    )
    return 0


def _cmd_theory_interp(args, cfg: RunConfig) -> int:
    flavor = WormFlavor[args.flavor]
    body = format_theory(interpret_worm(parse_worm(args.worm), flavor))
    _emit(cfg, {"theory": body, "flavor": args.flavor}, body)
    return 0


def _cmd_check(args, cfg: RunConfig) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = [
        run_suite(
            name,
            size=cfg.size,
            max_letter=cfg.max_letter,
            max_len=cfg.max_len,
            budgets=cfg.budgets(),
        )
        for name in names
    ]
    if cfg.json_mode:
        print(
            json.dumps(
                [
                    {
                        "suite": r.suite,
                        "passed": r.passed,
                        "checked": r.checked,
                        "seconds": round(r.seconds, 3),
                        "failures": list(r.failures),
                    }
                    for r in results
                ]
            )
        )
    else:
        print(f"{'suite':18} {'status':6} {'checked':>8} {'seconds':>8}")
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            print(f"{r.suite:18} {status:6} {r.checked:>8} {r.seconds:>8.1f}")
            for f in r.failures:
                print(f"    {f}")
    return 0 if all(r.passed for r in results) else 1


# --- argument plumbing -----------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="refcalc",
        description="derivability, worm ordinals, and conservation rewriting",
    )
    p.add_argument("--json", action="store_true", default=None,
                   help="one-line JSON on stdout")
    p.add_argument("--config", metavar="PATH", help="key=value config file")
    p.add_argument("--proof-depth", dest="proof_depth", type=int, metavar="N")
    p.add_argument("--size-cap", dest="size_cap", type=int, metavar="N")
    p.add_argument("--max-worlds", dest="max_worlds", type=int, metavar="N")
    p.add_argument("--max-letter", dest="max_letter", type=int, metavar="N",
                   help="largest worm letter for check corpora")
    p.add_argument("--max-len", dest="max_len", type=int, metavar="N",
                   help="largest worm length for check corpora")
    p.add_argument("--size", dest="size", type=int, metavar="N",
                   help="formula size bound for the axioms suite")
    p.add_argument("--cache", metavar="PATH",
                   help="file-backed sequent decision cache")
    sub = p.add_subparsers(dest="command", required=True)

    rc_p = sub.add_parser("rc", help="sequent derivability")
    rc_sub = rc_p.add_subparsers(dest="sub", required=True)
    prove = rc_sub.add_parser("prove", help="decide a sequent, certified")
    prove.add_argument("lhs")
    prove.add_argument("rhs")
    prove.add_argument("--certify", action="store_true",
                       help="attach the proof or countermodel")
    prove.set_defaults(handler=_cmd_rc_prove)

    worm_p = sub.add_parser("worm", help="worm ordinals and comparison")
    worm_sub = worm_p.add_subparsers(dest="sub", required=True)
    word = worm_sub.add_parser("ord", help="ordinal of a worm")
    word.add_argument("worm")
    word.set_defaults(handler=_cmd_worm_ord)
    wcmp = worm_sub.add_parser("compare", help="order two worms")
    wcmp.add_argument("a")
    wcmp.add_argument("b")
    wcmp.set_defaults(handler=_cmd_worm_compare)

    ord_p = sub.add_parser("ord", help="ordinal term arithmetic")
    ord_sub = ord_p.add_subparsers(dest="sub", required=True)
    for name, help_text in (
        ("compare", "order two terms"),
        ("add", "sum of two terms"),
    ):
        leaf = ord_sub.add_parser(name, help=help_text)
        leaf.add_argument("a")
        leaf.add_argument("b")
        leaf.set_defaults(handler=_cmd_ord)
    for name, help_text in (
        ("omega", "omega power of a term"),
        ("eps", "epsilon number indexed by a term"),
    ):
        leaf = ord_sub.add_parser(name, help=help_text)
        leaf.add_argument("a")
        leaf.set_defaults(handler=_cmd_ord)
    tower = ord_sub.add_parser("tower", help="iterated omega power")
    tower.add_argument("height", type=int)
    tower.add_argument("a")
    tower.set_defaults(handler=_cmd_ord)

    thy = sub.add_parser("theory", help="conservation rewriting and ranks")
    thy_sub = thy.add_subparsers(dest="sub", required=True)
    tred = thy_sub.add_parser("reduce", help="rewrite toward a target class")
    tred.add_argument("expr")
    tred.add_argument("--target", required=True, metavar="CLS")
    tred.set_defaults(handler=_cmd_theory_reduce)
    trank = thy_sub.add_parser("rank", help="reflection rank over a base")
    trank.add_argument("expr")
    trank.add_argument("--base", choices=("ACA0", "RCA0"), default="ACA0")
    trank.set_defaults(handler=_cmd_theory_rank)
    two = thy_sub.add_parser("wo", help="well-ordering ordinal")
    two.add_argument("expr")
    two.set_defaults(handler=_cmd_theory_wo)
    tint = thy_sub.add_parser("interp", help="worm as a reflection tower")
    tint.add_argument("worm")
    tint.add_argument("--flavor", choices=tuple(f.name for f in WormFlavor),
                      default="ACA0_PI1N")
    tint.set_defaults(handler=_cmd_theory_interp)

    chk = sub.add_parser("check", help="batch property suites")
    chk.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    chk.set_defaults(handler=_cmd_check)
    return p


def run(argv: Optional[list] = None) -> int:
    """Parse arguments, dispatch, and map errors to exit codes."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return int(ex.code or 0)
    try:
        cfg = _config_from(args)
        return args.handler(args, cfg)
    except ParseError as ex:
        _diag("parse_error", str(ex))
        return 2
    except ClassMismatchError as ex:
        _diag("sort_error", str(ex))
        return 2
    except ValueError as ex:
        _diag("invalid_value", str(ex))
        return 2
    except NoRuleError as ex:
        _diag("no_rule_applies", str(ex))
        return 3
    except UnsupportedError as ex:
        _diag("unsupported", str(ex))
        return 3
    except OSError as ex:
        _diag("io_error", str(ex))
        return 2
    except RefcalcError as ex:
        _diag("internal_error", str(ex))
        return 4
    except Exception as ex:  # noqa: BLE001 - the contract is an exit code
        _diag("internal_error", f"{type(ex).__name__}: {ex}")
        return 4


def main() -> None:
    sys.exit(run())
