"""Command line front end.

Every command produces one :class:`Report`, printed as ``key: value``
lines or, with ``--json``, as a single JSON document.  Exit codes: 0 for
equivalent / regular / ok, 10 for inequivalent / non-regular, 2 for input
errors and 3 when a hard limit stopped the computation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from . import analysis, equivalence, oracle, paths, transform
from .equivalence import StateCapExceeded, default_bound, is_finite
from .generators import GenSpec, gen_prime_family, gen_random
from .model import ClassicalDoca, Doca, ParseError, decode, encode, validate
from .semantics import InvalidState, Plain, enabled, mod_of, run

OK, DIFFERENT, INPUT_ERROR, INCONCLUSIVE = 0, 10, 2, 3


@dataclass
class Report:
    command: str
    verdict: str
    eqlevel: Optional[int] = None
    witness: Optional[str] = None
    bound: Optional[int] = None
    caps: dict = field(default_factory=dict)
    timing_ms: int = 0
    decisions: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), ensure_ascii=False, sort_keys=False)

    def to_text(self) -> str:
        lines = []
        for key, value in asdict(self).items():
            if value in (None, {}, []):
                continue
            if isinstance(value, (dict, list)):
                value = json.dumps(value, ensure_ascii=False)
            lines.append(f"{key}: {value}")
        return "\n".join(lines)


class InputError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def _level(x):
    return x if is_finite(x) else None


def _level_str(x) -> str:
    return str(x) if is_finite(x) else f">={x.bound}"


def _load(path: str, kind=Doca):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InputError("io-error", str(exc)) from None
    try:
        A = decode(data)
    except ParseError as exc:
        raise InputError(exc.code, str(exc)) from None
    if not isinstance(A, kind):
        want = "doca" if kind is Doca else "classical"
        raise InputError("wrong-kind", f"{path}: expected a '{want}' automaton")
    report = validate(A)
    if not report.ok:
        raise InputError("invalid-automaton", "; ".join(f"{c}: {m}" for c, m in report.violations))
    return A


def _stable(A: Doca, name: Optional[str], flag: str) -> str:
    if name is None:
        if not A.stable_states:
            raise InputError("missing-state", f"{flag} is required")
        return A.stable_states[0]
    if not A.is_stable(name):
        raise InputError("unknown-state", f"{name!r} is not a stable state")
    return name


def _state(A, name, counter, mod: bool, flag: str):
    p = _stable(A, name, flag)
    if counter < 0:
        raise InputError("bad-counter", "counters are nonnegative")
    cfg = Plain(p, counter)
    return mod_of(A, cfg) if mod else cfg


def _bound(A, args) -> int:
    b = args.bound if args.bound is not None else default_bound(A)
    if b < 1:
        raise InputError("bad-bound", "--bound must be positive")
    return b


# -- commands -------------------------------------------------------------------------


def cmd_validate(args):
    try:
        A = decode(Path(args.file).read_bytes())
    except ParseError as exc:
        raise InputError(exc.code, str(exc)) from None
    rep = validate(A)
    details = {"violations": [list(v) for v in rep.violations]}
    if isinstance(A, Doca):
        details["k"] = A.k
    return (OK if rep.ok else INPUT_ERROR), Report("validate", "ok" if rep.ok else "invalid", details=details)


def cmd_run(args):
    A = _load(args.file)
    s = _state(A, args.state, args.counter, args.mod, "--state")
    try:
        w = A.word(args.word)
    except ValueError as exc:
        raise InputError("bad-word", str(exc)) from None
    end = run(A, s, w)
    verdict = "enabled" if end is not None else "disabled"
    return OK, Report("run", verdict, details={"start": str(s), "word": A.format_word(w),
                                               "end": None if end is None else str(end)})


def cmd_enabled(args):
    A = _load(args.file)
    s = _state(A, args.state, args.counter, args.mod, "--state")
    letters = sorted(enabled(A, s), key=A.alphabet.index)
    return OK, Report("enabled", "ok", details={"state": str(s), "letters": letters})


def _eq_report(A, name, res, bound, extra=None):
    r = Report(name, "", bound=bound, details=dict(extra or {}))
    if res.finite:
        r.verdict, r.eqlevel, r.witness = "inequivalent", res.eqlevel, A.format_word(res.witness)
        return DIFFERENT, r
    if res.exhausted:
        r.verdict = "equivalent"
        r.decisions.append("reachable product exhausted: equivalence is exact")
    else:
        r.verdict = "equivalent-up-to-bound"
        r.decisions.append(f"equivalence relative to bound {bound}")
    return OK, r


def cmd_eq(args):
    A = _load(args.file)
    s = _state(A, args.left, args.counter, False, "--left")
    t = _state(A, args.right, args.right_counter, args.mod_right, "--right")
    B = _bound(A, args)
    res = equivalence.eqlevel(A, s, t, B)
    return _eq_report(A, "eq", res, B, {"left": str(s), "right": str(t)})


def cmd_il(args):
    A = _load(args.file)
    p = _stable(A, args.state, "--state")
    B = _bound(A, args)
    cfg = Plain(p, args.counter)
    res = equivalence.eqlevel(A, cfg, mod_of(A, cfg), B)
    details = {"state": str(cfg), "mod": str(mod_of(A, cfg))}
    if args.forms:
        try:
            forms = paths.il_affine_form(A, p, B)
            details["forms"] = [{"rho": str(f.rho), "sigma": str(f.sigma), "anchor": f.anchor, "e": f.e,
                                 "valid_from": f.valid_from, "modulus": f.modulus, "residue": f.residue}
                                for f in forms]
        except paths.NoAnchor as exc:
            details["forms"] = []
            details["forms_error"] = f"{exc.code}: {exc}"
    r = Report("il", "finite" if res.finite else "omega-up-to-bound", eqlevel=_level(res.eqlevel),
               witness=A.format_word(res.witness) if res.finite else None, bound=B, details=details)
    if not res.finite:
        r.decisions.append(f"independence level relative to bound {B}")
    return OK, r


def cmd_tuple(args):
    A = _load(args.file)
    s = _state(A, args.left, args.counter, False, "--left")
    t = _state(A, args.right, args.right_counter, args.mod_right, "--right")
    B = _bound(A, args)
    tup = equivalence.eqlevel_tuple(A, s, t, B)
    values = {k: _level_str(getattr(tup, k)) for k in ("b", "l", "r", "o", "dL", "dR")}
    ok = all(equivalence.min_attained_twice(c) for c in tup.cycles())
    return OK, Report("tuple", "min-twice-holds" if ok else "min-twice-violated", bound=B,
                      details={"left": str(s), "right": str(t), "tuple": values},
                      decisions=["entries '>=B' are relative to the bound"])


def cmd_zero(args):
    A = _load(args.file)
    B = _bound(A, args)
    levels = equivalence.zero_eqlevels(A, B)
    top = max(levels.values(), default=None)
    return OK, Report("zero-eqlevels", "ok", eqlevel=top, bound=B,
                      details={"levels": {f"{p},{q}": v for (p, q), v in levels.items()},
                               "reference_4k3": 4 * A.k**3},
                      decisions=["pairs missing from 'levels' are equivalent up to the bound"])


def cmd_path(args):
    A = _load(args.file)
    p = _stable(A, args.left, "--left")
    q = _stable(A, args.right, "--right")
    dec = paths.shortest_positive_path(A, p, args.counter, q, args.right_counter)
    if dec is None:
        return OK, Report("path", "unreachable", details={"from": f"{p}({args.counter})",
                                                          "to": f"{q}({args.right_counter})"})
    details = {"from": f"{p}({args.counter})", "to": f"{q}({args.right_counter})", "length": dec.length,
               "pre": A.format_word(dec.pre), "cycle": A.format_word(dec.cycle), "reps": dec.reps,
               "post": A.format_word(dec.post), "cycle_effect": dec.cycle_effect}
    return OK, Report("path", "reachable", witness=A.format_word(dec.word), details=details)


def cmd_regular(args):
    A = _load(args.file)
    p = _stable(A, args.state, "--state")
    B = _bound(A, args)
    v = analysis.is_regular(A, p, args.counter, B, cap=args.cap)
    r = Report("regular", v.verdict, bound=B, caps=dict(v.caps))
    if v.certificate is not None:
        c = v.certificate
        r.details["certificate"] = {"u": A.format_word(c.u), "q1": c.q1, "n": c.n, "v": A.format_word(c.v),
                                    "w": A.format_word(c.w), "q_end": c.q_end}
        return DIFFERENT, r
    r.decisions.append("no pumping pattern within the caps; regularity is not proven beyond them")
    return OK, r


def cmd_convert(args):
    C = _load(args.file, ClassicalDoca)
    AD, smap = transform.eliminate_epsilon(C)
    D = transform.language_to_trace(AD)
    text = encode(D)
    details = {"start": smap.start[C.initial], "acceptance_letter": transform.acceptance_letter(D),
               "k": D.k}
    if args.output:
        Path(args.output).write_bytes(text)
        details["written"] = args.output
    else:
        details["doca"] = text.decode("utf-8")
    return OK, Report("convert", "ok", decisions=list(transform.CONVENTIONS), details=details)


def cmd_instance(args):
    C1 = _load(args.file, ClassicalDoca)
    C2 = _load(args.file2, ClassicalDoca)
    D, p, q = transform.build_instance(C1, C2)
    B = _bound(D, args)
    res = equivalence.eqlevel(D, Plain(p, 0), Plain(q, 0), B)
    code, r = _eq_report(D, "instance", res, B, {"left": p, "right": q, "k": D.k})
    r.decisions.extend(transform.CONVENTIONS)
    if res.finite:
        word = transform.strip_acceptance(D, res.witness)
        r.details["language_witness"] = D.format_word(word)
    if args.output:
        Path(args.output).write_bytes(encode(D))
        r.details["written"] = args.output
    return code, r


def cmd_gen(args):
    if args.kind == "primes":
        if args.n is None or not 1 <= args.n <= 10:
            raise InputError("bad-argument", "gen primes needs N in 1..10")
        A, start = gen_prime_family(args.n)
        details = {"start": start}
    else:
        if args.seed is None:
            raise InputError("missing-seed", "gen random requires --seed")
        try:
            spec = GenSpec(k=args.k, alphabet_size=args.alphabet, rule_density=args.density,
                           reset_fraction=args.resets, seed=args.seed)
        except ValueError as exc:
            raise InputError("bad-argument", str(exc)) from None
        A = gen_random(spec)
        details = {"seed": args.seed}
    text = encode(A)
    details["k"] = A.k
    if args.output:
        Path(args.output).write_bytes(text)
        details["written"] = args.output
    else:
        details["doca"] = text.decode("utf-8")
    return OK, Report("gen", "ok", details=details)


def cmd_oracle_eq(args):
    A = _load(args.file)
    s = _state(A, args.left, args.counter, False, "--left")
    t = _state(A, args.right, args.right_counter, args.mod_right, "--right")
    level = oracle.oracle_eqlevel(A, s, t, args.depth)
    if is_finite(level):
        return DIFFERENT, Report("oracle-eq", "inequivalent", eqlevel=level, caps={"depth": args.depth})
    return OK, Report("oracle-eq", "equivalent-up-to-depth", caps={"depth": args.depth},
                      decisions=[f"no difference among words of length <= {args.depth}"])


def cmd_oracle_traces(args):
    A = _load(args.file)
    s = _state(A, args.state, args.counter, args.mod, "--state")
    ts = oracle.oracle_traces(A, s, args.depth)
    words = sorted((A.format_word(w) for w in ts.words), key=lambda w: (len(w), w))
    return OK, Report("oracle-traces", "ok", caps={"depth": args.depth},
                      details={"state": str(s), "count": len(words), "words": words})


# -- parser -----------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="doca", description="Deterministic one-counter automata toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, files=1, **kw):
        p = sub.add_parser(name, **kw)
        if files >= 1:
            p.add_argument("file")
        if files >= 2:
            p.add_argument("file2")
        p.add_argument("--json", action="store_true", help="print one JSON report")
        p.add_argument("-o", "--output", help="write the result here")
        p.set_defaults(func=func)
        return p

    def states(p, two=False):
        if two:
            p.add_argument("--left")
            p.add_argument("--right")
            p.add_argument("--right-counter", type=int, default=0)
            p.add_argument("--mod-right", action="store_true", help="use the Mod state of the right side")
        else:
            p.add_argument("--state")
            p.add_argument("--mod", action="store_true", help="use the Mod state")
        p.add_argument("--counter", type=int, default=0)

    add("validate", cmd_validate)
    p = add("run", cmd_run)
    states(p)
    p.add_argument("word", help="letters to read; pass '' for the empty word")
    states(add("enabled", cmd_enabled))
    for name, func in (("eq", cmd_eq), ("tuple", cmd_tuple)):
        p = add(name, func)
        states(p, two=True)
        p.add_argument("--bound", type=int)
    p = add("il", cmd_il)
    states(p)
    p.add_argument("--bound", type=int)
    p.add_argument("--forms", action="store_true", help="also list the affine forms for large counters")
    add("zero-eqlevels", cmd_zero).add_argument("--bound", type=int)
    p = add("path", cmd_path)
    states(p, two=True)
    p = add("regular", cmd_regular)
    states(p)
    p.add_argument("--bound", type=int)
    p.add_argument("--cap", type=int)
    add("convert", cmd_convert)
    add("instance", cmd_instance, files=2).add_argument("--bound", type=int)
    p = add("gen", cmd_gen, files=0)
    p.add_argument("kind", choices=("primes", "random"))
    p.add_argument("n", nargs="?", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--alphabet", type=int, default=2)
    p.add_argument("--density", type=float, default=0.6)
    p.add_argument("--resets", type=float, default=0.0)
    p = add("oracle-eq", cmd_oracle_eq)
    states(p, two=True)
    p.add_argument("--depth", type=int, default=8)
    p = add("oracle-traces", cmd_oracle_traces)
    states(p)
    p.add_argument("--depth", type=int, default=4)
    return ap


def cli_dispatch(argv) -> tuple[int, Report]:
    args = _parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        code, report = args.func(args)
    except InputError as exc:
        code, report = INPUT_ERROR, Report(args.command, "input-error",
                                           details={"code": exc.code, "message": str(exc)})
    except (InvalidState, oracle.DepthTooLarge, ValueError) as exc:
        code, report = INPUT_ERROR, Report(args.command, "input-error",
                                           details={"code": getattr(exc, "code", "bad-input"),
                                                    "message": str(exc)})
    except (StateCapExceeded, MemoryError, ArithmeticError) as exc:
        code, report = INCONCLUSIVE, Report(args.command, "inconclusive",
                                            details={"code": getattr(exc, "code", "limit"),
                                                     "message": str(exc)})
    report.timing_ms = int((time.perf_counter() - t0) * 1000)
    report._json = args.json  # type: ignore[attr-defined]
    # gen, convert and instance write their automaton to -o; the rest write the report
    if args.command not in ("gen", "convert", "instance"):
        report._output = args.output  # type: ignore[attr-defined]
    return code, report


def main(argv=None) -> int:
    code, report = cli_dispatch(sys.argv[1:] if argv is None else argv)
    text = report.to_json() if getattr(report, "_json", False) else report.to_text()
    out = getattr(report, "_output", None)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return code
