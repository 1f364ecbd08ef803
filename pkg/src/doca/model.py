"""Automaton models and their textual codec.

Two models live here:

* :class:`Doca` -- the reset form.  Stable control states read letters,
  reset control states zero the counter and jump according to the residue
  of the counter modulo their period.
* :class:`ClassicalDoca` -- the epsilon form with an initial state and a set
  of accepting states.

Both are plain immutable values.  Structural problems are reported by
:func:`validate` as data; the codec raises :class:`ParseError` on malformed
text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

EPS = "eps"
MAX_COUNTER = 2**63 - 1

_TOKEN = re.compile(r"[A-Za-z0-9_]+\Z")


class Rule(NamedTuple):
    """A transition rule ``(src, letter, sign, dst, effect)``.

    ``sign`` is 0 for a zero rule and 1 for a positive rule.
    """

    src: str
    letter: str
    sign: int
    dst: str
    effect: int


class ParseError(ValueError):
    code = "parse-error"

    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"{self.code} at {line}:{column}: {message}")


class ReservedTokenError(ParseError):
    code = "reserved-token"


class CounterOverflow(ArithmeticError):
    """A counter left the 64-bit range."""


@dataclass(frozen=True)
class Doca:
    stable_states: tuple[str, ...]
    reset_states: tuple[str, ...]
    alphabet: tuple[str, ...]
    rules: tuple[Rule, ...]
    per: Mapping[str, int] = field(default_factory=dict)
    goto: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self):
        for name in ("stable_states", "reset_states", "alphabet"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "rules", tuple(Rule(*r) for r in self.rules))
        object.__setattr__(self, "per", dict(self.per))
        object.__setattr__(self, "goto", {s: tuple(g) for s, g in self.goto.items()})
        delta = {}
        for r in self.rules:
            delta.setdefault((r.src, r.letter, r.sign), (r.dst, r.effect))
        object.__setattr__(self, "_delta", delta)
        object.__setattr__(self, "_res_index", {s: i for i, s in enumerate(self.reset_states)})
        object.__setattr__(self, "_periods", tuple(self.per.get(s, 1) for s in self.reset_states))
        object.__setattr__(self, "_stable_set", frozenset(self.stable_states))

    @property
    def k(self) -> int:
        """Number of control states, stable plus reset."""
        return len(self.stable_states) + len(self.reset_states)

    def rule(self, p: str, a: str, sign: int):
        """The ``(dst, effect)`` pair for ``(p, a, sign)`` or None."""
        return self._delta.get((p, a, sign))

    def is_stable(self, name: str) -> bool:
        return name in self._stable_set

    def is_reset(self, name: str) -> bool:
        return name in self._res_index

    def word(self, w: Union[str, Sequence[str]]) -> tuple[str, ...]:
        return tokenize(self.alphabet, w)

    def format_word(self, w: Sequence[str]) -> str:
        return format_word(self.alphabet, w)


@dataclass(frozen=True)
class ClassicalDoca:
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    rules: tuple[Rule, ...]
    initial: str
    accepting: tuple[str, ...] = ()

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self):
        for name in ("states", "alphabet", "accepting"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "rules", tuple(Rule(*r) for r in self.rules))
        delta = {}
        for r in self.rules:
            delta.setdefault((r.src, r.letter, r.sign), (r.dst, r.effect))
        object.__setattr__(self, "_delta", delta)

    @property
    def k(self) -> int:
        return len(self.states)

    def rule(self, p: str, a: str, sign: int):
        return self._delta.get((p, a, sign))

    def word(self, w: Union[str, Sequence[str]]) -> tuple[str, ...]:
        return tokenize(self.alphabet, w)


Automaton = Union[Doca, ClassicalDoca]


def tokenize(alphabet: Sequence[str], w: Union[str, Sequence[str]]) -> tuple[str, ...]:
    """Split ``w`` into letters of ``alphabet``.

    Sequences pass through unchanged.  Strings may be whitespace separated;
    each chunk is cut greedily into the longest matching letters.
    """
    if not isinstance(w, str):
        return tuple(w)
    letters = sorted(set(alphabet), key=len, reverse=True)
    out: list[str] = []
    for chunk in w.split():
        pos = 0
        while pos < len(chunk):
            for a in letters:
                if chunk.startswith(a, pos):
                    out.append(a)
                    pos += len(a)
                    break
            else:
                raise ValueError(f"cannot split {chunk!r} into letters of {list(alphabet)}")
    return tuple(out)


def format_word(alphabet: Sequence[str], w: Sequence[str]) -> str:
    if all(len(a) == 1 for a in alphabet):
        return "".join(w)
    return " ".join(w)


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[tuple[str, str], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {code for code, _ in self.violations}


def _check_names(kind: str, names: Iterable[str], out: list) -> None:
    seen = set()
    for n in names:
        if not isinstance(n, str) or not _TOKEN.match(n):
            out.append(("invalid-name", f"{kind} {n!r}"))
        if n in seen:
            out.append(("duplicate-name", f"{kind} {n}"))
        seen.add(n)


def _check_rules(rules, sources, targets, alphabet, out, *, allow_eps=False) -> None:
    seen: dict[tuple, Rule] = {}
    letters = set(alphabet) | ({EPS} if allow_eps else set())
    for r in rules:
        where = "rule {} {} {} -> {} {}".format(*r)
        if r.src not in sources:
            out.append(("unknown-state", where))
        if r.dst not in targets:
            out.append(("unknown-state", where))
        if r.letter not in letters:
            out.append(("unknown-letter", where))
        if r.sign not in (0, 1):
            out.append(("bad-counter-sign", where))
        if r.effect not in (-1, 0, 1):
            out.append(("bad-effect", where))
        if r.sign == 0 and r.effect == -1:
            out.append(("zero-decrement", where))
        key = (r.src, r.letter, r.sign)
        if key in seen and seen[key] != r:
            out.append(("nondeterministic-rule", where))
        seen.setdefault(key, r)


def validate(automaton: Automaton) -> ValidationReport:
    """Check every model invariant and list the violations found."""
    out: list[tuple[str, str]] = []
    if isinstance(automaton, Doca):
        A = automaton
        _check_names("state", A.stable_states + A.reset_states, out)
        _check_names("letter", A.alphabet, out)
        if EPS in A.alphabet:
            out.append(("reserved-token", "alphabet eps"))
        for s in set(A.stable_states) & set(A.reset_states):
            out.append(("state-overlap", f"state {s}"))
        _check_rules(A.rules, set(A.stable_states), set(A.stable_states) | set(A.reset_states),
                     A.alphabet, out)
        n_stable = len(A.stable_states)
        for s in A.reset_states:
            per = A.per.get(s)
            if per is None or not 1 <= per <= n_stable:
                out.append(("period-range", f"reset {s} per {per}"))
            g = A.goto.get(s)
            if g is None or per is None or len(g) != per:
                out.append(("goto-incomplete", f"reset {s}"))
            for target in g or ():
                if target not in A.stable_states:
                    out.append(("goto-target", f"reset {s} goto {target}"))
        for s in set(A.per) - set(A.reset_states):
            out.append(("unknown-state", f"per {s}"))
    else:
        A = automaton
        _check_names("state", A.states, out)
        _check_names("letter", A.alphabet, out)
        if EPS in A.alphabet:
            out.append(("reserved-token", "alphabet eps"))
        states = set(A.states)
        _check_rules(A.rules, states, states, A.alphabet, out, allow_eps=True)
        eps_keys = {(r.src, r.sign) for r in A.rules if r.letter == EPS}
        for r in A.rules:
            if r.letter != EPS and (r.src, r.sign) in eps_keys:
                out.append(("epsilon-exclusivity", "rule {} {} {} -> {} {}".format(*r)))
        if A.initial not in states:
            out.append(("unknown-initial", f"initial {A.initial}"))
        for q in A.accepting:
            if q not in states:
                out.append(("unknown-accepting", f"accepting {q}"))
    return ValidationReport(tuple(out))


# -- codec --------------------------------------------------------------------


def _tokens(line: str):
    """Yield ``(column, token)`` pairs, columns 1-based."""
    for m in re.finditer(r"\S+", line):
        yield m.start() + 1, m.group()


def _int(tok: str, lineno: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, col, f"expected an integer, got {tok!r}") from None


def decode(text: Union[bytes, str]) -> Automaton:
    """Parse the line-oriented textual format into a model value."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks = list(_tokens(body))
        if toks:
            lines.append((lineno, toks))
    if not lines:
        raise ParseError(1, 1, "empty input")
    lineno, toks = lines[0]
    kind = toks[0][1]
    if kind not in ("doca", "classical") or len(toks) != 1:
        raise ParseError(lineno, 1, "expected header 'doca' or 'classical'")
    classical = kind == "classical"

    alphabet: list[str] = []
    stable: list[str] = []
    reset: list[str] = []
    per: dict[str, int] = {}
    goto: dict[str, tuple[str, ...]] = {}
    raw_rules: list[tuple[int, list]] = []
    initial = None
    accepting: list[str] = []

    for lineno, toks in lines[1:]:
        key = toks[0][1]
        args = toks[1:]
        if key == "alphabet":
            for col, a in args:
                if a == EPS:
                    raise ReservedTokenError(lineno, col, "'eps' cannot be a letter")
                _name(a, lineno, col)
                alphabet.append(a)
        elif key in ("stable", "states") and (key == "states") == classical:
            for col, s in args:
                stable.append(_name(s, lineno, col))
        elif key == "reset" and not classical:
            if len(args) < 3 or args[1][1] != "per":
                raise ParseError(lineno, 1, "expected 'reset NAME per N goto R S ...'")
            s = _name(args[0][1], lineno, args[0][0])
            p = _int(args[2][1], lineno, args[2][0])
            rest = args[3:]
            if not rest or rest[0][1] != "goto" or len(rest) % 2 != 1:
                raise ParseError(lineno, args[2][0], "expected 'goto' followed by residue/state pairs")
            table: dict[int, str] = {}
            for i in range(1, len(rest), 2):
                c = _int(rest[i][1], lineno, rest[i][0])
                if c in table:
                    raise ParseError(lineno, rest[i][0], f"duplicate residue {c}")
                table[c] = rest[i + 1][1]
            if sorted(table) != list(range(p)):
                raise ParseError(lineno, rest[0][0], f"goto must cover residues 0..{p - 1}")
            reset.append(s)
            per[s] = p
            goto[s] = tuple(table[c] for c in range(p))
        elif key == "initial" and classical:
            if len(args) != 1:
                raise ParseError(lineno, 1, "expected 'initial STATE'")
            initial = args[0][1]
        elif key == "accepting" and classical:
            accepting.extend(tok for _, tok in args)
        elif key == "rule":
            if len(args) != 6 or args[3][1] != "->":
                raise ParseError(lineno, 1, "expected 'rule P A C -> Q J'")
            raw_rules.append((lineno, args))
        else:
            raise ParseError(lineno, 1, f"unexpected keyword {key!r}")

    states = set(stable) | set(reset)
    letters = set(alphabet) | ({EPS} if classical else set())
    rules = []
    for lineno, args in raw_rules:
        (cp, p), (ca, a), (cc, c), _, (cq, q), (cj, j) = args
        if p not in states:
            raise ParseError(lineno, cp, f"undeclared state {p!r}")
        if q not in states:
            raise ParseError(lineno, cq, f"undeclared state {q!r}")
        if a not in letters:
            raise ParseError(lineno, ca, f"undeclared letter {a!r}")
        sign = _int(c, lineno, cc)
        if sign not in (0, 1):
            raise ParseError(lineno, cc, "counter sign must be 0 or 1")
        effect = _int(j, lineno, cj)
        if effect not in (-1, 0, 1):
            raise ParseError(lineno, cj, "effect must be -1, 0 or 1")
        rules.append(Rule(p, a, sign, q, effect))
    if classical:
        if initial is None:
            raise ParseError(lines[-1][0], 1, "missing 'initial'")
        for q in [initial, *accepting]:
            if q not in states:
                raise ParseError(lines[-1][0], 1, f"undeclared state {q!r}")
        return ClassicalDoca(tuple(stable), tuple(alphabet), tuple(rules), initial, tuple(accepting))
    for s, g in goto.items():
        for target in g:
            if target not in states:
                raise ParseError(lines[0][0], 1, f"reset {s}: undeclared goto target {target!r}")
    return Doca(tuple(stable), tuple(reset), tuple(alphabet), tuple(rules), per, goto)


def _name(tok: str, lineno: int, col: int) -> str:
    if not _TOKEN.match(tok):
        raise ParseError(lineno, col, f"invalid name {tok!r}")
    return tok


def _rule_line(r: Rule) -> str:
    return f"rule {r.src} {r.letter} {r.sign} -> {r.dst} {r.effect}"


def encode(automaton: Automaton) -> bytes:
    """Canonical text: sorted states, letters and rules."""
    A = automaton
    rules = sorted(set(A.rules))
    if isinstance(A, Doca):
        out = ["doca", "alphabet " + " ".join(sorted(A.alphabet)),
               "stable " + " ".join(sorted(A.stable_states))]
        for s in sorted(A.reset_states):
            pairs = " ".join(f"{c} {q}" for c, q in enumerate(A.goto[s]))
            out.append(f"reset {s} per {A.per[s]} goto {pairs}")
    else:
        out = ["classical", "alphabet " + " ".join(sorted(A.alphabet)),
               "states " + " ".join(sorted(A.states)),
               f"initial {A.initial}"]
        if A.accepting:
            out.append("accepting " + " ".join(sorted(set(A.accepting))))
    out.extend(_rule_line(r) for r in rules)
    return ("\n".join(line.rstrip() for line in out) + "\n").encode("utf-8")


def canonical(automaton: Automaton) -> Automaton:
    """The value whose declared orders match :func:`encode`."""
    return decode(encode(automaton))


# -- small constructions --------------------------------------------------------


def disjoint_union(left: Doca, right: Doca, prefixes: tuple[str, str] = ("L_", "R_")) -> Doca:
    """Rename both automata apart and put them side by side.

    State ``p`` of ``left`` becomes ``prefixes[0] + p``; likewise for
    ``right``.  The alphabet is the union, left letters first.
    """
    lp, rp = prefixes

    def ren(A: Doca, pre: str):
        name = {s: pre + s for s in A.stable_states + A.reset_states}
        rules = [Rule(name[r.src], r.letter, r.sign, name[r.dst], r.effect) for r in A.rules]
        per = {name[s]: A.per[s] for s in A.reset_states}
        goto = {name[s]: tuple(name[q] for q in A.goto[s]) for s in A.reset_states}
        return [name[s] for s in A.stable_states], [name[s] for s in A.reset_states], rules, per, goto

    s1, r1, rules1, per1, goto1 = ren(left, lp)
    s2, r2, rules2, per2, goto2 = ren(right, rp)
    alphabet = list(left.alphabet) + [a for a in right.alphabet if a not in left.alphabet]
    return Doca(tuple(s1 + s2), tuple(r1 + r2), tuple(alphabet), tuple(rules1 + rules2),
                {**per1, **per2}, {**goto1, **goto2})
