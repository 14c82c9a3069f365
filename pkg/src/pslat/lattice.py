"""Join/meet expressions over the three biseparability cones.

Grammar (``&`` binds tighter than ``|``, whitespace ignored)::

    expr := term ("|" term)*
    term := atom ("&" atom)*
    atom := "A" | "B" | "C" | "(" expr ")" | "f^" nat "(" expr ")"

``A``, ``B``, ``C`` are the A-BC, B-CA and C-AB biseparable cones restricted
to GHZ-diagonal states; ``|`` is convex hull and ``&`` is intersection.
``f^n(e)`` iterates ``f(s) = A|(B&(C|(A&(B|(C&s)))))``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .cone import Cone, cone_from_generators, cone_from_inequalities, join, meet
from .exact import normalize_ray

# -- expression trees -------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Join:
    left: "Expr"
    right: "Expr"

    def __str__(self) -> str:
        return f"{_wrap(self.left, Join, False)}|{_wrap(self.right, Join, True)}"


@dataclass(frozen=True)
class Meet:
    left: "Expr"
    right: "Expr"

    def __str__(self) -> str:
        return f"{_wrap(self.left, Meet, False)}&{_wrap(self.right, Meet, True)}"


@dataclass(frozen=True)
class FPow:
    n: int
    arg: "Expr"

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("f exponent must be >= 0")

    def __str__(self) -> str:
        return f"f^{self.n}({self.arg})"


Expr = Union[Atom, Join, Meet, FPow]
LatticeExpr = Expr

A, B, C = Atom("A"), Atom("B"), Atom("C")


def _wrap(e: Expr, parent: type, right: bool) -> str:
    # parenthesise a Join under a Meet, and any same-op right child, so that
    # printing then parsing gives back the same tree
    if (isinstance(e, Join) and parent is Meet) or (right and type(e) is parent):
        return f"({e})"
    return str(e)


def f_apply(e: Expr) -> Expr:
    """``A|(B&(C|(A&(B|(C&e)))))``."""
    return Join(A, Meet(B, Join(C, Meet(A, Join(B, Meet(C, e))))))


def expand(e: Expr) -> Expr:
    """Rewrite every ``FPow`` into nested ``f`` templates."""
    if isinstance(e, Atom):
        return e
    if isinstance(e, FPow):
        out = expand(e.arg)
        for _ in range(e.n):
            out = f_apply(out)
        return out
    return type(e)(expand(e.left), expand(e.right))


# -- parser -------------------------------------------------------------------


_DESCRIPTIVE = {"digit", "end of input"}


class ExprSyntaxError(SyntaxError):
    """Malformed lattice expression; carries the offset and what was expected."""

    def __init__(self, text: str, offset: int, expected: set[str]):
        self.text_input = text
        self.pos = offset
        self.expected = frozenset(expected)
        found = repr(text[offset]) if offset < len(text) else "end of input"
        want = ", ".join(t if t in _DESCRIPTIVE else repr(t) for t in sorted(expected))
        super().__init__(f"at offset {offset}: expected one of {want}; found {found}")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, expected: set[str]):
        self.skip()
        raise ExprSyntaxError(self.text, self.pos, expected)

    def expect(self, tok: str):
        if self.peek() != tok:
            self.fail({tok})
        self.pos += 1

    def expr(self) -> Expr:
        e = self.term()
        while self.peek() == "|":
            self.pos += 1
            e = Join(e, self.term())
        return e

    def term(self) -> Expr:
        e = self.atom()
        while self.peek() == "&":
            self.pos += 1
            e = Meet(e, self.atom())
        return e

    def atom(self) -> Expr:
        ch = self.peek()
        if ch in ("A", "B", "C"):
            self.pos += 1
            return Atom(ch)
        if ch == "(":
            self.pos += 1
            e = self.expr()
            self.expect(")")
            return e
        if ch == "f":
            self.pos += 1
            self.expect("^")
            self.skip()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                self.fail({"digit"})
            n = int(self.text[start : self.pos])
            self.expect("(")
            e = self.expr()
            self.expect(")")
            return FPow(n, e)
        self.fail({"A", "B", "C", "(", "f^"})

    def parse(self) -> Expr:
        e = self.expr()
        if self.peek():
            self.fail({"|", "&", "end of input"})
        return e


def parse(text: str) -> Expr:
    return _Parser(text).parse()


def as_expr(e: Union[str, Expr]) -> Expr:
    return parse(e) if isinstance(e, str) else e


# -- base cones -------------------------------------------------------------

_DELTA = [(1, 8), (2, 7), (3, 6), (4, 5)]

_EXTREME_PAIRS = {
    "A": [(1, 4), (4, 8), (8, 5), (5, 1), (2, 3), (3, 7), (7, 6), (6, 2)],
    "B": [(1, 3), (3, 8), (8, 6), (6, 1), (2, 4), (4, 7), (7, 5), (5, 2)],
    "C": [(1, 2), (2, 8), (8, 7), (7, 1), (3, 4), (4, 6), (6, 5), (5, 3)],
}

# index quadruples {i,j,k,l}: the cone is p_i <= p_j + p_k + p_l over each
QUADRUPLES = {
    "A": [(1, 4, 5, 8), (2, 3, 6, 7)],
    "B": [(1, 3, 6, 8), (2, 4, 5, 7)],
    "C": [(1, 2, 7, 8), (3, 4, 5, 6)],
}


def _vec(plus=(), minus=()) -> tuple[int, ...]:
    v = [0] * 8
    for i in plus:
        v[i - 1] += 1
    for i in minus:
        v[i - 1] -= 1
    return tuple(v)


def extreme_rays(name: str) -> list[tuple[int, ...]]:
    """Generators of a base cone: the diagonal rays plus eight pair sums."""
    return [_vec(p) for p in _DELTA + _EXTREME_PAIRS[name]]


# dual generators beyond e_1..e_8, as signed index lists
_DUAL_EXTRA = {
    "A": [(-1, 4, 5, 8), (1, -4, 5, 8), (1, 4, -5, 8), (1, 4, 5, -8),
          (-2, 3, 6, 7), (2, -3, 6, 7), (2, 3, -6, 7), (2, 3, 6, -7)],
    "B": [(-1, 3, 6, 8), (1, -3, 6, 8), (1, 3, -6, 8), (1, 3, 6, -8),
          (-2, 4, 5, 7), (2, -4, 5, 7), (2, 4, -5, 7), (2, 4, 5, -7)],
    "C": [(-1, 2, 7, 8), (1, -2, 7, 8), (1, 2, -7, 8), (1, 2, 7, -8),
          (-3, 4, 5, 6), (3, -4, 5, 6), (3, 4, -5, 6), (3, 4, 5, -6)],
}  # fmt: skip


def signed(*indices: int) -> tuple[int, ...]:
    """``signed(-1, 4, 5, 8)`` is -e1+e4+e5+e8."""
    return _vec([i for i in indices if i > 0], [-i for i in indices if i < 0])


def dual_extreme_rays(name: str) -> list[tuple[int, ...]]:
    """Generators of a base cone's dual (its facet normals)."""
    return [_vec((i,)) for i in range(1, 9)] + [signed(*q) for q in _DUAL_EXTRA[name]]


class BaseConeMismatch(AssertionError):
    """Transcribed generator and facet lists do not describe the same cone."""


@dataclass(frozen=True)
class BaseCones:
    alpha: Cone
    beta: Cone
    gamma: Cone

    def __getitem__(self, name: str) -> Cone:
        return {"A": self.alpha, "B": self.beta, "C": self.gamma}[name]


def _checked(name: str) -> Cone:
    rays = extreme_rays(name)
    normals = dual_extreme_rays(name)
    c = cone_from_generators(rays)
    if (
        c.hrep != tuple(sorted(normalize_ray(n) for n in normals))
        or c.vrep != tuple(sorted(normalize_ray(r) for r in rays))
        or c != cone_from_inequalities(normals)
    ):
        raise BaseConeMismatch(f"generator/facet lists for {name} disagree")
    return c


@lru_cache(maxsize=1)
def base_cones() -> BaseCones:
    """The three base cones, cross-checked generator list against facet list."""
    return BaseCones(_checked("A"), _checked("B"), _checked("C"))


# -- evaluation -------------------------------------------------------------


def canonical_key(e: Expr) -> str:
    """Key identifying ``e`` up to associativity, commutativity and idempotence."""
    return _key(expand(e))


@lru_cache(maxsize=4096)
def _key(e: Expr) -> str:
    if isinstance(e, Atom):
        return e.name
    op = type(e)
    parts: set[str] = set()
    stack = [e.left, e.right]
    while stack:
        x = stack.pop()
        if type(x) is op:
            stack += [x.left, x.right]
        else:
            parts.add(_key(x))
    if len(parts) == 1:
        return parts.pop()
    sym = "|" if op is Join else "&"
    return "(" + sym.join(sorted(parts)) + ")"


class Evaluator:
    """Bottom-up evaluator with a memo keyed by :func:`canonical_key`.

    Instances are safe to share between threads; the memo is lock-guarded.
    """

    def __init__(self, base: BaseCones | None = None, cap: int | None = None):
        self.base = base or base_cones()
        self.cap = cap
        self._memo: dict[str, Cone] = {}
        self._lock = threading.Lock()

    def __call__(self, e: Union[str, Expr]) -> Cone:
        return self._eval(expand(as_expr(e)))

    def _eval(self, e: Expr) -> Cone:
        key = _key(e)
        with self._lock:
            hit = self._memo.get(key)
        if hit is not None:
            return hit
        if isinstance(e, Atom):
            out = self.base[e.name]
        else:
            left, right = self._eval(e.left), self._eval(e.right)
            op = join if isinstance(e, Join) else meet
            out = op(left, right, self.cap)
        with self._lock:
            self._memo[key] = out
        return out


def evaluate(e: Union[str, Expr], base: BaseCones | None = None, cap: int | None = None) -> Cone:
    """Evaluate ``e`` to an explicit cone (fresh memo per call)."""
    return Evaluator(base, cap)(e)
