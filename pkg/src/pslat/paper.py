"""The increasing chain s_0 = A, s_{n+1} = f(s_n) and its separating states.

Two independent ways of confirming that the chain is strict:

* :func:`replay_state_induction` / :func:`replay_witness_induction` replay
  the inductive membership arguments step by step using only the inequality
  descriptions and generator lists of the three base cones.  They never build
  ``s_n`` and run to large ``n`` in milliseconds.
* :func:`verify_chain_small` evaluates ``s_n`` explicitly with the
  double-description engine and checks the inclusions directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cone import Certificate, Inside, Outside, member, subset
from .exact import Vec8, format_vec, normalize_ray, pairing, vec_to_json
from .lattice import (
    QUADRUPLES,
    Evaluator,
    FPow,
    A,
    dual_extreme_rays,
    extreme_rays,
)


class NegativeIndex(ValueError):
    pass


class TranscriptionError(AssertionError):
    """Recursion and closed form disagree: a constant was mistyped."""


class ReplayFailure(AssertionError):
    def __init__(self, n: int, step: str, detail: str = ""):
        super().__init__(f"replay failed at n={n}, step {step!r}" + (f": {detail}" if detail else ""))
        self.n = n
        self.step = step


def _check_index(n: int):
    if n < 0:
        raise NegativeIndex(f"index must be >= 0, got {n}")


def _v(*xs) -> Vec8:
    return tuple(Fraction(x) for x in xs)


def _e(*pairs: tuple[int, int]) -> Vec8:
    """``_e((c, i), (d, j))`` is c*e_i + d*e_j."""
    v = [Fraction(0)] * 8
    for c, i in pairs:
        v[i - 1] += c
    return tuple(v)


def _add(*vs: Sequence) -> Vec8:
    return tuple(sum(col, Fraction(0)) for col in zip(*vs))


def _gen(i: int, j: int) -> Vec8:
    return _e((1, i), (1, j))


# -- the sequence ---------------------------------------------------------------


def a_n(n: int) -> Fraction:
    _check_index(n)
    if n % 2 == 0:
        return Fraction(3, 2) * n * n + 3 * n + 1
    return Fraction(3, 2) * n * n + 2 * n + Fraction(3, 2)


def increment_decompositions(n: int) -> dict[str, list[tuple[int, Vec8]]]:
    """The three increments at step ``n`` as nonnegative sums of base-cone generators.

    Keys ``"B"``, ``"C"``, ``"A"`` name the cone each increment lies in.
    """
    _check_index(n)
    if n % 2 == 0:
        return {
            "B": [(2 * n + 2, _gen(1, 3)), (1, _gen(4, 5))],
            "C": [(2 * n + 2, _gen(3, 5))],
            "A": [(2 * n + 4, _gen(2, 3)), (1, _gen(4, 5))],
        }
    return {
        "B": [(2 * n + 1, _gen(2, 5)), (1, _gen(2, 4))],
        "C": [(2 * n + 2, _gen(1, 2))],
        "A": [(2 * n + 3, _gen(1, 5)), (1, _gen(1, 4))],
    }


def _combine(terms: list[tuple[int, Vec8]]) -> Vec8:
    return _add(*[tuple(c * x for x in g) for c, g in terms])


def rho_increments(n: int) -> tuple[Vec8, Vec8, Vec8]:
    """``(beta_inc, gamma_inc, alpha_inc)`` added to rho(n) to reach rho(n+1)."""
    d = increment_decompositions(n)
    return _combine(d["B"]), _combine(d["C"]), _combine(d["A"])


RHO_0 = _v(2, 1, 0, 1, 1, 0, 1, 0)
RHO_0_DECOMPOSITION = [(1, _gen(1, 4)), (1, _gen(1, 5)), (1, _gen(2, 7))]


def rho_closed_form(n: int) -> Vec8:
    a = a_n(n)
    if n % 2 == 0:
        return _v(a + 1, a, a - 2 * n - 1, 2 * n + 1, a, 0, 1, 0)
    return _v(a - 1, a, a + 2 * n + 1, 2 * n + 1, a, 0, 1, 0)


_rho_cache: list[Vec8] = [RHO_0]


def rho(n: int) -> Vec8:
    """State separating s_n from s_{n-1}, by the recursion; checked against the closed form."""
    _check_index(n)
    while len(_rho_cache) <= n:
        k = len(_rho_cache) - 1
        nxt = _add(_rho_cache[k], *rho_increments(k))
        if nxt != rho_closed_form(k + 1):
            raise TranscriptionError(f"rho({k + 1}) recursion {nxt} != closed form")
        _rho_cache.append(nxt)
    return _rho_cache[n]


def witness(n: int) -> Vec8:
    """Dual vector nonnegative on s_n with pairing -2 against rho(n+1)."""
    _check_index(n)
    if n % 2 == 0:
        return _v(0, 1, -1, 0, 0, 2 * n + 1, 2 * n + 1, 2 * n)
    return _v(0, -1, 1, 0, 0, 2 * n + 1, 2 * n + 1, 2 * n)


@dataclass(frozen=True)
class ChainStep:
    n: int
    rho_n: Vec8
    rho_beta: Vec8
    rho_gamma: Vec8
    rho_alpha: Vec8
    w_n: Vec8
    a_n: Fraction


def chain_step(n: int) -> ChainStep:
    b, g, a = rho_increments(n)
    return ChainStep(n, rho(n), b, g, a, witness(n), a_n(n))


# -- replay machinery ----------------------------------------------------------


def satisfies_quadruples(p: Sequence, name: str) -> bool:
    """``p_i <= p_j + p_k + p_l`` over both index quadruples of a base cone."""
    for quad in QUADRUPLES[name]:
        for i in quad:
            if p[i - 1] > sum(p[j - 1] for j in quad if j != i):
                return False
    return True


@dataclass
class ReplayStep:
    """One replayed claim: ``vector`` lies in ``target`` because of ``reason``."""

    n: int
    step: str
    target: str
    vector: Vec8
    reason: str
    data: list = field(default_factory=list)
    ok: bool = False

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "step": self.step,
            "target": self.target,
            "vector": vec_to_json(self.vector),
            "reason": self.reason,
            "data": [[str(c), vec_to_json(g)] for c, g in self.data],
            "ok": self.ok,
        }


def check_step(s: ReplayStep) -> bool:
    """Re-derive a step's verdict from its stored data alone."""
    if s.reason.startswith("inequalities "):
        return satisfies_quadruples(s.vector, s.reason.split()[1])
    if s.reason.startswith("generators "):
        name = s.reason.split()[1]
        gens = set(extreme_rays(name))
        return all(c >= 0 and tuple(g) in gens for c, g in s.data) and _combine(s.data) == s.vector
    if s.reason.startswith("dual-generator "):
        name = s.reason.split()[1]
        return tuple(int(x) for x in s.vector) in dual_extreme_rays(name)
    if s.reason.startswith("dual-split "):
        # vector = named dual generator + nonnegative multiples of the e_i
        name = s.reason.split()[1]
        (_, g), = s.data
        rest = [a - b for a, b in zip(s.vector, g)]
        return tuple(int(x) for x in g) in dual_extreme_rays(name) and all(x >= 0 for x in rest)
    if s.reason == "sum":
        return _combine(s.data) == s.vector
    raise ValueError(f"unknown replay reason {s.reason!r}")


@dataclass
class InductionReport:
    max_n: int
    state_membership_ok: list[bool] | None = None
    witness_membership_ok: list[bool] | None = None
    pairing_values: list[Fraction] = field(default_factory=list)
    steps: list[ReplayStep] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            all(self.state_membership_ok or [])
            and all(self.witness_membership_ok or [])
            and all(v == -2 for v in self.pairing_values)
            and all(s.ok for s in self.steps)
        )

    def recheck(self) -> bool:
        """Replay every stored step from its data; True iff all still hold."""
        return all(check_step(s) == s.ok for s in self.steps)

    def to_json(self) -> dict:
        return {
            "max_n": self.max_n,
            "ok": self.ok,
            "state_membership_ok": self.state_membership_ok,
            "witness_membership_ok": self.witness_membership_ok,
            "pairing_values": [str(v) for v in self.pairing_values],
            "steps": [s.to_json() for s in self.steps],
        }


def _record(report: InductionReport, step: ReplayStep, strict: bool) -> bool:
    step.ok = check_step(step)
    report.steps.append(step)
    if not step.ok and strict:
        raise ReplayFailure(step.n, step.step, f"{format_vec(step.vector)} ({step.reason})")
    return step.ok


def _pairings(n_max: int) -> list[Fraction]:
    return [pairing(witness(n), rho(n + 1)) for n in range(n_max + 1)]


def replay_state_induction(n_max: int, strict: bool = True) -> InductionReport:
    """Certify rho(n) in s_n for n <= n_max by replaying the forward induction.

    From rho(n) in s_n: rho(n) is in C, so in C & s_n; adding the B increment
    lands in B | (C & s_n), and the result is in A; adding the C increment
    lands in C | ..., and the result is in B; adding the A increment gives
    rho(n+1) in A | (B & ...) = s_{n+1}.  Each "is in" is checked on the
    inequality description, each increment on explicit generator sums.
    """
    _check_index(n_max)
    rep = InductionReport(max_n=n_max, pairing_values=_pairings(n_max))
    base = ReplayStep(0, "base", "A", RHO_0, "generators A", list(RHO_0_DECOMPOSITION))
    ok = [_record(rep, base, strict)]
    for n in range(n_max):
        r = rho(n)
        dec = increment_decompositions(n)
        b, g, a = rho_increments(n)
        after_b = _add(r, b)
        after_g = _add(after_b, g)
        good = all(
            _record(rep, s, strict)
            for s in [
                ReplayStep(n, "rho in C", "C", r, "inequalities C"),
                ReplayStep(n, "B increment", "B", b, "generators B", dec["B"]),
                ReplayStep(n, "rho+inc_B in A", "A", after_b, "inequalities A"),
                ReplayStep(n, "C increment", "C", g, "generators C", dec["C"]),
                ReplayStep(n, "rho+inc_B+inc_C in B", "B", after_g, "inequalities B"),
                ReplayStep(n, "A increment", "A", a, "generators A", dec["A"]),
                ReplayStep(
                    n, "next rho", f"s_{n + 1}", rho(n + 1), "sum",
                    [(1, r), (1, b), (1, g), (1, a)],
                ),
            ]
        )
        ok.append(ok[-1] and good)
    rep.state_membership_ok = ok
    return rep


# Per parity: (op, dual cone, vector) for the six moves taking W_n to W_{n+1}.
# "add": the running vector gains a dual generator (meet with that cone);
# "split": running vector = dual generator + nonnegative e_i terms (join).
_WITNESS_MOVES = {
    0: [
        ("add", "C", (1, -1, 0, 0, 0, 0, 1, 1)),
        ("split", "B", (1, 0, -1, 0, 0, 1, 0, 1)),
        ("add", "A", (0, -1, 1, 0, 0, 1, 1, 0)),
        ("split", "C", (1, -1, 0, 0, 0, 0, 1, 1)),
        ("add", "B", (-1, 0, 1, 0, 0, 1, 0, 1)),
        ("split", "A", (0, -1, 1, 0, 0, 1, 1, 0)),
    ],
    1: [
        ("add", "C", (-1, 1, 0, 0, 0, 0, 1, 1)),
        ("split", "B", (-1, 0, 1, 0, 0, 1, 0, 1)),
        ("add", "A", (0, 1, -1, 0, 0, 1, 1, 0)),
        ("split", "C", (-1, 1, 0, 0, 0, 0, 1, 1)),
        ("add", "B", (1, 0, -1, 0, 0, 1, 0, 1)),
        ("split", "A", (0, 1, -1, 0, 0, 1, 1, 0)),
    ],
}


def witness_intermediates(n: int) -> list[Vec8]:
    """Running vectors after the first and third additions, as closed forms in n."""
    if n % 2 == 0:
        return [
            _v(1, 0, -1, 0, 0, 2 * n + 1, 2 * n + 2, 2 * n + 1),
            _v(1, -1, 0, 0, 0, 2 * n + 2, 2 * n + 3, 2 * n + 1),
        ]
    return [
        _v(-1, 0, 1, 0, 0, 2 * n + 1, 2 * n + 2, 2 * n + 1),
        _v(-1, 1, 0, 0, 0, 2 * n + 2, 2 * n + 3, 2 * n + 1),
    ]


def replay_witness_induction(n_max: int, strict: bool = True) -> InductionReport:
    """Certify W_n in the dual of s_n for n <= n_max by the dual induction.

    Dual of a meet is the join of duals, dual of a join is the meet of duals.
    Walking through f from the inside out, a meet step adds a generator of
    that base cone's dual, and a join step shows the running vector already
    lies in that base cone's dual.
    """
    _check_index(n_max)
    rep = InductionReport(max_n=n_max, pairing_values=_pairings(n_max))
    w0 = tuple(Fraction(x) for x in normalize_ray(witness(0)))
    ok = [_record(rep, ReplayStep(0, "base", "A*", w0, "dual-generator A"), strict)]
    labels = ["s1*", "s2*", "s3*", "s4*", "s5*", "s_next*"]
    for n in range(n_max):
        run = witness(n)
        expect = witness_intermediates(n)
        good = True
        for k, (op, name, g) in enumerate(_WITNESS_MOVES[n % 2]):
            gv = _v(*g)
            label = labels[k]
            if op == "add":
                good &= _record(rep, ReplayStep(n, f"{label}: add", f"{name}*", gv, f"dual-generator {name}"), strict)
                run = _add(run, gv)
            else:
                good &= _record(rep, ReplayStep(n, f"{label}: split", f"{name}*", run, f"dual-split {name}", [(1, gv)]), strict)
            if k == 0 or k == 2:
                good &= _record(
                    rep,
                    ReplayStep(n, f"{label}: closed form", "", expect[k // 2], "sum", [(1, run)]),
                    strict,
                )
        good &= _record(rep, ReplayStep(n, "next witness", f"s_{n + 1}*", witness(n + 1), "sum", [(1, run)]), strict)
        ok.append(ok[-1] and good)
    rep.witness_membership_ok = ok
    return rep


def replay(n_max: int, strict: bool = False) -> InductionReport:
    """Both inductions and the pairings merged into one report."""
    s = replay_state_induction(n_max, strict)
    w = replay_witness_induction(n_max, strict)
    return InductionReport(
        max_n=n_max,
        state_membership_ok=s.state_membership_ok,
        witness_membership_ok=w.witness_membership_ok,
        pairing_values=s.pairing_values,
        steps=s.steps + w.steps,
    )


# -- explicit evaluation -------------------------------------------------------


@dataclass
class ChainLink:
    """Outcome for the inclusion s_{n-1} < s_n."""

    n: int
    contained: bool
    reverse_contained: bool
    rho_in_current: Certificate
    rho_in_previous: Certificate

    @property
    def strict(self) -> bool:
        return self.contained and not self.reverse_contained

    @property
    def ok(self) -> bool:
        return (
            self.strict
            and isinstance(self.rho_in_current, Inside)
            and isinstance(self.rho_in_previous, Outside)
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "strict": self.strict,
            "rho": vec_to_json(rho(self.n)),
            "rho_in_current": self.rho_in_current.to_json(),
            "rho_in_previous": self.rho_in_previous.to_json(),
        }


def verify_chain_small(
    n_max: int, evaluator: Evaluator | None = None, cap: int | None = None, progress=None
) -> list[ChainLink]:
    """Evaluate s_0..s_{n_max} explicitly and check each link of the chain.

    Raises :class:`~pslat.dd.ResourceExceeded` if an intermediate ray list
    outgrows ``cap``.
    """
    _check_index(n_max)
    ev = evaluator or Evaluator(cap=cap)
    prev = ev(A)
    links = []
    for n in range(1, n_max + 1):
        cur = ev(FPow(n, A))
        link = ChainLink(
            n,
            subset(prev, cur),
            subset(cur, prev),
            member(rho(n), cur),
            member(rho(n), prev),
        )
        links.append(link)
        if progress:
            progress(link, cur)
        prev = cur
    return links


DIFF_SMALL = "A|(B&C)"
DIFF_LARGE = "(A|B)&(A|C)"


def distributivity_gap(n_max: int, evaluator: Evaluator | None = None) -> list[tuple[int, bool, bool]]:
    """Per n: (n, rho(n) in (A|B)&(A|C), rho(n) in A|(B&C))."""
    ev = evaluator or Evaluator()
    small, large = ev(DIFF_SMALL), ev(DIFF_LARGE)
    return [(n, large.contains(rho(n)), small.contains(rho(n))) for n in range(n_max + 1)]


# Proposed identity; known among X-states, open for general three-qubit states.
# Within GHZ-diagonal space it is a finite cone computation.
IDENTITY_LHS = "(A&B)|(A&C)"
IDENTITY_RHS = "A&(A|(B&C))&(B|(C&A))&(C|(A&B))"


def identity_holds(evaluator: Evaluator | None = None) -> bool:
    """Whether both sides evaluate to the same cone in the GHZ-diagonal space."""
    ev = evaluator or Evaluator()
    return ev(IDENTITY_LHS) == ev(IDENTITY_RHS)
