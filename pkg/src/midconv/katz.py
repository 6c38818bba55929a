"""The Katz transformation on local monodromy data.

Given a rank-one twisting datum (a "convoluter") and a local monodromy
vector, middle convolution changes the rank by the defect and transforms
each local divisor by an explicit substitution.  This module implements
that transformation exactly, together with the eigenvalue conventions
it requires, its involution partner, emptiness detection, 1-genericity,
and the iterative rank-reduction loop.

Everything here is pure divisor arithmetic over the symbolic eigenvalue
group; the numeric verification of these formulas lives in
:mod:`midconv.homology`.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .divisors import EigDivisor, MonodromyVector
from .errors import (ConventionViolation, MaxStepsExceeded, ModeMismatch,
                     SearchBudgetExceeded, SizeMismatch)
from .scalars import GroupElement, GroupMode, product

__all__ = [
    "Convoluter",
    "ConventionReport",
    "NoneffectiveReport",
    "EmptinessCertificate",
    "KatzStep",
    "AlgorithmTrace",
    "TerminalStatus",
    "defect",
    "kappa_local",
    "kappa",
    "kappa_de_rham",
    "partner",
    "check_involution",
    "check_conventions",
    "is_one_generic",
    "detect_empty",
    "run_algorithm",
]


class Convoluter:
    """Rank-one twisting datum with components h_i, v_i, t, u_i.

    The components satisfy ``t * prod(h) = 1`` and ``t * prod(v) = 1``;
    the first relation *derives* t from h, the second is validated on v,
    and ``u_i = t * h_i * v_i`` derives u.
    """

    __slots__ = ("h", "v", "t", "u")

    def __init__(self, h: Sequence[GroupElement], v: Sequence[GroupElement] | None = None):
        h = tuple(h)
        if len(h) < 3:
            raise ValueError("a convoluter needs at least 3 points")
        mode = h[0].mode
        if any(e.mode is not mode for e in h):
            raise ModeMismatch("all h components must share one mode")
        v = h if v is None else tuple(v)
        if len(v) != len(h):
            raise SizeMismatch(f"h has {len(h)} components but v has {len(v)}")
        if any(e.mode is not mode for e in v):
            raise ModeMismatch("all v components must share h's mode")
        t = product(h).invert()
        if not t.combine(product(v)).is_identity():
            raise ValueError("v violates the product relation t * prod(v) = 1")
        u = tuple(t.combine(hi).combine(vi) for hi, vi in zip(h, v))
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "u", u)

    def __setattr__(self, name, value):
        raise AttributeError("Convoluter is immutable")

    @property
    def n(self) -> int:
        return len(self.h)

    @property
    def mode(self) -> GroupMode:
        return self.h[0].mode

    @classmethod
    def with_fresh_v(cls, h: Sequence[GroupElement], names: Sequence[str]) -> "Convoluter":
        """v_i := h_i * s_i with fresh generators s_i, s_n forced so the
        product relation still holds."""
        h = tuple(h)
        if len(names) != len(h) - 1:
            raise SizeMismatch("need n-1 fresh generator names")
        mode = h[0].mode
        s = [GroupElement.generator(name, mode) for name in names]
        s.append(product(s).invert())
        v = [hi.combine(si) for hi, si in zip(h, s)]
        return cls(h, v)

    def partner(self) -> "Convoluter":
        """The convoluter that inverts the transformation.

        Flip the two projection factors and dualize: h and v swap and
        every component is inverted (in additive mode this is negation).
        The defining relations hold automatically for the result.
        """
        return Convoluter([e.invert() for e in self.v],
                          [e.invert() for e in self.h])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Convoluter):
            return NotImplemented
        return self.h == other.h and self.v == other.v

    def __hash__(self) -> int:
        return hash((self.h, self.v))

    def __repr__(self) -> str:
        return f"Convoluter(h={list(self.h)!r}, v={list(self.v)!r})"

    def to_json(self) -> dict:
        return {"h": [e.to_json() for e in self.h],
                "v": [e.to_json() for e in self.v]}


def partner(beta: Convoluter) -> Convoluter:
    return beta.partner()


@dataclass(frozen=True)
class ConventionReport:
    """Outcome of the exact convention checks for a pair (beta, vector).

    ``chirhobeta_detail`` lists (point, eigenvalue) witnesses whenever
    ``t * h_i * a = 1``; the de Rham fields are filled only when the
    check ran in de Rham (additive) flavor.
    """

    chi_nontrivial: bool
    chirhobeta_ok: bool
    chirhobeta_detail: tuple = ()
    de_rham: bool = False
    diag_res_not_integer: Optional[bool] = None
    alphabetabeta_ok: Optional[bool] = None
    alphabetabeta_detail: tuple = ()
    one_generic: Optional[bool] = None

    @property
    def ok(self) -> bool:
        parts = [self.chi_nontrivial, self.chirhobeta_ok]
        if self.de_rham:
            parts += [bool(self.diag_res_not_integer), bool(self.alphabetabeta_ok)]
        return all(parts)

    def first_violation(self) -> Optional[ConventionViolation]:
        if self.de_rham and not self.diag_res_not_integer:
            return ConventionViolation("diagonal-residue-not-integer")
        if not self.chi_nontrivial:
            return ConventionViolation("diagonal-monodromy-nontrivial")
        if self.de_rham and not self.alphabetabeta_ok:
            i, a = self.alphabetabeta_detail[0]
            return ConventionViolation("residue-shift-not-integer", i, a)
        if not self.chirhobeta_ok:
            i, a = self.chirhobeta_detail[0]
            return ConventionViolation("twisted-eigenvalue-nontrivial", i, a)
        return None

    def to_json(self) -> dict:
        doc = {
            "chi_nontrivial": self.chi_nontrivial,
            "chirhobeta_ok": self.chirhobeta_ok,
            "chirhobeta_violations": [
                {"point": i, "eigenvalue": a.to_json()} for i, a in self.chirhobeta_detail],
            "ok": self.ok,
        }
        if self.de_rham:
            doc["diag_res_not_integer"] = self.diag_res_not_integer
            doc["alphabetabeta_ok"] = self.alphabetabeta_ok
            doc["alphabetabeta_violations"] = [
                {"point": i, "eigenvalue": a.to_json()} for i, a in self.alphabetabeta_detail]
        if self.one_generic is not None:
            doc["one_generic"] = self.one_generic
        return doc


@dataclass(frozen=True)
class NoneffectiveReport:
    """Transform output had a negative coefficient: no such local system.

    For each witnessing point we record the offending coefficient
    ``m_i + d`` and both sides of the equivalent rank inequality
    ``sum_{j != i} (r - m_j) < r``.
    """

    points: tuple  # of (i, coefficient, lhs, r)

    def to_json(self) -> dict:
        return {"noneffective": [
            {"point": i, "coefficient": c, "rank_sum": lhs, "rank": r}
            for i, c, lhs, r in self.points]}


@dataclass(frozen=True)
class EmptinessCertificate:
    point: int
    lhs: int          # sum_{j != i} (r - m_j(h_j^{-1}))
    rank: int
    coefficient: int  # m_i(h_i^{-1}) + defect (< 0)

    def to_json(self) -> dict:
        return {"point": self.point, "rank_sum": self.lhs,
                "rank": self.rank, "coefficient": self.coefficient}


class DegenerateRank:
    """Marker result: every transform coefficient is zero (rank 0)."""

    def __repr__(self):
        return "DegenerateRank()"

    def __eq__(self, other):
        return isinstance(other, DegenerateRank)

    def __hash__(self):
        return hash(DegenerateRank)


def _check_compat(beta: Convoluter, vector: MonodromyVector):
    if beta.n != vector.n:
        raise SizeMismatch(f"convoluter has {beta.n} points, vector has {vector.n}")
    if beta.mode is not vector.mode:
        raise ModeMismatch(
            f"convoluter mode {beta.mode.value} but vector mode {vector.mode.value}")


def max_mult_convoluter(vector: MonodromyVector,
                        v_policy: str = "same",
                        fresh_names: Sequence[str] | None = None) -> Convoluter:
    """The default convoluter of the reduction loop: h_i is the inverse
    of a maximal-multiplicity eigenvalue of g_i (ties broken to the
    smallest element in the deterministic order)."""
    h = [g.max_multiplicity()[0].invert() for g in vector]
    if v_policy == "same":
        return Convoluter(h)
    if v_policy == "fresh":
        names = fresh_names or [f"_s{i}" for i in range(1, vector.n)]
        return Convoluter.with_fresh_v(h, names)
    raise ValueError(f"unknown v policy {v_policy!r}")


def defect(vector: MonodromyVector, beta: Convoluter | None = None) -> int:
    """(n-2) r - sum of the multiplicities m_i(h_i^{-1}).

    With ``beta`` omitted the maximal multiplicity is used at each point,
    which is the defect of the vector itself.
    """
    n, r = vector.n, vector.rank
    if beta is None:
        return (n - 2) * r - sum(g.max_multiplicity()[1] for g in vector)
    _check_compat(beta, vector)
    return (n - 2) * r - sum(
        g.multiplicity(hi.invert()) for g, hi in zip(vector, beta.h))


def check_conventions(beta: Convoluter, vector: MonodromyVector,
                      de_rham: bool = False) -> ConventionReport:
    """Exact convention checks for the pair.

    Abstract flavor: t != 1 and t * h_i * a != 1 for every eigenvalue a
    of g_i.  De Rham flavor (additive mode required): t not an integer,
    a + h_i + t not an integer, and a + h_i not a nonzero integer.
    """
    _check_compat(beta, vector)
    chirho_detail = []
    for i, (g, hi) in enumerate(zip(vector, beta.h)):
        shift = beta.t.combine(hi)
        for a in g.support():
            if shift.combine(a).is_identity():
                chirho_detail.append((i, a))
    if not de_rham:
        return ConventionReport(
            chi_nontrivial=not beta.t.is_identity(),
            chirhobeta_ok=not chirho_detail,
            chirhobeta_detail=tuple(chirho_detail),
        )
    if vector.mode is not GroupMode.ADDITIVE:
        raise ModeMismatch("de Rham conventions require additive mode")
    abb_detail = []
    for i, (g, hi) in enumerate(zip(vector, beta.h)):
        for a in g.support():
            s1 = a.combine(hi).combine(beta.t)
            s2 = a.combine(hi)
            if s1.is_integer() or (s2.is_integer() and not s2.is_identity()):
                abb_detail.append((i, a))
    return ConventionReport(
        chi_nontrivial=not beta.t.is_identity(),
        chirhobeta_ok=not chirho_detail,
        chirhobeta_detail=tuple(chirho_detail),
        de_rham=True,
        diag_res_not_integer=not beta.t.is_integer(),
        alphabetabeta_ok=not abb_detail,
        alphabetabeta_detail=tuple(abb_detail),
    )


def kappa_local(beta: Convoluter, vector: MonodromyVector, i: int,
                check: bool = True) -> EigDivisor:
    """Local transform at point i.

    ``(m_i(h_i^{-1}) + d) [v_i] + sum_{a h_i != 1} m_i(a) [a u_i]``
    where d is the defect.  Zero coefficients are dropped; a negative
    coefficient makes the result noneffective (callers decide what to do
    with that).
    """
    _check_compat(beta, vector)
    if check:
        report = check_conventions(beta, vector,
                                   de_rham=False)
        violation = report.first_violation()
        if violation is not None:
            raise violation
    d = defect(vector, beta)
    g = vector[i]
    hi, vi, ui = beta.h[i], beta.v[i], beta.u[i]
    entries = [(vi, g.multiplicity(hi.invert()) + d)]
    for a, m in g.entries:
        if not a.combine(hi).is_identity():
            entries.append((a.combine(ui), m))
    return EigDivisor(vector.mode, entries)


def _kappa_divisors(beta: Convoluter, vector: MonodromyVector) -> list[EigDivisor]:
    return [kappa_local(beta, vector, i, check=False) for i in range(vector.n)]


def kappa(beta: Convoluter, vector: MonodromyVector, check: bool = True,
          de_rham: bool = False):
    """Global transform.

    Returns a MonodromyVector of rank r + d, or a NoneffectiveReport if
    any coefficient went negative, or DegenerateRank if the output rank
    is zero.  With ``check`` the conventions are verified first and a
    ConventionViolation is raised on failure (the flag exists for
    exploratory use).
    """
    _check_compat(beta, vector)
    if check:
        report = check_conventions(beta, vector, de_rham=de_rham)
        violation = report.first_violation()
        if violation is not None:
            raise violation
    d = defect(vector, beta)
    divisors = _kappa_divisors(beta, vector)
    r = vector.rank
    bad = []
    for i, (g, hi) in enumerate(zip(vector, beta.h)):
        coeff = g.multiplicity(hi.invert()) + d
        if coeff < 0:
            lhs = sum(r - vector[j].multiplicity(beta.h[j].invert())
                      for j in range(vector.n) if j != i)
            assert lhs < r, "noneffectivity and the rank inequality must agree"
            bad.append((i, coeff, lhs, r))
    if bad:
        return NoneffectiveReport(points=tuple(bad))
    if r + d == 0:
        return DegenerateRank()
    out = MonodromyVector(divisors)
    assert all(k.degree() == r + d for k in out), "rank law r' = r + d"
    return out


def kappa_de_rham(beta: Convoluter, vector: MonodromyVector, check: bool = True):
    """Additive-mode transform on residue eigenvalues.

    Identical combinatorics with the group written additively, guarded
    by the de Rham conventions.  Also returns the per-point dimension
    ``d_i = (n-2) r - sum_{j != i} m_j(-h_j)`` of the new-eigenvalue
    block and asserts it equals the coefficient of [v_i] by a direct
    recount.
    """
    if vector.mode is not GroupMode.ADDITIVE:
        raise ModeMismatch("de Rham transform requires additive mode")
    result = kappa(beta, vector, check=check, de_rham=True)
    n, r = vector.n, vector.rank
    d = defect(vector, beta)
    d_list = []
    for i in range(n):
        d_i = (n - 2) * r - sum(vector[j].multiplicity(beta.h[j].invert())
                                for j in range(n) if j != i)
        m_i = vector[i].multiplicity(beta.h[i].invert())
        assert d_i == m_i + d, "new-eigenvalue block dimension recount"
        d_list.append(d_i)
    return result, d_list


def check_involution(beta: Convoluter, vector: MonodromyVector,
                     de_rham: bool = False) -> bool:
    """Transform, transform back with the partner, compare exactly."""
    once = kappa(beta, vector, de_rham=de_rham)
    if not isinstance(once, MonodromyVector):
        raise ValueError(f"transform is not a vector: {once!r}")
    back = kappa(beta.partner(), once, de_rham=de_rham)
    return back == vector


def is_one_generic(vector: MonodromyVector, budget: int = 10 ** 7) -> bool:
    """No product a_1 ... a_n = 1 with a_i in the support of g_i.

    Exhaustive exact search; refuses to run past ``budget`` support
    combinations.
    """
    total = 1
    for g in vector:
        total *= len(g.entries)
        if total > budget:
            raise SearchBudgetExceeded(
                f"{total} support combinations exceed the budget {budget}")
    for combo in itertools.product(*(g.support() for g in vector)):
        if product(combo).is_identity():
            return False
    return True


def detect_empty(beta: Convoluter, vector: MonodromyVector) -> Optional[EmptinessCertificate]:
    """Witness for a noneffective transform, if any.

    The two characterizations -- a negative coefficient ``m_i + d`` and
    the rank inequality ``sum_{j != i}(r - m_j) < r`` -- are evaluated
    independently at every point and asserted to agree.
    """
    _check_compat(beta, vector)
    n, r = vector.n, vector.rank
    d = defect(vector, beta)
    mults = [g.multiplicity(hi.invert()) for g, hi in zip(vector, beta.h)]
    found = None
    for i in range(n):
        lhs = sum(r - mults[j] for j in range(n) if j != i)
        noneffective = mults[i] + d < 0
        assert noneffective == (lhs < r), "emptiness characterizations disagree"
        if noneffective and found is None:
            found = EmptinessCertificate(point=i, lhs=lhs, rank=r,
                                         coefficient=mults[i] + d)
    return found


class TerminalStatus(enum.Enum):
    # The loop reports ALL_DIAGONAL for every scalar-classes terminal,
    # rank one included; RANK_ONE is kept for callers that refine it.
    RANK_ONE = "RankOne"
    ALL_DIAGONAL = "AllDiagonal"
    EMPTY_NONEFFECTIVE = "EmptyNoneffective"
    POSITIVE_DEFECT = "PositiveDefect"
    CONVENTION_FAILURE = "ConventionFailure"


@dataclass(frozen=True)
class KatzStep:
    input: MonodromyVector
    beta: Convoluter
    defect: int
    output: MonodromyVector


@dataclass(frozen=True)
class AlgorithmTrace:
    steps: tuple
    status: TerminalStatus
    final: MonodromyVector
    certificate: Optional[EmptinessCertificate] = None
    report: Optional[ConventionReport] = None
    failed_side: Optional[str] = None  # "forward" or "reverse" on convention failure

    @property
    def ranks(self) -> list[int]:
        out = [s.input.rank for s in self.steps]
        out.append(self.final.rank)
        return out

    def to_json(self) -> dict:
        doc = {
            "status": self.status.value,
            "ranks": self.ranks,
            "steps": [{
                "input": s.input.to_json(),
                "convoluter": s.beta.to_json(),
                "defect": s.defect,
                "output": s.output.to_json(),
            } for s in self.steps],
            "final": self.final.to_json(),
        }
        if self.certificate is not None:
            doc["certificate"] = self.certificate.to_json()
        if self.report is not None:
            doc["convention_report"] = self.report.to_json()
            doc["failed_side"] = self.failed_side
        return doc


def run_algorithm(vector: MonodromyVector, max_steps: int | None = None,
                  v_policy: str = "same") -> AlgorithmTrace:
    """Iterate the transformation while it strictly reduces the rank.

    Per step: stop at AllDiagonal (every class scalar, which covers rank
    one); otherwise aim the convoluter at maximal multiplicities; stop
    at PositiveDefect when d >= 0; verify the conventions for the pair
    and for the partner pair on the output, stopping at
    ConventionFailure with the offending report; stop at
    EmptyNoneffective with a certificate; else step.  Every recorded
    step has d < 0, so at most ``rank`` steps can happen.
    """
    if vector.mode is GroupMode.CIRCLE:
        raise ModeMismatch("the reduction loop runs in multiplicative or additive mode")
    if max_steps is None:
        max_steps = vector.rank
    steps = []
    current = vector
    for step in range(max_steps + 1):
        if current.is_all_diagonal():
            # Covers rank one: a degree-1 divisor is a single point.
            return AlgorithmTrace(tuple(steps), TerminalStatus.ALL_DIAGONAL, current)
        # fresh generators must be fresh per step, not reused across steps
        names = [f"_s{step}_{i}" for i in range(1, current.n)]
        beta = max_mult_convoluter(current, v_policy=v_policy, fresh_names=names)
        d = defect(current, beta)
        if d >= 0:
            return AlgorithmTrace(tuple(steps), TerminalStatus.POSITIVE_DEFECT, current)
        report = check_conventions(beta, current)
        if not report.ok:
            return AlgorithmTrace(tuple(steps), TerminalStatus.CONVENTION_FAILURE,
                                  current, report=report, failed_side="forward")
        result = kappa(beta, current, check=False)
        if isinstance(result, NoneffectiveReport):
            cert = detect_empty(beta, current)
            return AlgorithmTrace(tuple(steps), TerminalStatus.EMPTY_NONEFFECTIVE,
                                  current, certificate=cert)
        if isinstance(result, DegenerateRank):  # unreachable for valid inputs
            return AlgorithmTrace(tuple(steps), TerminalStatus.EMPTY_NONEFFECTIVE,
                                  current)
        back_report = check_conventions(beta.partner(), result)
        if not back_report.ok:
            return AlgorithmTrace(tuple(steps), TerminalStatus.CONVENTION_FAILURE,
                                  current, report=back_report, failed_side="reverse")
        assert result.rank == current.rank + d < current.rank
        steps.append(KatzStep(current, beta, d, result))
        current = result
    raise MaxStepsExceeded(f"no terminal state after {max_steps} steps")
