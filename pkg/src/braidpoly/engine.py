"""Invariant evaluator for closures of braid words.

The evaluator turns the two-term skein recurrence into an algorithm: run
exponents outside {0, 1} are pushed into {0, 1} by the recurrence (downward
for positive exponents, upward with an exact unit division for negative
ones), and the remaining positive square-free-presented words are resolved
by the class search into splits, destabilizations, further squares, or
simple-braid base values.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .braid import (
    BraidWord,
    DEFAULT_SEARCH_BUDGET,
    Destabilizable,
    DistinctLetters,
    Exhausted,
    SimplePartition,
    Splittable,
    SquareFound,
    Template,
    class_search,
    cycle_partition,
    destabilize,
)
from .laurent import LaurentPoly, TwoVarLaurent
from .rationals import GaussianRational

log = logging.getLogger(__name__)

Value = Union[LaurentPoly, TwoVarLaurent]

CACHE_LIMIT_ENV = "BRAIDPOLY_CACHE_LIMIT"

_I = GaussianRational(0, 1)
_HALF = Fraction(1, 2)


class IndeterminateError(RuntimeError):
    """The evaluation could not be completed within budget, oracles disabled."""


class UnsupportedSpecializationError(ValueError):
    """Raised for operations that need one-variable characteristic roots."""


@dataclass(frozen=True)
class Specialization:
    """A substitution (l(s), m(s)) together with its characteristic roots.

    The roots r1, r2 are the unit monomials solving r^2 + m l r + l^2 = 0;
    the generic two-variable case carries no substitution and no roots.
    `c1`, `c2` are the recurrence coefficients (-ml, -l^2) after substitution
    and `delta` is the value of a two-component unlink, -(l + 1/l)/m.
    """

    name: str
    subst_l: Optional[LaurentPoly]
    subst_m: Optional[LaurentPoly]
    roots: Optional[Tuple[LaurentPoly, LaurentPoly]]
    degenerate: bool
    c1: Value
    c2: Value
    delta: Value

    @property
    def is_homfly(self) -> bool:
        return self.subst_l is None

    def one(self) -> Value:
        return TwoVarLaurent.one() if self.is_homfly else LaurentPoly.one()

    def zero(self) -> Value:
        return TwoVarLaurent.zero() if self.is_homfly else LaurentPoly.zero()

    def __repr__(self) -> str:
        return f"Specialization({self.name!r})"


def _monomial_power(root: LaurentPoly, a: int) -> LaurentPoly:
    exp, coeff = root.as_monomial()
    return LaurentPoly.monomial(exp * a, coeff**a)


def tv_specialize(poly: TwoVarLaurent, spec: Specialization) -> LaurentPoly:
    """Substitute (l, m) -> (l(s), m(s)) and expand exactly.

    l(s) must be a unit monomial (negative l-powers are frequent); negative
    m-powers are cleared by one exact division at the end, which succeeds for
    every genuine invariant value.
    """
    if spec.is_homfly:
        raise UnsupportedSpecializationError("the generic case has no substitution")
    l_val, m_val = spec.subst_l, spec.subst_m
    if l_val.as_monomial() is None:
        raise ValueError("substitution for l must be an invertible monomial")
    if not m_val:
        raise ValueError("substitution for m must be nonzero")
    clear = max(0, -poly.min_m_exponent())
    m_powers: Dict[int, LaurentPoly] = {0: LaurentPoly.one()}
    numerator = LaurentPoly.zero()
    for (el, em), coeff in poly.terms.items():
        k = em + clear
        if k not in m_powers:
            m_powers[k] = m_val**k
        term = _monomial_power(l_val, el) * m_powers[k] * coeff
        numerator = numerator + term
    if clear == 0:
        return numerator
    return numerator.divexact(m_val**clear)


# Generic recurrence data: c1 = -ml, c2 = -l^2, delta = -(l + 1/l)/m.
_C1_TV = TwoVarLaurent({(1, 1): -1})
_C2_TV = TwoVarLaurent({(2, 0): -1})
_DELTA_TV = TwoVarLaurent({(1, -1): -1, (-1, -1): -1})


def _build_specialization(
    name: str,
    subst_l: Optional[LaurentPoly],
    subst_m: Optional[LaurentPoly],
    roots: Optional[Tuple[LaurentPoly, LaurentPoly]],
) -> Specialization:
    if subst_l is None:
        return Specialization(name, None, None, None, False, _C1_TV, _C2_TV, _DELTA_TV)
    if subst_l.as_monomial() is None:
        raise ValueError("l substitution must be a unit monomial")
    r1, r2 = roots
    for r in roots:
        if r.as_monomial() is None:
            raise ValueError("characteristic roots must be unit monomials")
    c1 = -(subst_m * subst_l)
    c2 = -(subst_l * subst_l)
    if r1 + r2 != c1 or r1 * r2 != -c2:
        raise ValueError("roots do not satisfy the characteristic equation")
    probe = Specialization(name, subst_l, subst_m, roots, r1 == r2,
                           c1, c2, LaurentPoly.zero())
    delta = tv_specialize(_DELTA_TV, probe)
    return Specialization(name, subst_l, subst_m, roots, r1 == r2, c1, c2, delta)


HOMFLY = _build_specialization("homfly", None, None, None)

ALEXANDER = _build_specialization(
    "alexander",
    LaurentPoly({0: _I}),
    LaurentPoly({-1: _I, 1: -_I}),
    (LaurentPoly({1: -1}), LaurentPoly({-1: 1})),
)

JONES = _build_specialization(
    "jones",
    LaurentPoly({2: _I}),
    LaurentPoly({1: _I, -1: -_I}),
    (LaurentPoly({1: -1}), LaurentPoly({3: 1})),
)

DEGENERATE = _build_specialization(
    "degenerate",
    LaurentPoly({1: 1}),
    LaurentPoly({0: -2}),
    (LaurentPoly({1: 1}), LaurentPoly({1: 1})),
)

BUILTIN_SPECS = {
    "homfly": HOMFLY,
    "alexander": ALEXANDER,
    "jones": JONES,
    "degenerate": DEGENERATE,
}


def get_spec(name: str) -> Specialization:
    try:
        return BUILTIN_SPECS[name]
    except KeyError:
        raise ValueError(
            f"unknown specialization {name!r}; expected one of {sorted(BUILTIN_SPECS)}"
        ) from None


def custom_specialization(
    name: str,
    subst_l: LaurentPoly,
    subst_m: LaurentPoly,
    roots: Tuple[LaurentPoly, LaurentPoly],
) -> Specialization:
    """A user specialization given by unit-monomial characteristic roots."""
    return _build_specialization(name, subst_l, subst_m, roots)


def recurrence_coefficients(spec: Specialization) -> Tuple[Value, Value]:
    """Coefficients (c1, c2) with value(a+2) = c1*value(a+1) + c2*value(a)."""
    return spec.c1, spec.c2


def expansion_coefficient(spec: Specialization, a: int, j: int) -> LaurentPoly:
    """Per-slot weight carrying exponent `a` onto the corner exponent `j`.

    Nondegenerate roots give (r1^a r2 - r1 r2^a) / (r2 - r1) for j = 0 and
    (r2^a - r1^a) / (r2 - r1) for j = 1; a double root s gives (1-a) s^a and
    a s^(a-1).
    """
    if j not in (0, 1):
        raise ValueError("corner exponent must be 0 or 1")
    if spec.is_homfly:
        raise UnsupportedSpecializationError(
            "expansion coefficients need rational characteristic roots"
        )
    r1, r2 = spec.roots
    if spec.degenerate:
        s_exp, s_coeff = r1.as_monomial()
        if j == 0:
            return LaurentPoly.monomial(s_exp * a, s_coeff**a * (1 - a))
        return LaurentPoly.monomial(s_exp * (a - 1), s_coeff ** (a - 1) * a)
    if j == 0:
        numerator = _monomial_power(r1, a) * r2 - r1 * _monomial_power(r2, a)
    else:
        numerator = _monomial_power(r2, a) - _monomial_power(r1, a)
    return numerator.divexact(r2 - r1)


@dataclass(frozen=True)
class ExpansionTerm:
    """One corner of the expansion: a coefficient and a {0,1} exponent vector."""

    coefficient: LaurentPoly
    corner: Tuple[int, ...]


def expand_template(template: Template, spec: Specialization) -> List[ExpansionTerm]:
    """All 2^k corner terms of the expansion over a fixed generator sequence."""
    if spec.is_homfly:
        raise UnsupportedSpecializationError(
            "template expansion needs rational characteristic roots"
        )
    slots = [
        (expansion_coefficient(spec, a, 0), expansion_coefficient(spec, a, 1))
        for a in template.exponents
    ]
    terms: List[ExpansionTerm] = []
    k = len(slots)
    for mask in range(1 << k):
        corner = tuple((mask >> i) & 1 for i in range(k))
        coeff = LaurentPoly.one()
        for i, j in enumerate(corner):
            coeff = coeff * slots[i][j]
        terms.append(ExpansionTerm(coeff, corner))
    return terms


def expand_value(
    template: Template,
    spec: Specialization,
    budget: int = DEFAULT_SEARCH_BUDGET,
    cache: Optional[dict] = None,
) -> LaurentPoly:
    """Evaluate a template through the corner expansion (consistency path)."""
    total = spec.zero()
    for term in expand_template(template, spec):
        if not term.coefficient:
            continue
        corner_word = template.with_exponents(term.corner).to_word()
        value = eval_invariant(corner_word, spec, budget, cache=cache)
        total = total + term.coefficient * value
    return total


def relative_coefficients(
    spec: Specialization, exponents: Sequence[int]
) -> Dict[Tuple[int, ...], LaurentPoly]:
    """Corner-indexed coefficient products for a relative family."""
    slots = [
        (expansion_coefficient(spec, a, 0), expansion_coefficient(spec, a, 1))
        for a in exponents
    ]
    out: Dict[Tuple[int, ...], LaurentPoly] = {}
    p = len(slots)
    for mask in range(1 << p):
        corner = tuple((mask >> i) & 1 for i in range(p))
        coeff = LaurentPoly.one()
        for i, j in enumerate(corner):
            coeff = coeff * slots[i][j]
        out[corner] = coeff
    return out


def relative_expand(
    spec: Specialization,
    corners: Mapping[Tuple[int, ...], LaurentPoly],
    exponents: Sequence[int],
) -> LaurentPoly:
    """Combine corner values of a relative family at arbitrary exponents."""
    p = len(exponents)
    missing = [
        tuple((mask >> i) & 1 for i in range(p))
        for mask in range(1 << p)
        if tuple((mask >> i) & 1 for i in range(p)) not in corners
    ]
    if missing:
        raise ValueError(f"missing corner values: {missing}")
    total = LaurentPoly.zero()
    for corner, coeff in relative_coefficients(spec, exponents).items():
        total = total + coeff * corners[corner]
    return total


def simple_base_value(partition: SimplePartition, spec: Specialization) -> Value:
    """Invariant of the closure of a simple braid: an unlink power of delta."""
    e = partition.unlink_exponent
    if e == 0:
        return spec.one()
    return spec.delta**e


# ---------------------------------------------------------------------------
# The evaluator
# ---------------------------------------------------------------------------

Runs = Tuple[Tuple[int, int], ...]


def _cyclic_runs(letters: Sequence[int]) -> Runs:
    """Cyclic run-length encoding with free reduction of zero runs."""
    runs: List[List[int]] = []
    for e in letters:
        i = abs(e)
        sign = 1 if e > 0 else -1
        if runs and runs[-1][0] == i:
            runs[-1][1] += sign
        else:
            runs.append([i, sign])
    changed = True
    while changed:
        changed = False
        cleaned: List[List[int]] = []
        for index, exp in runs:
            if exp == 0:
                changed = True
                continue
            if cleaned and cleaned[-1][0] == index:
                cleaned[-1][1] += exp
                changed = True
            else:
                cleaned.append([index, exp])
        runs = cleaned
        if len(runs) >= 2 and runs[0][0] == runs[-1][0]:
            runs[0][1] += runs[-1][1]
            runs.pop()
            changed = True
    return tuple((i, a) for i, a in runs)


def _canonical_runs(runs: Runs) -> Runs:
    if not runs:
        return runs
    best = runs
    for k in range(1, len(runs)):
        cand = runs[k:] + runs[:k]
        if cand < best:
            best = cand
    return best


def _runs_to_letters(runs: Runs) -> Tuple[int, ...]:
    letters: List[int] = []
    for i, a in runs:
        letters.extend([i if a > 0 else -i] * abs(a))
    return tuple(letters)


def _cache_limit() -> int:
    raw = os.environ.get(CACHE_LIMIT_ENV)
    if raw is None:
        return 1_000_000
    try:
        return max(0, int(raw))
    except ValueError:
        return 1_000_000


class _Evaluator:
    def __init__(self, spec, budget, oracle_fallback, cache):
        self.spec = spec
        self.budget = budget
        self.oracle_fallback = oracle_fallback
        self.cache = cache
        self.cache_limit = _cache_limit()

    def eval_word(self, word: BraidWord) -> Value:
        return self.eval_runs(_cyclic_runs(word.letters), word.strands)

    def eval_runs(self, runs: Runs, n: int) -> Value:
        key = (n, _canonical_runs(runs))
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        value = self._compute(key[1], n)
        if len(self.cache) < self.cache_limit:
            self.cache[key] = value
        return value

    def _compute(self, runs: Runs, n: int) -> Value:
        spec = self.spec
        if not runs:
            return simple_base_value(SimplePartition((), n), spec)
        slot = next((k for k, (_, a) in enumerate(runs) if a not in (0, 1)), None)
        if slot is not None:
            return self._apply_recurrence(runs, n, slot)
        word = BraidWord(n, _runs_to_letters(runs))
        outcome = class_search(word, self.budget)
        if isinstance(outcome, Splittable):
            value = spec.one()
            parts = [w for w in (outcome.left, outcome.right) if w is not None]
            for part in parts:
                value = value * self.eval_word(part)
            e = len(parts) + outcome.unknots - 1
            if e:
                value = value * spec.delta**e
            return value
        if isinstance(outcome, Destabilizable):
            return self.eval_word(destabilize(outcome.witness))
        if isinstance(outcome, SquareFound):
            return self.eval_word(outcome.witness)
        if isinstance(outcome, DistinctLetters):
            return simple_base_value(cycle_partition(word), spec)
        assert isinstance(outcome, Exhausted)
        return self._oracle_value(word, outcome)

    def _apply_recurrence(self, runs: Runs, n: int, slot: int) -> Value:
        index, a = runs[slot]
        spec = self.spec

        def at(exp: int) -> Value:
            replaced = runs[:slot] + ((index, exp),) + runs[slot + 1 :]
            return self.eval_runs(_cyclic_runs(_runs_to_letters(replaced)), n)

        if a >= 2:
            return spec.c1 * at(a - 1) + spec.c2 * at(a - 2)
        # a <= -1: inverted recurrence, exact division by the unit c2
        numerator = at(a + 2) - spec.c1 * at(a + 1)
        if spec.is_homfly:
            ((el, em), coeff) = next(iter(spec.c2.terms.items()))
            return numerator.divexact_monomial(el, em, coeff)
        return numerator.divexact(spec.c2)

    def _oracle_value(self, word: BraidWord, outcome: Exhausted) -> Value:
        if not self.oracle_fallback:
            raise IndeterminateError(
                f"class search for {word} exhausted after {outcome.explored} words "
                "and oracle fallback is disabled"
            )
        log.info(
            "class search exhausted for %s after %d words; falling back to the "
            "algebraic trace oracle", word, outcome.explored,
        )
        from . import oracles

        generic = oracles.hecke_homfly(word)
        if self.spec.is_homfly:
            return generic
        return tv_specialize(generic, self.spec)


def eval_invariant(
    word: BraidWord,
    spec: Specialization,
    budget: int = DEFAULT_SEARCH_BUDGET,
    *,
    oracle_fallback: bool = True,
    cache: Optional[dict] = None,
) -> Value:
    """Invariant of the closure of `word` under `spec`.

    A shared `cache` dict may be passed to reuse work across calls; keys are
    canonical cyclic run-length forms, so rotations of a word are free.
    """
    evaluator = _Evaluator(
        spec, budget, oracle_fallback, cache if cache is not None else {}
    )
    return evaluator.eval_word(word)
