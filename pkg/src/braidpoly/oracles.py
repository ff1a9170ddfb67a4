"""Independent reference computations used to cross-validate the engine.

Three classical routes, each sharing no code path with the evaluator:

* `kauffman_jones` — bracket state sum over the closed-braid diagram,
  carried on Temperley-Lieb matchings so the state count stays linear in
  the word length;
* `burau_alexander` — determinant of the reduced Burau matrix, adjusted by
  the cyclotomic factor, defined only up to units +-s^j;
* `hecke_homfly` — the braid image in the permutation-basis algebra with
  quadratic relation x^2 = -lm x - l^2, traced by Markov reduction.

Sign and variable conventions for the bracket are frozen by calibration
against the unknot, the two-component unlink, the Hopf link and the
trefoil; the calibration identities stay asserted in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .braid import BraidWord
from .laurent import LaurentPoly, TwoVarLaurent
from .rationals import GaussianRational

DEFAULT_CROSSING_CAP = 24
HECKE_STRAND_CAP = 7


class CrossingCapExceeded(ValueError):
    """The bracket oracle refuses diagrams over its crossing cap."""


class StrandCapExceeded(ValueError):
    """The algebraic trace oracle refuses wide braids."""


# ---------------------------------------------------------------------------
# Kauffman bracket / Jones
# ---------------------------------------------------------------------------
#
# Positive letters resolve as A * (identity) + A^-1 * (cap-cup); the closure
# is normalized by (-A^3)^(-writhe) and A^2 is replaced by s^-1.  These
# choices reproduce V(unknot) = 1, V(oo) = -(s^2+1)/s, V(Hopf) = -s^5 - s
# and V(trefoil) = -s^8 + s^6 + s^2.

IntPoly = Dict[int, int]  # exponent of A -> integer coefficient


def _identity_matching(n: int) -> Tuple[int, ...]:
    pairing = list(range(2 * n))
    for i in range(n):
        pairing[i] = n + i
        pairing[n + i] = i
    return tuple(pairing)


def _cup_cap_matching(n: int, i: int) -> Tuple[int, ...]:
    """Temperley-Lieb generator e_i (1-based): caps at the bottom and top."""
    pairing = list(_identity_matching(n))
    a, b = i - 1, i
    pairing[a], pairing[b] = b, a
    pairing[n + a], pairing[n + b] = n + b, n + a
    return tuple(pairing)


def _glue(bottom: Tuple[int, ...], top: Tuple[int, ...], n: int) -> Tuple[Tuple[int, ...], int]:
    """Stack `top` below `bottom`'s top boundary; return matching and loop count.

    Points 0..n-1 are the outer bottom boundary (of `bottom`), points n..2n-1
    the outer top boundary (of `top`); the glued interface disappears.
    """
    # Node labels: outer bottom 0..n-1, interface n..2n-1, outer top 2n..3n-1.
    adj: Dict[int, List[int]] = {}

    def link(u: int, v: int) -> None:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)

    for p in range(2 * n):
        q = bottom[p]
        if p < q:
            link(p if p < n else n + (p - n), q if q < n else n + (q - n))
    for p in range(2 * n):
        q = top[p]
        if p < q:
            u = n + p if p < n else 2 * n + (p - n)
            v = n + q if q < n else 2 * n + (q - n)
            link(u, v)

    seen = set()
    out = [0] * (2 * n)

    def trace(start: int) -> int:
        prev = None
        cur = start
        while True:
            options = list(adj[cur])
            if prev is not None:
                options.remove(prev)
            nxt = options[0]
            seen.add(cur)
            seen.add(nxt)
            if nxt < n or nxt >= 2 * n:
                return nxt
            prev, cur = cur, nxt

    # Walk open strands from every outer boundary point.
    for start in list(range(n)) + list(range(2 * n, 3 * n)):
        if start in seen:
            continue
        end = trace(start)
        a = start if start < n else n + (start - 2 * n)
        b = end if end < n else n + (end - 2 * n)
        out[a] = b
        out[b] = a
    # Remaining interface nodes form closed loops.
    loops = 0
    for p in range(n, 2 * n):
        if p in seen:
            continue
        loops += 1
        prev = None
        cur = p
        while cur not in seen:
            seen.add(cur)
            options = list(adj[cur])
            if prev in options:
                options.remove(prev)
            prev, cur = cur, options[0]
    return tuple(out), loops


class _TLContext:
    """Multiplication tables for Temperley-Lieb matchings on n strands."""

    def __init__(self, n: int):
        self.n = n
        self.identity = _identity_matching(n)
        self.generators = {i: _cup_cap_matching(n, i) for i in range(1, n)}
        self._mul_cache: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Tuple[Tuple[int, ...], int]] = {}
        self._closure_cache: Dict[Tuple[int, ...], int] = {}

    def multiply(self, bottom, top):
        key = (bottom, top)
        hit = self._mul_cache.get(key)
        if hit is None:
            hit = _glue(bottom, top, self.n)
            self._mul_cache[key] = hit
        return hit

    def closure_loops(self, matching) -> int:
        hit = self._closure_cache.get(matching)
        if hit is None:
            n = self.n
            seen = [False] * (2 * n)
            loops = 0
            for start in range(2 * n):
                if seen[start]:
                    continue
                loops += 1
                p = start
                while not seen[p]:
                    seen[p] = True
                    q = matching[p]
                    seen[q] = True
                    p = q - n if q >= n else q + n  # closure arc to the other boundary
            self._closure_cache[matching] = loops
            hit = loops
        return hit


_TL_CONTEXTS: Dict[int, _TLContext] = {}


def _tl_context(n: int) -> _TLContext:
    ctx = _TL_CONTEXTS.get(n)
    if ctx is None:
        ctx = _TLContext(n)
        _TL_CONTEXTS[n] = ctx
    return ctx


def _poly_add_scaled(target: IntPoly, source: IntPoly, shift: int, scale: int) -> None:
    for e, c in source.items():
        key = e + shift
        acc = target.get(key, 0) + c * scale
        if acc:
            target[key] = acc
        else:
            target.pop(key, None)


def kauffman_jones(word: BraidWord, crossing_cap: int = DEFAULT_CROSSING_CAP) -> LaurentPoly:
    """Jones polynomial of the closure via the Kauffman bracket state sum."""
    if len(word.letters) > crossing_cap:
        raise CrossingCapExceeded(
            f"{len(word.letters)} crossings exceed the cap of {crossing_cap}"
        )
    n = word.strands
    ctx = _tl_context(n)
    d: IntPoly = {2: -1, -2: -1}  # loop value -A^2 - A^-2
    element: Dict[Tuple[int, ...], IntPoly] = {ctx.identity: {0: 1}}
    for letter in word.letters:
        index = abs(letter)
        sign = 1 if letter > 0 else -1
        gen = ctx.generators[index]
        new: Dict[Tuple[int, ...], IntPoly] = {}
        for matching, coeff in element.items():
            # identity smoothing
            dest = new.setdefault(matching, {})
            _poly_add_scaled(dest, coeff, sign, 1)
            if not dest:
                del new[matching]
            # cap-cup smoothing
            glued, loops = ctx.multiply(matching, gen)
            extra: IntPoly = {-sign: 1}
            for _ in range(loops):
                extra = _int_poly_mul(extra, d)
            dest = new.setdefault(glued, {})
            for e, c in extra.items():
                _poly_add_scaled(dest, coeff, e, c)
            if not dest:
                del new[glued]
        element = new
    bracket: IntPoly = {}
    for matching, coeff in element.items():
        loops = ctx.closure_loops(matching)
        weight: IntPoly = {0: 1}
        for _ in range(loops - 1):
            weight = _int_poly_mul(weight, d)
        for e, c in weight.items():
            _poly_add_scaled(bracket, coeff, e, c)
    # normalize by (-A^3)^(-w) and substitute A^2 -> s^-1
    w = word.writhe()
    normalized: IntPoly = {}
    sign = -1 if w % 2 else 1
    for e, c in bracket.items():
        normalized[e - 3 * w] = c * sign
    terms = {}
    for e, c in normalized.items():
        if e % 2:
            raise AssertionError("normalized bracket has an odd exponent")
        terms[-(e // 2)] = c
    return LaurentPoly(terms)


def _int_poly_mul(p: IntPoly, q: IntPoly) -> IntPoly:
    out: IntPoly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            key = e1 + e2
            acc = out.get(key, 0) + c1 * c2
            if acc:
                out[key] = acc
            else:
                del out[key]
    return out


# ---------------------------------------------------------------------------
# Burau / Alexander
# ---------------------------------------------------------------------------

Matrix = Tuple[Tuple[IntPoly, ...], ...]


def _reduced_burau_generators(n: int) -> Dict[int, Matrix]:
    """Reduced Burau matrices (size n-1) and their inverses, over Z[t, 1/t]."""

    def entries(size):
        return [[{} for _ in range(size)] for _ in range(size)]

    gens: Dict[int, Matrix] = {}
    size = n - 1
    for i in range(1, n):
        mat = entries(size)
        for d in range(size):
            mat[d][d] = {0: 1}
        r = i - 1
        mat[r][r] = {1: -1}
        if r > 0:
            mat[r - 1][r] = {1: 1}
        if r + 1 < size:
            mat[r + 1][r] = {0: 1}
        gens[i] = tuple(tuple(row) for row in mat)
        inv = entries(size)
        for d in range(size):
            inv[d][d] = {0: 1}
        inv[r][r] = {-1: -1}
        if r > 0:
            inv[r - 1][r] = {0: 1}
        if r + 1 < size:
            inv[r + 1][r] = {-1: 1}
        gens[-i] = tuple(tuple(row) for row in inv)
    return gens


_BURAU_CACHE: Dict[int, Dict[int, Matrix]] = {}


def _burau_gens(n: int) -> Dict[int, Matrix]:
    gens = _BURAU_CACHE.get(n)
    if gens is None:
        gens = _reduced_burau_generators(n)
        _BURAU_CACHE[n] = gens
    return gens


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    size = len(a)
    out = []
    for r in range(size):
        row = []
        for c in range(size):
            acc: IntPoly = {}
            for k in range(size):
                left = a[r][k]
                if not left:
                    continue
                right = b[k][c]
                if not right:
                    continue
                for e1, c1 in left.items():
                    for e2, c2 in right.items():
                        key = e1 + e2
                        val = acc.get(key, 0) + c1 * c2
                        if val:
                            acc[key] = val
                        else:
                            del acc[key]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _det(matrix: Matrix) -> IntPoly:
    """Determinant by expansion over column subsets (exact, small sizes)."""
    size = len(matrix)
    if size == 0:
        return {0: 1}
    memo: Dict[Tuple[int, int], IntPoly] = {}

    def minor(row: int, cols: int) -> IntPoly:
        if row == size:
            return {0: 1}
        key = (row, cols)
        hit = memo.get(key)
        if hit is not None:
            return hit
        total: IntPoly = {}
        sign = 1
        for c in range(size):
            bit = 1 << c
            if not cols & bit:
                continue
            entry = matrix[row][c]
            if entry:
                sub = minor(row + 1, cols & ~bit)
                for e1, c1 in entry.items():
                    for e2, c2 in sub.items():
                        k = e1 + e2
                        val = total.get(k, 0) + sign * c1 * c2
                        if val:
                            total[k] = val
                        else:
                            del total[k]
            sign = -sign
        memo[key] = total
        return total

    return minor(0, (1 << size) - 1)


@dataclass(frozen=True)
class UnitClass:
    """A Laurent polynomial considered up to multiplication by +-s^j."""

    representative: LaurentPoly

    def __eq__(self, other) -> bool:
        if isinstance(other, UnitClass):
            other = other.representative
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return equal_up_to_unit(self.representative, other)[0]

    def __hash__(self):
        raise TypeError("UnitClass is unhashable (equality is up to units)")


def equal_up_to_unit(a, b) -> Tuple[bool, Optional[Tuple[int, int]]]:
    """Whether a = sign * s^shift * b; returns (flag, (sign, shift))."""
    if isinstance(a, UnitClass):
        a = a.representative
    if isinstance(b, UnitClass):
        b = b.representative
    if not a and not b:
        return True, (1, 0)
    if not a or not b:
        return False, None
    if a.degree() - a.order() != b.degree() - b.order():
        return False, None
    shift = a.degree() - b.degree()
    lead_ratio = a.leading_coefficient() / b.leading_coefficient()
    for sign in (1, -1):
        if lead_ratio == GaussianRational(sign):
            candidate = b * GaussianRational(sign)
            shifted = LaurentPoly({e + shift: c for e, c in candidate.terms.items()})
            if shifted == a:
                return True, (sign, shift)
    return False, None


def burau_alexander(word: BraidWord) -> UnitClass:
    """Alexander value of the closure, up to units, from the reduced Burau matrix."""
    n = word.strands
    if n == 1:
        return UnitClass(LaurentPoly.one())
    gens = _burau_gens(n)
    size = n - 1
    product: Matrix = tuple(
        tuple({0: 1} if r == c else {} for c in range(size)) for r in range(size)
    )
    for letter in word.letters:
        product = _mat_mul(product, gens[letter])
    shifted = tuple(
        tuple(
            _int_poly_sub(product[r][c], {0: 1}) if r == c else product[r][c]
            for c in range(size)
        )
        for r in range(size)
    )
    det = _det(shifted)
    if not det:
        return UnitClass(LaurentPoly.zero())
    numerator = _int_poly_mul(det, {0: 1, 1: -1})  # multiply by (1 - t)
    denominator = {0: 1, n: -1}  # 1 - t^n
    quotient = _int_poly_divexact(numerator, denominator)
    return UnitClass(LaurentPoly({-2 * e: c for e, c in quotient.items()}))


def _int_poly_sub(p: IntPoly, q: IntPoly) -> IntPoly:
    out = dict(p)
    for e, c in q.items():
        acc = out.get(e, 0) - c
        if acc:
            out[e] = acc
        else:
            out.pop(e, None)
    return out


def _int_poly_divexact(p: IntPoly, q: IntPoly) -> IntPoly:
    """Exact Laurent division with integer coefficients; raises if inexact."""
    if not p:
        return {}
    rem = dict(p)
    q_deg = max(q)
    q_breadth = q_deg - min(q)
    q_lead = q[q_deg]
    out: IntPoly = {}
    while rem:
        r_deg = max(rem)
        if r_deg - min(rem) < q_breadth:
            raise ValueError("inexact polynomial division")
        factor, leftover = divmod(rem[r_deg], q_lead)
        if leftover:
            raise ValueError("inexact polynomial division")
        shift = r_deg - q_deg
        out[shift] = factor
        for e, c in q.items():
            key = e + shift
            acc = rem.get(key, 0) - factor * c
            if acc:
                rem[key] = acc
            else:
                rem.pop(key, None)
    return out


# ---------------------------------------------------------------------------
# Hecke-style trace / HOMFLY
# ---------------------------------------------------------------------------
#
# The braid image lives in the algebra with permutation basis E_w over
# Laurent polynomials in (l, m), subject to x_i^2 = -lm x_i - l^2.  The trace
# is computed by peeling the last strand: either it is untouched (a distant
# unknot, factor delta) or the basis word contains the top generator exactly
# once and a Markov destabilization removes it.

Perm = Tuple[int, ...]

_NEG_LM = TwoVarLaurent({(1, 1): -1})
_NEG_L2 = TwoVarLaurent({(2, 0): -1})
_INV_COEFF_X = TwoVarLaurent({(-2, 0): -1})  # -1/l^2
_INV_COEFF_1 = TwoVarLaurent({(-1, 1): -1})  # -m/l
_DELTA = TwoVarLaurent({(1, -1): -1, (-1, -1): -1})


@dataclass
class HeckeElement:
    """An element of the permutation-basis algebra on `strands` strands."""

    strands: int
    coeffs: Dict[Perm, TwoVarLaurent]

    @classmethod
    def unit(cls, strands: int) -> "HeckeElement":
        return cls(strands, {tuple(range(strands)): TwoVarLaurent.one()})

    def right_letter(self, letter: int) -> "HeckeElement":
        """Multiply on the right by a signed Artin generator."""
        index = abs(letter)
        out: Dict[Perm, TwoVarLaurent] = {}

        def bump(perm: Perm, value: TwoVarLaurent) -> None:
            if not value:
                return
            acc = out.get(perm)
            total = value if acc is None else acc + value
            if total:
                out[perm] = total
            else:
                out.pop(perm, None)

        for perm, coeff in self.coeffs.items():
            swapped = _swap_values(perm, index)
            if letter > 0:
                if _is_ascent(perm, index):
                    bump(swapped, coeff)
                else:
                    bump(perm, coeff * _NEG_LM)
                    bump(swapped, coeff * _NEG_L2)
            else:
                # x^-1 = -(1/l^2) x - (m/l)
                if _is_ascent(perm, index):
                    bump(swapped, coeff * _INV_COEFF_X)
                    bump(perm, coeff * _INV_COEFF_1)
                else:
                    bump(perm, coeff * (_NEG_LM * _INV_COEFF_X + _INV_COEFF_1))
                    bump(swapped, coeff * (_NEG_L2 * _INV_COEFF_X))
        return HeckeElement(self.strands, out)


def _swap_values(perm: Perm, index: int) -> Perm:
    """Post-compose with the transposition of values index-1, index (0-based a, a+1)."""
    a = index - 1
    b = index
    return tuple(b if v == a else a if v == b else v for v in perm)


def _is_ascent(perm: Perm, index: int) -> bool:
    """Right multiplication by generator `index` increases length."""
    a = index - 1
    return perm.index(a) < perm.index(index)


def _reduced_word(perm: Perm) -> Tuple[int, ...]:
    """A reduced generator word whose permutation is `perm`."""
    letters_rev: List[int] = []
    current = list(perm)
    position = {v: i for i, v in enumerate(current)}
    while True:
        descent = None
        for value in range(len(current) - 1):
            if position[value] > position[value + 1]:
                descent = value + 1  # 1-based generator index
                break
        if descent is None:
            break
        letters_rev.append(descent)
        a, b = descent - 1, descent
        pa, pb = position[a], position[b]
        current[pa], current[pb] = b, a
        position[a], position[b] = pb, pa
    return tuple(reversed(letters_rev))


_TRACE_CACHE: Dict[Tuple[int, Perm], TwoVarLaurent] = {}


def _trace(n: int, perm: Perm) -> TwoVarLaurent:
    """Normalized Markov trace of a basis element: the closure invariant of E_w."""
    if n <= 1:
        return TwoVarLaurent.one()
    key = (n, perm)
    hit = _TRACE_CACHE.get(key)
    if hit is not None:
        return hit
    if perm[n - 1] == n - 1:
        value = _DELTA * _trace(n - 1, perm[: n - 1])
    else:
        q = perm[n - 1]
        tail = tuple(range(n - 1, q, -1))  # letters n-1, n-2, ..., q+1
        tail_perm = _perm_of_word(tail, n)
        u = _compose(perm, _inverse(tail_perm))
        assert u[n - 1] == n - 1
        assert _inversions(u) + len(tail) == _inversions(perm)
        v_letters = tail[1:]
        element = HeckeElement(
            n - 1, {_perm_of_word(v_letters, n - 1): TwoVarLaurent.one()}
        )
        for letter in _reduced_word(u[: n - 1]):
            element = element.right_letter(letter)
        value = TwoVarLaurent.zero()
        for small_perm, coeff in element.coeffs.items():
            value = value + coeff * _trace(n - 1, small_perm)
    _TRACE_CACHE[key] = value
    return value


def _perm_of_word(letters: Sequence[int], n: int) -> Perm:
    perm = tuple(range(n))
    for letter in letters:
        perm = _swap_values(perm, abs(letter))
    return perm


def _compose(first: Perm, second: Perm) -> Perm:
    """Apply `first`, then `second`."""
    return tuple(second[v] for v in first)


def _inverse(perm: Perm) -> Perm:
    out = [0] * len(perm)
    for i, v in enumerate(perm):
        out[v] = i
    return tuple(out)


def _inversions(perm: Perm) -> int:
    total = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                total += 1
    return total


def hecke_homfly(word: BraidWord) -> TwoVarLaurent:
    """Generic two-variable invariant of the closure via the algebraic trace."""
    if word.strands > HECKE_STRAND_CAP:
        raise StrandCapExceeded(
            f"{word.strands} strands exceed the trace cap of {HECKE_STRAND_CAP}"
        )
    element = HeckeElement.unit(word.strands)
    for letter in word.letters:
        element = element.right_letter(letter)
    total = TwoVarLaurent.zero()
    for perm, coeff in element.coeffs.items():
        total = total + coeff * _trace(word.strands, perm)
    return total
