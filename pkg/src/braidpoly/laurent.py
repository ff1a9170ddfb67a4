"""Sparse exact Laurent polynomials in one variable s and in two variables l, m.

Both rings are kept sparse (dict from exponent to nonzero coefficient) with
canonical pruning of zero terms, so equality is structural.  Coefficients are
Gaussian rationals; see `rationals`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .rationals import GaussianRational

Coefficient = GaussianRational
_ZERO = GaussianRational(0)
_ONE = GaussianRational(1)


def _coeff(value) -> Coefficient:
    return GaussianRational.coerce(value)


@dataclass(frozen=True)
class DegreeProfile:
    """Degree, order and breadth of a one-variable Laurent polynomial.

    For the zero polynomial, degree and order are `None` (the bottom marker)
    and breadth is 0; otherwise breadth = degree - order + 1.
    """

    degree: Optional[int]
    order: Optional[int]
    breadth: int

    def __post_init__(self):
        if self.degree is None or self.order is None:
            if not (self.degree is None and self.order is None and self.breadth == 0):
                raise ValueError("zero profile must be (None, None, 0)")
        elif self.breadth != self.degree - self.order + 1:
            raise ValueError("breadth must equal degree - order + 1")


class LaurentPoly:
    """Laurent polynomial in the single variable s over Gaussian rationals."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Optional[Mapping[int, object]] = None):
        clean: Dict[int, Coefficient] = {}
        if terms:
            for exp, raw in terms.items():
                c = _coeff(raw)
                if c:
                    clean[int(exp)] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def monomial(cls, exp: int, coeff=1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def variable(cls) -> "LaurentPoly":
        return cls({1: 1})

    # -- basic structure ----------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(frozenset(self.terms.items()))
            object.__setattr__(self, "_hash", h)
        return h

    def coefficient(self, exp: int) -> Coefficient:
        return self.terms.get(exp, _ZERO)

    def items(self) -> Iterable[Tuple[int, Coefficient]]:
        return sorted(self.terms.items())

    # -- ring operations ----------------------------------------------

    def __add__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        out = dict(self.terms)
        for exp, c in other.terms.items():
            acc = out.get(exp)
            total = c if acc is None else acc + c
            if total:
                out[exp] = total
            elif acc is not None:
                del out[exp]
        return _wrap_lp(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return _wrap_lp({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction, GaussianRational)):
            c = _coeff(other)
            if not c:
                return LaurentPoly()
            return _wrap_lp({e: v * c for e, v in self.terms.items()})
        out: Dict[int, Coefficient] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                prod = c1 * c2
                acc = out.get(e)
                total = prod if acc is None else acc + prod
                if total:
                    out[e] = total
                elif acc is not None:
                    del out[e]
        return _wrap_lp(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "LaurentPoly":
        if not isinstance(exponent, int):
            raise TypeError("exponent must be an integer")
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = LaurentPoly.one()
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "LaurentPoly":
        """Inverse of a unit (a single-term polynomial)."""
        mono = self.as_monomial()
        if mono is None:
            raise ValueError(f"{self} is not a unit in the Laurent ring")
        exp, coeff = mono
        return LaurentPoly({-exp: GaussianRational(1) / coeff})

    def divexact(self, divisor: "LaurentPoly") -> "LaurentPoly":
        """Exact division; raises ValueError if the divisor does not divide."""
        if not divisor:
            raise ZeroDivisionError("division by zero polynomial")
        if not self:
            return LaurentPoly()
        mono = divisor.as_monomial()
        if mono is not None:
            exp, coeff = mono
            return _wrap_lp({e - exp: c / coeff for e, c in self.terms.items()})
        # Long division after shifting both operands to ordinary polynomials.
        rem = dict(self.terms)
        div = divisor.terms
        d_deg = max(div)
        d_lead = div[d_deg]
        out: Dict[int, Coefficient] = {}
        while rem:
            r_deg = max(rem)
            r_ord = min(rem)
            if r_deg - r_ord < d_deg - min(div):
                raise ValueError("inexact Laurent division")
            shift = r_deg - d_deg
            factor = rem[r_deg] / d_lead
            out[shift] = factor
            for e, c in div.items():
                target = e + shift
                acc = rem.get(target, _ZERO) - factor * c
                if acc:
                    rem[target] = acc
                elif target in rem:
                    del rem[target]
        return _wrap_lp(out)

    # -- queries -------------------------------------------------------

    def as_monomial(self) -> Optional[Tuple[int, Coefficient]]:
        if len(self.terms) != 1:
            return None
        ((exp, coeff),) = self.terms.items()
        return exp, coeff

    def profile(self) -> DegreeProfile:
        if not self.terms:
            return DegreeProfile(None, None, 0)
        deg = max(self.terms)
        ord_ = min(self.terms)
        return DegreeProfile(deg, ord_, deg - ord_ + 1)

    def degree(self) -> Optional[int]:
        return max(self.terms) if self.terms else None

    def order(self) -> Optional[int]:
        return min(self.terms) if self.terms else None

    def leading_coefficient(self) -> Coefficient:
        if not self.terms:
            return _ZERO
        return self.terms[max(self.terms)]

    def bar(self) -> "LaurentPoly":
        """The involution s -> 1/s (mirror-image substitution)."""
        return _wrap_lp({-e: c for e, c in self.terms.items()})

    def scale_exponents(self, factor: int) -> "LaurentPoly":
        """Substitute s -> s^factor (factor may be negative)."""
        if factor == 0:
            raise ValueError("exponent scale factor must be nonzero")
        return _wrap_lp({e * factor: c for e, c in self.terms.items()})

    def evaluate_at_one(self) -> Coefficient:
        total = GaussianRational(0)
        for c in self.terms.values():
            total = total + c
        return total

    def is_real(self) -> bool:
        return all(c.is_rational() for c in self.terms.values())

    # -- rendering / serialization -------------------------------------

    def __repr__(self) -> str:
        return f"LaurentPoly({self.terms!r})"

    def __str__(self) -> str:
        return render_poly(self.items(), _s_power)

    def to_json(self) -> dict:
        return {
            "var": "s",
            "terms": [
                {"exp": e, "re": str(c.re), "im": str(c.im)} for e, c in self.items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentPoly":
        if data.get("var") != "s":
            raise ValueError("expected a one-variable polynomial with var 's'")
        terms: Dict[int, Coefficient] = {}
        for entry in data["terms"]:
            exp = int(entry["exp"])
            if exp in terms:
                raise ValueError(f"duplicate exponent {exp} in polynomial JSON")
            terms[exp] = GaussianRational(Fraction(entry["re"]), Fraction(entry["im"]))
        return cls(terms)


def _wrap_lp(terms: Dict[int, Coefficient]) -> LaurentPoly:
    poly = LaurentPoly.__new__(LaurentPoly)
    object.__setattr__(poly, "terms", terms)
    object.__setattr__(poly, "_hash", None)
    return poly


class TwoVarLaurent:
    """Laurent polynomial in the two variables l, m over Gaussian rationals."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Tuple[int, int], object]] = None):
        clean: Dict[Tuple[int, int], Coefficient] = {}
        if terms:
            for key, raw in terms.items():
                c = _coeff(raw)
                if c:
                    el, em = key
                    clean[(int(el), int(em))] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("TwoVarLaurent is immutable")

    @classmethod
    def zero(cls) -> "TwoVarLaurent":
        return cls()

    @classmethod
    def one(cls) -> "TwoVarLaurent":
        return cls({(0, 0): 1})

    @classmethod
    def monomial(cls, el: int, em: int, coeff=1) -> "TwoVarLaurent":
        return cls({(el, em): coeff})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = TwoVarLaurent({(0, 0): other})
        if not isinstance(other, TwoVarLaurent):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(frozenset(self.terms.items()))
            object.__setattr__(self, "_hash", h)
        return h

    def coefficient(self, el: int, em: int) -> Coefficient:
        return self.terms.get((el, em), _ZERO)

    def items(self) -> Iterable[Tuple[Tuple[int, int], Coefficient]]:
        return sorted(self.terms.items())

    def __add__(self, other) -> "TwoVarLaurent":
        if isinstance(other, int):
            other = TwoVarLaurent({(0, 0): other})
        out = dict(self.terms)
        for key, c in other.terms.items():
            acc = out.get(key)
            total = c if acc is None else acc + c
            if total:
                out[key] = total
            elif acc is not None:
                del out[key]
        return _wrap_tv(out)

    __radd__ = __add__

    def __neg__(self) -> "TwoVarLaurent":
        return _wrap_tv({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "TwoVarLaurent":
        if isinstance(other, int):
            other = TwoVarLaurent({(0, 0): other})
        return self + (-other)

    def __rsub__(self, other) -> "TwoVarLaurent":
        return (-self) + other

    def __mul__(self, other) -> "TwoVarLaurent":
        if isinstance(other, (int, Fraction, GaussianRational)):
            c = _coeff(other)
            if not c:
                return TwoVarLaurent()
            return _wrap_tv({k: v * c for k, v in self.terms.items()})
        out: Dict[Tuple[int, int], Coefficient] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                prod = c1 * c2
                acc = out.get(key)
                total = prod if acc is None else acc + prod
                if total:
                    out[key] = total
                elif acc is not None:
                    del out[key]
        return _wrap_tv(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "TwoVarLaurent":
        if not isinstance(exponent, int) or exponent < 0:
            raise TypeError("exponent must be a nonnegative integer")
        result = TwoVarLaurent.one()
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divexact_monomial(self, el: int, em: int, coeff=1) -> "TwoVarLaurent":
        c = _coeff(coeff)
        if not c:
            raise ZeroDivisionError("division by zero monomial")
        return _wrap_tv(
            {(a - el, b - em): v / c for (a, b), v in self.terms.items()}
        )

    def min_m_exponent(self) -> int:
        if not self.terms:
            return 0
        return min(em for (_, em) in self.terms)

    def __repr__(self) -> str:
        return f"TwoVarLaurent({self.terms!r})"

    def __str__(self) -> str:
        return render_poly(self.items(), _lm_power)

    def to_json(self) -> dict:
        return {
            "vars": ["l", "m"],
            "terms": [
                {"el": el, "em": em, "re": str(c.re), "im": str(c.im)}
                for (el, em), c in self.items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "TwoVarLaurent":
        if data.get("vars") != ["l", "m"]:
            raise ValueError("expected a two-variable polynomial with vars ['l','m']")
        terms: Dict[Tuple[int, int], Coefficient] = {}
        for entry in data["terms"]:
            key = (int(entry["el"]), int(entry["em"]))
            if key in terms:
                raise ValueError(f"duplicate exponent pair {key} in polynomial JSON")
            terms[key] = GaussianRational(Fraction(entry["re"]), Fraction(entry["im"]))
        return cls(terms)


def _wrap_tv(terms: Dict[Tuple[int, int], Coefficient]) -> TwoVarLaurent:
    poly = TwoVarLaurent.__new__(TwoVarLaurent)
    object.__setattr__(poly, "terms", terms)
    object.__setattr__(poly, "_hash", None)
    return poly


def _s_power(exp: int) -> str:
    if exp == 0:
        return ""
    if exp == 1:
        return "s"
    return f"s^{exp}"


def _lm_power(key: Tuple[int, int]) -> str:
    el, em = key
    parts = []
    if el == 1:
        parts.append("l")
    elif el:
        parts.append(f"l^{el}")
    if em == 1:
        parts.append("m")
    elif em:
        parts.append(f"m^{em}")
    return " ".join(parts)


def render_poly(items, power_str) -> str:
    """Canonical text rendering, ascending exponent order, exact fractions."""
    pieces = []
    for key, coeff in items:
        power = power_str(key)
        if coeff.is_rational():
            negative = coeff.re < 0
            mag = -coeff.re if negative else coeff.re
            if mag == 1 and power:
                body = power
            else:
                body = f"{mag} {power}".strip()
            sign = "-" if negative else "+"
        else:
            body = f"{coeff} {power}".strip()
            sign = "+"
        pieces.append((sign, body))
    if not pieces:
        return "0"
    first_sign, first_body = pieces[0]
    text = first_body if first_sign == "+" else f"-{first_body}"
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text
