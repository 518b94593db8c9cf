"""Sparse exact multivariate polynomial arithmetic.

Coefficients live in one of three rings: arbitrary-precision integers,
rationals, or integers mod an odd prime.  Polynomials are kept in canonical
form at all times (no zero coefficients, no zero exponents), so equality is
plain dict equality and every operation is deterministic.
"""

from __future__ import annotations

import re
from fractions import Fraction


class RingMismatchError(ValueError):
    pass


class NotDivisibleError(ArithmeticError):
    """Raised by zero_out_and_divide when some monomial resists division."""

    def __init__(self, monomial):
        self.monomial = monomial
        super().__init__(f"monomial {monomial!r} not divisible by divisor")


class CoefficientRing:
    """Integers, rationals, or integers mod p (p an odd prime >= 3)."""

    INTEGERS = "integers"
    RATIONALS = "rationals"
    MOD = "mod"

    def __init__(self, kind, p=None):
        if kind not in (self.INTEGERS, self.RATIONALS, self.MOD):
            raise ValueError(f"unknown ring kind {kind!r}")
        if kind == self.MOD:
            if p is None or p < 3 or not _is_prime(p) or p % 2 == 0:
                raise ValueError("mod-p ring requires an odd prime p >= 3")
        elif p is not None:
            raise ValueError("p only makes sense for the mod-p ring")
        self.kind = kind
        self.p = p

    def __eq__(self, other):
        return (
            isinstance(other, CoefficientRing)
            and self.kind == other.kind
            and self.p == other.p
        )

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        if self.kind == self.MOD:
            return f"CoefficientRing(mod {self.p})"
        return f"CoefficientRing({self.kind})"

    def normalize(self, c):
        if self.kind == self.MOD:
            return int(c) % self.p
        if self.kind == self.RATIONALS:
            return Fraction(c)
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise ValueError(f"{c} is not an integer")
            return c.numerator
        return int(c)

    @property
    def has_zero_divisors(self):
        return False

    @property
    def zero(self):
        return self.normalize(0)

    @property
    def one(self):
        return self.normalize(1)


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


ZZ = CoefficientRing(CoefficientRing.INTEGERS)
QQ = CoefficientRing(CoefficientRing.RATIONALS)


def GF(p):
    return CoefficientRing(CoefficientRing.MOD, p)


class Monomial:
    """A power product, stored as a sorted tuple of (variable, exponent).

    Zero exponents are never stored; the empty monomial is 1.
    """

    __slots__ = ("exps",)

    def __init__(self, exponents=()):
        if isinstance(exponents, dict):
            items = exponents.items()
        else:
            items = exponents
        cleaned = []
        for var, e in items:
            if e < 0:
                raise ValueError("negative exponent")
            if e:
                cleaned.append((var, e))
        cleaned.sort()
        self.exps = tuple(cleaned)

    @classmethod
    def _raw(cls, exps):
        m = object.__new__(cls)
        m.exps = exps
        return m

    def degree(self):
        return sum(e for _, e in self.exps)

    def variables(self):
        return [v for v, _ in self.exps]

    def exponent(self, var):
        for v, e in self.exps:
            if v == var:
                return e
        return 0

    def __mul__(self, other):
        merged = dict(self.exps)
        for v, e in other.exps:
            merged[v] = merged.get(v, 0) + e
        return Monomial._raw(tuple(sorted(merged.items())))

    def divide(self, other):
        """Return self/other, or None if not divisible."""
        merged = dict(self.exps)
        for v, e in other.exps:
            r = merged.get(v, 0) - e
            if r < 0:
                return None
            if r:
                merged[v] = r
            else:
                merged.pop(v, None)
        return Monomial._raw(tuple(sorted(merged.items())))

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.exps == other.exps

    def __hash__(self):
        return hash(self.exps)

    def sort_key(self):
        # graded lexicographic by variable-id; for determinism only
        return (self.degree(), self.exps)

    def __repr__(self):
        if not self.exps:
            return "1"
        return "*".join(v if e == 1 else f"{v}^{e}" for v, e in self.exps)


_ONE = Monomial()


class Polynomial:
    """Sparse multivariate polynomial over an explicit coefficient ring."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms=None):
        self.ring = ring
        canonical = {}
        if terms:
            for mono, c in (terms.items() if isinstance(terms, dict) else terms):
                if not isinstance(mono, Monomial):
                    mono = Monomial(mono)
                c = ring.normalize(c)
                if c:
                    acc = canonical.get(mono)
                    if acc is None:
                        canonical[mono] = c
                    else:
                        acc = acc + c
                        if self.ring.kind == CoefficientRing.MOD:
                            acc %= ring.p
                        if acc:
                            canonical[mono] = acc
                        else:
                            del canonical[mono]
        self.terms = canonical

    @classmethod
    def _raw(cls, ring, terms):
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        return p

    @classmethod
    def zero(cls, ring):
        return cls._raw(ring, {})

    @classmethod
    def constant(cls, ring, c):
        c = ring.normalize(c)
        return cls._raw(ring, {_ONE: c} if c else {})

    @classmethod
    def variable(cls, ring, var):
        return cls._raw(ring, {Monomial(((var, 1),)): ring.one})

    @classmethod
    def one(cls, ring):
        return cls.constant(ring, 1)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and _ONE in self.terms)

    def constant_value(self):
        return self.terms.get(_ONE, self.ring.zero)

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(m.degree() for m in self.terms)

    def variables(self):
        seen = set()
        for m in self.terms:
            seen.update(m.variables())
        return sorted(seen)

    def coeff_of(self, mono):
        if not isinstance(mono, Monomial):
            mono = Monomial(mono)
        return self.terms.get(mono, self.ring.zero)

    def _check_ring(self, other):
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def _wrap(self, other):
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(self.ring, other)

    def __add__(self, other):
        other = self._wrap(other)
        self._check_ring(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        modp = self.ring.p if self.ring.kind == CoefficientRing.MOD else None
        for m, c in b.items():
            acc = out.get(m)
            if acc is None:
                out[m] = c
            else:
                acc = acc + c
                if modp:
                    acc %= modp
                if acc:
                    out[m] = acc
                else:
                    del out[m]
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        modp = self.ring.p if self.ring.kind == CoefficientRing.MOD else None
        if modp:
            return Polynomial._raw(self.ring, {m: (-c) % modp for m, c in self.terms.items()})
        return Polynomial._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        other = self._wrap(other)
        self._check_ring(other)
        out = {}
        modp = self.ring.p if self.ring.kind == CoefficientRing.MOD else None
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = m1 * m2
                c = c1 * c2
                acc = out.get(m)
                if acc is None:
                    acc = c
                else:
                    acc = acc + c
                if modp:
                    acc %= modp
                if acc:
                    out[m] = acc
                else:
                    out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("exponent must be non-negative")
        result = Polynomial.one(self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            base_needed = e >> 1
            if base_needed:
                base = base * base
            e = base_needed
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.ring, other)
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def substitute(self, assignment):
        """Substitute polynomials (or ring constants) for variables."""
        out = Polynomial.zero(self.ring)
        for m, c in self.terms.items():
            term = Polynomial.constant(self.ring, c)
            for v, e in m.exps:
                if v in assignment:
                    rep = assignment[v]
                    if not isinstance(rep, Polynomial):
                        rep = Polynomial.constant(self.ring, rep)
                    term = term * rep**e
                else:
                    term = term * Polynomial._raw(
                        self.ring, {Monomial(((v, e),)): self.ring.one}
                    )
            out = out + term
        return out

    def evaluate(self, point):
        """Evaluate at a point given as a dict variable -> ring element."""
        total = self.ring.zero
        for m, c in self.terms.items():
            val = c
            for v, e in m.exps:
                val = val * point[v] ** e
            total = total + val
        if self.ring.kind == CoefficientRing.MOD:
            return total % self.ring.p
        return total

    def homogeneous_part(self, d):
        return Polynomial._raw(
            self.ring, {m: c for m, c in self.terms.items() if m.degree() == d}
        )

    def map_ring(self, ring):
        """Reinterpret coefficients in another ring (e.g. reduce mod p)."""
        return Polynomial(ring, self.terms)

    def __repr__(self):
        return f"Polynomial({poly_to_string(self)!r})"

    def __str__(self):
        return poly_to_string(self)


class InfiniteOrder:
    """Order of the zero polynomial: larger than every integer, not a number."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __gt__(self, other):
        return not isinstance(other, InfiniteOrder)

    def __lt__(self, other):
        return False

    def __ge__(self, other):
        return True

    def __le__(self, other):
        return isinstance(other, InfiniteOrder)

    def __repr__(self):
        return "INFINITE_ORDER"


INFINITE_ORDER = InfiniteOrder()


def order_at_origin(a):
    """Minimum total degree of the stored monomials; INFINITE_ORDER for 0."""
    if a.is_zero():
        return INFINITE_ORDER
    return min(m.degree() for m in a.terms)


def zero_out_and_divide(a, zeroed, divisor):
    """Set the given variables to zero, then divide exactly by `divisor`.

    Returns the quotient, or None when the substitution kills the whole
    polynomial (a dead end for certificate search, not an error).  Raises
    NotDivisibleError, carrying the offending monomial, when some surviving
    monomial lacks the divisor.
    """
    if divisor in zeroed:
        raise ValueError("divisor must not be among the zeroed variables")
    div_mono = Monomial(((divisor, 1),))
    out = {}
    for m, c in a.terms.items():
        if any(m.exponent(v) for v in zeroed):
            continue
        q = m.divide(div_mono)
        if q is None:
            raise NotDivisibleError(m)
        out[q] = c
    if not out:
        return None
    return Polynomial._raw(a.ring, out)


def line_restrict(a, direction, line_variable="s"):
    """Restrict along the line variable_i -> direction_i * s.

    `direction` maps every variable of interest to a ring element.  The
    result is univariate in `line_variable`.
    """
    out = {}
    modp = a.ring.p if a.ring.kind == CoefficientRing.MOD else None
    for m, c in a.terms.items():
        val = c
        for v, e in m.exps:
            val = val * direction[v] ** e
        if modp:
            val %= modp
        if not val:
            continue
        key = Monomial(((line_variable, m.degree()),)) if m.degree() else _ONE
        acc = out.get(key, a.ring.zero) + val
        if modp:
            acc %= modp
        if acc:
            out[key] = acc
        else:
            out.pop(key, None)
    return Polynomial._raw(a.ring, out)


# ---------------------------------------------------------------------------
# Text grammar:  terms joined by `+`/`-`; a term is an optional integer
# coefficient and `*`-separated factors `var` or `var^k`.
# ---------------------------------------------------------------------------

def poly_to_string(a):
    if a.is_zero():
        return "0"
    parts = []
    for m in sorted(a.terms, key=lambda m: m.sort_key(), reverse=True):
        c = a.terms[m]
        neg = c < 0
        mag = -c if neg else c
        factors = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m.exps)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = factors
        else:
            body = f"{mag}*{factors}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")
_FACTOR_RE = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?$")


def poly_from_string(text, ring=ZZ):
    text = text.strip()
    if text == "0":
        return Polynomial.zero(ring)
    terms = []
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or not m.group(2).strip():
            raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
        sign, body = m.group(1), m.group(2).strip()
        if sign is None and not first:
            raise ValueError(f"missing sign near {body!r}")
        coeff = -1 if sign == "-" else 1
        exps = {}
        for factor in body.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"empty factor in {body!r}")
            if re.fullmatch(r"\d+", factor):
                coeff *= int(factor)
                continue
            fm = _FACTOR_RE.match(factor)
            if not fm:
                raise ValueError(f"bad factor {factor!r}")
            var, e = fm.group(1), int(fm.group(2) or 1)
            exps[var] = exps.get(var, 0) + e
        terms.append((Monomial(exps), coeff))
        pos = m.end()
        first = False
    return Polynomial(ring, terms)
