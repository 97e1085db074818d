"""Exact sparse multivariate polynomials over the rationals.

Coefficients are ``int`` when integral and ``gmpy2.mpq`` otherwise (it
compares and hashes like :class:`fractions.Fraction`, which is accepted on
input); no floating point is ever involved.  Monomials are keyed by
canonical variable names so that equality of two :class:`Poly` values is
plain dictionary equality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

from gmpy2 import mpq

_MPQ = type(mpq(1, 2))
Rational = Union[int, Fraction, _MPQ]
Monomial = Tuple[Tuple[str, int], ...]

ONE: Monomial = ()

_VAR_RE = re.compile(r"^x(\d+)(?:_(\d+))?$")


class PolyError(ValueError):
    pass


class MissingVariable(PolyError):
    def __init__(self, name: str):
        super().__init__(f"assignment does not cover variable {name}")
        self.name = name


class PolyParseError(PolyError):
    pass


@dataclass(frozen=True, order=False)
class VarId:
    """A proof variable: plain ``x{i}`` or indicator ``x{i}_{value}``."""

    index: int
    value: Optional[int] = None
    name: str = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if self.index < 1:
            raise PolyError(f"variable index must be >= 1, got {self.index}")
        if self.value is not None and self.value < 0:
            raise PolyError(f"indicator value must be >= 0, got {self.value}")
        name = f"x{self.index}" if self.value is None else f"x{self.index}_{self.value}"
        object.__setattr__(self, "name", name)

    @property
    def is_indicator(self) -> bool:
        return self.value is not None

    @property
    def sort_key(self) -> Tuple[int, int]:
        return (self.index, -1 if self.value is None else self.value)

    @classmethod
    def parse(cls, name: str) -> "VarId":
        return _parse_var(name)

    def __str__(self) -> str:
        return self.name


_VAR_CACHE: Dict[str, VarId] = {}


def _parse_var(name: str) -> VarId:
    v = _VAR_CACHE.get(name)
    if v is None:
        m = _VAR_RE.match(name)
        if m is None:
            raise PolyParseError(f"bad variable name {name!r}")
        value = None if m.group(2) is None else int(m.group(2))
        v = VarId(int(m.group(1)), value)
        _VAR_CACHE[name] = v
    return v


def _norm(c) -> Rational:
    if type(c) is _MPQ and c.denominator == 1:
        return int(c.numerator)
    return c


def rational(num, den=1) -> Rational:
    """Exact ``num / den`` in normalized form."""
    return _norm(mpq(num, den))


def as_rational(c) -> Rational:
    """Coerce ints, Fractions and ``"a/b"`` strings to a normalized rational."""
    if type(c) is int or type(c) is _MPQ:
        return _norm(c)
    if isinstance(c, bool):
        raise TypeError("bool is not a rational")
    if isinstance(c, int):
        return int(c)
    if isinstance(c, Fraction):
        return rational(c.numerator, c.denominator)
    if isinstance(c, str):
        f = Fraction(c)
        return rational(f.numerator, f.denominator)
    raise TypeError(f"cannot use {type(c).__name__} as an exact rational")


def format_rational(c: Rational) -> str:
    c = as_rational(c)
    if isinstance(c, int):
        return str(c)
    return f"{c.numerator}/{c.denominator}"


_DEGREE_CACHE: Dict[Monomial, int] = {}


def _mono_degree(m: Monomial) -> int:
    d = _DEGREE_CACHE.get(m)
    if d is None:
        d = sum(e for _, e in m)
        if len(_DEGREE_CACHE) < 1 << 20:
            _DEGREE_CACHE[m] = d
    return d


def _mono_mul_name(m: Monomial, name: str, k: int = 1) -> Monomial:
    for pos, (n, e) in enumerate(m):
        if n == name:
            return m[:pos] + ((n, e + k),) + m[pos + 1:]
        if n > name:
            return m[:pos] + ((name, k),) + m[pos:]
    return m + ((name, k),)


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    while i < len(m1) and j < len(m2):
        a, b = m1[i], m2[j]
        if a[0] == b[0]:
            out.append((a[0], a[1] + b[1]))
            i += 1
            j += 1
        elif a[0] < b[0]:
            out.append(a)
            i += 1
        else:
            out.append(b)
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def monomial_str(m: Monomial) -> str:
    return "*".join(n if e == 1 else f"{n}^{e}" for n, e in m)


def monomial_vars(m: Monomial) -> Tuple[VarId, ...]:
    return tuple(_parse_var(n) for n, _ in m)


class Poly:
    """Immutable polynomial; ``terms`` maps monomials to nonzero rationals."""

    __slots__ = ("terms", "_hash", "_shape")

    def __init__(self, terms: Optional[Mapping[Monomial, Rational]] = None, *, _trusted: bool = False):
        if terms is None:
            self.terms: Dict[Monomial, Rational] = {}
        elif _trusted:
            self.terms = terms  # type: ignore[assignment]
        else:
            clean: Dict[Monomial, Rational] = {}
            for m, c in terms.items():
                c = as_rational(c)
                if c:
                    key = tuple(sorted(m))
                    if any(e < 1 for _, e in key) or len({n for n, _ in key}) != len(key):
                        raise PolyError(f"malformed monomial {m!r}")
                    clean[key] = _norm(clean.get(key, 0) + c)
                    if not clean[key]:
                        del clean[key]
            self.terms = clean
        self._hash: Optional[int] = None
        self._shape: Optional[Tuple[int, int]] = None

    # constructors

    @classmethod
    def zero(cls) -> "Poly":
        return cls()

    @classmethod
    def const(cls, c) -> "Poly":
        c = as_rational(c)
        return cls({ONE: c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, v: Union[VarId, str]) -> "Poly":
        name = v.name if isinstance(v, VarId) else _parse_var(v).name
        return cls({((name, 1),): 1}, _trusted=True)

    @classmethod
    def linear(cls, coeffs: Mapping[VarId, Rational], constant: Rational = 0) -> "Poly":
        terms: Dict[Monomial, Rational] = {}
        for v, c in coeffs.items():
            c = as_rational(c)
            if c:
                terms[((v.name, 1),)] = c
        constant = as_rational(constant)
        if constant:
            terms[ONE] = constant
        return cls(terms, _trusted=True)

    @classmethod
    def product(cls, factors: Iterable[Tuple[VarId, bool]]) -> "Poly":
        """Expand a product of ``v`` (plain) and ``1 - v`` (complemented) factors."""
        out = cls.const(1)
        for v, compl in factors:
            out = out.mul_var(v, compl)
        return out

    @classmethod
    def parse(cls, text: str) -> "Poly":
        return parse_poly(text)

    # structure

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction, _MPQ)):
            return self.terms == ({ONE: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, Rational]]:
        return iter(self.sorted_terms())

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)

    def sorted_terms(self):
        """Terms in canonical order: degree descending, then monomial text."""
        return sorted(self.terms.items(), key=lambda t: (-_mono_degree(t[0]), monomial_str(t[0])))

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE in self.terms)

    def const_value(self) -> Rational:
        if not self.is_const():
            raise PolyError(f"{self} is not constant")
        return self.terms.get(ONE, 0)

    def coeff(self, m: Monomial) -> Rational:
        return self.terms.get(m, 0)

    def variables(self) -> Tuple[VarId, ...]:
        names = {n for m in self.terms for n, _ in m}
        return tuple(sorted((_parse_var(n) for n in names), key=lambda v: v.sort_key))

    def shape(self) -> Tuple[int, int]:
        """``(degree, size)`` in one pass; cached."""
        if self._shape is None:
            degs = list(map(_mono_degree, self.terms))
            self._shape = (max(degs, default=0), sum(degs))
        return self._shape

    def degree(self) -> int:
        return self.shape()[0]

    def size(self) -> int:
        return self.shape()[1]

    def is_multilinear(self) -> bool:
        return all(e == 1 for m in self.terms for _, e in m)

    # arithmetic

    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for m, c in small.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = _norm(s + c)
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly(out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return Poly.const(other) - self

    def scale(self, c) -> "Poly":
        c = as_rational(c)
        if not c:
            return Poly()
        if c == 1:
            return self
        return Poly({m: _norm(v * c) for m, v in self.terms.items()}, _trusted=True)

    def add_scaled(self, a, other: "Poly", b) -> "Poly":
        """Return ``a*self + b*other`` in one pass."""
        a = as_rational(a)
        b = as_rational(b)
        if not a:
            out: Dict[Monomial, Rational] = {}
        elif a == 1:
            out = dict(self.terms)
        else:
            out = {m: _norm(c * a) for m, c in self.terms.items()}
        if b:
            one = b == 1
            for m, c in other.terms.items():
                cb = c if one else c * b
                s = out.get(m)
                if s is None:
                    out[m] = _norm(cb)
                else:
                    s = _norm(s + cb)
                    if s:
                        out[m] = s
                    else:
                        del out[m]
        return Poly(out, _trusted=True)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        if len(self.terms) < len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        out: Dict[Monomial, Rational] = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = _mono_mul(m1, m2)
                s = out.get(m)
                out[m] = c1 * c2 if s is None else s + c1 * c2
        return Poly({m: _norm(c) for m, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def mul_var(self, v: VarId, complemented: bool = False) -> "Poly":
        """``self * v`` or, when complemented, ``self * (1 - v)``."""
        name = v.name
        lifted = {_mono_mul_name(m, name): c for m, c in self.terms.items()}
        if not complemented:
            return Poly(lifted, _trusted=True)
        out = dict(self.terms)
        for m, c in lifted.items():
            s = out.get(m)
            if s is None:
                out[m] = -c
            else:
                s = _norm(s - c)
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly(out, _trusted=True)

    def mul_monomial(self, m: Monomial, c: Rational = 1) -> "Poly":
        c = as_rational(c)
        if not c:
            return Poly()
        return Poly({_mono_mul(m, m2): _norm(v * c) for m2, v in self.terms.items()}, _trusted=True)

    def eval(self, assignment: Mapping[Union[VarId, str], Rational]) -> Rational:
        """Exact value under ``assignment`` (keys may be VarIds or names)."""
        values: Dict[str, Rational] = {}
        for k, val in assignment.items():
            values[k.name if isinstance(k, VarId) else k] = as_rational(val)
        total: Rational = 0
        for m, c in self.terms.items():
            term = c
            for n, e in m:
                if n not in values:
                    raise MissingVariable(n)
                term = term * values[n] ** e
            total += term
        return _norm(total)

    def multilinear_cofactors(self) -> Tuple["Poly", Dict[VarId, "Poly"]]:
        """Split into a multilinear part and cofactors of ``v^2 - v``.

        ``self == reduced + sum(cof[v] * (v*v - v))`` holds exactly.  Each
        power ``v^e`` with ``e >= 2`` is lowered one step at a time:
        ``v^e r = v^(e-1) r + v^(e-2) r (v^2 - v)``.
        """
        reduced: Dict[Monomial, Rational] = {}
        cof: Dict[str, Dict[Monomial, Rational]] = {}
        for m, c in self.terms.items():
            while True:
                pos = next((k for k, (_, e) in enumerate(m) if e >= 2), None)
                if pos is None:
                    break
                n, e = m[pos]
                lowered2 = m[:pos] + (((n, e - 2),) if e > 2 else ()) + m[pos + 1:]
                bucket = cof.setdefault(n, {})
                bucket[lowered2] = bucket.get(lowered2, 0) + c
                m = m[:pos] + ((n, e - 1),) + m[pos + 1:]
            reduced[m] = reduced.get(m, 0) + c
        red = Poly({m: _norm(c) for m, c in reduced.items() if c}, _trusted=True)
        cofactors = {}
        for n in sorted(cof):
            p = Poly({m: _norm(c) for m, c in cof[n].items() if c}, _trusted=True)
            if p:
                cofactors[_parse_var(n)] = p
        return red, cofactors


def bool_poly(v: VarId) -> Poly:
    """``v^2 - v``."""
    return Poly({((v.name, 2),): 1, ((v.name, 1),): -1}, _trusted=True)


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for k, (m, c) in enumerate(p.sorted_terms()):
        neg = c < 0
        a = -c if neg else c
        mono = monomial_str(m)
        if not mono:
            body = format_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_rational(a)}*{mono}"
        if k == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


_TERM_RE = re.compile(r"([+-]?)([^+-]+)")
_NUM_RE = re.compile(r"^\d+(?:/\d+)?$")
_FACTOR_RE = re.compile(r"^(x\d+(?:_\d+)?)(?:\^(\d+))?$")


def parse_poly(text: str) -> Poly:
    """Parse the canonical text form (whitespace and term order are free)."""
    s = "".join(text.split())
    if not s:
        raise PolyParseError("empty polynomial")
    pos = 0
    terms: Dict[Monomial, Rational] = {}
    for match in _TERM_RE.finditer(s):
        if match.start() != pos:
            raise PolyParseError(f"unexpected text at {pos} in {text!r}")
        pos = match.end()
        sign, body = match.groups()
        coef: Rational = 1
        mono: Dict[str, int] = {}
        for k, tok in enumerate(body.split("*")):
            if k == 0 and _NUM_RE.match(tok):
                try:
                    coef = as_rational(tok)
                except ZeroDivisionError:
                    raise PolyParseError(f"zero denominator in {text!r}") from None
                continue
            fm = _FACTOR_RE.match(tok)
            if fm is None:
                raise PolyParseError(f"bad factor {tok!r} in {text!r}")
            exp = int(fm.group(2) or 1)
            if exp < 1:
                raise PolyParseError(f"bad exponent in {tok!r}")
            name = _parse_var(fm.group(1)).name
            mono[name] = mono.get(name, 0) + exp
        if sign == "-":
            coef = -coef
        key = tuple(sorted(mono.items()))
        terms[key] = _norm(terms.get(key, 0) + coef)
    if pos != len(s):
        raise PolyParseError(f"trailing text in {text!r}")
    return Poly({m: c for m, c in terms.items() if c}, _trusted=True)
