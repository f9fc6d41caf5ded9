"""Sparse truncated power series over the rationals with a Novikov grading.

A series lives in ``Q[q^B][[t_1, ..., t_N, u]]`` where ``B`` ranges over a
rank-``r`` lattice.  Monomials are flat integer tuples

    (e_t1, ..., e_tN, e_u, n_1, ..., n_r)

and every series carries two truncation bounds: ``max_degree`` on the total
``t, u`` degree and ``max_energy`` on the weighted Novikov exponent.  A
coefficient beyond either bound is *unknown*, not zero, so asking for one
raises :class:`OutOfRangeError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Iterator, Mapping, Sequence, Union

__all__ = [
    "Rational",
    "to_rational",
    "format_rational",
    "Ring",
    "Series",
    "SeriesError",
    "StructuralError",
    "OutOfRangeError",
    "add",
    "mul",
    "partial",
    "coeff",
]

Rational = Fraction
Scalar = Union[int, Fraction]


class SeriesError(Exception):
    pass


class StructuralError(SeriesError):
    """Operands or variables do not fit the ring they are used in."""


class OutOfRangeError(SeriesError):
    """A coefficient outside the truncation bounds was requested."""


def to_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: nothing in this package is allowed to round.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rational(x) -> str:
    x = to_rational(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Ring:
    """Ring descriptor: ``n_t`` formal variables, one ``u``, rank-``rank`` lattice."""

    n_t: int
    rank: int = 1
    weights: tuple[int, ...] = (1,)

    def __post_init__(self):
        if self.n_t < 0 or self.rank < 0:
            raise StructuralError("negative ring dimensions")
        if len(self.weights) != self.rank:
            if self.rank != 1 and self.weights == (1,):
                object.__setattr__(self, "weights", (1,) * self.rank)
            else:
                raise StructuralError("one energy weight per lattice coordinate")
        if any(w <= 0 for w in self.weights):
            raise StructuralError("energy weights must be positive")

    @property
    def width(self) -> int:
        return self.n_t + 1 + self.rank

    @property
    def u_index(self) -> int:
        return self.n_t

    def var_index(self, var) -> int:
        """Position of a variable in a monomial tuple.

        ``var`` is a 0-based t index, ``"u"``, or a name ``"t1"``..``"tN"``.
        """
        if isinstance(var, str):
            if var == "u":
                return self.n_t
            if var.startswith("t") and var[1:].isdigit():
                k = int(var[1:])
                if not 1 <= k <= self.n_t:
                    raise StructuralError(f"unknown variable {var!r} for N={self.n_t}")
                return k - 1
            else:
                raise StructuralError(f"unknown variable {var!r}")
        if isinstance(var, bool) or not isinstance(var, int):
            raise StructuralError(f"unknown variable {var!r}")
        if not 0 <= var <= self.n_t:
            raise StructuralError(f"variable index {var} out of range for N={self.n_t}")
        return var

    def monomial(self, t: Sequence[int] | Mapping[int, int] = (), u: int = 0,
                 q: Sequence[int] | int = ()) -> tuple[int, ...]:
        if isinstance(t, Mapping):
            tt = [0] * self.n_t
            for i, e in t.items():
                tt[i] = e
        else:
            tt = list(t) + [0] * (self.n_t - len(t))
        if isinstance(q, int):
            qq = [q]
        else:
            qq = list(q)
        qq = qq + [0] * (self.rank - len(qq))
        if len(tt) != self.n_t or len(qq) != self.rank:
            raise StructuralError("monomial does not match the ring")
        m = tuple(tt) + (u,) + tuple(qq)
        if any(e < 0 for e in m):
            raise StructuralError("negative exponent")
        return m

    def degree(self, m: tuple[int, ...]) -> int:
        return sum(m[: self.n_t + 1])

    def energy(self, m: tuple[int, ...]) -> int:
        return sum(w * e for w, e in zip(self.weights, m[self.n_t + 1:]))

    def sort_key(self, m: tuple[int, ...]):
        # graded lex: total t,u degree, then Novikov energy, then exponents
        return (self.degree(m), self.energy(m), m)

    def var_name(self, i: int) -> str:
        if i < self.n_t:
            return f"t{i + 1}"
        if i == self.n_t:
            return "u"
        j = i - self.n_t - 1
        return "q" if self.rank == 1 else f"q{j + 1}"


class Series:
    """Immutable truncated series; see the module docstring for conventions."""

    __slots__ = ("ring", "_terms", "max_degree", "max_energy")

    def __init__(self, ring: Ring, terms: Mapping[tuple, Scalar] | Iterable = (),
                 max_degree: int = 0, max_energy: int = 0):
        if max_degree < 0 or max_energy < 0:
            raise StructuralError("truncation bounds must be non-negative")
        self.ring = ring
        self.max_degree = max_degree
        self.max_energy = max_energy
        items = terms.items() if isinstance(terms, Mapping) else terms
        data = {}
        w = ring.width
        for m, c in items:
            m = tuple(m)
            if len(m) != w:
                raise StructuralError(f"monomial {m} has wrong length for {ring}")
            if any(e < 0 for e in m):
                raise StructuralError("negative exponent")
            if ring.degree(m) > max_degree or ring.energy(m) > max_energy:
                continue
            c = to_rational(c)
            if c:
                data[m] = data.get(m, 0) + c
        self._terms = {m: c for m, c in data.items() if c}

    @classmethod
    def _raw(cls, ring, terms, max_degree, max_energy):
        # trusted constructor: terms already normalised and in range
        s = object.__new__(cls)
        s.ring = ring
        s._terms = terms
        s.max_degree = max_degree
        s.max_energy = max_energy
        return s

    @classmethod
    def zero(cls, ring: Ring, max_degree: int, max_energy: int) -> "Series":
        return cls._raw(ring, {}, max_degree, max_energy)

    @classmethod
    def constant(cls, ring: Ring, c: Scalar, max_degree: int, max_energy: int) -> "Series":
        return cls(ring, {(0,) * ring.width: c}, max_degree, max_energy)

    @classmethod
    def variable(cls, ring: Ring, var, max_degree: int, max_energy: int) -> "Series":
        m = [0] * ring.width
        m[ring.var_index(var)] = 1
        return cls(ring, {tuple(m): 1}, max_degree, max_energy)

    # -- inspection ---------------------------------------------------------

    def __len__(self):
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        return iter(self.items())

    def items(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms sorted in graded-lex monomial order."""
        return sorted(self._terms.items(), key=lambda kv: self.ring.sort_key(kv[0]))

    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def in_range(self, m: tuple[int, ...]) -> bool:
        return (self.ring.degree(m) <= self.max_degree
                and self.ring.energy(m) <= self.max_energy)

    def coeff(self, m: tuple[int, ...]) -> Fraction:
        m = tuple(m)
        if len(m) != self.ring.width:
            raise StructuralError(f"monomial {m} has wrong length")
        if not self.in_range(m):
            raise OutOfRangeError(
                f"monomial {m} lies beyond the truncation "
                f"(degree<={self.max_degree}, energy<={self.max_energy})")
        return self._terms.get(m, Fraction(0))

    def __eq__(self, other):
        if isinstance(other, Series):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self._terms
            return self._terms == {(0,) * self.ring.width: other}
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return (f"Series({self.render()}; degree<={self.max_degree}, "
                f"energy<={self.max_energy})")

    def render(self) -> str:
        """Canonical text form: graded order, coefficients as ``p/q``."""
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.items():
            factors = [format_rational(c)]
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(self.ring.var_name(i))
                elif e:
                    factors.append(f"{self.ring.var_name(i)}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Series"):
        if not isinstance(other, Series):
            raise StructuralError(f"expected a Series, got {type(other).__name__}")
        if other.ring != self.ring:
            raise StructuralError(f"ring mismatch: {self.ring} vs {other.ring}")

    def truncate(self, max_degree: int | None = None, max_energy: int | None = None) -> "Series":
        T = self.max_degree if max_degree is None else min(max_degree, self.max_degree)
        E = self.max_energy if max_energy is None else min(max_energy, self.max_energy)
        deg, en = self.ring.degree, self.ring.energy
        terms = {m: c for m, c in self._terms.items() if deg(m) <= T and en(m) <= E}
        return Series._raw(self.ring, terms, T, E)

    def add(self, other: "Series") -> "Series":
        self._check(other)
        T = min(self.max_degree, other.max_degree)
        E = min(self.max_energy, other.max_energy)
        a = self if (self.max_degree, self.max_energy) == (T, E) else self.truncate(T, E)
        b = other if (other.max_degree, other.max_energy) == (T, E) else other.truncate(T, E)
        out = dict(a._terms)
        for m, c in b._terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v += c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Series._raw(self.ring, out, T, E)

    def scale(self, c: Scalar) -> "Series":
        c = to_rational(c)
        if not c:
            return Series.zero(self.ring, self.max_degree, self.max_energy)
        return Series._raw(self.ring, {m: c * v for m, v in self._terms.items()},
                           self.max_degree, self.max_energy)

    def neg(self) -> "Series":
        return self.scale(-1)

    def mul(self, other: "Series") -> "Series":
        self._check(other)
        ring = self.ring
        T = min(self.max_degree, other.max_degree)
        E = min(self.max_energy, other.max_energy)
        if not self._terms or not other._terms:
            return Series.zero(ring, T, E)
        deg, en = ring.degree, ring.energy
        a = [(m, c, deg(m), en(m)) for m, c in self._terms.items()]
        b = sorted(((m, c, deg(m), en(m)) for m, c in other._terms.items()),
                   key=lambda x: x[2])
        if len(a) > len(b):
            a, b = b, sorted(a, key=lambda x: x[2])
        out: dict = {}
        get = out.get
        for ma, ca, da, ea in a:
            if da > T or ea > E:
                continue
            for mb, cb, db, eb in b:
                if da + db > T:
                    break
                if ea + eb > E:
                    continue
                m = tuple([x + y for x, y in zip(ma, mb)])
                out[m] = get(m, 0) + ca * cb
        return Series._raw(ring, {m: c for m, c in out.items() if c}, T, E)

    def partial(self, var) -> "Series":
        """Formal partial derivative; the degree bound drops by one."""
        i = self.ring.var_index(var)
        if self.max_degree == 0:
            return Series.zero(self.ring, 0, self.max_energy)
        out = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                mm = m[:i] + (e - 1,) + m[i + 1:]
                out[mm] = c * e
        return Series._raw(self.ring, out, self.max_degree - 1, self.max_energy)

    def energy_part(self, energy: int) -> dict:
        """Coefficients whose Novikov energy equals ``energy`` exactly."""
        en = self.ring.energy
        return {m: c for m, c in self._terms.items() if en(m) == energy}

    # operator sugar; scalars act as constant series
    def _coerce(self, other):
        if isinstance(other, Series):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Series.constant(self.ring, other, self.max_degree, self.max_energy)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self.add(o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self.add(o.neg())

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o.add(self.neg())

    def __neg__(self):
        return self.neg()

    def __mul__(self, other):
        if isinstance(other, Series):
            return self.mul(other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__


def add(a: Series, b: Series) -> Series:
    return a.add(b)


def mul(a: Series, b: Series) -> Series:
    return a.mul(b)


def partial(s: Series, var) -> Series:
    return s.partial(var)


def coeff(s: Series, m: tuple[int, ...]) -> Fraction:
    return s.coeff(m)
