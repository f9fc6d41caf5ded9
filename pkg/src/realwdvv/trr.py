"""Topological recursion relations for psi_1 by forgetful pullback.

Classes are formal integer combinations of three kinds of symbols:

* ``Psi(i)``: the cotangent-line class at marked point (or conjugate pair) i;
* ``BoundaryC(I, J)``: two-component boundary divisor of the complex moduli
  space, points of ``I`` on one component and ``J`` on the other;
* ``BoundaryR(I, J)``: real three-component divisor, a conjugate pair of
  bubbles carrying one point of each pair in ``I`` around a real component
  carrying the pairs in ``J`` and all real points.

Every rewrite is at the level of formal identities in degree two; nothing
here computes homology of the moduli spaces.  Co-orientations enter every
pullback rule with sign +1 and are therefore not tracked.

The cross-check :func:`pair_thm1` integrates against monomials in psi
classes using the standard genus-zero formula on the complex moduli space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import factorial, prod
from typing import Iterable

from .series import StructuralError

__all__ = [
    "Psi",
    "BoundaryC",
    "BoundaryR",
    "SpaceLabel",
    "FormalClass",
    "Derivation",
    "FORGET_PAIR",
    "FORGET_REAL_POINT",
    "complex_space",
    "real_space",
    "psi_integral",
    "pair_thm1",
    "pullback_c",
    "pullback_r",
    "psi1_step",
    "derive_thm1",
    "stated_thm1",
    "derive_thm2",
    "stated_thm2",
    "exponent_vectors",
]

FORGET_PAIR = "forget-conjugate-pair"
FORGET_REAL_POINT = "forget-real-point"


def _labels(s: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(s)))


def _fmt(labels) -> str:
    sep = "" if all(x < 10 for x in labels) else "."
    return sep.join(map(str, labels))


@dataclass(frozen=True, order=True)
class Psi:
    i: int

    def render(self) -> str:
        return f"psi_{self.i}"


@dataclass(frozen=True, order=True)
class BoundaryC:
    """Unordered split; stored with the smallest label on the ``I`` side."""

    I: tuple[int, ...]
    J: tuple[int, ...]

    @classmethod
    def of(cls, I, J) -> "BoundaryC":
        I, J = _labels(I), _labels(J)
        if set(I) & set(J):
            raise StructuralError(f"overlapping sides {I} and {J}")
        if J and (not I or J[0] < I[0]):
            I, J = J, I
        return cls(I, J)

    def nonempty(self, space) -> bool:
        return len(self.I) >= 2 and len(self.J) >= 2

    def render(self) -> str:
        return f"D_{{{_fmt(self.I)},{_fmt(self.J)}}}"


@dataclass(frozen=True, order=True)
class BoundaryR:
    """Ordered: ``I`` is the bubble side, ``J`` the real side."""

    I: tuple[int, ...]
    J: tuple[int, ...]

    @classmethod
    def of(cls, I, J) -> "BoundaryR":
        I, J = _labels(I), _labels(J)
        if set(I) & set(J):
            raise StructuralError(f"overlapping sides {I} and {J}")
        return cls(I, J)

    def nonempty(self, space) -> bool:
        return len(self.I) >= 2 and (bool(self.J) or space.k > 0)

    def render(self) -> str:
        return f"RD_{{{_fmt(self.I)},{_fmt(self.J)}}}"


def _symbol_key(sym):
    order = {Psi: 0, BoundaryC: 1, BoundaryR: 2}[type(sym)]
    if isinstance(sym, Psi):
        return (order, (sym.i,), ())
    return (order, (len(sym.I),) + sym.I, sym.J)


@dataclass(frozen=True)
class SpaceLabel:
    """Complex space with marked points ``labels``, or real space with
    conjugate pairs ``labels`` and ``k`` real points."""

    kind: str
    labels: tuple[int, ...]
    k: int = 0

    def __post_init__(self):
        if self.kind not in ("complex", "real"):
            raise StructuralError(f"unknown space kind {self.kind!r}")
        if len(set(self.labels)) != len(self.labels) or any(x < 1 for x in self.labels):
            raise StructuralError("labels must be distinct positive integers")
        if self.kind == "complex" and (self.k or len(self.labels) < 3):
            raise StructuralError("complex spaces need at least three points")
        if self.kind == "real":
            if self.k < 0 or self.k + 2 * len(self.labels) < 3:
                raise StructuralError("real spaces need k + 2l >= 3")

    @property
    def l(self) -> int:
        return len(self.labels)

    def next_label(self) -> int:
        return max(self.labels) + 1

    def render(self) -> str:
        if self.kind == "complex":
            return f"M(0,{self.l})"
        return f"RM(0,{self.k},{self.l})"


def complex_space(l: int) -> SpaceLabel:
    return SpaceLabel("complex", tuple(range(1, l + 1)))


def real_space(k: int, l: int) -> SpaceLabel:
    return SpaceLabel("real", tuple(range(1, l + 1)), k)


@dataclass
class FormalClass:
    space: SpaceLabel
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {s: int(c) for s, c in self.terms.items() if c}
        for s in self.terms:
            self._check(s)

    def _check(self, sym):
        labels = set(self.space.labels)
        if isinstance(sym, Psi):
            ok = sym.i in labels
        else:
            if isinstance(sym, BoundaryC) != (self.space.kind == "complex"):
                raise StructuralError(f"{sym.render()} does not live on {self.space.render()}")
            used = set(sym.I) | set(sym.J)
            # complex splits must partition all points; real ones all pairs
            ok = used == labels
        if not ok:
            raise StructuralError(f"{_render_sym(sym)} does not fit {self.space.render()}")

    @classmethod
    def zero(cls, space) -> "FormalClass":
        return cls(space, {})

    @classmethod
    def symbol(cls, space, sym, coeff: int = 1) -> "FormalClass":
        return cls(space, {sym: coeff})

    def _same(self, other):
        if self.space != other.space:
            raise StructuralError(f"classes on {self.space.render()} and {other.space.render()}")

    def __add__(self, other: "FormalClass") -> "FormalClass":
        self._same(other)
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, 0) + c
        return FormalClass(self.space, out)

    def __neg__(self) -> "FormalClass":
        return FormalClass(self.space, {s: -c for s, c in self.terms.items()})

    def __sub__(self, other: "FormalClass") -> "FormalClass":
        return self + (-other)

    def scale(self, c: int) -> "FormalClass":
        return FormalClass(self.space, {s: c * v for s, v in self.terms.items()})

    def __rmul__(self, c: int) -> "FormalClass":
        return self.scale(c)

    def normalize(self) -> "FormalClass":
        """Drop empty divisors; psi classes vanish on zero-dimensional spaces."""
        dim = self.space.l - 3 if self.space.kind == "complex" else (
            self.space.k + 2 * self.space.l - 3)
        out = {}
        for s, c in self.terms.items():
            if isinstance(s, Psi):
                if dim == 0:
                    continue
            elif not s.nonempty(self.space):
                continue
            out[s] = c
        return FormalClass(self.space, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalClass):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: _symbol_key(kv[0]))

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for s, c in self.items():
            r = _render_sym(s)
            if c == 1:
                parts.append(f"+ {r}")
            elif c == -1:
                parts.append(f"- {r}")
            else:
                parts.append(f"{'+' if c > 0 else '-'} {abs(c)}*{r}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self):
        return f"FormalClass({self.space.render()}: {self.render()})"


def _render_sym(s) -> str:
    return s.render()


# -- psi integrals ----------------------------------------------------------------

def psi_integral(l: int, exponents) -> int:
    """Integral of ``prod psi_i^{a_i}`` over the genus-0 moduli space of l points."""
    a = list(exponents)
    if l < 3:
        raise ValueError("need l >= 3")
    if len(a) != l:
        raise ValueError(f"expected {l} exponents, got {len(a)}")
    if any(x < 0 for x in a):
        raise ValueError("exponents must be non-negative")
    if sum(a) != l - 3:
        return 0
    return factorial(l - 3) // prod(factorial(x) for x in a)


def exponent_vectors(n: int, total: int):
    """All length-n non-negative integer vectors summing to ``total``."""
    if n == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in exponent_vectors(n - 1, total - first):
            yield (first,) + rest


def pair_thm1(l: int, i: int, j: int, exponents) -> tuple[int, int]:
    """Both sides of the psi_1 relation paired with a psi monomial.

    ``exponents`` holds ``a_1..a_l`` with total ``l - 4``; the left side is
    ``int psi_1^{a_1+1} prod psi_m^{a_m}``.
    """
    if l < 4:
        raise ValueError("need l >= 4")
    a = list(exponents)
    if len(a) != l:
        raise ValueError(f"expected {l} exponents, got {len(a)}")
    if sum(a) != l - 4:
        raise ValueError(f"exponents must total {l - 4}, got {sum(a)}")
    if i == j or not (2 <= i <= l and 2 <= j <= l):
        raise ValueError("i, j must be distinct labels in 2..l")
    lhs = psi_integral(l, [a[0] + 1] + a[1:])
    rest = [m for m in range(2, l + 1) if m not in (i, j)]
    rhs = 0
    for mask in itertools.product((0, 1), repeat=len(rest)):
        I = [m for m, s in zip(rest, mask) if s]
        J = [m for m, s in zip(rest, mask) if not s]
        if not I:
            continue  # the component carrying 1 and the node would be unstable
        left = psi_integral(len(I) + 2, [a[0]] + [a[m - 1] for m in I] + [0])
        if not left:
            continue
        right = psi_integral(len(J) + 3, [a[i - 1], a[j - 1]] + [a[m - 1] for m in J] + [0])
        rhs += left * right
    return lhs, rhs


# -- pullbacks ----------------------------------------------------------------------

def pullback_c(c: FormalClass, new: int | None = None, eager_drop: bool = True) -> FormalClass:
    """Pull back along the map forgetting marked point ``new``."""
    if c.space.kind != "complex":
        raise StructuralError("pullback_c needs a class on a complex space")
    new = c.space.next_label() if new is None else new
    if new in c.space.labels:
        raise StructuralError(f"label {new} already present")
    space = SpaceLabel("complex", _labels(c.space.labels + (new,)))
    out = FormalClass.zero(space)
    for s, coeff in c.terms.items():
        if isinstance(s, Psi):
            rest = [m for m in c.space.labels if m != s.i]
            img = {s: 1, BoundaryC.of((s.i, new), rest): -1}
        else:
            img = {BoundaryC.of(s.I + (new,), s.J): 1, BoundaryC.of(s.I, s.J + (new,)): 1}
        out = out + FormalClass(space, img).scale(coeff)
    return out.normalize() if eager_drop else out


def pullback_r(c: FormalClass, forget: str, new: int | None = None,
               eager_drop: bool = True) -> FormalClass:
    """Pull back along a forgetful map of a real moduli space."""
    if c.space.kind != "real":
        raise StructuralError("pullback_r needs a class on a real space")
    if forget == FORGET_REAL_POINT:
        space = SpaceLabel("real", c.space.labels, c.space.k + 1)
        out = FormalClass(space, dict(c.terms))
    elif forget == FORGET_PAIR:
        new = c.space.next_label() if new is None else new
        if new in c.space.labels:
            raise StructuralError(f"label {new} already present")
        space = SpaceLabel("real", _labels(c.space.labels + (new,)), c.space.k)
        out = FormalClass.zero(space)
        for s, coeff in c.terms.items():
            if isinstance(s, Psi):
                rest = [m for m in c.space.labels if m != s.i]
                img = {s: 1, BoundaryR.of((s.i, new), rest): -1}
            else:
                img = {BoundaryR.of(s.I + (new,), s.J): 1, BoundaryR.of(s.I, s.J + (new,)): 1}
            out = out + FormalClass(space, img).scale(coeff)
    else:
        raise ValueError(f"unknown forgetful map {forget!r}")
    return out.normalize() if eager_drop else out


def psi1_step(expr: FormalClass, forget: str | None = None, new: int | None = None,
              eager_drop: bool = True) -> FormalClass:
    """Given psi_1 written on a space, write psi_1 on the space with one more point.

    psi_1 upstairs is the pullback of psi_1 plus the divisor where point 1
    and the new point bubble off together.  Forgetting a real point adds no
    correction.
    """
    if expr.space.kind == "complex":
        up = pullback_c(expr, new, eager_drop)
        new = up.space.labels[-1] if new is None else new
        rest = [m for m in up.space.labels if m not in (1, new)]
        corr = FormalClass.symbol(up.space, BoundaryC.of((1, new), rest))
    else:
        forget = forget or FORGET_PAIR
        up = pullback_r(expr, forget, new, eager_drop)
        if forget == FORGET_REAL_POINT:
            return up
        new = up.space.labels[-1] if new is None else new
        rest = [m for m in up.space.labels if m not in (1, new)]
        corr = FormalClass.symbol(up.space, BoundaryR.of((1, new), rest))
    out = up + corr
    return out.normalize() if eager_drop else out


# -- derivations ----------------------------------------------------------------------

@dataclass
class Derivation:
    case: str
    derived: FormalClass
    stated: FormalClass
    steps: list[str] = field(default_factory=list)

    @property
    def match(self) -> bool:
        return self.derived == self.stated

    def to_dict(self) -> dict:
        return {"case": self.case, "space": self.derived.space.render(),
                "derived": self.derived.render(), "stated": self.stated.render(),
                "match": self.match}


def stated_thm1(l: int, i: int, j: int) -> FormalClass:
    """``sum over I + J = [l] - {1,i,j}`` of ``D_{1I, ijJ}``."""
    space = complex_space(l)
    rest = [m for m in range(2, l + 1) if m not in (i, j)]
    out = FormalClass.zero(space)
    for mask in itertools.product((0, 1), repeat=len(rest)):
        I = [m for m, s in zip(rest, mask) if s]
        J = [m for m, s in zip(rest, mask) if not s]
        out = out + FormalClass.symbol(space, BoundaryC.of([1] + I, [i, j] + J))
    return out.normalize()


def derive_thm1(l: int, i: int, j: int, eager_drop: bool = True) -> Derivation:
    """Induct from the three-point space on {1, i, j}, adding the other points in order."""
    if l < 3:
        raise ValueError("need l >= 3")
    if i == j or not (2 <= i <= l and 2 <= j <= l):
        raise ValueError("i, j must be distinct labels in 2..l")
    space = SpaceLabel("complex", _labels((1, i, j)))
    expr = FormalClass.zero(space)  # the base space is a point
    steps = [f"{space.render()} on {{1,{i},{j}}}: psi_1 = 0"]
    for new in range(2, l + 1):
        if new in (i, j):
            continue
        expr = psi1_step(expr, new=new, eager_drop=eager_drop)
        steps.append(f"add {new}: psi_1 = {expr.render()}")
    return Derivation(f"thm1 l={l} i={i} j={j}", expr.normalize(), stated_thm1(l, i, j), steps)


def stated_thm2(k: int, l: int, i: int | None = None) -> FormalClass:
    """First identity (``i is None``, needs k > 0): ``sum RD_{1I, J}``;
    second identity: ``sum RD_{1I, iJ}``."""
    space = real_space(k, l)
    fixed = [1] if i is None else [1, i]
    rest = [m for m in range(1, l + 1) if m not in fixed]
    out = FormalClass.zero(space)
    for mask in itertools.product((0, 1), repeat=len(rest)):
        I = [m for m, s in zip(rest, mask) if s]
        J = [m for m, s in zip(rest, mask) if not s]
        out = out + FormalClass.symbol(space, BoundaryR.of([1] + I, ([] if i is None else [i]) + J))
    return out.normalize()


def derive_thm2(k: int, l: int, i: int | None = None, eager_drop: bool = True) -> Derivation:
    """Induct from a one-dimensional base, adding conjugate pairs then real points.

    ``i is None`` selects the first identity (base: one real point and pair
    {1}); otherwise the second (base: pairs {1, i}, no real points).
    """
    if i is None:
        if k < 1 or l < 1:
            raise ValueError("first identity needs k >= 1 and l >= 1")
        space, k0 = SpaceLabel("real", (1,), 1), 1
    else:
        if l < 2 or not 2 <= i <= l or k < 0:
            raise ValueError("second identity needs l >= 2 and i in 2..l")
        space, k0 = SpaceLabel("real", _labels((1, i)), 0), 0
    expr = FormalClass.zero(space)
    steps = [f"{space.render()} on {space.labels}: psi_1 = 0"]
    for new in range(2, l + 1):
        if new in space.labels:
            continue
        expr = psi1_step(expr, FORGET_PAIR, new=new, eager_drop=eager_drop)
        steps.append(f"add pair {new}: psi_1 = {expr.render()}")
    for _ in range(k - k0):
        expr = psi1_step(expr, FORGET_REAL_POINT, eager_drop=eager_drop)
        steps.append(f"add real point: psi_1 = {expr.render()}")
    case = f"thm2 k={k} l={l}" + ("" if i is None else f" i={i}")
    return Derivation(case, expr.normalize(), stated_thm2(k, l, i), steps)
