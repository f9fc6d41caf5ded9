"""Invariant tables and the generating functions built from them.

Three series are assembled from a table of genus-0 invariants:

* the complex potential, coefficient of ``q^B prod t_i^{c_i}`` equal to
  ``<mu^c>_B / prod c_i!``;
* the doubled complex potential, where class ``B'`` contributes at
  ``q^{d(B')}`` with ``d(B') = B' - phi_*(B')``;
* the real potential, with weight ``2^(1-l) q^B u^k / (k! prod c_i!)`` where
  ``l = sum c_i`` counts conjugate-pair insertions.

Stored keys are *reduced*: divisor (degree-2) insertions are removed via the
divisor axiom and re-inserted during assembly; unit insertions only appear in
the classical (``B = 0``) seeds.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from pathlib import Path
from typing import Iterable, Iterator

from .series import Ring, Series, StructuralError, format_rational, to_rational
from .target import TargetModel

__all__ = [
    "COMPLEX",
    "REAL",
    "InvariantKey",
    "InvariantTable",
    "IncompleteTableError",
    "ring_for",
    "assemble_phi",
    "assemble_phi_phi",
    "assemble_omega",
    "extract_invariant",
    "key_series",
    "key_weight",
    "key_monomial",
    "divisor_reduce",
    "reduce_key",
    "required_keys",
    "complex_dimension_ok",
    "real_dimension_ok",
]

COMPLEX = "complex"
REAL = "real"


class IncompleteTableError(LookupError):
    def __init__(self, key):
        self.key = key
        super().__init__(f"table has no entry for {key}")


@dataclass(frozen=True)
class InvariantKey:
    """Address of one invariant.

    ``insertions`` is an exponent vector over the cohomology basis.  Complex
    keys carry ``k=None`` and ``spin=None``; real keys record the number of
    real marked points and an opaque spin-structure tag.
    """

    sector: str
    degree: tuple[int, ...]
    insertions: tuple[int, ...]
    k: int | None = None
    spin: str | None = None

    def __post_init__(self):
        if self.sector not in (COMPLEX, REAL):
            raise StructuralError(f"unknown sector {self.sector!r}")
        if self.sector == COMPLEX and (self.k is not None or self.spin is not None):
            raise StructuralError("complex keys carry no k and no spin tag")
        if self.sector == REAL and (self.k is None or self.k < 0):
            raise StructuralError("real keys need k >= 0")
        if any(c < 0 for c in self.insertions) or any(b < 0 for b in self.degree):
            raise StructuralError("negative exponent in key")

    @classmethod
    def complex(cls, degree, insertions) -> "InvariantKey":
        return cls(COMPLEX, _tup(degree), tuple(insertions))

    @classmethod
    def real(cls, degree, insertions, k: int, spin: str = "default") -> "InvariantKey":
        return cls(REAL, _tup(degree), tuple(insertions), k, spin)

    @property
    def n_insertions(self) -> int:
        return sum(self.insertions)

    def sort_key(self):
        return (self.sector, sum(self.degree), self.degree, self.spin or "",
                -(self.k or 0), self.insertions)

    def with_insertions(self, insertions) -> "InvariantKey":
        return InvariantKey(self.sector, self.degree, tuple(insertions), self.k, self.spin)

    def describe(self, model: TargetModel | None = None) -> str:
        if model is not None:
            ins = ",".join(f"{model.labels[i]}^{c}" for i, c in enumerate(self.insertions) if c)
        else:
            ins = ",".join(f"#{i}^{c}" for i, c in enumerate(self.insertions) if c)
        deg = ",".join(map(str, self.degree))
        if self.sector == COMPLEX:
            return f"<{ins}>_[{deg}]"
        return f"<{ins}>_[{deg}];k={self.k};{self.spin}"

    def __str__(self):
        return self.describe()


def _tup(x) -> tuple[int, ...]:
    return (x,) if isinstance(x, int) else tuple(x)


def complex_dimension_ok(model: TargetModel, key: InvariantKey) -> bool:
    """Complex virtual dimension matches total constraint codimension."""
    lhs = sum(c * (model.degrees[i] // 2 - 1) for i, c in enumerate(key.insertions))
    return lhs == model.complex_dim - 3 + model.c1_pairing(key.degree)


def real_dimension_ok(model: TargetModel, key: InvariantKey) -> bool:
    """Real-point and conjugate-pair constraints cut the real moduli space to points."""
    n = model.complex_dim
    lhs = key.k * (n - 1) + sum(c * (model.degrees[i] - 2) for i, c in enumerate(key.insertions))
    return lhs == n - 3 + model.c1_pairing(key.degree)


class InvariantTable:
    """Append-mostly map from reduced keys to exact values."""

    def __init__(self, target: TargetModel, entries=None, provenance=None):
        self.target = target
        self.entries: dict[InvariantKey, Fraction] = {}
        self.provenance: dict[InvariantKey, str] = {}
        for key, value in (entries or {}).items():
            self.set(key, value, (provenance or {}).get(key, "imported"))

    def set(self, key: InvariantKey, value, provenance: str = "seed"):
        if len(key.insertions) != self.target.n:
            raise StructuralError(f"key {key} does not match basis size {self.target.n}")
        if provenance not in ("seed", "solved", "imported"):
            raise ValueError(f"bad provenance {provenance!r}")
        self.entries[key] = to_rational(value)
        self.provenance[key] = provenance

    def __getitem__(self, key: InvariantKey) -> Fraction:
        return self.entries[key]

    def get(self, key, default=None):
        return self.entries.get(key, default)

    def __contains__(self, key):
        return key in self.entries

    def __len__(self):
        return len(self.entries)

    def __iter__(self) -> Iterator[InvariantKey]:
        return iter(sorted(self.entries, key=InvariantKey.sort_key))

    def keys(self, sector: str | None = None, spin: str | None = None) -> list[InvariantKey]:
        return [k for k in self if (sector is None or k.sector == sector)
                and (spin is None or k.spin == spin)]

    def copy(self) -> "InvariantTable":
        t = InvariantTable(self.target)
        t.entries = dict(self.entries)
        t.provenance = dict(self.provenance)
        return t

    def update(self, other: "InvariantTable"):
        for k in other:
            self.set(k, other[k], other.provenance[k])

    def spins(self) -> list[str]:
        return sorted({k.spin for k in self.entries if k.sector == REAL})

    def value(self, key: InvariantKey) -> Fraction:
        """Look up any key, applying divisor and fundamental-class axioms."""
        if key in self.entries:
            return self.entries[key]
        reduced, mult = reduce_key(self.target, key)
        if mult == 0:
            return Fraction(0)
        if reduced in self.entries:
            return mult * self.entries[reduced]
        raise IncompleteTableError(reduced)

    def __eq__(self, other):
        if not isinstance(other, InvariantTable):
            return NotImplemented
        return self.target == other.target and self.entries == other.entries

    # -- persistence ----------------------------------------------------------

    def to_records(self) -> list[dict]:
        labels = self.target.labels
        out = []
        for key in self:
            out.append({
                "sector": key.sector,
                "degree": list(key.degree),
                "insertions": {labels[i]: c for i, c in enumerate(key.insertions) if c},
                "k": key.k,
                "spinTag": key.spin,
                "value": format_rational(self.entries[key]),
                "provenance": self.provenance[key],
            })
        return out

    def to_json(self) -> str:
        doc = {"target": self.target.name, "model": self.target.fingerprint(),
               "entries": self.to_records()}
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_records(cls, target: TargetModel, records: Iterable[dict]) -> "InvariantTable":
        t = cls(target)
        for rec in records:
            ins = [0] * target.n
            for lab, c in rec["insertions"].items():
                ins[target.index(lab)] = int(c)
            key = InvariantKey(rec["sector"], tuple(int(b) for b in rec["degree"]),
                               tuple(ins), rec.get("k"), rec.get("spinTag"))
            t.set(key, to_rational(rec["value"]), rec.get("provenance", "imported"))
        return t

    @classmethod
    def from_json(cls, target: TargetModel, text: str) -> "InvariantTable":
        doc = json.loads(text)
        if doc.get("model") not in (None, target.fingerprint()):
            raise ValueError(f"table was written for a different model ({doc.get('target')})")
        return cls.from_records(target, doc["entries"])

    def save(self, path):
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, target: TargetModel, path) -> "InvariantTable":
        return cls.from_json(target, Path(path).read_text())


# -- divisor axiom ------------------------------------------------------------

def divisor_reduce(model: TargetModel, key: InvariantKey, index: int):
    """Remove one insertion of the degree-2 class ``index``.

    Returns the reduced key and the multiplier: ``<mu, B>`` in the complex
    sector, ``real_divisor_factor * <mu, B>`` in the real one.
    """
    if model.degrees[index] != 2:
        raise StructuralError(f"{model.labels[index]!r} is not a divisor class")
    if key.insertions[index] == 0:
        raise StructuralError(f"key {key} has no {model.labels[index]!r} insertion")
    ins = list(key.insertions)
    ins[index] -= 1
    mult = Fraction(model.pair_divisor(index, key.degree))
    if key.sector == REAL:
        mult *= model.real_divisor_factor
    return key.with_insertions(ins), mult


def reduce_key(model: TargetModel, key: InvariantKey):
    """Strip every divisor insertion (and unit insertions off degree 0)."""
    mult = Fraction(1)
    if any(key.degree):
        u = model.unit_index
        if u is not None and key.insertions[u]:
            return key, Fraction(0)
        for i in model.divisor_indices():
            while key.insertions[i]:
                key, m = divisor_reduce(model, key, i)
                mult *= m
                if not mult:
                    return key, mult
    return key, mult


# -- enumeration of required keys -------------------------------------------

def _lattice_points(rank: int, model: TargetModel, max_energy: int):
    """Nonzero effective classes (non-negative coordinates) with energy <= bound."""
    ranges = [range(0, max_energy // w + 1) for w in model.energy_weights]
    for B in itertools.product(*ranges):
        if any(B) and model.energy(B) <= max_energy:
            yield tuple(B)


def _compositions(indices, weights, total):
    """Exponent vectors over ``indices`` with sum(c_i * w_i) == total."""
    if not indices:
        if total == 0:
            yield {}
        return
    i, rest = indices[0], indices[1:]
    w = weights[0]
    for c in range(total // w + 1):
        for tail in _compositions(rest, weights[1:], total - c * w):
            yield {i: c, **tail}


def required_keys(model: TargetModel, sector: str, max_degree: int, max_energy: int,
                  spin: str = "default") -> list[InvariantKey]:
    """Reduced keys of nonzero degree whose base monomial fits the bounds."""
    out = []
    prim = model.primary_indices()
    n = model.complex_dim
    for B in _lattice_points(model.lattice_rank, model, max_energy):
        vdim = n - 3 + model.c1_pairing(B)
        if sector == COMPLEX:
            weights = [model.degrees[i] // 2 - 1 for i in prim]
            for comp in _compositions(prim, weights, vdim):
                ins = [0] * model.n
                for i, c in comp.items():
                    ins[i] = c
                key = InvariantKey.complex(B, ins)
                if key.n_insertions <= max_degree:
                    out.append(key)
        else:
            if n < 2:
                continue
            weights = [model.degrees[i] - 2 for i in prim]
            for k in range(0, vdim // (n - 1) + 1 if n > 1 else 1):
                rem = vdim - k * (n - 1)
                for comp in _compositions(prim, weights, rem):
                    ins = [0] * model.n
                    for i, c in comp.items():
                        ins[i] = c
                    key = InvariantKey.real(B, ins, k, spin)
                    if key.n_insertions + k <= max_degree:
                        out.append(key)
    return sorted(out, key=InvariantKey.sort_key)


def _check_complete(table: InvariantTable, sector: str, keys: list[InvariantKey],
                    max_degree: int, max_energy: int, spin=None):
    # Completeness is enforced up to the highest energy the table covers, so a
    # table solved to degree d is never silently read as zero below d.
    model = table.target
    present = [model.energy(k.degree) for k in keys if any(k.degree)]
    if not present:
        return
    bound = min(max_energy, max(present))
    for key in required_keys(model, sector, max_degree, bound, spin or "default"):
        if key not in table.entries:
            raise IncompleteTableError(key)


# -- assembly -----------------------------------------------------------------

def ring_for(model: TargetModel) -> Ring:
    return Ring(model.n, model.lattice_rank, model.energy_weights)


def _divisor_expansions(model, key, base_count, max_degree, mults):
    """Yield (extra divisor counts, numeric factor) within the degree bound."""
    divs = [i for i in model.divisor_indices() if mults.get(i)]
    room = max_degree - base_count
    if room < 0:
        return
    for extra in itertools.product(range(room + 1), repeat=len(divs)):
        if sum(extra) > room:
            continue
        f = Fraction(1)
        for i, e in zip(divs, extra):
            f *= mults[i] ** e
        yield dict(zip(divs, extra)), f


def _key_terms(model: TargetModel, key: InvariantKey, value: Fraction, qexp,
               max_degree: int, real: bool, sign: int = 1):
    """Monomials contributed by one stored invariant."""
    mults = {}
    if any(key.degree):
        for i in model.divisor_indices():
            m = Fraction(model.pair_divisor(i, key.degree))
            if real:
                m *= model.real_divisor_factor
            mults[i] = m
        if any(key.insertions[i] for i in model.divisor_indices()):
            raise StructuralError(f"stored key {key} is not divisor-reduced")
    k = key.k if real else 0
    base = key.n_insertions + k
    for extra, f in _divisor_expansions(model, key, base, max_degree, mults):
        ins = list(key.insertions)
        for i, e in extra.items():
            ins[i] += e
        l = sum(ins)
        w = Fraction(sign) * f * value
        for c in ins:
            w /= factorial(c)
        if real:
            w = w * Fraction(2) ** (1 - l) / factorial(k)
        yield tuple(ins) + (k,) + tuple(qexp), w


def assemble_phi(table: InvariantTable, max_degree: int, max_energy: int) -> Series:
    model = table.target
    keys = table.keys(COMPLEX)
    _check_complete(table, COMPLEX, keys, max_degree, max_energy)
    terms = {}
    for key in keys:
        if model.energy(key.degree) > max_energy:
            continue
        for m, c in _key_terms(model, key, table[key], key.degree, max_degree, False):
            terms[m] = terms.get(m, 0) + c
    return Series(ring_for(model), terms, max_degree, max_energy)


def assemble_phi_phi(table: InvariantTable, model: TargetModel | None = None,
                     max_degree: int = 0, max_energy: int = 0) -> Series:
    """Doubled complex potential: class ``B'`` sits at ``q^{d(B')}``."""
    model = model or table.target
    keys = table.keys(COMPLEX)
    # preimages of image classes with energy <= E need source energy <= E too
    # whenever d does not decrease energy; checked up to the covered range.
    _check_complete(table, COMPLEX, keys, max_degree,
                    max(model.energy(k.degree) for k in keys) if keys else 0)
    terms = {}
    for key in keys:
        image = model.apply_dmap(key.degree)
        if model.energy(image) > max_energy:
            continue
        sign = model.phi_phi_sign(key.degree)
        for m, c in _key_terms(model, key, table[key], image, max_degree, False, sign):
            terms[m] = terms.get(m, 0) + c
    return Series(ring_for(model), terms, max_degree, max_energy)


def assemble_omega(table: InvariantTable, max_degree: int, max_energy: int,
                   spin: str | None = None) -> Series:
    model = table.target
    spins = table.spins()
    if spin is None:
        if len(spins) > 1:
            raise StructuralError(f"table holds several spin tags {spins}; pick one")
        spin = spins[0] if spins else "default"
    keys = table.keys(REAL, spin)
    _check_complete(table, REAL, keys, max_degree, max_energy, spin)
    terms = {}
    for key in keys:
        if model.energy(key.degree) > max_energy:
            continue
        for m, c in _key_terms(model, key, table[key], key.degree, max_degree, True):
            terms[m] = terms.get(m, 0) + c
    return Series(ring_for(model), terms, max_degree, max_energy)


def key_series(model: TargetModel, key: InvariantKey, max_degree: int, max_energy: int,
               value=1, doubled: bool = False) -> Series:
    """Contribution of a single key with the given value (no completeness check)."""
    real = key.sector == REAL
    if doubled:
        qexp, sign = model.apply_dmap(key.degree), model.phi_phi_sign(key.degree)
    else:
        qexp, sign = key.degree, 1
    terms = {}
    if model.energy(qexp) <= max_energy:
        for m, c in _key_terms(model, key, to_rational(value), qexp, max_degree, real, sign):
            terms[m] = terms.get(m, 0) + c
    return Series(ring_for(model), terms, max_degree, max_energy)


def key_weight(key: InvariantKey) -> Fraction:
    """Assembly weight of the key's own monomial."""
    w = Fraction(1)
    for c in key.insertions:
        w /= factorial(c)
    if key.sector == REAL:
        w *= Fraction(2) ** (1 - key.n_insertions) / factorial(key.k)
    return w


def key_monomial(key: InvariantKey) -> tuple[int, ...]:
    return tuple(key.insertions) + (key.k or 0,) + tuple(key.degree)


def extract_invariant(s: Series, key: InvariantKey) -> Fraction:
    """Inverse of assembly for a single reduced key."""
    m = key_monomial(key)
    if len(m) != s.ring.width:
        raise StructuralError(f"key {key} does not fit ring {s.ring}")
    return s.coeff(m) / key_weight(key)

