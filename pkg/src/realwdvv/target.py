"""Even cohomology of a target, its Poincaré pairing, and the diagonal class."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .series import format_rational, to_rational

__all__ = [
    "ModelError",
    "TargetModel",
    "DiagonalSplitting",
    "inverse_pairing",
    "diagonal_split",
    "validate",
    "projective_space",
    "p2",
    "p3",
    "builtin",
    "load_model",
    "model_to_json",
    "model_from_json",
]


class ModelError(ValueError):
    """Raised for target models that fail validation."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


Matrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class TargetModel:
    """A compact real symplectic target, seen through its even cohomology.

    ``degrees`` are cohomological (0, 2, ..., 2n).  ``involution_signs[i]`` is
    the eigenvalue of the involution on basis element ``i``.  The curve-class
    lattice is ``Z^lattice_rank``; ``dmap`` is the matrix of ``B - phi_*(B)``.

    Beyond the bare topology a model records the conventions the potentials
    need: the first Chern class (for dimension counting), a sign character
    ``phi_phi_signs`` twisting the doubled complex potential by
    ``prod(sign_i ** B_i)``, and the factor applied by the real divisor axiom.
    """

    name: str
    complex_dim: int
    labels: tuple[str, ...]
    degrees: tuple[int, ...]
    pairing: Matrix
    involution_signs: tuple[int, ...]
    lattice_rank: int = 1
    dmap: tuple[tuple[int, ...], ...] = ((2,),)
    divisor_pairing: tuple[tuple[str, tuple[int, ...]], ...] = ()
    c1: tuple[int, ...] = ()
    energy_weights: tuple[int, ...] = (1,)
    phi_phi_signs: tuple[int, ...] = (1,)
    real_divisor_factor: Fraction = Fraction(1)
    _ginv: Matrix | None = field(default=None, compare=False, repr=False)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def real_dimension(self) -> int:
        return 2 * self.complex_dim

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"{label!r} is not a basis label of {self.name}") from None

    @property
    def unit_index(self) -> int | None:
        for i, d in enumerate(self.degrees):
            if d == 0:
                return i
        return None

    def divisor_indices(self) -> list[int]:
        return [i for i, d in enumerate(self.degrees) if d == 2]

    def primary_indices(self) -> list[int]:
        """Basis elements kept in reduced keys: cohomological degree >= 4."""
        return [i for i, d in enumerate(self.degrees) if d >= 4]

    def divisor_vector(self, i: int) -> tuple[int, ...]:
        label = self.labels[i]
        for lab, vec in self.divisor_pairing:
            if lab == label:
                return vec
        raise KeyError(f"no divisor pairing recorded for {label!r}")

    def pair_divisor(self, i: int, B) -> int:
        """``<mu_i, B>`` for a degree-2 basis element."""
        return sum(a * b for a, b in zip(self.divisor_vector(i), B))

    def c1_pairing(self, B) -> int:
        return sum(a * b for a, b in zip(self.c1, B))

    def energy(self, B) -> int:
        return sum(w * b for w, b in zip(self.energy_weights, B))

    def apply_dmap(self, B) -> tuple[int, ...]:
        return tuple(sum(row[j] * B[j] for j in range(self.lattice_rank)) for row in self.dmap)

    def phi_phi_sign(self, B) -> int:
        s = 1
        for sign, b in zip(self.phi_phi_signs, B):
            if sign < 0 and b % 2:
                s = -s
        return s

    def ginv(self) -> Matrix:
        if self._ginv is None:
            object.__setattr__(self, "_ginv", inverse_pairing(self))
        return self._ginv

    def fingerprint(self) -> str:
        blob = json.dumps(model_to_json(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


@dataclass(frozen=True)
class DiagonalSplitting:
    """Künneth terms ``g^{ij} mu_i x mu_j`` of the diagonal class."""

    terms: tuple[tuple[int, int, Fraction], ...]

    def matrix(self, n: int) -> list[list[Fraction]]:
        out = [[Fraction(0)] * n for _ in range(n)]
        for i, j, c in self.terms:
            out[i][j] = c
        return out


def _invert(mat) -> list[list[Fraction]]:
    n = len(mat)
    a = [[to_rational(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ModelError("pairing matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def inverse_pairing(m: TargetModel) -> Matrix:
    """Exact inverse ``(g^{ij})`` of the pairing matrix."""
    return tuple(tuple(row) for row in _invert(m.pairing))


def diagonal_split(m: TargetModel) -> DiagonalSplitting:
    bad = validate(m)
    if bad:
        raise ModelError(bad)
    gi = m.ginv()
    return DiagonalSplitting(tuple((i, j, gi[i][j]) for i in range(m.n)
                                   for j in range(m.n) if gi[i][j] != 0))


def validate(m: TargetModel) -> list[str]:
    """Every violated model invariant, as human-readable strings."""
    out = []
    n = len(m.labels)
    if m.complex_dim <= 0:
        out.append("complex dimension must be positive")
    if len(set(m.labels)) != n:
        out.append("basis labels must be distinct")
    if len(m.degrees) != n:
        out.append("one degree per basis element")
    for i, d in enumerate(m.degrees):
        if d % 2 or not 0 <= d <= 2 * m.complex_dim:
            out.append(f"degree of {m.labels[i]!r} must be even and in [0, {2 * m.complex_dim}]")
    if len(m.involution_signs) != n or any(s not in (1, -1) for s in m.involution_signs):
        out.append("involution signs must be +1/-1, one per basis element")
    if len(m.pairing) != n or any(len(row) != n for row in m.pairing):
        out.append("pairing must be an N x N matrix")
        return out
    for i in range(n):
        for j in range(n):
            if m.pairing[i][j] != m.pairing[j][i]:
                out.append(f"pairing is not symmetric at ({i}, {j})")
            if (m.pairing[i][j] != 0 and len(m.degrees) == n
                    and m.degrees[i] + m.degrees[j] != 2 * m.complex_dim):
                out.append(f"pairing entry ({m.labels[i]}, {m.labels[j]}) is nonzero "
                           f"but degrees do not sum to {2 * m.complex_dim}")
    try:
        _invert(m.pairing)
    except ModelError:
        out.append("pairing matrix is singular")
    r = m.lattice_rank
    if len(m.dmap) != r or any(len(row) != r for row in m.dmap):
        out.append("dmap must be an r x r integer matrix")
    if len(m.c1) != r:
        out.append("c1 must have one entry per lattice generator")
    if len(m.energy_weights) != r or any(w <= 0 for w in m.energy_weights):
        out.append("energy weights must be positive, one per lattice generator")
    if len(m.phi_phi_signs) != r or any(s not in (1, -1) for s in m.phi_phi_signs):
        out.append("phi_phi_signs must be +1/-1, one per lattice generator")
    recorded = {lab for lab, _ in m.divisor_pairing}
    for i in m.divisor_indices() if len(m.degrees) == n else []:
        if m.labels[i] not in recorded:
            out.append(f"degree-2 class {m.labels[i]!r} needs a divisor pairing")
    for lab, vec in m.divisor_pairing:
        if lab not in m.labels:
            out.append(f"divisor pairing for unknown label {lab!r}")
        elif m.degrees[m.labels.index(lab)] != 2:
            out.append(f"divisor pairing given for {lab!r}, which is not of degree 2")
        if len(vec) != r:
            out.append(f"divisor pairing for {lab!r} has wrong length")
    return out


def projective_space(n: int, phi_phi_sign: int = 1) -> TargetModel:
    """``P^n`` with the standard conjugation; basis ``1, h, ..., h^n``."""
    labels = ["1", "h"] + [f"h{k}" for k in range(2, n + 1)]
    labels[-1] = "pt"
    degrees = tuple(2 * k for k in range(n + 1))
    pairing = tuple(tuple(Fraction(int(i + j == n)) for j in range(n + 1))
                    for i in range(n + 1))
    return TargetModel(
        name=f"P{n}",
        complex_dim=n,
        labels=tuple(labels),
        degrees=degrees,
        pairing=pairing,
        involution_signs=tuple((-1) ** k for k in range(n + 1)),
        lattice_rank=1,
        dmap=((2,),),
        divisor_pairing=(("h", (1,)),),
        c1=(n + 1,),
        energy_weights=(1,),
        phi_phi_signs=(phi_phi_sign,),
    )


def p2() -> TargetModel:
    # Without the (-1)^d twist on the doubled potential the real equations
    # contradict the degree-1 seeds already at q^2.
    return projective_space(2, phi_phi_sign=-1)


def p3() -> TargetModel:
    return projective_space(3)


_BUILTINS = {"p2": p2, "p3": p3}


def builtin(name: str) -> TargetModel:
    try:
        return _BUILTINS[name.lower()]()
    except KeyError:
        raise ModelError(f"unknown built-in target {name!r}; choose from {sorted(_BUILTINS)}") from None


def model_to_json(m: TargetModel) -> dict:
    return {
        "name": m.name,
        "complex_dim": m.complex_dim,
        "basis": [{"label": lab, "degree": d} for lab, d in zip(m.labels, m.degrees)],
        "pairing": [[format_rational(x) for x in row] for row in m.pairing],
        "involution_signs": list(m.involution_signs),
        "lattice_rank": m.lattice_rank,
        "dmap": [list(row) for row in m.dmap],
        "divisor_pairing": {lab: list(vec) for lab, vec in m.divisor_pairing},
        "c1": list(m.c1),
        "energy_weights": list(m.energy_weights),
        "phi_phi_signs": list(m.phi_phi_signs),
        "real_divisor_factor": format_rational(m.real_divisor_factor),
    }


def model_from_json(data: dict) -> TargetModel:
    try:
        basis = data["basis"]
        r = int(data.get("lattice_rank", 1))
        m = TargetModel(
            name=str(data["name"]),
            complex_dim=int(data["complex_dim"]),
            labels=tuple(str(b["label"]) for b in basis),
            degrees=tuple(int(b["degree"]) for b in basis),
            pairing=tuple(tuple(to_rational(x) for x in row) for row in data["pairing"]),
            involution_signs=tuple(int(s) for s in data["involution_signs"]),
            lattice_rank=r,
            dmap=tuple(tuple(int(x) for x in row) for row in data.get("dmap", [[2]])),
            divisor_pairing=tuple((str(k), tuple(int(x) for x in v))
                                  for k, v in sorted(data.get("divisor_pairing", {}).items())),
            c1=tuple(int(x) for x in data.get("c1", [])),
            energy_weights=tuple(int(x) for x in data.get("energy_weights", [1] * r)),
            phi_phi_signs=tuple(int(x) for x in data.get("phi_phi_signs", [1] * r)),
            real_divisor_factor=to_rational(data.get("real_divisor_factor", "1/1")),
        )
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ModelError(f"malformed model file: {exc!r}") from None
    return m


def load_model(path) -> TargetModel:
    """Read a JSON model file and refuse it unless it validates."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelError(f"cannot read model file {path}: {exc}") from None
    m = model_from_json(data)
    bad = validate(m)
    if bad:
        raise ModelError(bad)
    return m
