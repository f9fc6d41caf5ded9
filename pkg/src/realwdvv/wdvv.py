"""Complex and real WDVV residuals, and an order-by-order solver for them.

Residual families (``X_{..}`` are partials of the real potential ``Omega``,
``F_{..}`` third partials of the doubled complex potential, ``g^{ij}`` the
inverse pairing):

* ``cwdvv(a,b,c,d) = sum F_abi g^ij F_jcd - sum F_aci g^ij F_jbd``
* ``m12(a,b)  = sum F_abi g^ij X_ju + X_ab X_uu - X_au X_bu``
* ``m03(a,b,c) = sum F_abi g^ij X_jc + X_ab X_cu - (b <-> c)``

The solver walks Novikov energy levels.  At each level the coefficients of
every residual at that energy are affine in the invariants still unknown, so
the level is a linear system.  Unknowns the system cannot pin down yet are
carried forward: for the plane, the purely real counts of degree ``d`` are
only fixed by equations of degree ``d + 1``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .potentials import (COMPLEX, REAL, InvariantKey, InvariantTable, assemble_omega,
                         assemble_phi, assemble_phi_phi, key_series, required_keys)
from .series import Series, StructuralError
from .target import TargetModel, p2

__all__ = [
    "Derivatives",
    "PDEResidual",
    "StageReport",
    "SolveReport",
    "InconsistencyError",
    "ConsistencyReport",
    "cwdvv_residual",
    "m12_residual",
    "m03_residual",
    "residual_sweep",
    "complex_seeds",
    "real_seeds",
    "solve_complex",
    "solve_complex_p2",
    "solve_real",
    "solve_real_p2",
    "cross_consistency",
]

log = logging.getLogger(__name__)

FAMILIES = ("cwdvv", "m12", "m03")


class Derivatives:
    """Memoised mixed partials of one series; index order is irrelevant."""

    def __init__(self, s: Series):
        self.series = s
        self._cache = {(): s}

    def __call__(self, *idx) -> Series:
        key = tuple(sorted(idx))
        hit = self._cache.get(key)
        if hit is None:
            hit = self(*key[:-1]).partial(key[-1])
            self._cache[key] = hit
        return hit


def _ginv_terms(ginv) -> list[tuple[int, int, Fraction]]:
    return [(i, j, Fraction(g)) for i, row in enumerate(ginv) for j, g in enumerate(row) if g]


def _sum(products, zero: Series) -> Series:
    out = zero
    for c, x, y in products:
        if x.is_zero() or y.is_zero():
            out = out.add(Series.zero(x.ring, min(x.max_degree, y.max_degree),
                                      min(x.max_energy, y.max_energy)))
            continue
        p = x.mul(y)
        out = out.add(p if c == 1 else p.scale(c))
    return out


def _zero_like(*ss: Series) -> Series:
    return Series.zero(ss[0].ring, min(s.max_degree for s in ss), min(s.max_energy for s in ss))


# -- residual building blocks; F, G: third-partial providers, X, Y: second ----

def _cwdvv_quad(F, G, gt, a, b, c, d):
    prods = []
    for i, j, g in gt:
        prods.append((g, F(a, b, i), G(j, c, d)))
        prods.append((-g, F(a, c, i), G(j, b, d)))
    return prods


def _m12_lin(F, X, gt, u, a, b):
    return [(g, F(a, b, i), X(j, u)) for i, j, g in gt]


def _m12_quad(X, Y, u, a, b):
    return [(1, X(a, b), Y(u, u)), (-1, X(a, u), Y(b, u))]


def _m03_lin(F, X, gt, a, b, c):
    out = []
    for i, j, g in gt:
        out.append((g, F(a, b, i), X(j, c)))
        out.append((-g, F(a, c, i), X(j, b)))
    return out


def _m03_quad(X, Y, u, a, b, c):
    return [(1, X(a, b), Y(c, u)), (-1, X(a, c), Y(b, u))]


def _check_indices(n, *idx):
    for i in idx:
        if not 0 <= i < n:
            raise IndexError(f"index {i} out of range for N={n}")


def _as_derivs(s):
    return s if isinstance(s, Derivatives) else Derivatives(s)


def cwdvv_residual(phi, ginv, a: int, b: int, c: int, d: int) -> Series:
    """LHS - RHS of the complex WDVV equation for indices (a, b, c, d)."""
    F = _as_derivs(phi)
    n = F.series.ring.n_t
    _check_indices(n, a, b, c, d)
    zero = F(0, 0, 0) if n else F.series
    return _sum(_cwdvv_quad(F, F, _ginv_terms(ginv), a, b, c, d), _zero_like(zero))


def m12_residual(phi_phi, omega, ginv, a: int, b: int) -> Series:
    F, X = _as_derivs(phi_phi), _as_derivs(omega)
    if F.series.ring != X.series.ring:
        raise StructuralError("both potentials must live in one ring")
    n, u = X.series.ring.n_t, X.series.ring.u_index
    _check_indices(n, a, b)
    gt = _ginv_terms(ginv)
    prods = _m12_lin(F, X, gt, u, a, b) + _m12_quad(X, X, u, a, b)
    return _sum(prods, _zero_like(F(a, b, a), X(a, u, u)))


def m03_residual(phi_phi, omega, ginv, a: int, b: int, c: int) -> Series:
    F, X = _as_derivs(phi_phi), _as_derivs(omega)
    if F.series.ring != X.series.ring:
        raise StructuralError("both potentials must live in one ring")
    n, u = X.series.ring.n_t, X.series.ring.u_index
    _check_indices(n, a, b, c)
    gt = _ginv_terms(ginv)
    prods = _m03_lin(F, X, gt, a, b, c) + _m03_quad(X, X, u, a, b, c)
    return _sum(prods, _zero_like(F(a, b, c), X(a, b, u)))


@dataclass
class PDEResidual:
    family: str
    indices: tuple[int, ...]
    series: Series

    def label(self) -> str:
        return f"{self.family}{self.indices}"


def _tuples(family: str, n: int, reduced: bool = False):
    if family == "cwdvv":
        for a, b, c, d in itertools.product(range(n), repeat=4):
            if not reduced or b < c:
                yield (a, b, c, d)
    elif family == "m12":
        for a, b in itertools.product(range(n), repeat=2):
            if not reduced or a <= b:
                yield (a, b)
    elif family == "m03":
        for a, b, c in itertools.product(range(n), repeat=3):
            if not reduced or b < c:
                yield (a, b, c)
    else:
        raise ValueError(f"unknown family {family!r}")


def residual_sweep(model: TargetModel, phi: Series | None = None,
                   phi_phi: Series | None = None, omega: Series | None = None,
                   families: Sequence[str] = FAMILIES) -> list[PDEResidual]:
    """Evaluate every residual over all index tuples of the requested families."""
    gi = model.ginv()
    out = []
    n = model.n
    if "cwdvv" in families and phi is not None:
        F = Derivatives(phi)
        for idx in _tuples("cwdvv", n):
            out.append(PDEResidual("cwdvv", idx, cwdvv_residual(F, gi, *idx)))
    if phi_phi is not None and omega is not None:
        F, X = Derivatives(phi_phi), Derivatives(omega)
        if "m12" in families:
            for idx in _tuples("m12", n):
                out.append(PDEResidual("m12", idx, m12_residual(F, X, gi, *idx)))
        if "m03" in families:
            for idx in _tuples("m03", n):
                out.append(PDEResidual("m03", idx, m03_residual(F, X, gi, *idx)))
    return out


# -- reports --------------------------------------------------------------------

class InconsistencyError(RuntimeError):
    """Two equations disagree about an invariant."""

    def __init__(self, location: str, value: Fraction, report: "SolveReport | None" = None):
        self.location = location
        self.value = value
        self.report = report
        super().__init__(f"inconsistent equation at {location}: reduces to {value} = 0")


@dataclass
class StageReport:
    energy: int
    unknowns: list[InvariantKey]
    solved: list[InvariantKey] = field(default_factory=list)
    pending: list[InvariantKey] = field(default_factory=list)
    equations: int = 0
    redundant: int = 0
    determinations: dict = field(default_factory=dict)
    consistent: bool = True
    offending: list[str] = field(default_factory=list)


@dataclass
class SolveReport:
    target: str
    sector: str
    families: tuple[str, ...]
    solved: list[InvariantKey] = field(default_factory=list)
    stages: list[StageReport] = field(default_factory=list)
    underdetermined: list[InvariantKey] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s.consistent for s in self.stages) and not self.underdetermined

    def overdetermined(self) -> dict[InvariantKey, int]:
        out = {}
        for s in self.stages:
            for k, n in s.determinations.items():
                out[k] = out.get(k, 0) + n
        return {k: n for k, n in out.items() if n > 1}

    def render(self, model: TargetModel | None = None) -> str:
        lines = [f"solve report: {self.target} {self.sector} sector, "
                 f"families {','.join(self.families)}"]
        for s in self.stages:
            lines.append(f"  energy {s.energy}: {len(s.unknowns)} unknowns, "
                         f"{s.equations} equations, {s.redundant} redundant checks, "
                         f"consistent={'yes' if s.consistent else 'no'}")
            for k in s.solved:
                n = s.determinations.get(k, 0)
                lines.append(f"    solved {k.describe(model)} (appears in {n} equations)")
            for k in s.pending:
                lines.append(f"    carried {k.describe(model)}")
            for o in s.offending:
                lines.append(f"    OFFENDING {o}")
        if self.underdetermined:
            lines.append("  underdetermined: " +
                         ", ".join(k.describe(model) for k in self.underdetermined))
        lines.append(f"  status: {'ok' if self.ok else 'FAILED'}")
        return "\n".join(lines) + "\n"


# -- exact elimination ------------------------------------------------------------

class _Eliminator:
    """Incremental reduced row echelon form over the rationals.

    A row ``({var: coeff}, const)`` stands for ``sum coeff*x_var + const = 0``.
    Pivot rows never mention another pivot variable.
    """

    def __init__(self):
        self.rows: dict[int, tuple[dict, Fraction]] = {}

    def add(self, coeffs: dict, const: Fraction):
        coeffs = {v: c for v, c in coeffs.items() if c}
        for p in [v for v in coeffs if v in self.rows]:
            f = coeffs.pop(p, 0)
            if not f:
                continue
            prow, pconst = self.rows[p]
            for v, c in prow.items():
                nv = coeffs.get(v, 0) - f * c
                if nv:
                    coeffs[v] = nv
                else:
                    coeffs.pop(v, None)
            const -= f * pconst
        if not coeffs:
            return const == 0, const
        pivot = min(coeffs)
        lead = coeffs.pop(pivot)
        row = ({v: c / lead for v, c in coeffs.items()}, const / lead)
        for q, (qrow, qconst) in list(self.rows.items()):
            f = qrow.get(pivot)
            if f:
                new = {v: c for v, c in qrow.items() if v != pivot}
                for v, c in row[0].items():
                    nv = new.get(v, 0) - f * c
                    if nv:
                        new[v] = nv
                    else:
                        new.pop(v, None)
                self.rows[q] = (new, qconst - f * row[1])
        self.rows[pivot] = row
        return True, None

    def value(self, var):
        row = self.rows.get(var)
        if row is None or row[0]:
            return None
        return -row[1]

    def forget(self, var):
        self.rows.pop(var, None)


class _StagedSolver:
    """Shared machinery for walking energy levels."""

    def __init__(self, model, table, sector, families, slack, report):
        self.model = model
        self.table = table
        self.sector = sector
        self.families = tuple(families)
        self.slack = slack
        self.report = report
        self.elim = _Eliminator()
        self.index: dict[InvariantKey, int] = {}
        self.keys: list[InvariantKey] = []
        self.pending: list[InvariantKey] = []
        self.products: list[tuple[InvariantKey, InvariantKey]] = []

    def var(self, key, product=False):
        # product variables get negative ids so elimination pivots on them
        # first, leaving rows that pin down the linear unknowns
        if key not in self.index:
            self.keys.append(key)
            self.index[key] = -len(self.keys) if product else len(self.keys)
            if product:
                self.products.append(key)
        return self.index[key]

    def scratch(self, unknowns):
        t = self.table.copy()
        for k in unknowns:
            t.set(k, 0, "seed")
        return t

    def run_stage(self, energy, new_keys, build):
        """Assemble and eliminate the equations of one energy level.

        ``build(unknowns, pairs, T)`` yields ``(location, const, coeffs)``
        where ``coeffs`` maps unknown keys, and pairs of carried keys whose
        product reaches this energy, to their coefficients.
        """
        model = self.model
        unknowns = self.pending + new_keys
        pairs = [(a, b) for a, b in itertools.combinations_with_replacement(self.pending, 2)
                 if model.energy(a.degree) + model.energy(b.degree) == energy]
        stage = StageReport(energy, list(unknowns))
        self.report.stages.append(stage)
        if not unknowns:
            T = self.slack
        else:
            T = max(k.n_insertions + (k.k or 0) for k in unknowns) + self.slack
        for k in unknowns:
            self.var(k)
        for pr in pairs:
            self.var(pr, product=True)
        for location, const, coeffs in build(unknowns, pairs, T):
            row = {self.index[k]: c for k, c in coeffs.items() if c}
            if not row and const == 0:
                continue
            stage.equations += 1
            for k, c in coeffs.items():
                if c and isinstance(k, InvariantKey):
                    stage.determinations[k] = stage.determinations.get(k, 0) + 1
            self._add(stage, location, row, const)
        self._settle(stage, unknowns)
        return stage

    def _add(self, stage, location, row, const):
        ok, residue = self.elim.add(row, const)
        if not ok:
            stage.consistent = False
            stage.offending.append(f"{location} reduces to {residue} = 0")
            raise InconsistencyError(location, residue, self.report)
        if residue == 0:
            stage.redundant += 1

    def _settle(self, stage, unknowns):
        """Record solved unknowns; feed products of known factors back in."""
        while True:
            for k in unknowns:
                if k in self.table:
                    continue
                v = self.elim.value(self.index[k])
                if v is not None:
                    self.table.set(k, v, "solved")
                    self.elim.forget(self.index[k])
                    stage.solved.append(k)
                    self.report.solved.append(k)
            ready = [pr for pr in self.products
                     if pr[0] in self.table and pr[1] in self.table]
            if not ready:
                break
            for a, b in ready:
                self.products.remove((a, b))
                row = {self.index[(a, b)]: Fraction(1)}
                self._add(stage, f"product {a} * {b}", row, -self.table[a] * self.table[b])
        stage.pending = [k for k in unknowns if k not in self.table]
        self.pending = stage.pending


def _expand(location, X, dX, pairs, zero, energy, lin, quad):
    """Rows of a residual ``lin(X) + quad(X, X)`` at one energy.

    With ``X = X0 + sum x_k dX_k`` the residual is ``const + sum x_k (...) +
    sum x_a x_b (...)``; products only matter for the listed pairs.
    """
    base = _sum(lin(X) + quad(X, X), zero)
    direc = {k: _sum(lin(D) + quad(D, X) + quad(X, D), zero) for k, D in dX.items()}
    for a, b in pairs:
        A, B = dX[a], dX[b]
        prods = quad(A, A) if a == b else quad(A, B) + quad(B, A)
        direc[(a, b)] = _sum(prods, zero)
    yield from _rows_from(location, base, direc, energy)


def _rows_from(location_prefix, const_series: Series, directional: dict, energy: int):
    """Affine rows at one energy from a residual and its directional derivatives."""
    ring = const_series.ring
    base = const_series.energy_part(energy)
    parts = {k: s.energy_part(energy) for k, s in directional.items()}
    monos = set(base)
    for p in parts.values():
        monos.update(p)
    for m in sorted(monos, key=ring.sort_key):
        coeffs = {k: p.get(m, 0) for k, p in parts.items()}
        yield f"{location_prefix} at {_render_mono(ring, m)}", base.get(m, Fraction(0)), coeffs


def _render_mono(ring, m):
    parts = []
    for i, e in enumerate(m):
        if e:
            parts.append(ring.var_name(i) + (f"^{e}" if e > 1 else ""))
    return "*".join(parts) or "1"


# -- seeds --------------------------------------------------------------------------

def _classical_complex(model: TargetModel) -> list[tuple[InvariantKey, Fraction]]:
    """Degree-0 three-point invariants: triple intersection numbers."""
    # the triple product integral of mu_a mu_b mu_c is g(mu_a mu_b, mu_c); for the
    # built-in models mu_a mu_b is again a basis element found by degree.
    out = []
    n = model.n
    for a, b, c in itertools.combinations_with_replacement(range(n), 3):
        v = triple_product(model, a, b, c)
        if v:
            ins = [0] * n
            for i in (a, b, c):
                ins[i] += 1
            out.append((InvariantKey.complex((0,) * model.lattice_rank, ins), v))
    return out


def triple_product(model: TargetModel, a: int, b: int, c: int) -> Fraction:
    """Integral of ``mu_a mu_b mu_c`` for models whose basis is ``1, h, h^2, ...``."""
    top = 2 * model.complex_dim
    if model.degrees[a] + model.degrees[b] + model.degrees[c] != top:
        return Fraction(0)
    # cup product of powers of the hyperplane class is again a power of it
    deg_ab = model.degrees[a] + model.degrees[b]
    idx = [i for i, d in enumerate(model.degrees) if d == deg_ab]
    if len(idx) != 1:
        raise StructuralError("triple products need a basis with one class per degree")
    return Fraction(model.pairing[idx[0]][c])


def complex_seeds(model: TargetModel) -> InvariantTable:
    """Classical terms plus the degree-1 two-point counts."""
    t = InvariantTable(model)
    for key, v in _classical_complex(model):
        t.set(key, v, "seed")
    pt = model.n - 1
    if model.lattice_rank == 1 and model.degrees[pt] == 2 * model.complex_dim:
        ins = [0] * model.n
        ins[pt] = 2
        t.set(InvariantKey.complex((1,), ins), 1, "seed")
    return t


def real_seeds(model: TargetModel, line_through_pair=1, line_through_points=1, *,
               spin: str = "default") -> InvariantTable:
    """The real classical term and the two degree-1 counts of a real surface."""
    if model.complex_dim != 2:
        raise StructuralError("real seeds are provided for real fourfolds only")
    t = InvariantTable(model)
    zero = (0,) * model.lattice_rank
    one = [0] * model.n
    one[model.unit_index] = 1
    t.set(InvariantKey.real(zero, one, 1, spin), 1, "seed")
    pt = model.n - 1
    t.set(InvariantKey.real((1,), [0] * model.n, 2, spin), line_through_points, "seed")
    ins = [0] * model.n
    ins[pt] = 1
    t.set(InvariantKey.real((1,), ins, 0, spin), line_through_pair, "seed")
    return t


# -- complex solver -------------------------------------------------------------------

def solve_complex(model: TargetModel, dmax: int, seeds: InvariantTable | None = None,
                  slack: int = 1):
    """Solve the complex WDVV system through energy ``dmax``."""
    if dmax < 1:
        raise ValueError("dmax must be >= 1")
    table = (seeds or complex_seeds(model)).copy()
    report = SolveReport(model.name, COMPLEX, ("cwdvv",))
    solver = _StagedSolver(model, table, COMPLEX, ("cwdvv",), slack, report)
    gt = _ginv_terms(model.ginv())
    n = model.n
    for energy in range(1, dmax + 1):
        new = [k for k in required_keys(model, COMPLEX, 10 ** 6, energy)
               if model.energy(k.degree) == energy and k not in table]

        def build(unknowns, pairs, T, energy=energy):
            phi = assemble_phi(solver.scratch(unknowns), T, energy)
            F = Derivatives(phi)
            dF = {k: Derivatives(key_series(model, k, T, energy)) for k in unknowns}
            zero = _zero_like(F(0, 0, 0))
            for idx in _tuples("cwdvv", n, reduced=True):
                yield from _expand(f"cwdvv{idx}", F, dF, pairs, zero, energy,
                                   lambda D: [],
                                   lambda A, B, idx=idx: _cwdvv_quad(A, B, gt, *idx))

        solver.run_stage(energy, new, build)
    report.underdetermined.extend(k for k in solver.pending if k not in report.underdetermined)
    return table, report


def solve_complex_p2(dmax: int):
    return solve_complex(p2(), dmax)


# -- real solver ---------------------------------------------------------------------

def solve_real(model: TargetModel, dmax: int, complex_table: InvariantTable | None = None,
               seeds: InvariantTable | None = None, families: Sequence[str] = ("m12", "m03"),
               slack: int = 1, extra_stages: int = 2):
    """Solve the real WDVV system; report invariants through energy ``dmax``.

    Equations from up to ``extra_stages`` higher energies are used to settle
    invariants that lower energies leave open.  Keys of energy above ``dmax``
    met on the way are not returned.
    """
    if dmax < 1:
        raise ValueError("dmax must be >= 1")
    families = tuple(f for f in families if f in ("m12", "m03"))
    if not families:
        raise ValueError("need at least one of m12, m03")
    seeds = seeds if seeds is not None else real_seeds(model)
    spins = seeds.spins() or ["default"]
    if len(spins) != 1:
        raise StructuralError("solve one spin tag at a time")
    spin = spins[0]
    top = dmax + extra_stages
    if complex_table is None:
        complex_table, _ = solve_complex(model, max(1, _preimage_energy(model, top)))
    table = seeds.copy()
    report = SolveReport(model.name, REAL, families)
    solver = _StagedSolver(model, table, REAL, families, slack, report)
    gt = _ginv_terms(model.ginv())
    n, u = model.n, model.n
    for energy in range(1, top + 1):
        if energy > dmax and not any(model.energy(k.degree) <= dmax for k in solver.pending):
            break
        new = [k for k in required_keys(model, REAL, 10 ** 6, energy, spin)
               if model.energy(k.degree) == energy and k not in table]

        def build(unknowns, pairs, T, energy=energy):
            omega = assemble_omega(solver.scratch(unknowns), T, energy, spin)
            phi_phi = assemble_phi_phi(complex_table, model, T + 1, energy)
            F, X = Derivatives(phi_phi), Derivatives(omega)
            dX = {k: Derivatives(key_series(model, k, T, energy)) for k in unknowns}
            zero = _zero_like(F(0, 0, 0), X(0, 0))
            if "m12" in families:
                for a, b in _tuples("m12", n, reduced=True):
                    yield from _expand(f"m12{(a, b)}", X, dX, pairs, zero, energy,
                                       lambda D, a=a, b=b: _m12_lin(F, D, gt, u, a, b),
                                       lambda A, B, a=a, b=b: _m12_quad(A, B, u, a, b))
            if "m03" in families:
                for a, b, c in _tuples("m03", n, reduced=True):
                    yield from _expand(f"m03{(a, b, c)}", X, dX, pairs, zero, energy,
                                       lambda D, a=a, b=b, c=c: _m03_lin(F, D, gt, a, b, c),
                                       lambda A, B, a=a, b=b, c=c: _m03_quad(A, B, u, a, b, c))

        solver.run_stage(energy, new, build)
    # anything above dmax is scaffolding for the equations, not output
    for k in [k for k in table.keys(REAL) if model.energy(k.degree) > dmax]:
        del table.entries[k]
        del table.provenance[k]
    report.solved = [k for k in report.solved if model.energy(k.degree) <= dmax]
    report.underdetermined.extend(k for k in solver.pending
                                  if model.energy(k.degree) <= dmax
                                  and k not in report.underdetermined)
    return table, report


def _preimage_energy(model: TargetModel, image_energy: int) -> int:
    """Largest source energy whose doubled class can still fit ``image_energy``."""
    best = 0
    for e in range(1, image_energy + 1):
        B = None
        for cand in itertools.product(*[range(e + 1)] * model.lattice_rank):
            if model.energy(cand) == e:
                B = cand
                break
        if B is not None and model.energy(model.apply_dmap(B)) <= image_energy:
            best = e
    return best


def solve_real_p2(dmax: int, seeds: InvariantTable | None = None,
                  complex_table: InvariantTable | None = None,
                  families: Sequence[str] = ("m12", "m03")):
    return solve_real(p2(), dmax, complex_table=complex_table, seeds=seeds, families=families)


# -- cross check of the two real families --------------------------------------------

@dataclass
class ConsistencyReport:
    dmax: int
    identical: bool
    first_difference: InvariantKey | None = None
    values: tuple = (None, None)
    m12_table: InvariantTable | None = None
    m03_table: InvariantTable | None = None
    errors: dict = field(default_factory=dict)

    def render(self, model=None) -> str:
        if self.identical:
            n = len(self.m12_table.keys(REAL)) if self.m12_table else 0
            return f"m12-only and m03-only tables agree on all {n} real entries through degree {self.dmax}\n"
        lines = ["m12-only and m03-only solves DISAGREE"]
        if self.first_difference is not None:
            lines.append(f"  first differing key {self.first_difference.describe(model)}: "
                         f"m12 -> {self.values[0]}, m03 -> {self.values[1]}")
        for fam, err in self.errors.items():
            lines.append(f"  {fam}: {err}")
        return "\n".join(lines) + "\n"


def cross_consistency(dmax: int, model: TargetModel | None = None,
                      seeds: InvariantTable | None = None,
                      complex_table: InvariantTable | None = None) -> ConsistencyReport:
    """Solve with m12 equations only and with m03 equations only; compare."""
    model = model or p2()
    if complex_table is None:
        complex_table, _ = solve_complex(model, max(1, _preimage_energy(model, dmax + 2)))
    tables, errors = {}, {}
    for fam in ("m12", "m03"):
        try:
            t, rep = solve_real(model, dmax, complex_table=complex_table, seeds=seeds,
                                families=(fam,))
            if rep.underdetermined:
                errors[fam] = "underdetermined: " + ", ".join(
                    k.describe(model) for k in rep.underdetermined)
            tables[fam] = t
        except InconsistencyError as exc:
            errors[fam] = str(exc)
    rep = ConsistencyReport(dmax, False, m12_table=tables.get("m12"),
                            m03_table=tables.get("m03"), errors=errors)
    if len(tables) < 2:
        return rep
    a, b = tables["m12"], tables["m03"]
    keys = sorted(set(a.entries) | set(b.entries), key=InvariantKey.sort_key)
    for k in keys:
        va, vb = a.entries.get(k), b.entries.get(k)
        if va != vb:
            rep.first_difference = k
            rep.values = (va, vb)
            return rep
    rep.identical = not errors
    return rep
