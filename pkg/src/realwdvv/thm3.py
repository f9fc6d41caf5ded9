"""Exact certificate that the m12 and complex WDVV relations imply m03.

Work with free jet values: ``P[a][b][c]`` for third partials of the doubled
complex potential, ``O2[a][b]``, ``OU[a]`` and ``OUU`` for the second
partials of the real potential.  Writing ``r12(a,b)`` and ``rc(a,b,c,i)``
for the two residuals, the identity

    OUU * m03(a,b,c) =   OU[c] r12(a,b) - OU[b] r12(a,c)
                       + sum P[a,b,l] g^lm r12(c,m) - sum P[a,c,l] g^lm r12(b,m)
                       - sum rc(a,b,c,i) g^ij OU[j]

holds as a polynomial identity.  It follows by multiplying the m12 relation
for (a,b) by ``OU[c]``, substituting the m12 relation for (c,m) into the
third-partial terms, and closing up with associativity of the complex part.

Jet entries may be Fractions or truncated Series; only ``+``, ``-`` and
``*`` are used.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .series import Series, StructuralError

__all__ = [
    "JetInstance",
    "Certificate",
    "CERTIFICATE",
    "CertificateCheck",
    "r12",
    "rc",
    "m03res",
    "certificate_rhs",
    "verify_certificate",
    "random_instance",
    "run_trials",
    "series_jet",
]


@dataclass
class JetInstance:
    ginv: list
    phi3: list
    omega2: list
    omega_u: list
    omega_uu: Any

    @property
    def n(self) -> int:
        return len(self.ginv)

    def validate(self):
        n = self.n
        if any(len(r) != n for r in self.ginv) or len(self.omega_u) != n:
            raise StructuralError("jet arrays do not share one size")
        for a in range(n):
            for b in range(n):
                if self.ginv[a][b] != self.ginv[b][a]:
                    raise StructuralError("inverse pairing must be symmetric")
                if self.omega2[a][b] != self.omega2[b][a]:
                    raise StructuralError("Omega2 must be symmetric")
                for c in range(n):
                    v = self.phi3[a][b][c]
                    if not (v == self.phi3[b][a][c] == self.phi3[a][c][b]):
                        raise StructuralError("Phi3 must be fully symmetric")
        return self

    def _ginv_terms(self):
        return [(i, j, g) for i, row in enumerate(self.ginv) for j, g in enumerate(row) if g]


@dataclass(frozen=True)
class Certificate:
    """Coefficients of ``OU[c] r12(a,b)``, ``OU[b] r12(a,c)``,
    ``P g r12(c,.)``, ``P g r12(b,.)`` and ``rc g OU``."""

    coefficients: tuple[int, int, int, int, int]


CERTIFICATE = Certificate((1, -1, 1, -1, -1))


def _check(inst: JetInstance, *idx):
    for i in idx:
        if not 0 <= i < inst.n:
            raise IndexError(f"index {i} out of range for N={inst.n}")


def _total(terms, like):
    out = None
    for t in terms:
        out = t if out is None else out + t
    return like * 0 if out is None else out


def r12(inst: JetInstance, a: int, b: int):
    _check(inst, a, b)
    P, OU = inst.phi3, inst.omega_u
    s = _total((P[a][b][i] * g * OU[j] for i, j, g in inst._ginv_terms()), inst.omega_uu)
    return s + inst.omega2[a][b] * inst.omega_uu - OU[a] * OU[b]


def rc(inst: JetInstance, a: int, b: int, c: int, i: int):
    _check(inst, a, b, c, i)
    P = inst.phi3
    return _total((P[a][b][l] * g * P[m][c][i] - P[a][c][l] * g * P[m][b][i]
                   for l, m, g in inst._ginv_terms()), inst.omega_uu)


def m03res(inst: JetInstance, a: int, b: int, c: int):
    _check(inst, a, b, c)
    P, O2, OU = inst.phi3, inst.omega2, inst.omega_u
    s = _total((P[a][b][i] * g * O2[j][c] - P[a][c][i] * g * O2[j][b]
                for i, j, g in inst._ginv_terms()), inst.omega_uu)
    return s + O2[a][b] * OU[c] - O2[a][c] * OU[b]


def certificate_rhs(inst: JetInstance, a: int, b: int, c: int,
                    cert: Certificate = CERTIFICATE):
    _check(inst, a, b, c)
    k1, k2, k3, k4, k5 = cert.coefficients
    P, OU = inst.phi3, inst.omega_u
    gt = inst._ginv_terms()
    like = inst.omega_uu
    t3 = _total((P[a][b][l] * g * r12(inst, c, m) for l, m, g in gt), like)
    t4 = _total((P[a][c][l] * g * r12(inst, b, m) for l, m, g in gt), like)
    t5 = _total((rc(inst, a, b, c, i) * g * OU[j] for i, j, g in gt), like)
    return (OU[c] * r12(inst, a, b) * k1 + OU[b] * r12(inst, a, c) * k2
            + t3 * k3 + t4 * k4 + t5 * k5)


@dataclass
class CertificateCheck:
    indices: tuple[int, int, int]
    lhs: Any
    rhs: Any

    omega_uu: Any = None

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs

    @property
    def division_step(self) -> str:
        """Whether ``m03 = 0`` may be read off from ``OUU * m03 = 0``.

        A nonzero scalar can be cancelled.  For series the cancellation needs
        ``OUU`` to be a non-zero-divisor, which truncation can break, so it
        is flagged rather than decided.
        """
        if isinstance(self.omega_uu, Series):
            return "unchecked"
        if self.omega_uu is None:
            return "unknown"
        return "holds" if self.omega_uu != 0 else "fails"

    def to_dict(self) -> dict:
        def fmt(x):
            return x.render() if isinstance(x, Series) else str(Fraction(x))
        return {"indices": list(self.indices), "lhs": fmt(self.lhs), "rhs": fmt(self.rhs),
                "passed": self.passed, "division_step": self.division_step}


def verify_certificate(inst: JetInstance, a: int, b: int, c: int,
                       cert: Certificate = CERTIFICATE) -> CertificateCheck:
    """Compare ``OUU * m03(a,b,c)`` with the certificate combination."""
    lhs = inst.omega_uu * m03res(inst, a, b, c)
    return CertificateCheck((a, b, c), lhs, certificate_rhs(inst, a, b, c, cert), inst.omega_uu)


def _rand(rng, lo, hi):
    num = rng.randint(lo, hi)
    den = rng.randint(1, hi if hi > 0 else 1)
    return Fraction(num, den)


def random_instance(n: int, rng: random.Random, lo: int = -9, hi: int = 9) -> JetInstance:
    """Random symmetric jet with an invertible symmetric ``ginv``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    while True:
        g = [[Fraction(0)] * n for _ in range(n)]
        for a in range(n):
            for b in range(a, n):
                g[a][b] = g[b][a] = _rand(rng, lo, hi)
        if _det(g) != 0:
            break
    P = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            for c in range(b, n):
                v = _rand(rng, lo, hi)
                for x, y, z in {(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)}:
                    P[x][y][z] = v
    O2 = [[Fraction(0)] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            O2[a][b] = O2[b][a] = _rand(rng, lo, hi)
    OU = [_rand(rng, lo, hi) for _ in range(n)]
    return JetInstance(g, P, O2, OU, _rand(rng, lo, hi))


def _det(m) -> Fraction:
    m = [list(r) for r in m]
    n, det = len(m), Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


@dataclass
class TrialReport:
    n: int
    seed: int
    trials: int
    failures: list = field(default_factory=list)
    not_cancellable: int = 0

    @property
    def passed(self) -> int:
        return self.trials - len(self.failures)

    def to_dict(self) -> dict:
        return {"N": self.n, "seed": self.seed, "trials": self.trials,
                "passed": self.passed, "failures": self.failures,
                "not_cancellable": self.not_cancellable}


def run_trials(n: int, trials: int, seed: int = 0, lo: int = -9, hi: int = 9,
               cert: Certificate = CERTIFICATE) -> TrialReport:
    """Check the certificate on random instances, one random index triple each."""
    rng = random.Random(f"{seed}:{n}")
    rep = TrialReport(n, seed, trials)
    for t in range(trials):
        inst = random_instance(n, rng, lo, hi)
        a, b, c = (rng.randrange(n) for _ in range(3))
        chk = verify_certificate(inst, a, b, c, cert)
        if not chk.passed:
            rep.failures.append({"trial": t, **chk.to_dict()})
        if chk.division_step != "holds":
            rep.not_cancellable += 1
    return rep


def series_jet(phi_phi: Series, omega: Series, ginv: Sequence[Sequence]) -> JetInstance:
    """Jet whose entries are the partials of solved potentials themselves."""
    from .wdvv import Derivatives

    if phi_phi.ring != omega.ring:
        raise StructuralError("both potentials must live in one ring")
    F, X = Derivatives(phi_phi), Derivatives(omega)
    n, u = omega.ring.n_t, omega.ring.u_index
    P = [[[F(a, b, c) for c in range(n)] for b in range(n)] for a in range(n)]
    O2 = [[X(a, b) for b in range(n)] for a in range(n)]
    OU = [X(a, u) for a in range(n)]
    g = [[Fraction(x) for x in row] for row in ginv]
    return JetInstance(g, P, O2, OU, X(u, u))
