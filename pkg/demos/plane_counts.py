# %% [markdown]
# # Complex and real counts of rational plane curves
#
# Solve the associativity equations for the projective plane, then the
# extended real equations, and check the results against each other.

# %%
from __future__ import annotations

from realwdvv import REAL, InvariantKey, p2, solve_complex, solve_real
from realwdvv.potentials import assemble_omega, assemble_phi, assemble_phi_phi
from realwdvv.wdvv import cross_consistency, residual_sweep

model = p2()
complex_table, complex_report = solve_complex(model, 5)
for d in range(1, 6):
    key = InvariantKey.complex((d,), (0, 0, 3 * d - 1))
    print(f"N_{d} = {complex_table[key]}")

# %% [markdown]
# Every count after the first is forced by the equations.  The report says
# how many independent equations pinned each value down.

# %%
print(complex_report.render(model))

# %% [markdown]
# ## Real counts
#
# Two real seeds (the line through a conjugate pair, the line through two
# real points) are enough to solve for every W_d(k, l).

# %%
real_table, real_report = solve_real(model, 4, complex_table=complex_table)
for key in real_table.keys(REAL):
    if any(key.degree):
        d = key.degree[0]
        n = complex_table[InvariantKey.complex((d,), (0, 0, 3 * d - 1))]
        print(f"W_{d}(k={key.k}, l={key.insertions[2]}) = {real_table[key]}   (N_{d} = {n})")

# %% [markdown]
# ## Residuals vanish on the solved potentials

# %%
T, E = 9, 4
residuals = residual_sweep(model, phi=assemble_phi(complex_table, T, E),
                           phi_phi=assemble_phi_phi(complex_table, model, T, E),
                           omega=assemble_omega(real_table, T, E))
print(sum(r.series.is_zero() for r in residuals), "of", len(residuals), "residuals vanish")

# %% [markdown]
# ## Solving with either real family alone gives the same table

# %%
print(cross_consistency(3, model, complex_table=complex_table).render(model))
