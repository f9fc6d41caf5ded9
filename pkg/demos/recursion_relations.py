# %% [markdown]
# # psi_1 as a sum of boundary divisors
#
# Rebuild the relation for psi_1 one marked point at a time, starting from a
# space that is a single point, and compare with the closed-form sum.

# %%
from __future__ import annotations

import random

from realwdvv.thm3 import random_instance, run_trials, verify_certificate
from realwdvv.trr import derive_thm1, derive_thm2, exponent_vectors, pair_thm1

d = derive_thm1(5, 2, 3)
for step in d.steps:
    print(step)
print("matches the stated sum:", d.match)

# %% [markdown]
# The real moduli spaces follow the same pattern, with an extra map that
# forgets a real point and adds no correction.

# %%
for k, l, i in [(1, 2, None), (0, 3, 2), (2, 3, None), (1, 3, 3)]:
    r = derive_thm2(k, l, i)
    print(f"{r.case}: psi_1 = {r.derived.render()}  match={r.match}")

# %% [markdown]
# ## Numerical cross-check
#
# Pair both sides with every psi monomial of complementary degree.

# %%
l = 6
pairs = [pair_thm1(l, 2, 3, a) for a in exponent_vectors(l, l - 4)]
print(f"l={l}: {len(pairs)} pairings, all equal: {all(x == y for x, y in pairs)}")

# %% [markdown]
# ## The real equation of the second kind follows from the first
#
# On an arbitrary jet of partial derivatives the certificate expresses
# d_u^2 Omega times the second residual through the first residuals and
# associativity.  Check it exactly on random rational data.

# %%
chk = verify_certificate(random_instance(3, random.Random(1)), 0, 1, 2)
print("lhs =", chk.lhs, " rhs =", chk.rhs)
for n in (1, 2, 3, 4):
    print(f"N={n}:", run_trials(n, 100, seed=7).passed, "of 100 trials pass")
