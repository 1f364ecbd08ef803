"""
Trace equivalence and shortest witnesses
========================================

Load the counting fixture, compare configurations, and check the answer
against the brute-force oracle.
"""

# %%
# ``D1`` reads ``a^m`` and then at most ``m`` letters ``b``.  Two
# configurations of ``p`` differ once the ``b`` budget runs out.
from doca import Plain, check_equivalence, eqlevel, run
from doca.fixtures import load
from doca.oracle import oracle_eqlevel

D1 = load("D1")
res = eqlevel(D1, Plain("p", 2), Plain("p", 3), 50)
print("eqlevel", res.eqlevel, "witness", "".join(res.witness))

# %%
# The witness is one letter longer than the eqlevel and is enabled on
# exactly one side.
w = res.witness
print(run(D1, Plain("p", 2), w), run(D1, Plain("p", 3), w))

# %%
# The oracle enumerates every trace up to a depth and agrees.
print("oracle", oracle_eqlevel(D1, Plain("p", 2), Plain("p", 3), 12))

# %%
# Zero configurations: ``p(0)`` and ``q(0)`` differ on the first letter.
verdict = check_equivalence(D1, "p", "q")
print(verdict.label, verdict.result.witness)

# %%
# Independence levels compare a configuration with its modular image.
# In ``D4`` the level of ``p(m)`` is exactly ``m``.
from doca import independence_level

D4 = load("D4")
print([independence_level(D4, "p", m, 64) for m in range(8)])
