"""
Positive paths and regularity
=============================

Shortest paths that keep the counter positive, the affine shape of
independence levels, and the pumping-pattern regularity check.
"""

# %%
# A long climb in ``D1``: from ``p(1)`` the shortest positive path to
# ``q(500)`` pumps the ``a`` loop and ends with one ``b``.
from doca.fixtures import load
from doca.paths import il_affine_form, shortest_positive_path

D1 = load("D1")
dec = shortest_positive_path(D1, "p", 1, "q", 500)
print("length", dec.length, "cycle", dec.cycle, "x", dec.reps, "post", dec.post)

# %%
# For large ``m`` the independence level of ``p(m)`` in ``D4`` follows an
# affine form ``rho * m + sigma``.
D4 = load("D4")
for form in il_affine_form(D4, "p", 64):
    print(form, form.value(40))

# %%
# ``D1`` is non-regular from ``p(0)``; the certificate can be replayed.
from doca.analysis import is_regular, replay_certificate

verdict = is_regular(D1, "p", 0, 64)
print(verdict.verdict, verdict.certificate)
print("replays", replay_certificate(D1, "p", 0, verdict.certificate, 64))

# %%
# The prime family keeps its counter but only tests it modulo small
# primes, so every member is regular.
from doca.generators import gen_prime_family

for n in (1, 2, 3):
    A, start = gen_prime_family(n)
    print(n, A.k, is_regular(A, start, 0, 64).verdict)
