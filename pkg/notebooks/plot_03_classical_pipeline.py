"""
From language equivalence to trace equivalence
==============================================

Two classical machines with silent rules become one reset-form doca whose
start configurations are trace equivalent exactly when the languages agree.
"""

# %%
# The first machine accepts ``a^m b_i`` when the ``i``-th prime divides
# ``m``; the second swaps the primes.
from doca import Plain, eqlevel
from doca.generators import gen_prime_classical
from doca.oracle import accepts, language_difference
from doca.transform import build_instance, strip_acceptance

C1, C2 = gen_prime_classical([2, 3]), gen_prime_classical([3, 2])
D, p, q = build_instance(C1, C2)
print(D.k, "states,", len(D.reset_states), "reset states")

# %%
# The engine finds a witness; dropping the acceptance letter gives a word
# in exactly one language.
res = eqlevel(D, Plain(p, 0), Plain(q, 0), 40)
w = strip_acceptance(D, res.witness)
print(w, accepts(C1, w), accepts(C2, w))
print("direct comparison", language_difference(C1, C2, 10))

# %%
# A machine against itself yields no witness within the bound.
D, p, q = build_instance(C1, C1)
print(eqlevel(D, Plain(p, 0), Plain(q, 0), 40).eqlevel)
