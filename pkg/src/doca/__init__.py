"""Deterministic one-counter automata in reset form.

Trace equivalence with shortest witnesses, independence levels, shortest
positive paths, a regularity check, the reduction from classical language
equivalence, generators and a brute-force oracle for differential testing.
"""

from .equivalence import (
                          AtLeast,
                          EqlevelTuple,
                          EqResult,
                          EqVerdict,
                          check_equivalence,
                          default_bound,
                          eqlevel,
                          eqlevel_tuple,
                          independence_level,
                          min_attained_twice,
                          zero_eqlevels,
)
from .model import ClassicalDoca, Doca, ParseError, Rule, decode, encode, validate
from .semantics import (
                          FixRes,
                          ModTuple,
                          Plain,
                          ResetCfg,
                          delta_lcm,
                          enabled,
                          mod_of,
                          normalize,
                          run,
                          step,
)

__all__ = [
    "AtLeast", "ClassicalDoca", "Doca", "EqResult", "EqVerdict", "EqlevelTuple", "FixRes",
    "ModTuple", "ParseError", "Plain", "ResetCfg", "Rule", "check_equivalence", "decode",
    "default_bound", "delta_lcm", "enabled", "encode", "eqlevel", "eqlevel_tuple",
    "independence_level", "min_attained_twice", "mod_of", "normalize", "run", "step",
    "validate", "zero_eqlevels",
]
