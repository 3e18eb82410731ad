"""Corrupt a structure constant or a mu0 value and watch the pipeline catch it."""

import random

from primtower.algebras import heisenberg
from primtower.lie import b1_from_lie, corrupt_bracket, corrupt_mu0
from primtower.report import emit, verify_tower_report
from primtower.tower import check_b1_axioms

rng = random.Random(0)
bad, note = corrupt_bracket(heisenberg(), rng)
print("corrupted bracket:", note)
print(emit(verify_tower_report(lie=bad, degree=3)))

obj = b1_from_lie(heisenberg(), 4)
broken, note = corrupt_mu0(obj, random.Random(1))
print("corrupted mu0:", note)
print("associativity witness:", check_b1_axioms(broken).witness)
