"""The tower for sl2: a level-1 object, its quotient L1, the unit eta1 and the enveloping algebra."""

from primtower.algebras import sl2
from primtower.lie import build_enveloping, compare_L1_with_enveloping, extract_lie, b1_from_lie
from primtower.tower import (
    build_L1,
    check_b1_axioms,
    check_b2,
    coequalizer_check,
    idempotency_check,
    quotient_coproduct_check,
)

D = 4
L = sl2()
obj = b1_from_lie(L, D)
print(f"mu0 is given on {len(obj.basis)} echelon primitives of weight <= {D}.")
z = obj.basis[3][2]
print(f"For example mu0({z}) = {obj.mu0_poly(z)}")

print("\nUnit and associativity laws:", check_b1_axioms(obj).ok)

q = build_L1(obj)
print("\nL1 = T(V0) / (z - b(z)) has cumulative dimensions", q.dims)
print("stable across slack values:", q.dims_by_slack)
print("coproduct descends:", quotient_coproduct_check(q).ok)
print("coequalizer identities:", coequalizer_check(obj, q).ok)

h, x, y = q.source.letters()
print("\nIn L1 the commutator x.y - y.x reduces to", q.normal_form(x * y - y * x))

cert = check_b2(obj, q=q)
print("\neta1 : V0 -> P(L1) is an isomorphism on degrees <=", cert.window, ":", cert.iso)
print("mu1 = eta1^-1 is a two-sided inverse:", idempotency_check(cert).ok)

env = build_enveloping(extract_lie(obj), D)
print("\nPBW dimensions of U(sl2):", env.dims)
print("L1 agrees with U(sl2):", compare_L1_with_enveloping(obj, env, q).ok)
