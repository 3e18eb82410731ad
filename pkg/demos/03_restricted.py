"""Restricted Lie algebras in characteristic p and their restricted enveloping algebras."""

from primtower.algebras import restricted_catalog
from primtower.lie import b1_from_lie, build_enveloping, check_lie_axioms, extract_lie
from primtower.tower import build_L1, check_b2

for p in (2, 3):
    print(f"characteristic {p}, window D = {p + 1}")
    for name, L in restricted_catalog(p).items():
        obj = b1_from_lie(L, p + 1)
        q = build_L1(obj)
        env = build_enveloping(extract_lie(obj), p + 1, restricted=True)
        print(f"  {name:22} L1 dims {q.dims}  u dims {env.dims}  eta1 iso {check_b2(obj, q=q).iso}")

print("\nThe p-operation is semilinear, not linear: the Jacobson formula supplies cross terms.")
L = restricted_catalog(3)["F3_affine"]
x, y = {0: 1}, {1: 1}
print("  x^[3] =", L.p_power(x), " y^[3] =", L.p_power(y), " (x+y)^[3] =", L.p_power({0: 1, 1: 1}))
print("  axioms:", check_lie_axioms(L).ok)
