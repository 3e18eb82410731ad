"""Primitive elements of a truncated tensor algebra, checked against Lyndon brackets."""

from primtower.free import (
    Alphabet,
    lyndon_bracket,
    lyndon_primitive_oracle,
    primitive_polys,
    primitives,
    restricted_witt_dimension,
    witt_dimension,
)

spacer = "_" * 60

print("Two letters over Q, words of length up to 5.")
a = Alphabet.standard(2, 0, 5)
for n in range(1, 6):
    dim = primitives(a, n).dim
    print(f"  weight {n}: dim P = {dim}, Witt number = {witt_dimension(2, n)}")

print("\nThe echelon basis in weight 3:")
for z in primitive_polys(a, 3):
    print("  ", z)

print("\nThe standard bracketing of the Lyndon word x.x.y:")
print("  ", lyndon_bracket(a, (0, 0, 1)))
print("Kernel and Lyndon span agree in weight 5:", primitives(a, 5) == lyndon_primitive_oracle(a, 5))

print(spacer)
print("\nOne letter over F_2: x, x^2, x^4 are primitive, x^3 is not.")
b = Alphabet.standard(1, 2, 4)
for n in range(1, 5):
    print(f"  weight {n}: {[str(z) for z in primitive_polys(b, n)]}"
          f"  (expected dim {restricted_witt_dimension(1, n, 2)})")
