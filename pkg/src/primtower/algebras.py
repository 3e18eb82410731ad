"""Small Lie and restricted Lie algebras used in tests, demos and the acceptance suite."""

from __future__ import annotations

from .lie import LieData
from .linalg import Field

Q = Field(0)


def sl2() -> LieData:
    """Basis ``h, x, y`` with ``[h,x] = 2x``, ``[h,y] = -2y``, ``[x,y] = h``."""
    return LieData.antisymmetric(
        Q, ("h", "x", "y"), {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}
    )


def affine_line() -> LieData:
    """The nonabelian 2-dimensional algebra ``[x,y] = y``."""
    return LieData.antisymmetric(Q, ("x", "y"), {(0, 1): {1: 1}})


def heisenberg() -> LieData:
    """``[x,y] = z`` with ``z`` central."""
    return LieData.antisymmetric(Q, ("x", "y", "z"), {(0, 1): {2: 1}})


def abelian(dim: int, field: Field = Q, p_map: dict | None = None) -> LieData:
    names = ("x", "y", "z")[:dim] if dim <= 3 else tuple(f"x{i}" for i in range(dim))
    if field.characteristic and p_map is None:
        p_map = {}
    return LieData(field, names, {}, p_map)


def restricted_catalog(p: int) -> dict[str, LieData]:
    """The restricted algebras of dimension 1 and 2 checked in characteristic ``p``."""
    F = Field(p)
    return {
        f"F{p}_line_trivial": LieData(F, ("x",), {}, {}),
        f"F{p}_line_toral": LieData(F, ("x",), {}, {0: {0: 1}}),
        f"F{p}_plane_trivial": LieData(F, ("x", "y"), {}, {}),
        f"F{p}_plane_nilpotent": LieData(F, ("x", "y"), {}, {0: {1: 1}}),
        f"F{p}_affine": LieData.antisymmetric(F, ("x", "y"), {(0, 1): {1: 1}}, {0: {0: 1}}),
    }


def classical_catalog() -> dict[str, LieData]:
    return {
        "sl2": sl2(),
        "affine_line": affine_line(),
        "heisenberg": heisenberg(),
        "abelian1": abelian(1),
        "abelian2": abelian(2),
        "abelian3": abelian(3),
    }
