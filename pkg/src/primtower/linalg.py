"""Exact sparse linear algebra over the rationals and prime fields.

Vectors are plain ``dict`` objects mapping a column index to a nonzero
scalar.  Rational scalars are ``gmpy2.mpq`` values; scalars of a prime field
are Python ints in ``range(p)``.  Nothing here ever rounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import gmpy2
from gmpy2 import mpq

SparseVector = dict
_MPQ = type(mpq(0))


class FieldMismatchError(ValueError):
    """Raised when scalars or maps from different fields are combined."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return bool(gmpy2.is_prime(n))


@dataclass(frozen=True)
class Field:
    """The ground field: ``Field(0)`` is Q, ``Field(p)`` is F_p."""

    characteristic: int = 0

    def __post_init__(self):
        c = self.characteristic
        if not isinstance(c, int) or c < 0 or (c != 0 and not _is_prime(c)):
            raise ValueError(f"characteristic must be 0 or a prime, got {c!r}")

    @property
    def zero(self):
        return mpq(0) if self.characteristic == 0 else 0

    @property
    def one(self):
        return mpq(1) if self.characteristic == 0 else 1

    def __call__(self, value):
        """Coerce an int, Fraction, mpq or serialized string to a canonical scalar."""
        if isinstance(value, str):
            return self.parse(value)
        p = self.characteristic
        if p == 0:
            if isinstance(value, (int, Fraction, _MPQ)):
                return mpq(value)
            raise FieldMismatchError(f"cannot read {value!r} as a rational")
        if isinstance(value, bool):
            return int(value) % p
        if isinstance(value, int):
            return value % p
        q = Fraction(value) if not isinstance(value, Fraction) else value
        if q.denominator % p == 0:
            raise ZeroDivisionError(f"{value!r} has no image in F_{p}")
        return q.numerator * pow(q.denominator, -1, p) % p

    def check(self, a) -> None:
        """Raise :class:`FieldMismatchError` unless ``a`` is canonical here."""
        p = self.characteristic
        if p == 0:
            if type(a) is not _MPQ:
                raise FieldMismatchError(f"{a!r} is not a rational scalar")
        elif type(a) is not int or not 0 <= a < p:
            raise FieldMismatchError(f"{a!r} is not a residue mod {p}")

    def parse(self, text: str):
        text = text.strip()
        p = self.characteristic
        if p == 0:
            if "/" in text:
                num, den = text.split("/")
                if int(den) == 0:
                    raise ZeroDivisionError(text)
                return mpq(int(num), int(den))
            return mpq(int(text))
        if "/" in text:
            return self(Fraction(text))
        return int(text) % p

    def format(self, a) -> str:
        if self.characteristic == 0:
            a = mpq(a)
            if a.denominator == 1:
                return str(a.numerator)
            return f"{a.numerator}/{a.denominator}"
        return str(int(a) % self.characteristic)

    def add(self, a, b):
        p = self.characteristic
        return a + b if p == 0 else (a + b) % p

    def sub(self, a, b):
        p = self.characteristic
        return a - b if p == 0 else (a - b) % p

    def mul(self, a, b):
        p = self.characteristic
        return a * b if p == 0 else (a * b) % p

    def neg(self, a):
        p = self.characteristic
        return -a if p == 0 else (-a) % p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("division by zero scalar")
        p = self.characteristic
        return 1 / mpq(a) if p == 0 else pow(a, -1, p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, n: int):
        p = self.characteristic
        return a**n if p == 0 else pow(a, n, p)

    def elements(self):
        """All elements, for prime fields only."""
        if self.characteristic == 0:
            raise ValueError("Q is infinite")
        return range(self.characteristic)

    def __str__(self):
        return "Q" if self.characteristic == 0 else f"F_{self.characteristic}"


# ----------------------------------------------------------------------------
# sparse vector kernels


def axpy(field: Field, y: dict, a, x: Mapping) -> None:
    """In place ``y += a * x``; zero entries are deleted."""
    p = field.characteristic
    get = y.get
    if p == 0:
        for k, v in x.items():
            s = get(k, 0) + a * v
            if s:
                y[k] = s
            else:
                y.pop(k, None)
    else:
        for k, v in x.items():
            s = (get(k, 0) + a * v) % p
            if s:
                y[k] = s
            else:
                y.pop(k, None)


def scaled(field: Field, a, x: Mapping) -> dict:
    if not a:
        return {}
    p = field.characteristic
    if p == 0:
        return {k: a * v for k, v in x.items()}
    return {k: a * v % p for k, v in x.items()}


def combine(field: Field, pairs: Iterable[tuple[object, Mapping]]) -> dict:
    """Sum of ``a * x`` over ``(a, x)`` pairs."""
    out: dict = {}
    for a, x in pairs:
        if a:
            axpy(field, out, a, x)
    return out


class Echelon:
    """Incrementally maintained reduced row-echelon form.

    Every stored row has a leading 1 at its pivot (the smallest column
    index in the row) and no entries in any other row's pivot column.
    """

    def __init__(self, field: Field):
        self.field = field
        self.rows: dict[int, dict] = {}
        self._holders: dict[int, set[int]] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: Mapping) -> dict:
        f = self.field
        out = dict(vec)
        rows = self.rows
        for c in [c for c in out if c in rows]:
            a = out.get(c)
            if a:
                axpy(f, out, f.neg(a), rows[c])
        return out

    def add(self, vec: Mapping) -> dict | None:
        """Insert ``vec``; return the reduced vector that was added or ``None``."""
        f = self.field
        r = self.reduce(vec)
        if not r:
            return None
        snapshot = dict(r)
        piv = min(r)
        lead = r[piv]
        if lead != 1:
            r = scaled(f, f.inv(lead), r)
        holders = self._holders
        for q in holders.pop(piv, ()):
            row = self.rows[q]
            before = set(row)
            axpy(f, row, f.neg(row[piv]), r)
            after = set(row)
            for c in before - after:
                if c != piv:
                    holders[c].discard(q)
            for c in after - before:
                holders.setdefault(c, set()).add(q)
        for c in r:
            if c != piv:
                holders.setdefault(c, set()).add(piv)
        self.rows[piv] = r
        return snapshot

    def holders(self, col: int) -> set[int]:
        """Pivots of the rows that have a nonzero entry in non-pivot column ``col``."""
        return self._holders.get(col, set())

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def sorted_rows(self) -> tuple[dict, ...]:
        return tuple(self.rows[c] for c in sorted(self.rows))


def rref(rows: Iterable, field: Field, ncols: int | None = None):
    """Reduced row-echelon form of a matrix given by sparse or dense rows.

    Returns ``(rows, pivots)`` with the echelon rows sparse and pivot columns
    strictly increasing.  Every entry must be canonical in ``field``.
    """
    ech = Echelon(field)
    for row in rows:
        vec = _as_sparse(row, field, ncols)
        for v in vec.values():
            field.check(v)
        ech.add(vec)
    return ech.sorted_rows(), tuple(ech.pivots())


def _as_sparse(row, field: Field, ncols: int | None) -> dict:
    if isinstance(row, Mapping):
        vec = {k: v for k, v in row.items() if v}
        if ncols is not None and any(not 0 <= k < ncols for k in vec):
            raise ValueError("row index out of range")
        return vec
    row = list(row)
    if ncols is not None and len(row) != ncols:
        raise ValueError(f"row of length {len(row)}, expected {ncols}")
    return {i: v for i, v in enumerate(row) if v}


def to_dense(vec: Mapping, n: int, field: Field) -> list:
    z = field.zero
    return [vec.get(i, z) for i in range(n)]


# ----------------------------------------------------------------------------
# bases, maps, subspaces


class Basis:
    """An ordered tuple of distinct string labels."""

    __slots__ = ("labels", "_index", "_hash")

    def __init__(self, labels: Iterable[str]):
        self.labels = tuple(labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise ValueError("basis labels must be distinct")
        self._hash = hash(self.labels)

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __getitem__(self, i):
        return self.labels[i]

    def __contains__(self, label):
        return label in self._index

    def index(self, label: str) -> int:
        return self._index[label]

    def __eq__(self, other):
        return isinstance(other, Basis) and self.labels == other.labels

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if len(self.labels) > 6:
            return f"Basis({list(self.labels[:6])} + {len(self.labels) - 6} more)"
        return f"Basis({list(self.labels)})"


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Matrix with explicit bases; ``columns[j]`` is the image of ``domain[j]``."""

    field: Field
    domain: Basis
    codomain: Basis
    columns: tuple

    def __post_init__(self):
        if len(self.columns) != len(self.domain):
            raise ValueError("column count must equal domain dimension")
        m = len(self.codomain)
        for col in self.columns:
            for i, v in col.items():
                if not 0 <= i < m:
                    raise ValueError("row index outside codomain")
                if not v:
                    raise ValueError("explicit zero in sparse column")

    @classmethod
    def from_columns(cls, field, domain, codomain, columns):
        cols = tuple({i: v for i, v in col.items() if v} for col in columns)
        return cls(field, domain, codomain, cols)

    @classmethod
    def from_dense(cls, field: Field, domain: Basis, codomain: Basis, rows: Sequence[Sequence]):
        """Build from a row-major dense matrix (``len(codomain)`` rows)."""
        cols = [{} for _ in domain]
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                v = field(v)
                if v:
                    cols[j][i] = v
        return cls(field, domain, codomain, tuple(cols))

    @classmethod
    def identity(cls, field: Field, basis: Basis):
        return cls(field, basis, basis, tuple({i: field.one} for i in range(len(basis))))

    @classmethod
    def zero(cls, field: Field, domain: Basis, codomain: Basis):
        return cls(field, domain, codomain, tuple({} for _ in domain))

    @property
    def shape(self):
        return len(self.codomain), len(self.domain)

    def apply(self, vec: Mapping) -> dict:
        f = self.field
        return combine(f, ((a, self.columns[j]) for j, a in vec.items()))

    def rows(self) -> list[dict]:
        out = [{} for _ in self.codomain]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def to_dense(self) -> list[list]:
        m, n = self.shape
        z = self.field.zero
        dense = [[z] * n for _ in range(m)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                dense[i][j] = v
        return dense

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        _check_compatible(self, other)
        f = self.field
        cols = []
        for a, b in zip(self.columns, other.columns):
            c = dict(a)
            axpy(f, c, f.neg(f.one), b)
            cols.append(c)
        return LinearMap(f, self.domain, self.codomain, tuple(cols))

    def __eq__(self, other):
        return (
            isinstance(other, LinearMap)
            and self.field == other.field
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.columns == other.columns
        )

    def __hash__(self):
        return hash((self.field, self.domain, self.codomain))

    def rank(self) -> int:
        return len(rref(self.columns, self.field)[1])


def _check_compatible(f: LinearMap, g: LinearMap) -> None:
    if f.field != g.field:
        raise FieldMismatchError("maps over different fields")
    if f.domain != g.domain or f.codomain != g.codomain:
        raise ValueError("maps with different bases")


def compose(f: LinearMap, g: LinearMap) -> LinearMap:
    """``f ∘ g``."""
    if f.field != g.field:
        raise FieldMismatchError("maps over different fields")
    if g.codomain != f.domain:
        raise ValueError("codomain of g is not the domain of f")
    cols = tuple(f.apply(col) for col in g.columns)
    return LinearMap(f.field, g.domain, f.codomain, cols)


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace stored as its unique reduced row-echelon basis."""

    field: Field
    ambient: Basis
    rows: tuple
    pivots: tuple = dc_field(default=())

    @classmethod
    def span(cls, field: Field, ambient: Basis, vectors: Iterable) -> "Subspace":
        rows, pivots = rref(vectors, field, ncols=len(ambient))
        return cls(field, ambient, rows, pivots)

    @classmethod
    def zero(cls, field: Field, ambient: Basis) -> "Subspace":
        return cls(field, ambient, (), ())

    @classmethod
    def full(cls, field: Field, ambient: Basis) -> "Subspace":
        rows = tuple({i: field.one} for i in range(len(ambient)))
        return cls(field, ambient, rows, tuple(range(len(ambient))))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self):
        return len(self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient == other.ambient
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.ambient, self.pivots))

    def __contains__(self, vec) -> bool:
        return membership_coords(vec, self) is not None

    def issubspace(self, other: "Subspace") -> bool:
        return all(r in other for r in self.rows)

    def dense_rows(self) -> list[list]:
        return [to_dense(r, len(self.ambient), self.field) for r in self.rows]

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={len(self.ambient)}, over {self.field})"


def kernel_basis(f: LinearMap) -> Subspace:
    """``{v : f(v) = 0}`` in canonical form."""
    field = f.field
    ech = Echelon(field)
    for row in f.rows():
        if row:
            ech.add(row)
    neg1 = field.neg(field.one)
    vectors = []
    for j in range(len(f.domain)):
        if j in ech.rows:
            continue
        v = {j: field.one}
        for piv in ech.holders(j):
            v[piv] = field.mul(neg1, ech.rows[piv][j])
        vectors.append(v)
    return Subspace.span(field, f.domain, vectors)


def image_basis(f: LinearMap) -> Subspace:
    return Subspace.span(f.field, f.codomain, f.columns)


def membership_coords(v, s: Subspace) -> list | None:
    """Coordinates of ``v`` against ``s.rows``, or ``None`` when ``v`` is not in ``s``."""
    n = len(s.ambient)
    if isinstance(v, Mapping):
        if any(not 0 <= k < n for k in v):
            raise ValueError("vector index outside the ambient space")
        vec = {k: x for k, x in v.items() if x}
    else:
        v = list(v)
        if len(v) != n:
            raise ValueError(f"vector of length {len(v)} in a space of dimension {n}")
        vec = {i: x for i, x in enumerate(v) if x}
    f = s.field
    coords = []
    rest = dict(vec)
    for piv, row in zip(s.pivots, s.rows):
        a = rest.get(piv, f.zero)
        coords.append(a)
        if a:
            axpy(f, rest, f.neg(a), row)
    if rest:
        return None
    return coords


def quotient_basis(ambient: Basis, s: Subspace):
    """Normal-form data for ``ambient / s``.

    Returns ``(representatives, projection)``: the non-pivot labels and the
    map sending each ambient label to its normal form in those labels.
    """
    if s.ambient != ambient:
        raise ValueError("subspace does not live in this ambient basis")
    f = s.field
    pivset = dict(zip(s.pivots, s.rows))
    reps = [i for i in range(len(ambient)) if i not in pivset]
    pos = {i: k for k, i in enumerate(reps)}
    target = Basis(ambient[i] for i in reps)
    cols = []
    for i in range(len(ambient)):
        if i in pivset:
            row = pivset[i]
            cols.append({pos[j]: f.neg(a) for j, a in row.items() if j != i})
        else:
            cols.append({pos[i]: f.one})
    return list(target.labels), LinearMap(f, ambient, target, tuple(cols))


def preimage(f: LinearMap, v: Mapping) -> dict | None:
    """Some ``x`` with ``f(x) = v`` (free coordinates set to zero), or ``None``."""
    field = f.field
    n = len(f.domain)
    ech = Echelon(field)
    rows = f.rows()
    for i, row in enumerate(rows):
        r = dict(row)
        if i in v and v[i]:
            r[n] = v[i]
        if r:
            ech.add(r)
    if n in ech.rows:
        return None
    return {piv: row[n] for piv, row in ech.rows.items() if n in row}


def inverse(f: LinearMap) -> LinearMap:
    """Inverse of a bijective map; raises ``ValueError`` otherwise."""
    m, n = f.shape
    if m != n or f.rank() != n:
        raise ValueError("map is not invertible")
    cols = []
    for i in range(m):
        x = preimage(f, {i: f.field.one})
        cols.append(x)
    return LinearMap(f.field, f.codomain, f.domain, tuple(cols))
