"""The first two levels of the monadic tower of the primitives functor.

Level 0 is a vector space ``V0`` (a tuple of letter names).  Level 1 is an
algebra ``(V0, mu0)`` over the monad ``P T``; level 2 adds
``mu1 : P L1 V1 -> V0``.  All statements are truncated at a cap ``D``:
primitives of ``T V0`` are computed in weights ``1..D`` and quotient
algebras are computed on the filtration piece of degree ``<= D``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Mapping, Sequence

from .checks import Check, StabilizationError
from .free import Alphabet, NCPoly, evaluate, primitive_polys, primitives, word_coproduct
from .linalg import (
    Basis,
    Echelon,
    Field,
    LinearMap,
    Subspace,
    axpy,
    combine,
    compose,
    image_basis,
    inverse,
    kernel_basis,
    membership_coords,
    quotient_basis,
)

DEFAULT_SLACK = 2


class NotPrimitiveError(ValueError):
    pass


# ----------------------------------------------------------------------------
# the primitive basis of P T V0


@lru_cache(maxsize=None)
def primitive_basis(alphabet: Alphabet) -> tuple:
    """``(weight, index, poly)`` for the echelon primitives of weights ``1..cap``."""
    out = []
    for n in range(1, alphabet.cap + 1):
        for i, z in enumerate(primitive_polys(alphabet, n)):
            out.append((n, i, z))
    return tuple(out)


def primitive_label(n: int, i: int) -> str:
    return f"P{n}[{i}]"


@lru_cache(maxsize=None)
def primitive_labels(alphabet: Alphabet) -> Basis:
    return Basis(primitive_label(n, i) for n, i, _ in primitive_basis(alphabet))


@lru_cache(maxsize=None)
def generator_alphabet(alphabet: Alphabet) -> Alphabet:
    """Weighted alphabet of ``T(P T V0)``: one letter per echelon primitive."""
    basis = primitive_basis(alphabet)
    return Alphabet(
        alphabet.field,
        tuple(primitive_label(n, i) for n, i, _ in basis),
        alphabet.cap,
        tuple(n for n, _, _ in basis),
    )


def letters_poly(alphabet: Alphabet, vec: Mapping) -> NCPoly:
    return NCPoly(alphabet, {(i,): c for i, c in vec.items()})


def primitive_coords(alphabet: Alphabet, z: NCPoly) -> dict:
    """Coordinates of a (possibly inhomogeneous) primitive in the echelon basis."""
    out = {}
    labels = primitive_labels(alphabet)
    for n in z.weights():
        if n == 0:
            raise NotPrimitiveError(f"{z} has a constant term")
        if n > alphabet.cap:
            raise NotPrimitiveError(f"{z} exceeds the cap")
        coords = membership_coords(z.vector(n), primitives(alphabet, n))
        if coords is None:
            raise NotPrimitiveError(f"weight-{n} part of {z} is not primitive")
        for i, c in enumerate(coords):
            if c:
                out[labels.index(primitive_label(n, i))] = c
    return out


# ----------------------------------------------------------------------------
# level 1 objects


@dataclass(frozen=True, eq=False)
class B1Object:
    """``(V0, mu0)`` with ``mu0`` given on the echelon primitive basis up to ``cap``."""

    field: Field
    names: tuple
    cap: int
    mu0: LinearMap

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if self.mu0.domain != primitive_labels(self.alphabet):
            raise ValueError("mu0 must be defined on the echelon primitive basis")
        if tuple(self.mu0.codomain) != self.names:
            raise ValueError("mu0 must take values in V0")
        if self.mu0.field != self.field:
            raise ValueError("mu0 is over another field")

    @cached_property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.field, self.names, self.cap)

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def basis(self) -> tuple:
        return primitive_basis(self.alphabet)

    @classmethod
    def from_values(cls, field: Field, names: Sequence[str], cap: int, values: Mapping) -> "B1Object":
        """``values[(weight, index)]`` is ``mu0`` of that echelon primitive; missing means 0."""
        names = tuple(names)
        alphabet = Alphabet(field, names, cap)
        labels = primitive_labels(alphabet)
        cols = [{} for _ in labels]
        for (n, i), vec in values.items():
            label = primitive_label(n, i)
            if label not in labels:
                raise ValueError(f"no primitive basis element {label}")
            cols[labels.index(label)] = _as_vector(field, vec, len(names))
        return cls(field, names, cap, LinearMap.from_columns(field, labels, Basis(names), cols))

    @classmethod
    def abelian(cls, field: Field, names: Sequence[str], cap: int) -> "B1Object":
        """Unit on ``V0`` and zero on all higher primitives."""
        values = {(1, i): {i: field.one} for i in range(len(names))}
        return cls.from_values(field, names, cap, values)

    def value(self, n: int, i: int) -> dict:
        return dict(self.mu0.columns[primitive_labels(self.alphabet).index(primitive_label(n, i))])

    def values(self) -> dict:
        return {(n, i): self.value(n, i) for n, i, _ in self.basis}

    def with_value(self, n: int, i: int, vec) -> "B1Object":
        values = self.values()
        values[(n, i)] = _as_vector(self.field, vec, self.dim)
        return B1Object.from_values(self.field, self.names, self.cap, values)

    def restrict(self, cap: int) -> "B1Object":
        if cap > self.cap:
            raise ValueError("cannot extend mu0 beyond its cap")
        values = {k: v for k, v in self.values().items() if k[0] <= cap}
        return B1Object.from_values(self.field, self.names, cap, values)

    def apply_mu0(self, z: NCPoly) -> dict:
        """``mu0`` of a primitive of ``T V0`` as a vector on ``V0``."""
        return self.mu0.apply(primitive_coords(self.alphabet, z))

    def mu0_poly(self, z: NCPoly) -> NCPoly:
        return letters_poly(self.alphabet, self.apply_mu0(z))


def _as_vector(field: Field, vec, dim: int) -> dict:
    if isinstance(vec, Mapping):
        out = {int(k): field(v) for k, v in vec.items()}
    else:
        vec = list(vec)
        if len(vec) != dim:
            raise ValueError(f"value of length {len(vec)}, expected {dim}")
        out = {k: field(v) for k, v in enumerate(vec)}
    if any(not 0 <= k < dim for k in out):
        raise ValueError("value coordinate outside V0")
    return {k: v for k, v in out.items() if v}


def eta0(alphabet: Alphabet) -> LinearMap:
    """Unit ``V0 -> P T V0``: each letter as a weight-one primitive."""
    f = alphabet.field
    labels = primitive_labels(alphabet)
    cols = tuple({labels.index(primitive_label(1, i)): f.one} for i in range(len(alphabet)))
    return LinearMap(f, Basis(alphabet.names), labels, cols)


def epsilon0_on_T(alphabet: Alphabet):
    """Counit at ``T V0``: the algebra map ``T(P T V0) -> T V0`` sending a generator to its primitive."""
    images = [z for _, _, z in primitive_basis(alphabet)]
    return lambda a: evaluate(a, images, alphabet)


def t_mu0(obj: B1Object):
    """``T(mu0) : T(P T V0) -> T V0``."""
    images = [obj.mu0_poly(z) for _, _, z in obj.basis]
    return lambda a: evaluate(a, images, obj.alphabet)


def format_vector(alphabet: Alphabet, vec: Mapping) -> str:
    return str(letters_poly(alphabet, vec))


def check_b1_axioms(obj: B1Object) -> Check:
    """Unit and associativity laws of ``(V0, mu0)`` up to weight ``cap``."""
    if obj.cap < 2:
        raise ValueError("cap must be at least 2")
    V = obj.alphabet
    f = obj.field
    per = {}
    witness = None
    unit_bad = [i for i in range(obj.dim) if obj.value(1, i) != {i: f.one}]
    per[1] = not unit_bad
    if unit_bad:
        i = unit_bad[0]
        witness = f"unit: mu0({V.names[i]}) = {format_vector(V, obj.value(1, i))}"
    W = generator_alphabet(V)
    via_mu = t_mu0(obj)
    via_eps = epsilon0_on_T(V)
    checked = 0
    for n in range(1, obj.cap + 1):
        ok = per.get(n, True)
        for q in primitive_polys(W, n):
            checked += 1
            lhs = obj.apply_mu0(via_mu(q))
            rhs = obj.apply_mu0(via_eps(q))
            if lhs != rhs:
                if ok and witness is None:
                    witness = (
                        f"weight {n}: q = {q}; mu0(T(mu0) q) = {format_vector(V, lhs)}"
                        f" but mu0(eps0 q) = {format_vector(V, rhs)}"
                    )
                ok = False
                break
        per[n] = ok
    good = all(per.values())
    return Check(
        "check_b1_axioms",
        good,
        obj.cap,
        f"unit law and associativity on {checked} primitives of T(PTV0)",
        witness,
        per,
    )


def s_generators(obj: B1Object) -> list[NCPoly]:
    """``z - b(z)`` for every echelon primitive ``z`` of weight ``2..cap``."""
    return [z - obj.mu0_poly(z) for n, _, z in obj.basis if n >= 2]


def s_span_check(obj: B1Object) -> Check:
    """``Im(Id - eta0 mu0)`` equals the span of the ``z - b(z)``, in primitive coordinates."""
    V = obj.alphabet
    e0 = eta0(V)
    ident = LinearMap.identity(obj.field, e0.codomain)
    big = image_basis(ident - compose(e0, obj.mu0))
    labels = e0.codomain
    vectors = [primitive_coords(V, g) for g in s_generators(obj)]
    small = Subspace.span(obj.field, labels, vectors)
    ok = big == small
    return Check(
        "s_generators",
        ok,
        obj.cap,
        f"dim S = {small.dim}",
        None if ok else f"dim Im(Id - eta0 mu0) = {big.dim}, span of z - b(z) has dim {small.dim}",
    )


# ----------------------------------------------------------------------------
# ideals in the filtered tensor algebra


@lru_cache(maxsize=None)
def filtered_words(alphabet: Alphabet, n: int) -> tuple:
    """Words of degree ``<= n``, highest degree first, reverse lexicographic within a degree."""
    out = []
    for d in range(n, -1, -1):
        out.extend(sorted(alphabet.words(d), reverse=True))
    return tuple(out)


@lru_cache(maxsize=None)
def filtered_basis(alphabet: Alphabet, n: int) -> Basis:
    return Basis(alphabet.label(w) for w in filtered_words(alphabet, n))


class IdealSpan:
    """Span of ``u g v`` with ``deg u + topdeg g + deg v <= cap + slack``.

    Built level by level: the level-``m`` span is the level-``m-1`` span plus
    left and right letter multiples of the vectors that were new at level
    ``m-1`` plus the generators of top degree ``m``.  ``dims_by_level[m][n]`` is
    the dimension of the level-``m`` span inside the degree-``<= n`` piece.
    """

    def __init__(self, alphabet: Alphabet, generators: Sequence[NCPoly], cap: int, slack: int):
        if not alphabet.unweighted:
            raise ValueError("ideal spans need an unweighted alphabet")
        if slack < 0:
            raise ValueError("slack must be >= 0")
        self.cap = cap
        self.slack = slack
        self.top = cap + slack
        self.alphabet = big = alphabet.with_cap(self.top)
        self.generators = [NCPoly(big, g.terms, g.truncated) for g in generators]
        self.truncated = any(g.truncated for g in generators)
        for g in generators:
            if g.top_weight() > cap:
                raise ValueError("generator above the cap")
        self.words = filtered_words(big, self.top)
        self.index = {w: i for i, w in enumerate(self.words)}
        self._start = {n: len(self.words) - len(filtered_words(big, n)) for n in range(cap + 1)}
        self.echelon = Echelon(alphabet.field)
        self.dims_by_level: dict[int, tuple] = {}
        self._grow()

    def _grow(self):
        ech, words, index = self.echelon, self.words, self.index
        k = len(self.alphabet)
        new: list = []
        for m in range(0, self.top + 1):
            cands = [
                {index[w]: c for w, c in g.terms.items()}
                for g in self.generators
                if g.top_weight() == m
            ]
            for s in new:
                for x in range(k):
                    cands.append({index[(x,) + words[c]]: a for c, a in s.items()})
                    cands.append({index[words[c] + (x,)]: a for c, a in s.items()})
            new = []
            for c in cands:
                r = ech.add(c)
                if r is not None:
                    new.append(r)
            self.dims_by_level[m] = self._dims()

    def _dims(self) -> tuple:
        pivots = list(self.echelon.rows)
        return tuple(sum(1 for p in pivots if p >= self._start[n]) for n in range(self.cap + 1))

    def subspace(self, n: int | None = None) -> Subspace:
        """Intersection of the span with the degree-``<= n`` piece."""
        n = self.cap if n is None else n
        start = self._start[n]
        rows = [
            (p - start, {c - start: a for c, a in row.items()})
            for p, row in sorted(self.echelon.rows.items())
            if p >= start
        ]
        basis = filtered_basis(self.alphabet.with_cap(self.cap), n)
        return Subspace(self.alphabet.field, basis, tuple(r for _, r in rows), tuple(p for p, _ in rows))

    def pieces(self) -> list[Subspace]:
        return [self.subspace(n) for n in range(self.cap + 1)]


def ideal_span(
    gens: Sequence[NCPoly], cap: int, slack: int = DEFAULT_SLACK, alphabet: Alphabet | None = None
) -> IdealSpan:
    """Ideal generated by ``gens``; ``alphabet`` is required only when ``gens`` is empty."""
    if alphabet is None:
        if not gens:
            raise ValueError("an empty generator list needs an explicit alphabet")
        alphabet = gens[0].alphabet
    return IdealSpan(alphabet, gens, cap, slack)


def quotient_dims(span: IdealSpan, level: int) -> tuple:
    """Cumulative quotient dimensions ``dim F_n / (F_n ∩ J)`` at a given level."""
    al = span.alphabet
    total = [len(filtered_words(al, n)) for n in range(span.cap + 1)]
    return tuple(t - d for t, d in zip(total, span.dims_by_level[level]))


# ----------------------------------------------------------------------------
# the quotient bialgebra L1 V1 = T V0 / (S)


class QuotientBialgebra:
    """Filtered quotient ``T V0 / J`` on degrees ``<= cap``, with normal-word basis."""

    def __init__(self, alphabet: Alphabet, generators: Sequence[NCPoly], cap: int, slack: int):
        self.source = alphabet.with_cap(cap)
        self.cap = cap
        self.slack = slack
        self.generators = [NCPoly(self.source, g.terms, g.truncated) for g in generators]
        self.span = IdealSpan(self.source, self.generators, cap, slack + 1)
        self.dims_by_slack = {
            s: quotient_dims(self.span, cap + s) for s in range(0, slack + 2)
        }
        if self.dims_by_slack[slack] != self.dims_by_slack[slack + 1]:
            raise StabilizationError(
                f"quotient dimensions {self.dims_by_slack[slack]} at slack {slack} but "
                f"{self.dims_by_slack[slack + 1]} at slack {slack + 1}; increase slack"
            )
        self.truncated = self.span.truncated
        self.words = filtered_words(self.source, cap)
        self.ambient = filtered_basis(self.source, cap)
        self.ideal = self.span.subspace(cap)
        reps, self.projection = quotient_basis(self.ambient, self.ideal)
        self.basis = self.projection.codomain
        pivots = set(self.ideal.pivots)
        self.normal_words = [w for i, w in enumerate(self.words) if i not in pivots]
        self.normal_index = {w: i for i, w in enumerate(self.normal_words)}
        self._word_index = {w: i for i, w in enumerate(self.words)}
        self.dims = self.dims_by_slack[slack]
        bad = self._unclosed()
        if bad is not None:
            raise StabilizationError(f"ideal piece not closed under multiplication: {bad}; increase slack")

    @property
    def field(self) -> Field:
        return self.source.field

    def __len__(self):
        return len(self.normal_words)

    def degree(self, i: int) -> int:
        return len(self.normal_words[i])

    def project_word(self, w) -> dict:
        return self.projection.columns[self._word_index[w]]

    def project(self, poly: NCPoly) -> dict:
        """Normal-form coordinates of a polynomial of degree ``<= cap``."""
        if poly.top_weight() > self.cap:
            raise ValueError(f"{poly} is above the window of degree {self.cap}")
        return combine(self.field, ((c, self.project_word(w)) for w, c in poly.terms.items()))

    def section(self, coords: Mapping) -> NCPoly:
        return NCPoly(self.source, {self.normal_words[i]: c for i, c in coords.items()})

    def normal_form(self, poly: NCPoly) -> NCPoly:
        return self.section(self.project(poly))

    def product(self, a: Mapping, b: Mapping) -> dict:
        x, y = self.section(a), self.section(b)
        if x.top_weight() + y.top_weight() > self.cap:
            raise ValueError("product leaves the computed window")
        return self.project(x * y)

    def _unclosed(self) -> str | None:
        for row in self.ideal.rows:
            h = NCPoly(self.source, {self.words[c]: a for c, a in row.items()})
            if h.top_weight() >= self.cap:
                continue
            for x in self.source.letters():
                for prod in (x * h, h * x):
                    if self.project(prod):
                        return str(prod)
        return None


def build_quotient(alphabet: Alphabet, gens: Sequence[NCPoly], cap: int, slack: int = DEFAULT_SLACK):
    return QuotientBialgebra(alphabet, gens, cap, slack)


def build_L1(obj: B1Object, cap: int | None = None, slack: int = DEFAULT_SLACK, check: bool = True):
    """``L1 (V0, mu0) = T V0 / (z - b(z) | z in E V0)`` on degrees ``<= cap``."""
    cap = obj.cap if cap is None else cap
    if cap > obj.cap:
        raise ValueError("window larger than the cap of mu0")
    if check:
        report = check_b1_axioms(obj)
        if not report.ok:
            raise ValueError(f"not a B1 object: {report.witness}")
    return QuotientBialgebra(obj.alphabet, s_generators(obj), cap, slack)


def quotient_algebra_check(q: QuotientBialgebra) -> Check:
    """Unit and associativity of the induced product on normal words within the window."""
    f = q.field
    one = q.normal_index.get(())
    by_deg: dict = {}
    for i, w in enumerate(q.normal_words):
        by_deg.setdefault(len(w), []).append(i)
    D = q.cap
    witness = None
    if one is None:
        ok = len(q) == 0
        witness = None if ok else "unit word is not a normal word"
    else:
        ok = True
        for i in range(len(q)):
            e = {i: f.one}
            if q.product({one: f.one}, e) != e or q.product(e, {one: f.one}) != e:
                ok, witness = False, f"unit fails on {q.section(e)}"
                break
        items = sorted(range(len(q)), key=q.degree)
        for i in items:
            if not ok:
                break
            for j in items:
                if q.degree(i) + q.degree(j) > D or not ok:
                    break
                ij = q.product({i: f.one}, {j: f.one})
                for k in items:
                    if q.degree(i) + q.degree(j) + q.degree(k) > D:
                        break
                    left = q.product(ij, {k: f.one})
                    right = q.product({i: f.one}, q.product({j: f.one}, {k: f.one}))
                    if left != right:
                        ok = False
                        witness = f"(ab)c != a(bc) for {[q.section({t: f.one}) for t in (i, j, k)]}"
                        break
    return Check("quotient_algebra", ok, D, f"cumulative dims {list(q.dims)}", witness)


def quotient_coproduct_check(q: QuotientBialgebra) -> Check:
    """``Δ J ⊆ J⊗T + T⊗J`` and ``ε J = 0`` on the echelon basis of the ideal piece."""
    f = q.field
    witness = None
    for row in q.ideal.rows:
        h = NCPoly(q.source, {q.words[c]: a for c, a in row.items()})
        if h.coefficient(()):
            witness = f"counit of {h} is {f.format(h.coefficient(()))}"
            break
        image = _tensor_image(q.field, q.project_word, h.terms)
        if image:
            witness = f"(pi⊗pi) Δ({h}) = {_format_pairs(q, image)}"
            break
    ok = witness is None
    return Check(
        "quotient_coproduct_check",
        ok,
        q.cap,
        f"{q.ideal.dim} ideal basis elements",
        witness,
    )


def _tensor_image(field: Field, project_word, terms: Mapping) -> dict:
    """``(pi ⊗ pi) Δ`` of a linear combination of words."""
    out: dict = {}
    for w, c in terms.items():
        for (u, v), m in word_coproduct(w):
            pu, pv = project_word(u), project_word(v)
            cm = field.mul(c, field(m))
            for a, ca in pu.items():
                s = field.mul(cm, ca)
                axpy(field, out, s, {(a, b): cb for b, cb in pv.items()})
    return out


def _format_pairs(q, image: Mapping) -> str:
    f = q.field
    lab = q.source.label
    nw = q.normal_words
    parts = [f"{f.format(c)}*{lab(nw[a])}|{lab(nw[b])}" for (a, b), c in sorted(image.items())]
    return " + ".join(parts) if parts else "0"


def coequalizer_check(obj: B1Object, q: QuotientBialgebra) -> Check:
    """``pi ∘ T(mu0) = pi ∘ eps0`` on words of ``T(P T V0)`` and ``pi ∘ eta0 ∘ mu0 = pi`` on ``P T V0``."""
    V = obj.alphabet
    W = generator_alphabet(V)
    D = q.cap
    via_mu, via_eps = t_mu0(obj), epsilon0_on_T(V)
    witness = None
    count = 0
    for n in range(0, D + 1):
        for w in W.words(n):
            count += 1
            word = NCPoly(W, {w: obj.field.one})
            lhs = q.project(NCPoly(q.source, via_mu(word).terms))
            rhs = q.project(NCPoly(q.source, via_eps(word).terms))
            if lhs != rhs:
                witness = f"word {W.label(w)}: pi T(mu0) = {q.section(lhs)}, pi eps0 = {q.section(rhs)}"
                break
        if witness:
            break
    if witness is None:
        for n, i, z in obj.basis:
            if n > D:
                break
            lhs = q.project(NCPoly(q.source, obj.mu0_poly(z).terms))
            rhs = q.project(NCPoly(q.source, z.terms))
            if lhs != rhs:
                witness = f"primitive {z}: pi(eta0 mu0 z) = {q.section(lhs)}, pi(z) = {q.section(rhs)}"
                break
    ok = witness is None
    return Check("coequalizer_check", ok, D, f"{count} words of T(PTV0) and both sides of the adjunction", witness)


# ----------------------------------------------------------------------------
# primitives of filtered quotients


def filtered_primitive_space(field: Field, normal_words: Sequence, project_word, n: int, label) -> Subspace:
    """Primitives of filtration ``<= n`` in a quotient with the given normal words.

    ``normal_words`` must be ordered highest degree first so that the words
    of degree ``<= n`` form a suffix; the result lives on that suffix.
    """
    suffix = [w for w in normal_words if len(w) <= n]
    index = {w: i for i, w in enumerate(normal_words)}
    one = index.get(())
    neg = field.neg(field.one)
    pairs: dict = {}
    cols = []
    for w in suffix:
        image = _tensor_image(field, project_word, {w: field.one})
        if one is not None:
            axpy(field, image, neg, {(index[w], one): field.one})
            axpy(field, image, neg, {(one, index[w]): field.one})
        cols.append({pairs.setdefault(k, len(pairs)): v for k, v in image.items()})
    codomain = Basis(f"{a}|{b}" for a, b in pairs)
    domain = Basis(label(w) for w in suffix)
    return kernel_basis(LinearMap(field, domain, codomain, tuple(cols)))


def degree_part(space: Subspace, words: Sequence, n: int) -> Subspace:
    """Rows of a filtered-basis subspace whose pivot word has degree exactly ``n``."""
    keep = [(p, r) for p, r in zip(space.pivots, space.rows) if len(words[p]) == n]
    return Subspace(space.field, space.ambient, tuple(r for _, r in keep), tuple(p for p, _ in keep))


def suffix_words(normal_words, n):
    return [w for w in normal_words if len(w) <= n]


def quotient_primitive_space(q: QuotientBialgebra, n: int) -> Subspace:
    return filtered_primitive_space(q.field, q.normal_words, q.project_word, n, q.source.label)


def quotient_primitives(q: QuotientBialgebra, n: int) -> Subspace:
    """The primitives that first appear in filtration degree ``n``."""
    if not 1 <= n <= q.cap - 1:
        raise ValueError(f"degree {n} outside the safe range 1..{q.cap - 1}")
    space = quotient_primitive_space(q, n)
    return degree_part(space, suffix_words(q.normal_words, n), n)


# ----------------------------------------------------------------------------
# the unit eta1 and level 2


@dataclass
class Eta1:
    map: LinearMap
    primitive_space: Subspace
    iso: bool
    check: Check


def eta1(obj: B1Object, q: QuotientBialgebra) -> Eta1:
    """``V0 -> P(L1 V1)``, letter to class, with the iso verdict on degrees ``<= cap - 1``."""
    f = obj.field
    top = q.cap - 1
    if top < 1:
        raise ValueError("need a window of degree >= 2")
    space = quotient_primitive_space(q, top)
    suffix = suffix_words(q.normal_words, top)
    offset = len(q.normal_words) - len(suffix)
    target = Basis(f"prim[{i}]" for i in range(space.dim))
    cols = []
    witness = None
    for i in range(obj.dim):
        image = q.project_word((i,))
        coords = membership_coords({c - offset: a for c, a in image.items()}, space)
        if coords is None:
            raise RuntimeError(f"class of letter {obj.names[i]} is not primitive")
        cols.append({k: a for k, a in enumerate(coords) if a})
    m = LinearMap(f, Basis(obj.names), target, tuple(cols))
    rank = m.rank()
    injective = rank == obj.dim
    surjective = space.dim == rank
    if not injective:
        ker = kernel_basis(m)
        witness = f"eta1 kills {letters_poly(obj.alphabet, ker.rows[0])}"
    elif not surjective:
        img = image_basis(m)
        for k, row in enumerate(space.rows):
            if {k: f.one} not in img:
                extra = NCPoly(q.source, {suffix[c]: a for c, a in row.items()})
                witness = f"primitive {extra} of L1 is not in the image of V0"
                break
    per = {}
    for n in range(1, top + 1):
        part = degree_part(quotient_primitive_space(q, n), suffix_words(q.normal_words, n), n)
        per[n] = part.dim == (rank if n == 1 else 0)
    ok = injective and surjective
    check = Check(
        "eta1",
        ok,
        top,
        f"rank {rank} = dim V0 {obj.dim}; dim P(L1V1) = {space.dim}",
        witness,
        per,
    )
    return Eta1(m, space, ok, check)


@dataclass
class B2Certificate:
    b1: B1Object
    quotient: QuotientBialgebra
    eta1: LinearMap
    iso: bool
    mu1: LinearMap | None
    primitive_space: Subspace
    check: Check

    @property
    def window(self) -> int:
        return self.quotient.cap - 1


def check_b2(obj: B1Object, slack: int = DEFAULT_SLACK, q: QuotientBialgebra | None = None) -> B2Certificate:
    """Certify ``((V0, mu0), mu1)`` in level 2 up to the window, with ``mu1 = eta1^-1``."""
    q = build_L1(obj, slack=slack) if q is None else q
    e = eta1(obj, q)
    mu1 = inverse(e.map) if e.iso else None
    return B2Certificate(obj, q, e.map, e.iso, mu1, e.primitive_space, e.check)


def idempotency_check(cert: B2Certificate) -> Check:
    """``mu1 ∘ eta1 = Id`` on ``V0`` and ``eta1 ∘ mu1 = Id`` on the computed primitives."""
    if cert.mu1 is None:
        return Check("idempotency", False, cert.window, "", cert.check.witness or "eta1 is not invertible")
    f = cert.b1.field
    left = compose(cert.mu1, cert.eta1)
    right = compose(cert.eta1, cert.mu1)
    ok_left = left == LinearMap.identity(f, cert.eta1.domain)
    ok_right = right == LinearMap.identity(f, cert.eta1.codomain)
    ok = ok_left and ok_right
    witness = None
    if not ok:
        witness = "mu1 eta1 != Id" if not ok_left else "eta1 mu1 != Id"
    return Check("idempotency", ok, cert.window, "mu1 = eta1^-1 is a two-sided inverse", witness)


def forget(obj, level: int):
    """Forgetful functors ``U_{m,n}``: a level-2 certificate, a level-1 object or ``V0``."""
    if isinstance(obj, B2Certificate):
        current = 2
    elif isinstance(obj, B1Object):
        current = 1
    else:
        current = 0
    if level > current or level < 0:
        raise ValueError(f"cannot forget from level {current} to level {level}")
    if level == current:
        return obj
    if current == 2:
        obj = obj.b1
        current = 1
    if level == 1:
        return obj
    return Basis(obj.names)
