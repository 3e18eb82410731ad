"""Lie data recovered from level-1 structure maps, and (restricted) enveloping algebras."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Mapping, Sequence

from .checks import Check, NonConfluentError
from .free import Alphabet, NCPoly, lyndon_primitive_elements, primitive_polys, standard_factorization
from .linalg import Basis, Field, LinearMap, axpy, combine, preimage, scaled
from .tower import (
    B1Object,
    QuotientBialgebra,
    degree_part,
    filtered_primitive_space,
    primitive_label,
    s_generators,
    suffix_words,
)


def _clean(vec: Mapping) -> dict:
    return {k: v for k, v in vec.items() if v}


@dataclass(frozen=True, eq=False)
class LieData:
    """Structure constants on a named basis; ``p_map`` only in positive characteristic.

    ``brackets[(i, j)]`` is ``[e_i, e_j]`` as a sparse vector.  Missing pairs
    are zero.  The table is stored as given, so antisymmetry is checked
    rather than assumed.
    """

    field: Field
    names: tuple
    brackets: dict = dc_field(default_factory=dict)
    p_map: dict | None = None

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        d = len(self.names)
        table = {}
        for (i, j), vec in self.brackets.items():
            if not (0 <= i < d and 0 <= j < d) or any(not 0 <= k < d for k in vec):
                raise ValueError("bracket index outside the basis")
            vec = _clean({k: self.field(v) for k, v in vec.items()})
            if vec:
                table[(i, j)] = vec
        object.__setattr__(self, "brackets", table)
        if self.p_map is not None:
            if not self.field.characteristic:
                raise ValueError("a p-operation needs positive characteristic")
            pm = {}
            for i, vec in self.p_map.items():
                if not 0 <= i < d or any(not 0 <= k < d for k in vec):
                    raise ValueError("p-operation index outside the basis")
                pm[i] = _clean({k: self.field(v) for k, v in vec.items()})
            object.__setattr__(self, "p_map", {i: pm.get(i, {}) for i in range(d)})

    @classmethod
    def antisymmetric(cls, field: Field, names: Sequence[str], upper: Mapping, p_map=None) -> "LieData":
        """Extend a table given on pairs ``i < j`` by ``[e_j, e_i] = -[e_i, e_j]``."""
        table = {}
        for (i, j), vec in upper.items():
            if i >= j:
                raise ValueError("give brackets on pairs i < j only")
            vec = {k: field(v) for k, v in vec.items()}
            table[(i, j)] = vec
            table[(j, i)] = {k: field.neg(v) for k, v in vec.items()}
        return cls(field, tuple(names), table, p_map)

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def restricted(self) -> bool:
        return self.p_map is not None

    @cached_property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.field, self.names, max(2, self.field.characteristic))

    def basis_bracket(self, i: int, j: int) -> dict:
        return self.brackets.get((i, j), {})

    def bracket(self, u: Mapping, v: Mapping) -> dict:
        f = self.field
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                c = self.brackets.get((i, j))
                if c:
                    axpy(f, out, f.mul(a, b), c)
        return out

    def ad(self, u: Mapping) -> LinearMap:
        basis = Basis(self.names)
        cols = [self.bracket(u, {j: self.field.one}) for j in range(self.dim)]
        return LinearMap(self.field, basis, basis, tuple(cols))

    def p_power(self, v: Mapping) -> dict:
        """``v^[p]`` from the basis values by semilinearity and the Jacobson formula."""
        if self.p_map is None:
            raise ValueError("no p-operation")
        f = self.field
        p = f.characteristic
        acc: dict = {}
        acc_p: dict = {}
        for i, lam in sorted(v.items()):
            if not lam:
                continue
            term = {i: lam}
            term_p = scaled(f, f.power(lam, p), self.p_map[i])
            if acc:
                cross = self._jacobson_terms(acc, term)
                new_p = dict(acc_p)
                axpy(f, new_p, f.one, term_p)
                axpy(f, new_p, f.one, cross)
                acc_p = new_p
            else:
                acc_p = term_p
            axpy(f, acc, f.one, term)
        return _clean(acc_p)

    def _jacobson_terms(self, a: Mapping, b: Mapping) -> dict:
        """``sum_i s_i(a, b)`` where ``i s_i`` is the ``t^(i-1)`` coefficient of ``ad(ta+b)^(p-1)(a)``."""
        f = self.field
        p = f.characteristic
        poly = [dict(a)]
        for _ in range(p - 1):
            nxt = [{} for _ in range(len(poly) + 1)]
            for k, vec in enumerate(poly):
                axpy(f, nxt[k + 1], f.one, self.bracket(a, vec))
                axpy(f, nxt[k], f.one, self.bracket(b, vec))
            poly = nxt
        out: dict = {}
        for i in range(1, p):
            if i - 1 < len(poly):
                axpy(f, out, f.inv(f(i)), poly[i - 1])
        return out

    def __eq__(self, other):
        return (
            isinstance(other, LieData)
            and self.field == other.field
            and self.names == other.names
            and self.brackets == other.brackets
            and self.p_map == other.p_map
        )

    __hash__ = None


def ad_power(L: LieData, x: Mapping, k: int) -> LinearMap:
    """``ad_x`` applied ``k`` times, as a matrix."""
    if k < 0:
        raise ValueError("k must be >= 0")
    basis = Basis(L.names)
    out = LinearMap.identity(L.field, basis)
    ad = L.ad(x)
    for _ in range(k):
        out = LinearMap(L.field, basis, basis, tuple(ad.apply(c) for c in out.columns))
    return out


def _format_vec(L: LieData, vec: Mapping) -> str:
    return str(NCPoly(L.alphabet, {(i,): c for i, c in vec.items()}))


def extract_lie(obj: B1Object) -> LieData:
    """``[x, y] = mu0(xy - yx)``; in characteristic ``p`` also ``x^[p] = mu0(x^p)``."""
    V = obj.alphabet
    f = obj.field
    p = f.characteristic
    if obj.cap < 2:
        raise ValueError("cap must be at least 2")
    if p and obj.cap < p:
        raise ValueError(f"cap {obj.cap} < characteristic {p}: the p-operation is not visible")
    table = {}
    for i in range(obj.dim):
        for j in range(obj.dim):
            if i != j:
                xi, xj = V.letter(i), V.letter(j)
                table[(i, j)] = obj.apply_mu0(xi * xj - xj * xi)
    p_map = None
    if p:
        p_map = {i: obj.apply_mu0(V.letter(i) ** p) for i in range(obj.dim)}
    return LieData(f, obj.names, table, p_map)


def check_lie_axioms(L: LieData, samples: int = 8, seed: int = 0) -> Check:
    """Antisymmetry and Jacobi on the basis; compatibility of the p-operation when present."""
    f = L.field
    d = L.dim
    e = [{i: f.one} for i in range(d)]
    witness = None
    for i in range(d):
        if L.basis_bracket(i, i):
            witness = f"[{L.names[i]}, {L.names[i]}] = {_format_vec(L, L.basis_bracket(i, i))}"
            break
        for j in range(i + 1, d):
            s = dict(L.basis_bracket(i, j))
            axpy(f, s, f.one, L.basis_bracket(j, i))
            if s:
                witness = f"[{L.names[i]}, {L.names[j]}] + [{L.names[j]}, {L.names[i]}] = {_format_vec(L, s)}"
                break
        if witness:
            break
    if witness is None:
        for i in range(d):
            for j in range(i + 1, d):
                for k in range(j + 1, d):
                    cyc = {}
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        axpy(f, cyc, f.one, L.bracket(e[a], L.bracket(e[b], e[c])))
                    if cyc:
                        n = L.names
                        witness = f"Jacobi fails on ({n[i]}, {n[j]}, {n[k]}): cyclic sum {_format_vec(L, cyc)}"
                        break
                if witness:
                    break
            if witness:
                break
    if witness is None and L.restricted:
        witness = _restricted_witness(L, samples, seed)
    ok = witness is None
    kind = "restricted Lie" if L.restricted else "Lie"
    return Check("check_lie_axioms", ok, 2, f"{kind} axioms on a basis of dimension {d}", witness)


def _restricted_witness(L: LieData, samples: int, seed: int) -> str | None:
    f = L.field
    p = f.characteristic
    d = L.dim
    for i in range(d):
        ei = {i: f.one}
        lhs = L.ad(L.p_map[i])
        rhs = ad_power(L, ei, p)
        if lhs != rhs:
            for j in range(d):
                if lhs.columns[j] != rhs.columns[j]:
                    n = L.names
                    return (
                        f"[{n[i]}^[p], {n[j]}] = {_format_vec(L, lhs.columns[j])} but "
                        f"ad_{n[i]}^p({n[j]}) = {_format_vec(L, rhs.columns[j])}"
                    )
    rng = random.Random(seed)
    elements = f.elements() if p else None
    for _ in range(samples):
        v = _clean({i: rng.choice(elements) for i in range(d)})
        lam = rng.choice(elements[1:])
        vp = L.p_power(v)
        left = L.p_power(scaled(f, lam, v))
        right = scaled(f, f.power(lam, p), vp)
        if left != right:
            return f"(c v)^[p] != c^p v^[p] for c = {f.format(lam)}, v = {_format_vec(L, v)}"
        if L.ad(vp) != ad_power(L, v, p):
            return f"ad(v^[p]) != ad_v^p for v = {_format_vec(L, v)}"
    return None


def _eval_lyndon(L: LieData, word: tuple, cache: dict) -> dict:
    hit = cache.get(word)
    if hit is None:
        if len(word) == 1:
            hit = {word[0]: L.field.one}
        else:
            u, v = standard_factorization(word)
            hit = L.bracket(_eval_lyndon(L, u, cache), _eval_lyndon(L, v, cache))
        cache[word] = hit
    return hit


def b1_from_lie(L: LieData, cap: int) -> B1Object:
    """``mu0`` on each echelon primitive through its expansion in Lyndon brackets and their p-powers."""
    f = L.field
    V = Alphabet(f, L.names, cap)
    if f.characteristic and not L.restricted:
        raise ValueError("characteristic p needs a p-operation")
    cache: dict = {}
    values = {}
    for n in range(1, cap + 1):
        elements = lyndon_primitive_elements(V, n)
        if not elements:
            continue
        images = []
        for word, j, _ in elements:
            vec = _eval_lyndon(L, word, cache)
            for _ in range(j):
                vec = L.p_power(vec)
            images.append(vec)
        words = V.word_basis(n)
        spanning = LinearMap(
            f,
            Basis(f"e{t}" for t in range(len(elements))),
            words,
            tuple(_clean(poly.vector(n)) for _, _, poly in elements),
        )
        for i, z in enumerate(primitive_polys(V, n)):
            coords = preimage(spanning, z.vector(n))
            if coords is None:
                raise RuntimeError(f"primitive {z} is outside the Lyndon span")
            values[(n, i)] = combine(f, ((c, images[t]) for t, c in coords.items()))
    return B1Object.from_values(f, L.names, cap, values)


# ----------------------------------------------------------------------------
# enveloping algebras by straightening


class EnvelopingAlgebra:
    """``T V / (xy - yx - [x, y])``, plus ``x^p - x^[p]`` when restricted, on degrees ``<= cap``.

    Normal words are nondecreasing in the name order (exponents below ``p``
    when restricted).  Rewriting always acts on the leftmost redex.
    """

    def __init__(self, L: LieData, cap: int, restricted: bool = False):
        if restricted and not L.restricted:
            raise ValueError("the restricted enveloping algebra needs a p-operation")
        self.lie = L
        self.cap = cap
        self.restricted = restricted
        self.field = L.field
        self.alphabet = Alphabet(L.field, L.names, cap)
        self._nf: dict = {}
        self.normal_words = sorted(
            (w for n in range(cap + 1) for w in self._normal_words(n)),
            key=lambda w: (-len(w), tuple(-c for c in w)),
        )
        self.index = {w: i for i, w in enumerate(self.normal_words)}
        self.overlaps_checked = self._check_overlaps()

    def _normal_words(self, n: int):
        p = self.field.characteristic if self.restricted else 0
        for w in self.alphabet.words(n):
            if all(a <= b for a, b in zip(w, w[1:])) and not (p and self._has_run(w, p)):
                yield w

    @staticmethod
    def _has_run(w, p):
        return any(w[i:i + p] == (w[i],) * p for i in range(len(w) - p + 1))

    @property
    def dims(self) -> tuple:
        return tuple(sum(1 for w in self.normal_words if len(w) <= n) for n in range(self.cap + 1))

    def _redex(self, w):
        p = self.field.characteristic if self.restricted else 0
        for i in range(len(w)):
            if p and w[i:i + p] == (w[i],) * p:
                return i, "power"
            if i + 1 < len(w) and w[i] > w[i + 1]:
                return i, "swap"
        return None

    def _step(self, w, i, kind) -> dict:
        """One rewriting step at position ``i``, as a combination of words."""
        f = self.field
        L = self.lie
        if kind == "swap":
            a, b = w[i], w[i + 1]
            out = {w[:i] + (b, a) + w[i + 2:]: f.one}
            for k, c in L.basis_bracket(a, b).items():
                axpy(f, out, c, {w[:i] + (k,) + w[i + 2:]: f.one})
            return out
        p = f.characteristic
        out: dict = {}
        for k, c in L.p_map[w[i]].items():
            axpy(f, out, c, {w[:i] + (k,) + w[i + p:]: f.one})
        return out

    def word_normal_form(self, w) -> dict:
        """Coordinates of a word (degree ``<= cap``) in the normal-word basis."""
        hit = self._nf.get(w)
        if hit is not None:
            return hit
        if len(w) > self.cap:
            raise ValueError("word above the cap")
        red = self._redex(w)
        if red is None:
            hit = {self.index[w]: self.field.one}
        else:
            hit = self._reduce_terms(self._step(w, *red))
        self._nf[w] = hit
        return hit

    def _reduce_terms(self, terms: Mapping) -> dict:
        return combine(self.field, ((c, self.word_normal_form(u)) for u, c in terms.items()))

    def project(self, poly: NCPoly) -> dict:
        if poly.top_weight() > self.cap:
            raise ValueError("polynomial above the cap")
        return self._reduce_terms(poly.terms)

    def section(self, coords: Mapping) -> NCPoly:
        return NCPoly(self.alphabet, {self.normal_words[i]: c for i, c in coords.items()})

    def product(self, a: Mapping, b: Mapping) -> dict:
        x, y = self.section(a), self.section(b)
        if x.top_weight() + y.top_weight() > self.cap:
            raise ValueError("product leaves the computed window")
        return self.project(x * y)

    def _overlap_words(self):
        d = self.lie.dim
        p = self.field.characteristic if self.restricted else 0
        if self.cap >= 3:
            for a in range(d):
                for b in range(a):
                    for c in range(b):
                        yield (a, b, c), (0, "swap"), (1, "swap")
        if p and self.cap >= p + 1:
            for a in range(d):
                for b in range(a + 1, d):
                    yield (b,) + (a,) * p, (0, "swap"), (1, "power")
                for c in range(a):
                    yield (a,) * p + (c,), (0, "power"), (p - 1, "swap")
        if p:
            for a in range(d):
                for k in range(1, p):
                    if p + k <= self.cap:
                        yield (a,) * (p + k), (0, "power"), (k, "power")

    def _check_overlaps(self) -> int:
        count = 0
        for w, first, second in self._overlap_words():
            count += 1
            left = self._reduce_terms(self._step(w, *first))
            right = self._reduce_terms(self._step(w, *second))
            if left != right:
                label = self.alphabet.label(w)
                raise NonConfluentError(
                    f"overlap {label} is not resolvable",
                    f"overlap {label}: {self.section(left)} vs {self.section(right)}",
                )
        return count


def build_enveloping(L: LieData, cap: int, restricted: bool = False) -> EnvelopingAlgebra:
    return EnvelopingAlgebra(L, cap, restricted)


def primitives_of_enveloping(env: EnvelopingAlgebra, n: int):
    """Primitives that first appear in filtration degree ``n`` of the enveloping algebra."""
    if not 1 <= n < env.cap:
        raise ValueError(f"degree {n} outside 1..{env.cap - 1}")
    label = env.alphabet.label
    space = filtered_primitive_space(env.field, env.normal_words, env.word_normal_form, n, label)
    return degree_part(space, suffix_words(env.normal_words, n), n)


def enveloping_primitives_check(env: EnvelopingAlgebra) -> Check:
    """Degree-one primitives are the generators and nothing new appears in degrees ``2..cap-1``."""
    per = {}
    witness = None
    for n in range(1, env.cap):
        part = primitives_of_enveloping(env, n)
        expected = env.lie.dim if n == 1 else 0
        per[n] = part.dim == expected
        if not per[n] and witness is None:
            words = suffix_words(env.normal_words, n)
            if part.rows:
                row = part.rows[0]
                extra = NCPoly(env.alphabet, {words[c]: a for c, a in row.items()})
                witness = f"degree {n}: primitive {extra}"
            else:
                witness = f"degree {n}: {part.dim} primitives, expected {expected}"
    ok = all(per.values())
    return Check(
        "primitives_of_enveloping",
        ok,
        env.cap - 1,
        "primitives concentrated in degree one",
        witness,
        per,
    )


def compare_L1_with_enveloping(obj: B1Object, env: EnvelopingAlgebra, q: QuotientBialgebra) -> Check:
    """Equal filtration dimensions and the letter map ``T V0 -> env`` kills the ideal of ``q``."""
    per = {}
    witness = None
    for n in range(min(q.cap, env.cap) + 1):
        per[n] = q.dims[n] == env.dims[n]
        if not per[n] and witness is None:
            witness = f"degree {n}: dim L1 = {q.dims[n]}, dim enveloping = {env.dims[n]}"
    if witness is None:
        gens = sorted(s_generators(obj), key=lambda g: g.top_weight())
        for g in gens:
            if g.top_weight() > env.cap:
                continue
            image = env.project(NCPoly(env.alphabet, g.terms))
            if image:
                witness = f"degree {g.top_weight()}: {g} maps to {env.section(image)}"
                break
    if witness is None:
        for row in q.ideal.rows:
            h = NCPoly(env.alphabet, {q.words[c]: a for c, a in row.items()})
            image = env.project(h)
            if image:
                witness = f"degree {h.top_weight()}: ideal element {h} maps to {env.section(image)}"
                break
    ok = witness is None
    return Check(
        "compare_L1_with_enveloping",
        ok,
        min(q.cap, env.cap),
        f"dims {list(q.dims)} vs {list(env.dims)}",
        witness,
        per,
    )


def _nonzero(f: Field, rng: random.Random):
    p = f.characteristic
    return f(rng.randrange(1, p)) if p else f(rng.randint(1, 4))


def corrupt_bracket(L: LieData, rng: random.Random, attempts: int = 1000) -> tuple[LieData, str]:
    """Resample one structure constant (keeping antisymmetry) until Jacobi fails."""
    f = L.field
    d = L.dim
    if d < 3:
        raise ValueError("Jacobi holds for every antisymmetric bracket in dimension < 3")
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    for _ in range(attempts):
        i, j = rng.choice(pairs)
        k = rng.randrange(d)
        old = L.basis_bracket(i, j).get(k, f.zero)
        delta = _nonzero(f, rng)
        new = f.add(old, delta)
        table = {key: dict(v) for key, v in L.brackets.items()}
        for (a, b), sign in (((i, j), f.one), ((j, i), f.neg(f.one))):
            vec = table.setdefault((a, b), {})
            vec[k] = f.mul(sign, new)
        bad = LieData(f, L.names, table, L.p_map)
        if not check_lie_axioms(bad).ok:
            n = L.names
            return bad, f"[{n[i]}, {n[j]}] coefficient of {n[k]}: {f.format(old)} -> {f.format(new)}"
    raise ValueError("no single structure constant change breaks Jacobi for this algebra")


def corrupt_mu0(obj: B1Object, rng: random.Random) -> tuple[B1Object, str]:
    """Perturb ``mu0`` on one primitive of weight ``3..cap`` (not divisible by ``p``).

    At such a weight every primitive is a combination of brackets of letters
    with lower primitives, so associativity pins the value down and any
    change is detected.
    """
    p = obj.field.characteristic
    f = obj.field
    choices = [
        (n, i)
        for n, i, _ in obj.basis
        if 3 <= n <= obj.cap and not (p and n % p == 0)
    ]
    if not choices or obj.dim == 0:
        raise ValueError("no mu0 value of weight >= 3 whose change must break associativity")
    n, i = rng.choice(choices)
    value = obj.value(n, i)
    k = rng.randrange(obj.dim)
    delta = _nonzero(f, rng)
    axpy(f, value, delta, {k: f.one})
    label = primitive_label(n, i)
    return obj.with_value(n, i, value), f"mu0({label}) coordinate {obj.names[k]} shifted by {f.format(delta)}"
