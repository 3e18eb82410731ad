"""Truncated tensor bialgebras on (weighted) alphabets.

A word is a tuple of letter indices.  Letters carry positive weights, the
weight of a word is the sum, and everything above the alphabet's ``cap`` is
dropped.  Dropping is never silent: polynomials and tensors carry a
``truncated`` flag.

Letters are primitive, so the coproduct of a word is the unshuffle sum
over all splittings of its positions into a left and a right subword.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .linalg import Basis, Field, LinearMap, Subspace, axpy, kernel_basis

Word = tuple


class TruncationWarning(UserWarning):
    """The cap is too small for some structure (e.g. p-th powers) to appear."""


_NAME_RE = re.compile(r"^[^\s.*+|]+$")


@dataclass(frozen=True)
class Alphabet:
    field: Field
    names: tuple
    cap: int
    weights: tuple = ()

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        weights = tuple(self.weights) if self.weights else (1,) * len(names)
        object.__setattr__(self, "weights", weights)
        if len(set(names)) != len(names):
            raise ValueError("letter names must be distinct")
        if len(weights) != len(names) or any(w < 1 for w in weights):
            raise ValueError("every letter needs a weight >= 1")
        if self.cap < 1:
            raise ValueError("cap must be >= 1")
        for n in names:
            if not _NAME_RE.match(n) or n == "1":
                raise ValueError(f"bad letter name {n!r}")
        p = self.field.characteristic
        if p and self.cap < p:
            warnings.warn(
                f"cap {self.cap} < characteristic {p}: p-th power primitives are not visible",
                TruncationWarning,
                stacklevel=3,
            )

    @classmethod
    def standard(cls, k: int, characteristic: int = 0, cap: int = 4) -> "Alphabet":
        return cls(Field(characteristic), default_names(k), cap)

    def __len__(self):
        return len(self.names)

    @property
    def unweighted(self) -> bool:
        return all(w == 1 for w in self.weights)

    def weight(self, word: Word) -> int:
        ws = self.weights
        return sum(ws[i] for i in word)

    def words(self, n: int) -> tuple:
        """All words of weight exactly ``n`` in lexicographic order."""
        return _words(self, n)

    def word_basis(self, n: int) -> Basis:
        return _word_basis(self, n)

    def word_index(self, n: int) -> dict:
        return _word_index(self, n)

    def label(self, word: Word) -> str:
        if not word:
            return "1"
        return ".".join(self.names[i] for i in word)

    def parse_word(self, text: str) -> Word:
        text = text.strip()
        if text == "1":
            return ()
        idx = {n: i for i, n in enumerate(self.names)}
        try:
            return tuple(idx[t] for t in text.split("."))
        except KeyError as exc:
            raise ValueError(f"unknown letter in {text!r}") from exc

    def with_cap(self, cap: int) -> "Alphabet":
        return Alphabet(self.field, self.names, cap, self.weights)

    def letter(self, i: int) -> "NCPoly":
        return NCPoly(self, {(i,): self.field.one})

    def letters(self) -> list["NCPoly"]:
        return [self.letter(i) for i in range(len(self.names))]

    def one(self) -> "NCPoly":
        return NCPoly(self, {(): self.field.one})

    def zero(self) -> "NCPoly":
        return NCPoly(self, {})


def default_names(k: int) -> tuple:
    if k <= 3:
        return ("x", "y", "z")[:k]
    return tuple(f"x{i}" for i in range(k))


@lru_cache(maxsize=None)
def _words(alphabet: Alphabet, n: int) -> tuple:
    if n < 0:
        return ()
    if n == 0:
        return ((),)
    out = []
    for i, w in enumerate(alphabet.weights):
        if w <= n:
            out.extend((i,) + rest for rest in _words(alphabet, n - w))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _word_basis(alphabet: Alphabet, n: int) -> Basis:
    return Basis(alphabet.label(w) for w in _words(alphabet, n))


@lru_cache(maxsize=None)
def _word_index(alphabet: Alphabet, n: int) -> dict:
    return {w: i for i, w in enumerate(_words(alphabet, n))}


def word_key(alphabet: Alphabet):
    """Weight-lexicographic sort key."""
    return lambda w: (alphabet.weight(w), w)


class NCPoly:
    """A noncommutative polynomial in the truncated tensor algebra.

    ``terms`` maps words to nonzero coefficients; treat instances as
    immutable.
    """

    __slots__ = ("alphabet", "terms", "truncated")

    def __init__(self, alphabet: Alphabet, terms: Mapping | None = None, truncated: bool = False):
        self.alphabet = alphabet
        t = {}
        cap = alphabet.cap
        flag = truncated
        if terms:
            for w, c in terms.items():
                if not c:
                    continue
                if alphabet.weight(w) > cap:
                    flag = True
                    continue
                t[tuple(w)] = c
        self.terms = t
        self.truncated = flag

    @property
    def field(self) -> Field:
        return self.alphabet.field

    def _same(self, other: "NCPoly") -> None:
        if not isinstance(other, NCPoly):
            raise TypeError(f"expected NCPoly, got {type(other).__name__}")
        if other.alphabet != self.alphabet:
            raise ValueError("polynomials over different alphabets")

    def __add__(self, other):
        if not isinstance(other, NCPoly):
            other = self.alphabet.one() * other
        self._same(other)
        t = dict(self.terms)
        axpy(self.field, t, self.field.one, other.terms)
        return NCPoly(self.alphabet, t, self.truncated or other.truncated)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return NCPoly(self.alphabet, {w: f.neg(c) for w, c in self.terms.items()}, self.truncated)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            return concat_mul(self, other)
        f = self.field
        a = f(other)
        return NCPoly(self.alphabet, {w: f.mul(a, c) for w, c in self.terms.items()}, self.truncated)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int):
        out = self.alphabet.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            return self.alphabet == other.alphabet and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self):
        key = word_key(self.alphabet)
        for w in sorted(self.terms, key=key):
            yield w, self.terms[w]

    def coefficient(self, word: Word):
        return self.terms.get(tuple(word), self.field.zero)

    def top_weight(self) -> int:
        """Largest weight present (-1 for the zero polynomial)."""
        wt = self.alphabet.weight
        return max((wt(w) for w in self.terms), default=-1)

    def component(self, n: int) -> "NCPoly":
        wt = self.alphabet.weight
        return NCPoly(self.alphabet, {w: c for w, c in self.terms.items() if wt(w) == n})

    def weights(self) -> list[int]:
        wt = self.alphabet.weight
        return sorted({wt(w) for w in self.terms})

    def vector(self, n: int) -> dict:
        """Coordinates of the weight-``n`` component in ``alphabet.word_basis(n)``."""
        idx = self.alphabet.word_index(n)
        wt = self.alphabet.weight
        return {idx[w]: c for w, c in self.terms.items() if wt(w) == n}

    @classmethod
    def from_vector(cls, alphabet: Alphabet, n: int, vec: Mapping) -> "NCPoly":
        words = alphabet.words(n)
        return cls(alphabet, {words[i]: c for i, c in vec.items()})

    def __str__(self):
        return format_terms(self.alphabet, self)

    def __repr__(self):
        return f"NCPoly({self})"

    @classmethod
    def parse(cls, alphabet: Alphabet, text: str) -> "NCPoly":
        """Inverse of ``str``: ``"1*x.y + -1*y.x"``; ``"0"`` is zero."""
        text = text.strip()
        if text == "0":
            return alphabet.zero()
        f = alphabet.field
        t: dict = {}
        for chunk in text.split(" + "):
            coef, _, word = chunk.partition("*")
            w = alphabet.parse_word(word)
            axpy(f, t, f.one, {w: f.parse(coef)})
        return cls(alphabet, t)


def format_terms(alphabet: Alphabet, poly: NCPoly) -> str:
    f = alphabet.field
    parts = [f"{f.format(c)}*{alphabet.label(w)}" for w, c in poly]
    return " + ".join(parts) if parts else "0"


def concat_mul(a: NCPoly, b: NCPoly) -> NCPoly:
    a._same(b)
    al = a.alphabet
    f = al.field
    cap = al.cap
    wt = al.weight
    out: dict = {}
    flag = a.truncated or b.truncated
    bw = [(v, d, wt(v)) for v, d in b.terms.items()]
    p = f.characteristic
    for u, c in a.terms.items():
        wu = wt(u)
        for v, d, wv in bw:
            if wu + wv > cap:
                flag = True
                continue
            w = u + v
            s = out.get(w, 0) + c * d
            if p:
                s %= p
            if s:
                out[w] = s
            else:
                out.pop(w, None)
    res = NCPoly.__new__(NCPoly)
    res.alphabet, res.terms, res.truncated = al, out, flag
    return res


class Tensor:
    """An element of ``T ⊗ T``: map from word pairs to coefficients."""

    __slots__ = ("alphabet", "terms", "truncated")

    def __init__(self, alphabet: Alphabet, terms: Mapping, truncated: bool = False):
        self.alphabet = alphabet
        self.terms = {k: v for k, v in terms.items() if v}
        self.truncated = truncated

    def __eq__(self, other):
        return isinstance(other, Tensor) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        al, f = self.alphabet, self.alphabet.field
        key = word_key(al)
        items = sorted(self.terms.items(), key=lambda kv: (key(kv[0][0]), key(kv[0][1])))
        parts = [f"{f.format(c)}*{al.label(u)}|{al.label(v)}" for (u, v), c in items]
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


@lru_cache(maxsize=200_000)
def word_coproduct(word: Word) -> tuple:
    """Unshuffle coproduct of a word as ``((left, right), multiplicity)`` pairs."""
    n = len(word)
    acc: dict = {}
    for mask in range(1 << n):
        left = tuple(word[i] for i in range(n) if mask >> i & 1)
        right = tuple(word[i] for i in range(n) if not mask >> i & 1)
        acc[(left, right)] = acc.get((left, right), 0) + 1
    return tuple(sorted(acc.items()))


def coproduct(a: NCPoly) -> Tensor:
    f = a.field
    out: dict = {}
    for w, c in a.terms.items():
        for pair, m in word_coproduct(w):
            axpy(f, out, c, {pair: f(m)})
    return Tensor(a.alphabet, out, a.truncated)


def reduced_coproduct(a: NCPoly) -> Tensor:
    """``Δ(a) - a⊗1 - 1⊗a`` restricted to pairs of nonempty words."""
    f = a.field
    out: dict = {}
    for w, c in a.terms.items():
        for (u, v), m in word_coproduct(w):
            if u and v:
                axpy(f, out, c, {(u, v): f(m)})
    return Tensor(a.alphabet, out, a.truncated)


def counit_eval(a: NCPoly):
    return a.coefficient(())


@lru_cache(maxsize=None)
def reduced_coproduct_map(alphabet: Alphabet, n: int) -> LinearMap:
    """Matrix of the reduced coproduct on the weight-``n`` words."""
    f = alphabet.field
    words = alphabet.words(n)
    pair_index: dict = {}
    cols = []
    for w in words:
        col: dict = {}
        for (u, v), m in word_coproduct(w):
            if u and v:
                j = pair_index.setdefault((u, v), len(pair_index))
                axpy(f, col, f(m), {j: f.one})
        cols.append(col)
    lab = alphabet.label
    codomain = Basis(f"{lab(u)}|{lab(v)}" for (u, v) in pair_index)
    return LinearMap(f, alphabet.word_basis(n), codomain, tuple(cols))


@lru_cache(maxsize=None)
def primitives(alphabet: Alphabet, n: int) -> Subspace:
    """Primitive elements of weight ``n``: the kernel of the reduced coproduct."""
    if not 1 <= n <= alphabet.cap:
        raise ValueError(f"weight {n} outside 1..{alphabet.cap}")
    return kernel_basis(reduced_coproduct_map(alphabet, n))


def primitive_polys(alphabet: Alphabet, n: int) -> list[NCPoly]:
    """The echelon basis of ``primitives(alphabet, n)`` as polynomials."""
    return [NCPoly.from_vector(alphabet, n, row) for row in primitives(alphabet, n).rows]


# ----------------------------------------------------------------------------
# Lyndon words


def lyndon_words(k: int, n: int) -> list[Word]:
    """Lyndon words of length ``n`` over ``k`` letters, lexicographically (Duval)."""
    if k < 1 or n < 1:
        raise ValueError("need k, n >= 1")
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        if len(w) == n:
            out.append(tuple(w))
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return out


def is_lyndon(word: Sequence) -> bool:
    w = tuple(word)
    return bool(w) and all(w < w[i:] + w[:i] for i in range(1, len(w)))


def standard_factorization(word: Word) -> tuple[Word, Word]:
    """``(u, v)`` with ``v`` the longest proper Lyndon suffix."""
    for i in range(1, len(word)):
        if is_lyndon(word[i:]):
            return word[:i], word[i:]
    raise ValueError(f"{word!r} has no standard factorization")


def lyndon_bracket(alphabet: Alphabet, word: Sequence) -> NCPoly:
    word = tuple(word)
    if not is_lyndon(word):
        raise ValueError(f"{word!r} is not a Lyndon word")
    return _bracket(alphabet, word)


@lru_cache(maxsize=None)
def _bracket(alphabet: Alphabet, word: Word) -> NCPoly:
    if len(word) == 1:
        return alphabet.letter(word[0])
    u, v = standard_factorization(word)
    a, b = _bracket(alphabet, u), _bracket(alphabet, v)
    return a * b - b * a


def lyndon_primitive_elements(alphabet: Alphabet, n: int) -> list[tuple[Word, int, NCPoly]]:
    """Oracle spanning set of weight-``n`` primitives: ``(lyndon word, j, bracket^(p^j))``.

    In characteristic 0 only ``j = 0`` occurs.
    """
    if not alphabet.unweighted:
        raise ValueError("the Lyndon oracle needs an unweighted alphabet")
    if not 1 <= n <= alphabet.cap:
        raise ValueError(f"weight {n} outside 1..{alphabet.cap}")
    k = len(alphabet)
    if k == 0:
        return []
    p = alphabet.field.characteristic
    out = []
    j, q = 0, 1
    while q <= n:
        if n % q == 0:
            for w in lyndon_words(k, n // q):
                out.append((w, j, _bracket(alphabet, w) ** q))
        if not p:
            break
        j, q = j + 1, q * p
    return out


def lyndon_primitive_oracle(alphabet: Alphabet, n: int) -> Subspace:
    elements = lyndon_primitive_elements(alphabet, n)
    return Subspace.span(alphabet.field, alphabet.word_basis(n), [e.vector(n) for _, _, e in elements])


def mobius(n: int) -> int:
    result, m, d = 1, n, 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            result = -result
        d += 1
    if m > 1:
        result = -result
    return result


def witt_dimension(k: int, n: int) -> int:
    """Dimension of the degree-``n`` part of the free Lie algebra on ``k`` letters."""
    total = sum(mobius(d) * k ** (n // d) for d in range(1, n + 1) if n % d == 0)
    return total // n


def restricted_witt_dimension(k: int, n: int, p: int) -> int:
    """``sum of witt_dimension(k, m)`` over ``m * p**j == n``; equals Witt for p = 0."""
    if p == 0:
        return witt_dimension(k, n)
    total, q = 0, 1
    while q <= n:
        if n % q == 0:
            total += witt_dimension(k, n // q)
        q *= p
    return total


# ----------------------------------------------------------------------------
# the projection onto degree one and induced maps


def degree_one_projection(a: NCPoly) -> list:
    """Coefficients of the single-letter words, one per letter."""
    z = a.field.zero
    return [a.terms.get((i,), z) for i in range(len(a.alphabet))]


def letter_inclusion(alphabet: Alphabet, vec: Sequence) -> NCPoly:
    return NCPoly(alphabet, {(i,): c for i, c in enumerate(vec) if c})


def apply_letter_map(f: LinearMap, a: NCPoly, target: Alphabet) -> NCPoly:
    """The algebra map ``T(f)`` sending each letter to the image ``f`` gives it."""
    src = a.alphabet
    if f.field != src.field or target.field != src.field:
        raise ValueError("field mismatch")
    if tuple(f.domain) != src.names or tuple(f.codomain) != target.names:
        raise ValueError("letter map bases do not match the alphabets")
    images = [NCPoly(target, {(i,): c for i, c in col.items()}) for col in f.columns]
    return evaluate(a, images, target)


def evaluate(a: NCPoly, images: Sequence[NCPoly], target: Alphabet) -> NCPoly:
    """Algebra map from ``T(a.alphabet)`` sending letter ``i`` to ``images[i]``."""
    f = target.field
    out = target.zero()
    acc: dict = {}
    flag = a.truncated
    cache: dict = {(): target.one()}

    def image_of(word):
        hit = cache.get(word)
        if hit is None:
            hit = image_of(word[:-1]) * images[word[-1]]
            cache[word] = hit
        return hit

    for w, c in a.terms.items():
        im = image_of(w)
        flag = flag or im.truncated
        axpy(f, acc, c, im.terms)
    out = NCPoly(target, acc, flag)
    return out
