"""Free-group words and conjugacy classes.

A word is a tuple of nonzero ints: ``i`` is the generator g_i, ``-i`` its
inverse.  Text form uses ``a, b, c, ...`` for generators and upper case for
inverses, so ``"abAB"`` is ``(1, 2, -1, -2)``.

Letters are ordered ``a < A < b < B < ...``; classes are ordered by length,
then lexicographically on that letter order.  The constant class (empty word)
is the minimum.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass
from functools import total_ordering

from loopalg.errors import DegenerateClass, GeneratorOutOfRank, InvalidCharacter

Word = tuple[int, ...]

MAX_RANK = 26


def letter_key(letter: int) -> int:
    return 2 * (abs(letter) - 1) + (letter < 0)


def word_key(w: Word) -> tuple:
    return (len(w), tuple(letter_key(x) for x in w))


def parse_word(s: str, rank: int | None = None) -> Word:
    letters = []
    for pos, ch in enumerate(s):
        if ch in string.ascii_lowercase:
            letters.append(ord(ch) - ord("a") + 1)
        elif ch in string.ascii_uppercase:
            letters.append(-(ord(ch) - ord("A") + 1))
        else:
            raise InvalidCharacter(pos + 1, ch)
        if rank is not None and abs(letters[-1]) > rank:
            raise GeneratorOutOfRank(ch, rank)
    return tuple(letters)


def format_word(w: Word) -> str:
    return "".join(
        chr(ord("a") + x - 1) if x > 0 else chr(ord("A") - x - 1) for x in w
    )


def word_rank(w: Word) -> int:
    return max((abs(x) for x in w), default=0)


def free_reduce(w) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse_word(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def multiply(*words: Word) -> Word:
    return free_reduce(itertools.chain.from_iterable(words))


def cyclic_reduce(w) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def min_rotation(w: Word) -> Word:
    if not w:
        return w
    return min((w[i:] + w[:i] for i in range(len(w))), key=word_key)


@total_ordering
@dataclass(frozen=True)
class OrientedClass:
    """Conjugacy class of a free-group element, stored in canonical form."""

    word: Word

    def __len__(self) -> int:
        return len(self.word)

    def __lt__(self, other: "OrientedClass") -> bool:
        return word_key(self.word) < word_key(other.word)

    def __str__(self) -> str:
        return format_word(self.word)

    def __repr__(self) -> str:
        return f"OrientedClass({format_word(self.word)!r})"

    @property
    def is_trivial(self) -> bool:
        return not self.word

    @classmethod
    def parse(cls, s: str, rank: int | None = None) -> "OrientedClass":
        return canonical_class(parse_word(s, rank))


@total_ordering
@dataclass(frozen=True)
class UnorientedClass:
    """A class together with its inverse; ``rep`` is the smaller of the two."""

    rep: OrientedClass

    def __len__(self) -> int:
        return len(self.rep)

    def __lt__(self, other: "UnorientedClass") -> bool:
        return self.rep < other.rep

    def __str__(self) -> str:
        return format_word(self.rep.word)

    def __repr__(self) -> str:
        return f"UnorientedClass({format_word(self.rep.word)!r})"

    @property
    def word(self) -> Word:
        return self.rep.word

    @property
    def is_trivial(self) -> bool:
        return self.rep.is_trivial

    def lifts(self) -> tuple[OrientedClass, ...]:
        inv = inverse_class(self.rep)
        return (self.rep,) if inv == self.rep else (self.rep, inv)

    @classmethod
    def parse(cls, s: str, rank: int | None = None) -> "UnorientedClass":
        return unoriented(OrientedClass.parse(s, rank))


CONSTANT = OrientedClass(())


def canonical_class(w) -> OrientedClass:
    if isinstance(w, str):
        w = parse_word(w)
    return OrientedClass(min_rotation(cyclic_reduce(w)))


def inverse_class(c: OrientedClass) -> OrientedClass:
    return canonical_class(inverse_word(c.word))


def unoriented(c: OrientedClass) -> UnorientedClass:
    return UnorientedClass(min(c, inverse_class(c)))


def power(c: OrientedClass, n: int) -> OrientedClass:
    if n < 1:
        raise ValueError("power needs a positive exponent")
    return canonical_class(c.word * n)


def primitive_root(c: OrientedClass) -> tuple[OrientedClass, int]:
    w = c.word
    if not w:
        raise DegenerateClass("the constant class has no primitive root")
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return canonical_class(w[:p]), n // p
    raise AssertionError("unreachable")


def class_order(c1, c2) -> int:
    """-1, 0 or 1 as c1 is less than, equal to or greater than c2."""
    k1, k2 = word_key(c1.word), word_key(c2.word)
    return (k1 > k2) - (k1 < k2)


def abelianize(c, rank: int = 2) -> tuple[int, ...]:
    w = c.word if hasattr(c, "word") else c
    rank = max(rank, word_rank(w))
    v = [0] * rank
    for x in w:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(v)


def equal_or_inverse_roots(c1: OrientedClass, c2: OrientedClass) -> bool:
    """True when the two classes are nonzero powers of a common element."""
    if c1.is_trivial or c2.is_trivial:
        return False
    r1, _ = primitive_root(c1)
    r2, _ = primitive_root(c2)
    return r1 == r2 or r1 == inverse_class(r2)


def enumerate_classes(rank: int, max_len: int, include_trivial: bool = True):
    """All oriented classes with canonical length <= max_len, sorted."""
    letters = [i for g in range(1, rank + 1) for i in (g, -g)]
    found = {CONSTANT} if include_trivial else set()
    for n in range(1, max_len + 1):
        for w in _reduced_words(letters, n):
            if w[0] != -w[-1]:
                found.add(canonical_class(w))
    return sorted(found)


def _reduced_words(letters, n):
    stack = [(x,) for x in letters]
    while stack:
        w = stack.pop()
        if len(w) == n:
            yield w
            continue
        for x in letters:
            if x != -w[-1]:
                stack.append(w + (x,))


def enumerate_unoriented(rank: int, max_len: int, include_trivial: bool = True):
    return sorted({unoriented(c) for c in enumerate_classes(rank, max_len, include_trivial)})


def is_conjugate(w1: Word, w2: Word) -> bool:
    return canonical_class(w1) == canonical_class(w2)


def peripheral_power(c: OrientedClass, boundary: tuple[OrientedClass, ...]) -> int:
    """Nonzero n with c conjugate to b^n for a boundary class b, else 0."""
    if c.is_trivial:
        return 0
    for b in boundary:
        if b.is_trivial or len(c) % len(b):
            continue
        n = len(c) // len(b)
        if power(b, n) == c:
            return n
        if power(inverse_class(b), n) == c:
            return -n
    return 0
