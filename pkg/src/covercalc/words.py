"""Words in free groups and their images in abelian groups.

A word is a tuple of nonzero integers: letter ``i`` is the ``i``-th free
generator and ``-i`` its inverse. Generators are numbered from 1. For a
surface of genus ``g`` the standard basis is ordered
``a1, b1, ..., ag, bg, c1, ..., c_{b+p-1}``.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from .errors import InputError

Word = tuple  # tuple[int, ...]


def reduce_word(w: Iterable[int], cyclic: bool = False) -> Word:
    """Freely reduce ``w``; with ``cyclic`` also strip conjugating letters."""
    out: list[int] = []
    for x in w:
        if x == 0:
            raise InputError("generator index 0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    if cyclic:
        i, j = 0, len(out) - 1
        while i < j and out[i] == -out[j]:
            i += 1
            j -= 1
        out = out[i : j + 1]
    return tuple(out)


def invert(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def multiply(*words: Sequence[int]) -> Word:
    """Reduced product of the given words, left to right."""
    out: list[int] = []
    for w in words:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def power(w: Sequence[int], k: int) -> Word:
    if k < 0:
        return power(invert(w), -k)
    return multiply(*([tuple(w)] * k)) if k else ()


def commutator(u: Sequence[int], v: Sequence[int]) -> Word:
    """``u v u^-1 v^-1``."""
    return multiply(u, v, invert(u), invert(v))


def max_letter(w: Sequence[int]) -> int:
    return max((abs(x) for x in w), default=0)


def abelianize(w: Sequence[int], rank: int, modulus=None) -> tuple:
    """Exponent-sum vector of ``w`` in Z^rank.

    ``modulus`` is either one integer applied to every coordinate or a
    sequence with one modulus per coordinate; 0 leaves a coordinate in Z.
    """
    if max_letter(w) > rank:
        raise InputError(f"letter index {max_letter(w)} exceeds rank {rank}")
    v = [0] * rank
    for x in w:
        v[abs(x) - 1] += 1 if x > 0 else -1
    if modulus is None:
        return tuple(v)
    mods = [modulus] * rank if isinstance(modulus, int) else list(modulus)
    if len(mods) != rank:
        raise InputError(f"expected {rank} moduli, got {len(mods)}")
    return tuple(x % m if m else x for x, m in zip(v, mods))


# -- text form ---------------------------------------------------------------

_TOKEN = re.compile(r"([A-Za-z])(\d*)(?:\^(-?\d+))?$")
_FREE_LETTERS = "abcdefghijklmnopqrstuvwxyz"
_FACTOR_LETTERS = "stuvwyz"


class Naming:
    """Maps letter names to generator indices and back.

    ``kind`` is ``"surface"`` (a_i, b_i, c_j for genus ``genus``),
    ``"free"`` (x_i, or bare letters a, b, c, ... in alphabetical order)
    or ``"factors"`` (bare letters s, t, u, ... or x_i).
    """

    def __init__(self, kind: str = "free", genus: int = 0):
        if kind not in ("surface", "free", "factors"):
            raise InputError(f"unknown naming scheme {kind!r}")
        self.kind = kind
        self.genus = genus

    def __eq__(self, other):
        return isinstance(other, Naming) and (self.kind, self.genus) == (other.kind, other.genus)

    def __repr__(self):
        return f"Naming({self.kind!r}, genus={self.genus})"

    def index(self, letter: str, sub: str) -> int:
        if letter == "x" and sub:
            return int(sub)
        if self.kind == "surface":
            if not sub:
                raise InputError(f"surface generator {letter!r} needs an index")
            k = int(sub)
            if k < 1:
                raise InputError(f"generator index must be positive in {letter}{sub}")
            if letter == "a" and k <= self.genus:
                return 2 * k - 1
            if letter == "b" and k <= self.genus:
                return 2 * k
            if letter == "c":
                return 2 * self.genus + k
            raise InputError(f"{letter}{sub} is not a generator of a genus-{self.genus} surface")
        if sub:
            raise InputError(f"unexpected index on {letter}{sub}; use x{sub}")
        alphabet = _FREE_LETTERS if self.kind == "free" else _FACTOR_LETTERS
        if letter not in alphabet:
            raise InputError(f"unknown generator letter {letter!r}")
        return alphabet.index(letter) + 1

    def name(self, i: int) -> str:
        if self.kind == "surface":
            g = self.genus
            if i <= 2 * g:
                return f"{'ab'[(i - 1) % 2]}{(i + 1) // 2}"
            return f"c{i - 2 * g}"
        if self.kind == "factors" and i <= len(_FACTOR_LETTERS):
            return _FACTOR_LETTERS[i - 1]
        if self.kind == "free" and i <= 4:
            return "abcd"[i - 1]  # "e" would read as the identity
        return f"x{i}"


def parse_tokens(text: str) -> list[tuple[str, int]]:
    """Split ``"a1 b1^-1 t^2"`` into ``[("a1", 1), ("b1", -1), ("t", 2)]``.

    The identity may be written as ``1`` or ``e`` (or an empty string).
    """
    out = []
    for tok in text.split():
        if tok in ("1", "e"):
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise InputError(f"bad word token {tok!r}")
        exp = int(m.group(3)) if m.group(3) is not None else 1
        out.append((m.group(1) + m.group(2), exp))
    return out


def resolve_tokens(tokens: Iterable[tuple[str, int]], naming: Naming) -> Word:
    letters: list[int] = []
    for name, exp in tokens:
        m = _TOKEN.match(name)
        if not m:
            raise InputError(f"bad generator name {name!r}")
        i = naming.index(m.group(1), m.group(2))
        letters.extend([i if exp > 0 else -i] * abs(exp))
    return tuple(letters)


def parse_word(text: str, naming: Naming | None = None) -> Word:
    """Parse a word such as ``"a1 b1 a1^-1"``; the result is not reduced."""
    return resolve_tokens(parse_tokens(text), naming or Naming())


def format_word(w: Sequence[int], naming: Naming | None = None) -> str:
    naming = naming or Naming()
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        name = naming.name(abs(w[i]))
        exp = (j - i) * (1 if w[i] > 0 else -1)
        parts.append(name if exp == 1 else f"{name}^{exp}")
        i = j
    return " ".join(parts)
