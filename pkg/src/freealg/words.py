"""Combinatorics on words over the generator alphabet {1..n}.

Functions accept any sequence of letter indices (tuples are used throughout
the package as monomials); ``Word`` adds alphabet validation and printing.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import BadIndex, BadMarker, EmptyWord


@dataclass(frozen=True)
class Word:
    letters: tuple
    n: int

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        for c in self.letters:
            if not (isinstance(c, int) and 1 <= c <= self.n):
                raise BadIndex(f"letter {c!r} outside alphabet 1..{self.n}")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + tuple(other), max(self.n, getattr(other, "n", self.n)))

    def __str__(self):
        return format_word(self.letters)


def format_word(w: Sequence[int]) -> str:
    """Juxtaposed form ``x1x2x2``; the empty word prints as ``1``."""
    return "".join(f"x{c}" for c in w) if len(w) else "1"


def parse_word(text: str) -> tuple:
    t = text.strip()
    if t in ("", "1", "ε"):
        return ()
    out = []
    i = 0
    while i < len(t):
        if t[i] != "x" or i + 1 >= len(t) or not t[i + 1].isdigit():
            raise ValueError(f"bad word {text!r}")
        out.append(int(t[i + 1]))
        i += 2
    return tuple(out)


def _need(w):
    w = tuple(w)
    if not w:
        raise EmptyWord("empty word")
    return w


def failure_function(w: Sequence[int]) -> list[int]:
    """fail[i] = length of the longest proper border of w[:i+1]."""
    fail = [0] * len(w)
    k = 0
    for i in range(1, len(w)):
        while k and w[i] != w[k]:
            k = fail[k - 1]
        if w[i] == w[k]:
            k += 1
        fail[i] = k
    return fail


def is_primitive(w: Sequence[int]) -> bool:
    w = _need(w)
    n = len(w)
    period = n - failure_function(w)[-1]
    return not (period < n and n % period == 0)


def is_unbordered(w: Sequence[int]) -> bool:
    w = _need(w)
    return failure_function(w)[-1] == 0


def occurrences(pattern: Sequence[int], text: Sequence[int]) -> list[int]:
    pat = _need(pattern)
    text = tuple(text)
    fail = failure_function(pat)
    out = []
    k = 0
    for i, c in enumerate(text):
        while k and c != pat[k]:
            k = fail[k - 1]
        if c == pat[k]:
            k += 1
        if k == len(pat):
            out.append(i - len(pat) + 1)
            k = fail[k - 1]
    return out


def contains(pattern: Sequence[int], text: Sequence[int]) -> bool:
    return bool(occurrences(pattern, text))


@dataclass(frozen=True)
class Runs:
    """``text = segments[0] a^exps[0] segments[1] ... a^exps[-1] segments[-1]``."""

    segments: tuple
    exponents: tuple

    def rebuild(self, a: Sequence[int]) -> tuple:
        out = list(self.segments[0])
        for j, seg in zip(self.exponents, self.segments[1:]):
            out.extend(tuple(a) * j)
            out.extend(seg)
        return tuple(out)


def maximal_runs(a: Sequence[int], text: Sequence[int]) -> Runs:
    a = _need(a)
    if not is_unbordered(a) or not is_primitive(a):
        raise BadMarker(f"{format_word(a)} is bordered or a proper power")
    text = tuple(text)
    la = len(a)
    pos = occurrences(a, text)
    segments, exps = [], []
    cursor = 0
    i = 0
    while i < len(pos):
        start = pos[i]
        j = 1
        while i + j < len(pos) and pos[i + j] == start + j * la:
            j += 1
        segments.append(text[cursor:start])
        exps.append(j)
        cursor = start + j * la
        i += j
    segments.append(text[cursor:])
    return Runs(tuple(segments), tuple(exps))
