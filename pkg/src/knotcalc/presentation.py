"""Finite group presentations: parsing, normalization, length, triangular form.

Text syntax::

    < a, b | abaBAB >
    < x1, x2 | x1 x2 x1^-1 x2^-1 ; x1 x1 x2 >

Generators are separated by commas, relators by commas or semicolons.  For
single-character generator names an uppercase letter denotes the inverse of
the lowercase generator; any letter may carry an ``^-1`` (or ``^k``) suffix.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import InputError
from .linalg import IntMatrix

Letter = tuple[int, int]  # (generator index, +1 or -1)
Word = tuple[Letter, ...]

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_EXPONENT = re.compile(r"\^\s*(-?\d+)")
FRESH_PREFIX = "_t"


def free_reduce(word) -> Word:
    out: list[Letter] = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def cyclic_reduce(word) -> Word:
    w = list(free_reduce(word))
    i, j = 0, len(w) - 1
    while i < j and w[i][0] == w[j][0] and w[i][1] == -w[j][1]:
        i += 1
        j -= 1
    return tuple(w[i:j + 1])


def inverse(word) -> Word:
    return tuple((g, -e) for g, e in reversed(word))


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.relators)

    @property
    def is_triangular(self) -> bool:
        return all(len(r) in (2, 3) for r in self.relators)

    def __str__(self) -> str:
        return serialize(self)


def _letter_text(gens, g: int, e: int) -> str:
    name = gens[g]
    if len(name) == 1 and name.islower() and name.upper() not in gens:
        return name if e > 0 else name.upper()
    return name if e > 0 else f"{name}^-1"


def serialize(p: Presentation) -> str:
    """Canonical text form, e.g. ``<a,b | abaBAB>``."""
    gens = p.generators
    words = []
    for r in p.relators:
        parts = [_letter_text(gens, g, e) for g, e in r]
        # single-char letters can be glued; anything else needs separators
        glue = "" if all(len(gens[g]) == 1 for g, _ in r) else " "
        words.append(glue.join(parts))
    rel = ", ".join(words)
    return f"<{','.join(gens)} | {rel}>" if rel else f"<{','.join(gens)} |>"


def _parse_word(text: str, offset: int, gens: tuple[str, ...]) -> list[Letter]:
    index = {g: i for i, g in enumerate(gens)}
    by_length = sorted(gens, key=len, reverse=True)
    letters: list[Letter] = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace() or ch in "*.":
            pos += 1
            continue
        if ch == "1" and not letters and text[pos + 1:].strip() == "":
            pos += 1  # the identity word
            continue
        m = _NAME.match(text, pos)
        if not m:
            raise InputError(f"unexpected character {ch!r} in relator", offset + pos)
        token = m.group(0)
        # greedy longest generator name at this position
        name = next((g for g in by_length if token.startswith(g)), None)
        sign = 1
        if name is None:
            lower = ch.lower()
            if ch.isupper() and lower in index:
                name, sign = lower, -1
            else:
                raise InputError(f"unknown generator in relator: {token!r}", offset + pos)
        pos += len(name)
        exp = 1
        em = _EXPONENT.match(text, pos)
        if em:
            exp = int(em.group(1))
            pos = em.end()
        sign *= 1 if exp > 0 else -1
        letters.extend([(index[name], sign)] * abs(exp))
    return letters


def parse_presentation(text: str) -> Presentation:
    """Parse ``< gens | relators >`` and normalize the result.

    Relators are freely and cyclically reduced, empty ones dropped, and every
    length-1 relator eliminates its generator by substitution.
    """
    s = text.strip()
    lead = len(text) - len(text.lstrip())
    if not s.startswith("<"):
        raise InputError("presentation must start with '<'", lead)
    if not s.endswith(">"):
        raise InputError("presentation must end with '>'", lead + len(s) - 1)
    bar = s.find("|")
    if bar < 0:
        raise InputError("missing '|' between generators and relators", lead + len(s) - 1)
    gen_text, rel_text = s[1:bar], s[bar + 1:-1]

    gens: list[str] = []
    pos = 1
    for chunk in gen_text.split(","):
        name = chunk.strip()
        at = lead + pos + (len(chunk) - len(chunk.lstrip()))
        pos += len(chunk) + 1
        if not name:
            if chunk.strip() == "" and gen_text.strip() == "":
                break
            raise InputError("empty generator name", at)
        if not _NAME.fullmatch(name):
            raise InputError(f"invalid generator name {name!r}", at)
        if name.startswith(FRESH_PREFIX):
            raise InputError(f"generator prefix {FRESH_PREFIX!r} is reserved", at)
        if name in gens:
            raise InputError(f"duplicate generator {name!r}", at)
        gens.append(name)

    words = []
    pos = bar + 1
    for chunk in re.split(r"[,;]", rel_text):
        start = lead + pos
        pos += len(chunk) + 1
        if not chunk.strip():
            continue
        if not gens:
            raise InputError("relators given for a presentation with no generators", start)
        words.append(_parse_word(chunk, start, tuple(gens)))
    return normalize(Presentation(tuple(gens), tuple(tuple(w) for w in words)))


def normalize(p: Presentation) -> Presentation:
    gens = list(p.generators)
    rels = [cyclic_reduce(r) for r in p.relators]
    rels = [r for r in rels if r]
    while True:
        short = next((r for r in rels if len(r) == 1), None)
        if short is None:
            break
        dead = short[0][0]
        # the relator says this generator is trivial: delete it everywhere
        rels = [tuple((g if g < dead else g - 1, e) for g, e in r if g != dead) for r in rels]
        rels = [w for w in (cyclic_reduce(r) for r in rels) if w]
        del gens[dead]
    return Presentation(tuple(gens), tuple(rels))


def presentation_length(p: Presentation) -> int:
    """Sum over relators of (word length - 2)."""
    return sum(len(cyclic_reduce(r)) - 2 for r in p.relators)


def triangularize(p: Presentation) -> Presentation:
    """Split relators longer than 3 until every relator has length 2 or 3.

    The leftmost longest relator ``x1 x2 ... xk`` is replaced by
    ``u^-1 x1 x2`` and ``u x3 ... xk`` with ``u`` a fresh generator
    ``_t0, _t1, ...``.  Presentation length is preserved.
    """
    gens = list(p.generators)
    rels = list(p.relators)
    fresh = 0
    while True:
        longest = max((len(r) for r in rels), default=0)
        if longest <= 3:
            break
        j = next(i for i, r in enumerate(rels) if len(r) == longest)
        r = rels[j]
        while f"{FRESH_PREFIX}{fresh}" in gens:
            fresh += 1
        u = len(gens)
        gens.append(f"{FRESH_PREFIX}{fresh}")
        fresh += 1
        rels[j:j + 1] = [((u, -1), r[0], r[1]), ((u, 1),) + tuple(r[2:])]
    return Presentation(tuple(gens), tuple(rels))


def abelianization_matrix(p: Presentation) -> IntMatrix:
    """Exponent-sum matrix: row per relator, column per generator."""
    n = len(p.generators)
    rows = []
    for r in p.relators:
        row = [0] * n
        for g, e in r:
            row[g] += e
        rows.append(row)
    return IntMatrix.from_rows(rows, n)
