"""A family of binary-rooted-tree automorphism groups with decidable word problem.

Each group in the family is generated by four involutions a, b, c, d acting on
the infinite binary tree, parameterized by an eventually periodic sequence
omega over {0, 1, 2}. The letter a swaps the two level-1 subtrees; each of
b, c, d fixes level 1, acts on the 0-subtree through a spin table entry
(either a or the identity, selected by the first symbol of omega) and acts on
the 1-subtree as the same letter for the shifted sequence.

Spin tables (asserted at import):

    symbol   0  1  2
    b        a  a  e
    c        a  e  a
    d        e  a  a

Words act left to right: act("ab", omega, v) applies a first, then b.
Conjugation is h^g = g^{-1} h g throughout the package.

The word problem is solved by contraction: Klein-reduce, kill odd a-parity,
and recurse on the two level-1 sections, whose lengths drop below the parent's.
This requires omega not eventually constant (the tree action is not faithful
there); constant sequences are served by the wreath model in
:mod:`markedgroups.lamplighter` via :func:`route_constant`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .words import gen_commutator, gen_conjugate, gen_inverse, klein_reduce

__all__ = [
    "SPIN",
    "OmegaWord",
    "parse_omega",
    "EventuallyConstantError",
    "generator_action",
    "act",
    "root_parity",
    "sections",
    "is_trivial",
    "Portrait",
    "portrait_of",
    "level_permutation",
    "order_of",
    "translate_L_word",
    "limit_trivial",
    "route_constant",
    "dead_letter_for",
    "first_active_depth",
    "fingerprint_depth",
]


SPIN: dict[str, tuple[str, str, str]] = {
    "b": ("a", "a", "e"),
    "c": ("a", "e", "a"),
    "d": ("e", "a", "a"),
}

# Startup sanity: the three rows are the three ways of placing the single
# dead entry, so each symbol kills exactly one of b, c, d.
assert SPIN == {"b": ("a", "a", "e"), "c": ("a", "e", "a"), "d": ("e", "a", "a")}
for _sym in range(3):
    assert sorted(SPIN[x][_sym] for x in "bcd") == ["a", "a", "e"]


class EventuallyConstantError(ValueError):
    """Raised when an operation needs a faithful tree action but omega is
    eventually constant."""


@dataclass(frozen=True, slots=True)
class OmegaWord:
    """Eventually periodic sequence over {0,1,2}: preperiod then repeated period.

    Canonicalized on construction: the period is made primitive (shortest),
    and any preperiod tail that merely repeats the periodic part is absorbed
    into a rotation of the period. Two OmegaWords are equal iff they denote
    the same infinite sequence.
    """

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self) -> None:
        pre, per = tuple(self.preperiod), tuple(self.period)
        if not per:
            raise ValueError("period must be nonempty")
        for sym in pre + per:
            if sym not in (0, 1, 2):
                raise ValueError("symbols must be 0, 1 or 2")
        # primitive period
        n = len(per)
        for d in range(1, n + 1):
            if n % d == 0 and per == per[:d] * (n // d):
                per = per[:d]
                break
        # absorb preperiod tail into the period by rotating
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = (per[-1],) + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    def at(self, i: int) -> int:
        """Symbol at 0-based position i (the paper-style omega_{i+1})."""
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    @property
    def first(self) -> int:
        return self.at(0)

    def shift(self) -> "OmegaWord":
        """Drop the first symbol (the tau map)."""
        if self.preperiod:
            return OmegaWord(self.preperiod[1:], self.period)
        return OmegaWord((), self.period[1:] + self.period[:1])

    @property
    def eventually_constant(self) -> bool:
        return len(self.period) == 1

    @property
    def constant(self) -> bool:
        return len(self.period) == 1 and not self.preperiod

    def __str__(self) -> str:
        return "".join(map(str, self.preperiod)) + "(" + "".join(map(str, self.period)) + ")"


_OMEGA_RE = re.compile(r"^([012]*)\(([012]+)\)$")


def parse_omega(text: str) -> OmegaWord:
    """Parse the text form "<preperiod>(<period>)", e.g. "000(012)" or "(0)"."""
    m = _OMEGA_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad omega string {text!r}; expected like '01(012)' or '(0)'")
    return OmegaWord(tuple(map(int, m.group(1))), tuple(map(int, m.group(2))))


# ---------------------------------------------------------------------------
# Tree action


def generator_action(g: str, omega: OmegaWord, v: str) -> str:
    """Image of vertex v (a string over '01') under one generator."""
    if g == "a":
        if not v:
            return v
        return ("1" if v[0] == "0" else "0") + v[1:]
    if g not in "bcd":
        raise ValueError(f"unknown generator {g!r}")
    if not v:
        return v
    if v[0] == "0":
        spin = SPIN[g][omega.first]
        rest = v[1:]
        if spin == "a":
            rest = generator_action("a", omega, rest)
        return "0" + rest
    return "1" + generator_action(g, omega.shift(), v[1:])


def act(w: str, omega: OmegaWord, v: str) -> str:
    """Apply a word letter by letter, first letter first."""
    for g in w:
        v = generator_action(g, omega, v)
    return v


def root_parity(w: str) -> int:
    """Parity of the a-count: 1 means the word swaps the level-1 subtrees."""
    return w.count("a") % 2


def _scan_sections(w: str, omega: OmegaWord) -> tuple[str, str]:
    """One pass over w collecting the words acting on the 0- and 1-subtrees.

    Each 'a' toggles which side subsequent letters feed. A non-a letter
    contributes its spin entry (dropping e) to the current 0-side target and
    itself to the 1-side target. Valid as stated only for even a-parity.
    """
    w0: list[str] = []
    w1: list[str] = []
    side = 0
    sym = omega.first
    for g in w:
        if g == "a":
            side ^= 1
            continue
        spin = SPIN[g][sym]
        if side == 0:
            if spin != "e":
                w0.append(spin)
            w1.append(g)
        else:
            w0.append(g)
            if spin != "e":
                w1.append(spin)
    return "".join(w0), "".join(w1)


def sections(w: str, omega: OmegaWord) -> tuple[str, str]:
    """The pair (w0, w1) of level-1 sections, Klein-reduced, over the shifted omega.

    Requires even a-parity (odd-parity words do not stabilize level 1).
    """
    if root_parity(w) != 0:
        raise ValueError("sections are defined for even a-parity words only")
    w0, w1 = _scan_sections(w, omega)
    return klein_reduce(w0), klein_reduce(w1)


@lru_cache(maxsize=1 << 20)
def _is_trivial_reduced(w: str, omega: OmegaWord) -> bool:
    if not w:
        return True
    if root_parity(w):
        return False
    if len(w) == 1:
        # single letter from {b,c,d}: trivial iff its spin entry is e at
        # every position; scanning preperiod plus one period covers all
        positions = len(omega.preperiod) + len(omega.period)
        return all(SPIN[w][omega.at(i)] == "e" for i in range(positions))
    w0, w1 = sections(w, omega)
    tau = omega.shift()
    return _is_trivial_reduced(w0, tau) and _is_trivial_reduced(w1, tau)


def is_trivial(w: str, omega: OmegaWord) -> bool:
    """Decide whether w represents the identity, by contraction.

    Raises EventuallyConstantError when omega is eventually constant: the
    tree action is not faithful there, so this decision procedure would
    answer for the wrong group.
    """
    if omega.eventually_constant:
        raise EventuallyConstantError(
            f"omega {omega} is eventually constant; use the wreath model "
            "(route_constant) or limit_trivial instead"
        )
    return _is_trivial_reduced(klein_reduce(w), omega)


# ---------------------------------------------------------------------------
# Portraits and level permutations


@dataclass(frozen=True, slots=True)
class Portrait:
    """Root-swap decorations of every tree vertex of depth < depth.

    nodes maps a vertex (string over '01', including the empty root) to the
    parity of the swap at that vertex. Equal portraits at sufficient depth
    certify equal group elements; unequal portraits always separate.
    """

    depth: int
    nodes: dict[str, int]

    def level_permutation(self, level: int | None = None) -> tuple[int, ...]:
        """Permutation of the 2^level vertices, derived from the decorations.

        Slow reference route, used to cross-check the vectorized one.
        """
        if level is None:
            level = self.depth
        if level > self.depth:
            raise ValueError("level exceeds portrait depth")
        out = []
        for i in range(1 << level):
            path = format(i, f"0{level}b") if level else ""
            img = []
            node = ""
            for bit in path:
                bit_val = int(bit) ^ self.nodes.get(node, 0)
                img.append(str(bit_val))
                node += bit
            out.append(int("".join(img), 2) if img else 0)
        return tuple(out)


def portrait_of(w: str, omega: OmegaWord, depth: int) -> Portrait:
    """Portrait of a word down to the given depth, via the sections recursion.

    Every vertex of depth < depth gets an explicit entry (zeros included), so
    portraits of equal group elements compare equal as dataclasses. The scan
    works for either parity: the section w0 always describes the subtree
    hanging off source child 0, with the root swap recorded separately.
    """
    nodes: dict[str, int] = {}

    def walk(word: str, om: OmegaWord, vertex: str) -> None:
        if len(vertex) >= depth:
            return
        word = klein_reduce(word)
        nodes[vertex] = root_parity(word)
        w0, w1 = _scan_sections(word, om)
        tau = om.shift()
        walk(w0, tau, vertex + "0")
        walk(w1, tau, vertex + "1")

    walk(w, omega, "")
    return Portrait(depth, nodes)


# Letter permutations of a tree level, cached per (letter, omega, depth).
# Index convention: vertex of depth D <-> integer whose most significant bit
# is the first path letter. Arrays are immutable int32.
_LETTER_PERM_CACHE: dict[tuple[str, OmegaWord, int], np.ndarray] = {}


def _letter_perm(g: str, omega: OmegaWord, depth: int) -> np.ndarray:
    key = (g, omega, depth)
    cached = _LETTER_PERM_CACHE.get(key)
    if cached is not None:
        return cached
    size = 1 << depth
    if depth == 0:
        perm = np.zeros(1, dtype=np.int32)
    elif g == "a":
        perm = np.arange(size, dtype=np.int32) ^ np.int32(size >> 1)
    else:
        half = size >> 1
        perm = np.arange(size, dtype=np.int32)
        spin = SPIN[g][omega.first]
        if spin == "a" and depth >= 2:
            perm[:half] ^= np.int32(half >> 1)
        sub = _letter_perm(g, omega.shift(), depth - 1)
        perm[half:] = sub + np.int32(half)
    perm.flags.writeable = False
    _LETTER_PERM_CACHE[key] = perm
    return perm


def level_permutation(w: str, omega: OmegaWord, depth: int) -> np.ndarray:
    """Permutation induced on the 2^depth vertices of one tree level.

    Entry i is the image of vertex i; identical arrays at a separating depth
    certify equal elements, different arrays always certify distinct ones.
    """
    size = 1 << depth
    cur = np.arange(size, dtype=np.int32)
    for g in w:
        cur = _letter_perm(g, omega, depth)[cur]
    cur.flags.writeable = False
    return cur


def acts_trivially_to_depth(w: str, omega: OmegaWord, depth: int) -> bool:
    """True iff w fixes every vertex of depth <= depth.

    Fixing the deepest level forces fixing all shallower ones, so a single
    level permutation suffices.
    """
    perm = level_permutation(w, omega, depth)
    return bool(np.array_equal(perm, np.arange(1 << depth, dtype=np.int32)))


# ---------------------------------------------------------------------------
# Orders, the index-2 subgroup dictionary, limits, constant routing


def order_of(w: str, omega: OmegaWord, max_exp: int = 10) -> int | None:
    """Order of w when it is a power of two <= 2^max_exp, else None.

    Repeated squaring: the family is torsion (every element has 2-power
    order) for the sequences this package accepts, so None signals only that
    max_exp was too small.
    """
    cur = klein_reduce(w)
    if is_trivial(cur, omega):
        return 1
    for k in range(1, max_exp + 1):
        cur = klein_reduce(cur + cur)
        if _is_trivial_reduced(cur, omega):
            return 1 << k
    return None


_L_LETTERS = {"x": "d", "X": "d", "y": "ab", "Y": "ba"}


def translate_L_word(w: str) -> str:
    """Rewrite a word over x, y (uppercase = inverse) into the a..d alphabet.

    x maps to d (an involution) and y to ab, so the image generates the
    index-2 subgroup <d, ab>. The result is Klein-reduced.
    """
    out = []
    for ch in w:
        if ch.isspace():
            continue
        if ch not in _L_LETTERS:
            raise ValueError(f"unknown L-generator {ch!r}; expected x, y, X or Y")
        out.append(_L_LETTERS[ch])
    return klein_reduce("".join(out))


def limit_trivial(w: str, k_range: range | None = None) -> bool | None:
    """Stabilized verdict for the limit of the all-zero-prefix subfamily.

    Evaluates is_trivial(w) in the groups for 0^k(012)... with k running over
    the window; returns the common verdict when all agree and None (unstable)
    otherwise. Window default starts past log2 of the word length, where the
    contraction has consumed the prefix.
    """
    w = klein_reduce(w)
    if k_range is None:
        base = math.ceil(math.log2(len(w) + 1)) + 2 if w else 2
        k_range = range(base, base + 5)
    if len(k_range) < 3:
        raise ValueError("stability window needs at least 3 values")
    verdicts = {is_trivial(w, OmegaWord((0,) * k, (0, 1, 2))) for k in k_range}
    if len(verdicts) == 1:
        return verdicts.pop()
    return None


def dead_letter_for(symbol: int) -> str:
    """The letter whose spin entry at the symbol is e (acts like the lamp)."""
    for x in "bcd":
        if SPIN[x][symbol] == "e":
            return x
    raise ValueError(f"symbol must be 0, 1 or 2, got {symbol}")


def route_constant(symbol: int) -> dict[str, str]:
    """Relabeling of {b,c,d} that matches a constant sequence to the wreath model.

    The dead letter (spin entry e at the symbol) plays the model's d role;
    the two active letters take the b and c roles in alphabetical order. Any
    assignment of the two actives works: the model has an automorphism
    swapping its b and c images while fixing the other two generators.
    """
    dead = dead_letter_for(symbol)
    actives = [x for x in "bcd" if x != dead]
    relabel = {"a": "a", dead: "d"}
    relabel[actives[0]] = "b"
    relabel[actives[1]] = "c"
    return relabel


# ---------------------------------------------------------------------------
# Fingerprint depth heuristic


def first_active_depth(letter: str, omega: OmegaWord) -> int | None:
    """First level (1-based) at which the letter's spin entry is a, or None.

    None occurs only for the dead letter of an eventually constant sequence.
    """
    horizon = len(omega.preperiod) + 2 * len(omega.period)
    for i in range(horizon):
        if SPIN[letter][omega.at(i)] == "a":
            return i + 1
    return None


def fingerprint_depth(omega: OmegaWord, max_len: int) -> int:
    """Tree depth at which level permutations separate words of length <= max_len.

    Heuristic: contraction halves word lengths per level (the log term), plus
    the worst first-active depth of any generator over all shifts of omega
    (the tail where a single surviving letter may still act trivially).
    Callers confirm fingerprint matches with the exact oracle, so a too-small
    depth is caught, never silently wrong.
    """
    if omega.eventually_constant:
        raise EventuallyConstantError("fingerprints need a faithful tree action")
    base = math.ceil(math.log2(max(max_len, 2))) + 1
    shifts = len(omega.preperiod) + len(omega.period)
    worst = 0
    om = omega
    for _ in range(shifts):
        for letter in "bcd":
            d = first_active_depth(letter, om)
            assert d is not None
            worst = max(worst, d)
        om = om.shift()
    return base + worst
