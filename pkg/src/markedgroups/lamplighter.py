"""Exact normal forms for the lamplighter group Z_n wr Z and its Z_2 extension.

A ``LampElement`` is a finitely supported lamp configuration f: Z -> Z_n
together with a shift z. Multiplication follows

    (f1, z1)(f2, z2) = (f1 + shift_{z1}(f2), z1 + z2),   shift_z(f)(i) = f(i - z),

with the marked generators s = one lamp at position 0 and t = bare shift 1.
Under this law s conjugated by t^i is the lamp at position -i.

The extension adjoins an involution acting by the automorphism alpha with
alpha(s) = t s t^{-1} and alpha(t) = t^{-1}. On normal forms this is the
reflection alpha(f, z) = (i -> f(1 - i), -z): the unique involutive companion
of t -> t^{-1} consistent with the a..d generator dictionary below (the other
candidate reflection, f(-1-i), would send s to t^{-1} s t and break c^2 = e).

Generator dictionary for the tree-family letters, with d as the dead letter:

    a -> (identity, flip)      d -> (s, no flip)
    b -> a . t                 c -> b . d

so that the product ab evaluates to (t, no flip). Other dead letters are
served by relabeling (see grigorchuk.route_constant). All five defining
relations a^2, b^2, c^2, d^2, bcd are verified at import time for each of the
three dictionaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .grigorchuk import route_constant
from .words import FreeWord

__all__ = [
    "LampElement",
    "lamp_identity",
    "lamp_s",
    "lamp_t",
    "lamp_multiply",
    "lamp_inverse",
    "lamp_conjugate",
    "lamp_commutator",
    "alpha",
    "ExtLampElement",
    "ext_identity",
    "ext_multiply",
    "ext_inverse",
    "ext_conjugate",
    "eval_st_word",
    "abcd_images",
    "eval_abcd_word",
    "lamp_t_n",
    "t_n_word",
    "structure_report",
]


@dataclass(frozen=True, slots=True)
class LampElement:
    """Normal form (lamps, shift) in Z_n wr Z; lamps store nonzero values only."""

    n: int
    lamps: tuple[tuple[int, int], ...]  # sorted (position, value), value in 1..n-1
    shift: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("modulus must be >= 2")
        positions = [p for p, _ in self.lamps]
        if positions != sorted(positions) or len(set(positions)) != len(positions):
            raise ValueError("lamps must be sorted by position with unique positions")
        for _, v in self.lamps:
            if not 0 < v < self.n:
                raise ValueError("lamp values must be nonzero residues")

    def __str__(self) -> str:
        inner = ",".join(f"{p}:{v}" for p, v in self.lamps)
        return f"lamps:{{{inner}}} shift:{self.shift}"


def _from_dict(n: int, lamps: dict[int, int], shift: int) -> LampElement:
    items = tuple(sorted((p, v % n) for p, v in lamps.items() if v % n))
    return LampElement(n, items, shift)


def lamp_identity(n: int = 2) -> LampElement:
    return LampElement(n, (), 0)


def lamp_s(n: int = 2, value: int = 1) -> LampElement:
    return _from_dict(n, {0: value}, 0)


def lamp_t(n: int = 2) -> LampElement:
    return LampElement(n, (), 1)


def lamp_multiply(u: LampElement, v: LampElement) -> LampElement:
    if u.n != v.n:
        raise ValueError("modulus mismatch")
    lamps = dict(u.lamps)
    for p, val in v.lamps:
        q = p + u.shift
        lamps[q] = lamps.get(q, 0) + val
    return _from_dict(u.n, lamps, u.shift + v.shift)


def lamp_inverse(u: LampElement) -> LampElement:
    return _from_dict(u.n, {p - u.shift: -v for p, v in u.lamps}, -u.shift)


def lamp_conjugate(u: LampElement, g: LampElement) -> LampElement:
    """u^g = g^{-1} u g."""
    return lamp_multiply(lamp_multiply(lamp_inverse(g), u), g)


def lamp_commutator(u: LampElement, v: LampElement) -> LampElement:
    return lamp_multiply(lamp_multiply(lamp_inverse(u), lamp_inverse(v)), lamp_multiply(u, v))


def alpha(u: LampElement) -> LampElement:
    """The involutive automorphism with alpha(s) = t s t^{-1}, alpha(t) = t^{-1}.

    On normal forms: reflect lamp positions through the point 1/2 and negate
    the shift. Re-derived rather than assumed; see the module docstring.
    """
    return _from_dict(u.n, {1 - p: v for p, v in u.lamps}, -u.shift)


@dataclass(frozen=True, slots=True)
class ExtLampElement:
    """Element (base, flip) of the extension, representing base . a^flip."""

    base: LampElement
    flip: int

    def __post_init__(self) -> None:
        if self.flip not in (0, 1):
            raise ValueError("flip must be 0 or 1")

    def __str__(self) -> str:
        return f"{self.base} flip:{self.flip}"


def ext_identity(n: int = 2) -> ExtLampElement:
    return ExtLampElement(lamp_identity(n), 0)


def _ext_multiply_with(twist: Callable[[LampElement], LampElement], u: ExtLampElement, v: ExtLampElement) -> ExtLampElement:
    base = lamp_multiply(u.base, twist(v.base) if u.flip else v.base)
    return ExtLampElement(base, u.flip ^ v.flip)


def ext_multiply(u: ExtLampElement, v: ExtLampElement) -> ExtLampElement:
    return _ext_multiply_with(alpha, u, v)


def ext_inverse(u: ExtLampElement) -> ExtLampElement:
    inv = lamp_inverse(u.base)
    return ExtLampElement(alpha(inv) if u.flip else inv, u.flip)


def ext_conjugate(u: ExtLampElement, g: ExtLampElement) -> ExtLampElement:
    return ext_multiply(ext_multiply(ext_inverse(g), u), g)


def ext_commutator(u: ExtLampElement, v: ExtLampElement) -> ExtLampElement:
    return ext_multiply(ext_multiply(ext_inverse(u), ext_inverse(v)), ext_multiply(u, v))


def eval_st_word(w: FreeWord, n: int = 2) -> LampElement:
    """Left-to-right product of s/t images of a rank-2 free word."""
    if w.rank != 2:
        raise ValueError("expected a rank-2 word over s, t")
    images = (lamp_s(n), lamp_t(n))
    acc = lamp_identity(n)
    for idx, sign in w.letters:
        g = images[idx]
        acc = lamp_multiply(acc, g if sign == 1 else lamp_inverse(g))
    return acc


def _abcd_images_with(twist: Callable[[LampElement], LampElement], n: int) -> dict[str, ExtLampElement]:
    a_img = ExtLampElement(lamp_identity(n), 1)
    d_img = ExtLampElement(lamp_s(n), 0)
    t_img = ExtLampElement(lamp_t(n), 0)
    mult = lambda u, v: _ext_multiply_with(twist, u, v)
    b_img = mult(a_img, t_img)  # b = a.t since t = ab and a is an involution
    c_img = mult(b_img, d_img)  # c = b.d since bcd = e
    return {"a": a_img, "b": b_img, "c": c_img, "d": d_img}


def abcd_images(dead_letter: str = "d", n: int = 2) -> dict[str, ExtLampElement]:
    """Model images of a, b, c, d when the given letter is the dead one."""
    symbol = {"d": 0, "c": 1, "b": 2}.get(dead_letter)
    if symbol is None:
        raise ValueError("dead letter must be one of b, c, d")
    relabel = route_constant(symbol)
    canonical = _abcd_images_with(alpha, n)
    return {letter: canonical[relabel[letter]] for letter in "abcd"}


def eval_abcd_word(w: str, dead_letter: str = "d", n: int = 2) -> ExtLampElement:
    """Evaluate a word over a..d in the extension model."""
    images = abcd_images(dead_letter, n)
    acc = ext_identity(n)
    for ch in w:
        if ch.isspace():
            continue
        img = images.get(ch.lower())
        if img is None:
            raise ValueError(f"letter {ch!r} not in alphabet abcd")
        acc = ext_multiply(acc, img)  # every generator is an involution
    return acc


_RELATIONS = ("aa", "bb", "cc", "dd", "bcd")


def _verify_dictionaries() -> None:
    for dead in "bcd":
        for rel in _RELATIONS:
            val = eval_abcd_word(rel, dead)
            assert val == ext_identity(), f"relation {rel} fails in the {dead}-dead model: {val}"
    # the product ab must land on the bare shift in the standard dictionary
    assert eval_abcd_word("ab", "d") == ExtLampElement(lamp_t(), 0)
    # alpha really is the stated automorphism: involutive, fixes the defining images
    s, t = lamp_s(), lamp_t()
    assert alpha(t) == lamp_inverse(t)
    assert alpha(s) == lamp_multiply(t, lamp_multiply(s, lamp_inverse(t)))


_verify_dictionaries()


def t_n_word(i: int) -> str:
    """Defining word for t_i: d conjugated by (ab)^i, with negative indices
    conjugated once more by a."""
    if i >= 0:
        return "ba" * i + "d" + "ab" * i
    m = -i - 1
    return "a" + "ba" * m + "d" + "ab" * m + "a"


def lamp_t_n(i: int, n: int = 2) -> ExtLampElement:
    """Model value of t_i, via its defining word; lies in the lamp part."""
    val = eval_abcd_word(t_n_word(i), "d", n)
    assert val.flip == 0 and val.base.shift == 0, f"t_{i} left the lamp subgroup: {val}"
    return val


def _factor_k_part(u: ExtLampElement) -> tuple[LampElement, int]:
    """Unique factorization u = (k, 0) . a^flip of the semidirect product."""
    return u.base, u.flip


def structure_report(window: int, corrupt_alpha: bool = False, n: int = 2, sample_count: int = 100, seed: int = 1729) -> dict:
    """Normal-form verification of the model's internal structure.

    Checks, for |i|, |j| <= window: the t_i are pairwise distinct commuting
    involutions forming the lamp row; conjugation by ab steps the index; no
    t-product meets a nonzero power of ab; random elements factor uniquely
    over the flip. ``corrupt_alpha`` replaces the twist by the identity map,
    a negative control that must break the conjugation check.
    """
    from .sampling import Lcg  # local import to keep module deps one-way

    if window < 1:
        raise ValueError("window must be >= 1")
    twist = (lambda u: u) if corrupt_alpha else alpha
    mult = lambda u, v: _ext_multiply_with(twist, u, v)

    def inv(u: ExtLampElement) -> ExtLampElement:
        base = lamp_inverse(u.base)
        return ExtLampElement(twist(base) if u.flip else base, u.flip)

    def conj(u: ExtLampElement, g: ExtLampElement) -> ExtLampElement:
        return mult(mult(inv(g), u), g)

    def eval_word(word: str) -> ExtLampElement:
        images = _abcd_images_with(twist, n)
        acc = ExtLampElement(lamp_identity(n), 0)
        for ch in word:
            acc = mult(acc, images[ch])
        return acc

    ident = ext_identity(n)
    indices = range(-window, window + 1)
    t_vals = {i: eval_word(t_n_word(i)) for i in indices}
    ab_val = eval_word("ab")

    checks: dict[str, dict] = {}

    distinct = len(set(t_vals.values())) == len(t_vals)
    checks["t_distinct"] = {"pass": distinct}

    commute_fail = None
    for i in indices:
        for j in indices:
            if mult(t_vals[i], t_vals[j]) != mult(t_vals[j], t_vals[i]):
                commute_fail = [i, j]
                break
        if commute_fail:
            break
    checks["t_commute"] = {"pass": commute_fail is None, "witness": commute_fail}

    conj_fail = None
    for i in range(-window, window):
        if conj(t_vals[i], ab_val) != t_vals[i + 1]:
            conj_fail = i
            break
    checks["conjugation_steps_index"] = {"pass": conj_fail is None, "witness": conj_fail}

    # shift separation: t-products stay at shift 0, (ab)^k moves by k
    shift_ok = all(v.base.shift == 0 and v.flip == 0 for v in t_vals.values())
    power = ident
    for k in range(1, window + 1):
        power = mult(power, ab_val)
        if power.base.shift == 0:
            shift_ok = False
            break
    checks["shift_separates_ab_powers"] = {"pass": shift_ok}

    rng = Lcg(seed)
    factor_ok = True
    for _ in range(sample_count):
        lamps = {rng.randrange(2 * window + 1) - window: 1 + rng.randrange(n - 1) for _ in range(rng.randrange(4))}
        u = ExtLampElement(_from_dict(n, lamps, rng.randrange(7) - 3), rng.randrange(2))
        k_part, flip = _factor_k_part(u)
        rebuilt = mult(ExtLampElement(k_part, 0), ExtLampElement(lamp_identity(n), flip))
        if rebuilt != u or (flip == 0) != (u.flip == 0):
            factor_ok = False
            break
    checks["unique_factorization"] = {"pass": factor_ok}

    relations_ok = all(eval_word(rel) == ident for rel in _RELATIONS)
    checks["defining_relations"] = {"pass": relations_ok}

    # metabelian evidence: lamp commutators drop to shift 0 and commute
    meta_ok = True
    for _ in range(sample_count):
        es = []
        for _ in range(4):
            lamps = {rng.randrange(9) - 4: 1 + rng.randrange(n - 1) for _ in range(rng.randrange(3))}
            es.append(_from_dict(n, lamps, rng.randrange(9) - 4))
        c1 = lamp_commutator(es[0], es[1])
        c2 = lamp_commutator(es[2], es[3])
        if c1.shift != 0 or c2.shift != 0 or lamp_commutator(c1, c2) != lamp_identity(n):
            meta_ok = False
            break
    checks["metabelian_commutators"] = {"pass": meta_ok}

    verdict = "pass" if all(c["pass"] for c in checks.values()) else "fail"
    return {
        "schema": 1,
        "window": window,
        "modulus": n,
        "negative_control": corrupt_alpha,
        "checks": checks,
        "verdict": verdict,
    }
