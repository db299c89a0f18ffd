"""Garside left normal form and super summit set conjugacy for small B_n.

Simple elements (positive permutation braids) are stored as permutation
tuples: ``a[p]`` is the starting position of the strand found at position p
after the braid.  The product ``a*b`` (a first) is ``a[b[p]]``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

from .braid import BraidWord, cycle_type, exponent_sum

MAX_STRANDS = 6
MAX_SUMMIT_SET = 100_000

Perm = tuple[int, ...]


class BudgetExceeded(RuntimeError):
    """The conjugacy computation hit its size cap; the answer is unknown."""


@dataclass(frozen=True)
class GarsideForm:
    strands: int
    infimum: int
    factors: tuple[Perm, ...]

    @property
    def supremum(self) -> int:
        return self.infimum + len(self.factors)

    def to_word(self) -> BraidWord:
        n = self.strands
        delta = _delta(n)
        letters: list[int] = []
        dl = list(perm_to_letters(delta))
        if self.infimum >= 0:
            letters.extend(dl * self.infimum)
        else:
            letters.extend([-x for x in reversed(dl)] * (-self.infimum))
        for f in self.factors:
            letters.extend(perm_to_letters(f))
        return BraidWord(n, tuple(letters))


def _identity(n: int) -> Perm:
    return tuple(range(n))


def _delta(n: int) -> Perm:
    return tuple(range(n - 1, -1, -1))


def _gen(n: int, i: int) -> Perm:
    p = list(range(n))
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def mul(a: Perm, b: Perm) -> Perm:
    return tuple(a[x] for x in b)


def inv(a: Perm) -> Perm:
    out = [0] * len(a)
    for p, x in enumerate(a):
        out[x] = p
    return tuple(out)


def tau(a: Perm) -> Perm:
    """Conjugation by the half twist."""
    n = len(a)
    return tuple(n - 1 - a[n - 1 - p] for p in range(n))


def right_complement(a: Perm) -> Perm:
    """The simple element c with a*c = Delta."""
    ai = inv(a)
    n = len(a)
    return tuple(ai[n - 1 - p] for p in range(n))


def right_descents(a: Perm) -> frozenset[int]:
    return frozenset(i for i in range(1, len(a)) if a[i - 1] > a[i])


def left_descents(a: Perm) -> frozenset[int]:
    return right_descents(inv(a))


def perm_to_letters(a: Perm) -> tuple[int, ...]:
    """A positive word for the simple element a (bubble sort)."""
    cur = list(range(len(a)))
    target = list(a)
    out = []
    changed = True
    while changed:
        changed = False
        for i in range(1, len(a)):
            # swap if the pair is out of the target relative order
            if target.index(cur[i - 1]) > target.index(cur[i]):
                cur[i - 1], cur[i] = cur[i], cur[i - 1]
                out.append(i)
                changed = True
    return tuple(out)


def _make_left_weighted(a: Perm, b: Perm) -> tuple[Perm, Perm]:
    n = len(a)
    while True:
        extra = left_descents(b) - right_descents(a)
        if not extra:
            return a, b
        i = min(extra)
        g = _gen(n, i)
        a = mul(a, g)
        b = mul(g, b)


def _normalize(n: int, d: int, factors: list[Perm]) -> GarsideForm:
    ident = _identity(n)
    delta = _delta(n)
    fs = list(factors)
    changed = True
    while changed:
        changed = False
        for k in range(len(fs) - 1, 0, -1):
            a, b = _make_left_weighted(fs[k - 1], fs[k])
            if (a, b) != (fs[k - 1], fs[k]):
                fs[k - 1], fs[k] = a, b
                changed = True
    while fs and fs[0] == delta:
        fs.pop(0)
        d += 1
    while fs and fs[-1] == ident:
        fs.pop()
    assert delta not in fs and ident not in fs
    return GarsideForm(n, d, tuple(fs))


def _raw_factors(w: BraidWord) -> tuple[int, list[Perm]]:
    n = w.strands
    d = 0
    fs: list[Perm] = []
    for x in w.letters:
        g = _gen(n, abs(x))
        if x > 0:
            fs.append(g)
        else:
            # s^-1 = c Delta^-1 with c = right complement of s; push Delta^-1 left
            fs.append(right_complement(g))
            fs = [tau(f) for f in fs]
            d -= 1
    return d, fs


def left_normal_form(w: BraidWord) -> GarsideForm:
    d, fs = _raw_factors(w)
    return _normalize(w.strands, d, fs)


def _tau_pow(a: Perm, k: int) -> Perm:
    return tau(a) if k % 2 else a


def cycling(x: GarsideForm) -> GarsideForm:
    if not x.factors:
        return x
    first = x.factors[0]
    return _normalize(x.strands, x.infimum,
                      list(x.factors[1:]) + [_tau_pow(first, x.infimum)])


def decycling(x: GarsideForm) -> GarsideForm:
    if not x.factors:
        return x
    last = x.factors[-1]
    return _normalize(x.strands, x.infimum,
                      [_tau_pow(last, x.infimum)] + list(x.factors[:-1]))


def conjugate_by_simple(x: GarsideForm, s: Perm) -> GarsideForm:
    """s^-1 x s."""
    # s^-1 = Delta^-1 tau(rc(s)); moving Delta^d left across it applies tau^d
    head = _tau_pow(tau(right_complement(s)), x.infimum)
    return _normalize(x.strands, x.infimum - 1, [head, *x.factors, s])


def summit_representative(x: GarsideForm) -> GarsideForm:
    """Iterate cycling then decycling until inf is maximal and sup minimal."""
    n = x.strands
    bound = n * (n - 1) // 2 + 1
    while True:
        improved = False
        y = x
        for _ in range(bound):
            y = cycling(y)
            if y.infimum > x.infimum:
                x = y
                improved = True
                break
        if improved:
            continue
        y = x
        for _ in range(bound):
            y = decycling(y)
            if y.supremum < x.supremum:
                x = y
                improved = True
                break
        if not improved:
            return x


@lru_cache(maxsize=None)
def _all_simples(n: int) -> tuple[Perm, ...]:
    ident = _identity(n)
    return tuple(p for p in permutations(range(n)) if p != ident)


def super_summit_search(x: GarsideForm, target: GarsideForm | None = None,
                        cap: int = MAX_SUMMIT_SET) -> tuple[bool, set]:
    """Explore the super summit set of x by simple conjugations.

    Returns (target found, explored set).  Raises BudgetExceeded past cap.
    """
    x = summit_representative(x)
    inf, sup = x.infimum, x.supremum
    seen = {x}
    if target is not None and x == target:
        return True, seen
    queue = deque([x])
    simples = _all_simples(x.strands)
    while queue:
        y = queue.popleft()
        for s in simples:
            z = conjugate_by_simple(y, s)
            if z.infimum != inf or z.supremum != sup or z in seen:
                continue
            if target is not None and z == target:
                return True, seen
            seen.add(z)
            if len(seen) > cap:
                raise BudgetExceeded(f"super summit set exceeds {cap} elements")
            queue.append(z)
    return False, seen


def are_conjugate(a: BraidWord, b: BraidWord, cap: int = MAX_SUMMIT_SET,
                  max_strands: int = MAX_STRANDS) -> bool:
    if a.strands != b.strands:
        return False
    if exponent_sum(a) != exponent_sum(b) or cycle_type(a) != cycle_type(b):
        return False
    if a.strands > max_strands:
        raise BudgetExceeded(f"conjugacy limited to n <= {max_strands}")
    if a.strands <= 2:
        return True  # B_1 and B_2 are abelian: the exponent sum decides
    ra = summit_representative(left_normal_form(a))
    rb = summit_representative(left_normal_form(b))
    if ra == rb:
        return True
    if (ra.infimum, ra.supremum) != (rb.infimum, rb.supremum):
        return False
    found, _ = super_summit_search(ra, rb, cap)
    return found
