"""Braid words on n strands, read cyclically as closed braids.

A letter is a nonzero int: ``i`` is sigma_i and ``-i`` its inverse.  All
values are immutable; every function here is pure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

SCHEMA_VERSION = 1


class BraidError(ValueError):
    """Base class for malformed braid input."""


class WordFormatError(BraidError):
    pass


class IndexOutOfRange(BraidError):
    pass


class StrandCountTooSmall(BraidError):
    pass


class NotInDestabilizationForm(BraidError):
    pass


class FormMismatch(BraidError):
    pass


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise StrandCountTooSmall(f"strand count must be >= 1, got {self.strands}")
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        for x in self.letters:
            if x == 0:
                raise WordFormatError("letter 0 is not a generator")
            if abs(x) > self.strands - 1:
                raise IndexOutOfRange(f"generator {abs(x)} needs more than {self.strands} strands")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_word(self)

    def rotate(self, k: int) -> "BraidWord":
        if not self.letters:
            return self
        k %= len(self.letters)
        return BraidWord(self.strands, self.letters[k:] + self.letters[:k])

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-x for x in reversed(self.letters)))

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if other.strands != self.strands:
            raise BraidError("strand counts differ")
        return BraidWord(self.strands, self.letters + other.letters)

    def to_json(self) -> dict:
        return {"schemaVersion": SCHEMA_VERSION, "n": self.strands, "letters": list(self.letters)}

    @classmethod
    def from_json(cls, data: dict) -> "BraidWord":
        try:
            return cls(int(data["n"]), tuple(int(x) for x in data["letters"]))
        except (KeyError, TypeError) as exc:
            raise WordFormatError(f"bad braid JSON: {exc}") from None


_WORD_RE = re.compile(r"^\s*n\s*=\s*(-?\d+)\s*:(.*)$", re.S)


def parse_word(text: str) -> BraidWord:
    """Parse ``"n=<N>: <i1> <i2> ..."``."""
    m = _WORD_RE.match(text)
    if not m:
        raise WordFormatError(f"expected 'n=<int>: <letters>', got {text!r}")
    n = int(m.group(1))
    if n < 1:
        raise StrandCountTooSmall(f"strand count must be >= 1, got {n}")
    body = m.group(2).replace(",", " ").split()
    try:
        letters = tuple(int(tok) for tok in body)
    except ValueError:
        raise WordFormatError(f"non-integer letter in {text!r}") from None
    return BraidWord(n, letters)


def format_word(w: BraidWord) -> str:
    if not w.letters:
        return f"n={w.strands}:"
    return f"n={w.strands}: " + " ".join(str(x) for x in w.letters)


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w: BraidWord) -> BraidWord:
    ls = list(free_reduce(w.letters))
    while len(ls) >= 2 and ls[0] == -ls[-1]:
        ls = ls[1:-1]
    return BraidWord(w.strands, tuple(ls))


def cyclically_equal(a: BraidWord, b: BraidWord) -> bool:
    if a.strands != b.strands or len(a) != len(b):
        return False
    if not a.letters:
        return True
    doubled = a.letters + a.letters
    n = len(b)
    return any(doubled[k:k + n] == b.letters for k in range(n))


def exponent_sum(w: BraidWord) -> int:
    return sum(1 if x > 0 else -1 for x in w.letters)


def permutation_of(w: BraidWord) -> tuple[int, ...]:
    """``perm[p]`` is the final position of the strand starting at position p."""
    pos = list(range(w.strands))  # pos[p] = strand (by start position) now at p
    for x in w.letters:
        i = abs(x)
        pos[i - 1], pos[i] = pos[i], pos[i - 1]
    perm = [0] * w.strands
    for p, s in enumerate(pos):
        perm[s] = p
    return tuple(perm)


def closure_components(w: BraidWord) -> tuple[tuple[int, ...], int, tuple[int, ...]]:
    """Return (permutation, component count, component of each strand).

    Components are numbered by their lowest strand position.
    """
    perm = permutation_of(w)
    assign = [-1] * w.strands
    count = 0
    for start in range(w.strands):
        if assign[start] >= 0:
            continue
        p = start
        while assign[p] < 0:
            assign[p] = count
            p = perm[p]
        count += 1
    return perm, count, tuple(assign)


def cycle_type(w: BraidWord) -> tuple[int, ...]:
    _, count, assign = closure_components(w)
    return tuple(sorted(assign.count(c) for c in range(count)))


def linking_matrix_of_word(w: BraidWord) -> tuple[tuple[int, ...], ...]:
    """Signed crossing counts between closure components.

    Off-diagonal entries are linking numbers (half the signed count, always
    an integer for a closed braid); the diagonal is the self-writhe.
    """
    _, count, assign = closure_components(w)
    raw = [[0] * count for _ in range(count)]
    pos = list(range(w.strands))
    for x in w.letters:
        i = abs(x)
        a, b = assign[pos[i - 1]], assign[pos[i]]
        sign = 1 if x > 0 else -1
        if a == b:
            raw[a][a] += sign
        else:
            raw[a][b] += sign
            raw[b][a] += sign
        pos[i - 1], pos[i] = pos[i], pos[i - 1]
    for a in range(count):
        for b in range(count):
            if a != b:
                assert raw[a][b] % 2 == 0
                raw[a][b] //= 2
    return tuple(tuple(row) for row in raw)


# ---------------------------------------------------------------- detectors


def _rotations(w: BraidWord):
    n = len(w.letters)
    for r in range(max(n, 1)):
        yield r, (w.letters[r:] + w.letters[:r]) if n else ()


def detect_destabilization_form(w: BraidWord) -> Optional[BraidWord]:
    """W on n-1 strands if the word is cyclically W sigma_{n-1}^{+-1}, else None."""
    n = w.strands
    if n < 2:
        return None
    top = [k for k, x in enumerate(w.letters) if abs(x) == n - 1]
    if len(top) != 1:
        return None
    k = top[0]
    rest = w.letters[k + 1:] + w.letters[:k]
    return BraidWord(n - 1, rest)


def double_destab_pattern(n: int, eps: int) -> tuple[int, ...]:
    return tuple(eps * i for i in (n - 2, n - 1, n - 3, n - 2))


def detect_double_destabilization_form(w: BraidWord) -> Optional[tuple[BraidWord, int]]:
    """(W on n-2 strands, eps) if some rotation is W s_{n-2} s_{n-1} s_{n-3} s_{n-2} (all eps)."""
    n = w.strands
    if n < 4:
        raise StrandCountTooSmall("double destabilization needs n >= 4")
    if len(w.letters) < 4:
        return None
    for eps in (1, -1):
        pat = double_destab_pattern(n, eps)
        for _, rot in _rotations(w):
            if rot[-4:] == pat and all(abs(x) <= n - 3 for x in rot[:-4]):
                return BraidWord(n - 2, rot[:-4]), eps
    return None


def double_destabilize_word(w: BraidWord) -> BraidWord:
    """W s_(n-2) s_(n-1) s_(n-3) s_(n-2) (all eps) -> W s_(n-3)^(2 eps) on n-2 strands."""
    res = detect_double_destabilization_form(w)
    if res is None:
        raise NotInDestabilizationForm(f"{format_word(w)} has no double destabilization form")
    W, eps = res
    return BraidWord(w.strands - 2, W.letters + (eps * (w.strands - 3),) * 2)


def destabilize_word(w: BraidWord) -> BraidWord:
    res = detect_destabilization_form(w)
    if res is None:
        raise NotInDestabilizationForm(f"{format_word(w)} is not of the form W s_(n-1)^(+-1)")
    return res


# ------------------------------------------------------------ exchange moves


@dataclass(frozen=True)
class ExchangeForm:
    rotation: int
    split_index: int
    s: int
    t: int
    w_block: tuple[int, ...]
    u_block: tuple[int, ...]
    thin: bool = False

    def to_json(self) -> dict:
        return {
            "rotation": self.rotation,
            "splitIndex": self.split_index,
            "s": self.s,
            "t": self.t,
            "wBlock": list(self.w_block),
            "uBlock": list(self.u_block),
            "thin": self.thin,
        }

    @classmethod
    def from_json(cls, d: dict) -> "ExchangeForm":
        return cls(d["rotation"], d["splitIndex"], d["s"], d["t"],
                   tuple(d["wBlock"]), tuple(d["uBlock"]), bool(d.get("thin", False)))


def _canonical_w(w_block: tuple[int, ...], s: int) -> tuple[int, ...]:
    # letters of index <= s-2 commute with every letter of U; a maximal such
    # suffix of W can be moved to the front without changing the move
    k = len(w_block)
    while k > 0 and abs(w_block[k - 1]) <= s - 2:
        k -= 1
    return w_block[k:] + w_block[:k]


def enumerate_exchange_forms(w: BraidWord) -> list[ExchangeForm]:
    """All exchange splittings W|U of rotations of w, one per equivalence class.

    A splitting needs nonempty blocks, W over indices <= t, U over indices
    >= s, and 1 < s <= t < n-1.  Every admissible (s, t) is listed.
    """
    n = w.strands
    L = len(w.letters)
    if n < 4 or L < 2:
        return []
    found: dict[tuple, ExchangeForm] = {}
    for r, rot in _rotations(w):
        for k in range(1, L):
            wb, ub = rot[:k], rot[k:]
            wmax = max(abs(x) for x in wb)
            umin = min(abs(x) for x in ub)
            for s in range(2, min(umin, n - 2) + 1):
                for t in range(max(s, wmax), n - 1):
                    key = (_canonical_w(wb, s), ub, s, t)
                    if key not in found:
                        found[key] = ExchangeForm(r, k, s, t, wb, ub)
    if not found:
        return []
    best = min(f.t - f.s for f in found.values())
    return [ExchangeForm(f.rotation, f.split_index, f.s, f.t, f.w_block, f.u_block,
                         f.t - f.s == best)
            for f in found.values()]


def half_twist_letters(lo: int, hi: int) -> tuple[int, ...]:
    """Positive half twist on strands lo..hi (1-based, inclusive).

    Written as (s_lo ... s_{hi-1})(s_lo ... s_{hi-2}) ... (s_lo).
    """
    out: list[int] = []
    for top in range(hi - 1, lo - 1, -1):
        out.extend(range(lo, top + 1))
    return tuple(out)


def full_twist_letters(lo: int, hi: int, sign: int = 1) -> tuple[int, ...]:
    """Full twist on strands lo..hi: the half twist squared, or its inverse."""
    half = half_twist_letters(lo, hi)
    pos = half + half
    if sign > 0:
        return pos
    return tuple(-x for x in reversed(pos))


def _check_form(w: BraidWord, rot: int, blocks: tuple[int, ...]):
    if not w.letters or w.rotate(rot).letters != blocks:
        raise FormMismatch("form does not match word")


def apply_exchange_move(w: BraidWord, f: ExchangeForm, twist_sign: int) -> BraidWord:
    if twist_sign not in (1, -1):
        raise ValueError("twist sign must be +1 or -1")
    _check_form(w, f.rotation, f.w_block + f.u_block)
    tau = full_twist_letters(f.s, f.t + 1, twist_sign)
    tau_inv = full_twist_letters(f.s, f.t + 1, -twist_sign)
    return BraidWord(w.strands, f.w_block + tau + f.u_block + tau_inv)


# ------------------------------------------------------------------- flypes


@dataclass(frozen=True)
class FlypeForm:
    rotation: int
    w1_block: tuple[int, ...]
    w2_block: tuple[int, ...]
    p: int
    delta: int

    def letters(self, n: int) -> tuple[int, ...]:
        sgn = 1 if self.p > 0 else -1
        return (self.w1_block + (sgn * (n - 1),) * abs(self.p)
                + self.w2_block + (self.delta * (n - 1),))

    def to_json(self) -> dict:
        return {"rotation": self.rotation, "w1Block": list(self.w1_block),
                "w2Block": list(self.w2_block), "p": self.p, "delta": self.delta}

    @classmethod
    def from_json(cls, d: dict) -> "FlypeForm":
        return cls(d["rotation"], tuple(d["w1Block"]), tuple(d["w2Block"]), d["p"], d["delta"])


def _top_blocks(letters: Sequence[int], top: int) -> Optional[list[tuple[int, int]]]:
    """Maximal cyclic runs of index-``top`` letters as (start, length)."""
    L = len(letters)
    is_top = [abs(x) == top for x in letters]
    if all(is_top) or not any(is_top):
        return None
    start = next(k for k in range(L) if not is_top[k])
    runs = []
    k = 0
    while k < L:
        j = (start + k) % L
        if is_top[j]:
            length = 0
            while k < L and is_top[(start + k) % L]:
                length += 1
                k += 1
            runs.append((j, length))
        else:
            k += 1
    return runs


def enumerate_elementary_flype_forms(w: BraidWord) -> list[FlypeForm]:
    n = w.strands
    if n < 3:
        return []
    letters = w.letters
    L = len(letters)
    runs = _top_blocks(letters, n - 1)
    if runs is None or len(runs) != 2:
        return []
    forms = []
    for lone, block in ((runs[0], runs[1]), (runs[1], runs[0])):
        if lone[1] != 1:
            continue
        bvals = [letters[(block[0] + j) % L] for j in range(block[1])]
        if len({v > 0 for v in bvals}) != 1:
            continue
        r = (lone[0] + 1) % L
        rot = letters[r:] + letters[:r]
        # rot = W1 block W2 lone
        w1_len = (block[0] - r) % L
        w1 = rot[:w1_len]
        w2 = rot[w1_len + block[1]:L - 1]
        if not free_reduce(w1) or not free_reduce(w2):
            continue
        p = block[1] if bvals[0] > 0 else -block[1]
        delta = 1 if letters[lone[0]] > 0 else -1
        if p == delta:
            continue   # the flype would be the identity
        forms.append(FlypeForm(r, w1, w2, p, delta))
    return forms


def apply_elementary_flype(w: BraidWord, f: FlypeForm) -> BraidWord:
    n = w.strands
    _check_form(w, f.rotation, f.letters(n))
    sgn = 1 if f.p > 0 else -1
    out = (f.w1_block + (f.delta * (n - 1),) + f.w2_block
           + (sgn * (n - 1),) * abs(f.p))
    return BraidWord(n, out)


# ------------------------------------------------- far commutation helpers


def _far(a: int, b: int) -> bool:
    return abs(abs(a) - abs(b)) >= 2


def peel_suffix(letters: Sequence[int], pattern: Sequence[int]) -> Optional[tuple[list[int], list[int]]]:
    """Decide whether ``letters`` equals ``W + pattern`` up to far commutation.

    Returns (indices of W, indices of the pattern letters) into ``letters``.
    Peeling takes the rightmost letter of each pattern index, which is the
    only candidate in the trace monoid, so the test is exact for linear words.
    """
    rest = list(range(len(letters)))
    tail: list[int] = []
    for x in reversed(pattern):
        pos = None
        for k in range(len(rest) - 1, -1, -1):
            y = letters[rest[k]]
            if abs(y) == abs(x):
                pos = k
                break
            if not _far(x, y):
                return None
        if pos is None or letters[rest[pos]] != x:
            return None
        tail.append(rest.pop(pos))
    tail.reverse()
    return rest, tail


def trace_reduce(w: BraidWord) -> BraidWord:
    """Cyclic free reduction up to far commutation: cancel x ... x^-1 when
    every letter in between (cyclically) commutes with x."""
    letters = list(w.letters)
    changed = True
    while changed:
        changed = False
        L = len(letters)
        for i in range(L):
            x = letters[i]
            for d in range(1, L):
                j = (i + d) % L
                y = letters[j]
                if y == -x:
                    for k in sorted((i, j), reverse=True):
                        letters.pop(k)
                    changed = True
                    break
                if not _far(x, y):
                    break
            if changed:
                break
    return BraidWord(w.strands, tuple(letters))


def commute_to_double_destab(w: BraidWord) -> Optional[tuple[BraidWord, tuple[int, ...]]]:
    """A far-commutation rearrangement of a rotation of w into
    W s_(n-2) s_(n-1) s_(n-3) s_(n-2), with the source index of every letter."""
    n = w.strands
    L = len(w.letters)
    if n < 4 or L < 4:
        return None
    for eps in (1, -1):
        pat = double_destab_pattern(n, eps)
        for r, rot in _rotations(w):
            res = peel_suffix(rot, pat)
            if res is None or any(abs(rot[i]) > n - 3 for i in res[0]):
                continue
            order = res[0] + res[1]
            return (BraidWord(n, tuple(rot[i] for i in order)),
                    tuple((r + i) % L for i in order))
    return None


def commute_to_flype(w: BraidWord) -> Optional[tuple[BraidWord, tuple[int, ...]]]:
    """Gather the s_(n-1) letters lying between consecutive s_(n-2) letters
    (they commute with everything else there), then free reduce.  Returns
    the rearranged word and source indices when it has a flype form."""
    n = w.strands
    L = len(w.letters)
    if n < 3 or L < 4:
        return None
    top = n - 1
    cuts = [k for k, x in enumerate(w.letters) if abs(x) == top - 1]
    if not cuts:
        return None
    r = (cuts[-1] + 1) % L
    rot = [(w.letters[(r + j) % L], (r + j) % L) for j in range(L)]
    out: list[tuple[int, int]] = []
    seg: list[tuple[int, int]] = []
    for item in rot:
        if abs(item[0]) == top - 1:
            out.extend([x for x in seg if abs(x[0]) != top])
            out.extend([x for x in seg if abs(x[0]) == top])
            out.append(item)
            seg = []
        else:
            seg.append(item)
    out.extend([x for x in seg if abs(x[0]) != top])
    out.extend([x for x in seg if abs(x[0]) == top])
    stack: list[tuple[int, int]] = []
    for item in out:
        if stack and stack[-1][0] == -item[0]:
            stack.pop()
        else:
            stack.append(item)
    while len(stack) >= 2 and stack[0][0] == -stack[-1][0]:
        stack = stack[1:-1]
    cand = BraidWord(n, tuple(x for x, _ in stack))
    if not enumerate_elementary_flype_forms(cand):
        return None
    return cand, tuple(i for _, i in stack)


# ------------------------------------------------------ braid relation moves


def relation_rewrites(letters: Sequence[int]) -> list[tuple[int, ...]]:
    """All words one braid-relation rewrite away (linear positions only).

    Covers far commutation and the three-letter relations
    s_i^e s_j^d s_i^d = s_j^d s_i^d s_j^e for |i-j| = 1 (with e = d the usual
    braid relation; mixed signs are the valid variants).
    """
    ls = tuple(letters)
    out = []
    for k in range(len(ls) - 1):
        a, b = ls[k], ls[k + 1]
        if abs(abs(a) - abs(b)) >= 2:
            out.append(ls[:k] + (b, a) + ls[k + 2:])
    for k in range(len(ls) - 2):
        a, b, c = ls[k], ls[k + 1], ls[k + 2]
        if abs(a) == abs(c) and abs(abs(a) - abs(b)) == 1 and (b > 0) == (c > 0):
            i, j = abs(a), abs(b)
            e = 1 if a > 0 else -1
            d = 1 if b > 0 else -1
            out.append(ls[:k] + (d * j, d * i, e * j) + ls[k + 3:])
    return out


def canonical_linking(matrix: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Lexicographically least relabeling of a linking matrix.

    Comparing these compares matrices up to renumbering of components.
    """
    from itertools import permutations

    k = len(matrix)
    best = None
    for p in permutations(range(k)):
        cand = tuple(tuple(matrix[p[a]][p[b]] for b in range(k)) for a in range(k))
        if best is None or cand < best:
            best = cand
    return best if best is not None else ()


# ------------------------------------------------- closure polynomial filter


def _pmul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _padd(a: list[int], b: list[int], sign: int = 1) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] += sign * y
    return out


def _burau_letter(m: int, x: int) -> list[list[list[int]]]:
    """Reduced Burau matrix of one letter, times t for inverse letters.

    Entries are integer polynomials in t (coefficient lists).
    """
    i = abs(x)
    scale = [1] if x > 0 else [0, 1]
    mat = [[scale if r == c else [0] for c in range(m)] for r in range(m)]
    col = {i - 2: [0, 1], i - 1: [0, -1], i: [1]} if x > 0 else \
        {i - 2: [0, 1], i - 1: [-1], i: [1]}
    for r in range(m):
        mat[r][i - 1] = col.get(r, [0]) if abs(r - (i - 1)) <= 1 else [0]
    return mat


def _matmul(a, b):
    m = len(a)
    return [[_strip_sum(_pmul(a[r][k], b[k][c]) for k in range(m)) for c in range(m)]
            for r in range(m)]


def _strip_sum(polys) -> list[int]:
    acc = [0]
    for p in polys:
        acc = _padd(acc, p)
    while len(acc) > 1 and acc[-1] == 0:
        acc.pop()
    return acc


def _det(mat) -> list[int]:
    m = len(mat)
    if m == 0:
        return [1]
    if m == 1:
        return mat[0][0]
    total = [0]
    for c in range(m):
        if mat[0][c] == [0]:
            continue
        minor = [row[:c] + row[c + 1:] for row in mat[1:]]
        term = _pmul(mat[0][c], _det(minor))
        total = _padd(total, term, 1 if c % 2 == 0 else -1)
    return total


def _normalize_poly(p: list[int]) -> tuple[int, ...]:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    k = 0
    while k < len(p) and p[k] == 0:
        k += 1
    p = p[k:]
    if p and p[0] < 0:
        p = [-x for x in p]
    return tuple(p)


def closure_polynomial(w: BraidWord) -> tuple[int, ...]:
    """det(I - reduced Burau(w)), normalized up to sign and powers of t.

    For fixed n this depends only on the closed link (it equals the
    Alexander polynomial times 1 + t + ... + t^(n-1) up to units), so it is
    a sound filter for moves that keep both the link and the strand count.
    """
    m = w.strands - 1
    if m <= 0:
        return (1,)
    acc = [[[1] if r == c else [0] for c in range(m)] for r in range(m)]
    k = 0
    for x in w.letters:
        acc = _matmul(acc, _burau_letter(m, x))
        if x < 0:
            k += 1
    # det(I - B) = t^(-k m) det(t^k I - acc)
    tk = [0] * k + [1]
    mat = [[_padd(tk if r == c else [0], acc[r][c], -1) for c in range(m)] for r in range(m)]
    return _normalize_poly(_det(mat))


def geometric_factor(n: int) -> tuple[int, ...]:
    """1 + t + ... + t^(n-1)."""
    return (1,) * n


def poly_mul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return _normalize_poly(_pmul(list(a), list(b)))
