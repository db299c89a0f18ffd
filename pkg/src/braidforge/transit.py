"""Transitions between braid words and arc presentations.

Braid to grid.  Strand positions (tracks 1..n) own disjoint height bands,
band k below band k+1.  A letter s_i^e swaps the strands on tracks i and
i+1 with two vertical arcs in adjacent columns: one strand moves first into
the other's band and crosses nothing; the second crosses the first one's new
horizontal arc.  Whichever band receives the first mover gets the
constraint "new row above (e = +1) or below (e = -1) the partner's row",
which realizes the letter as one crossing of sign e.  Row values inside a
band form a cycle of these constraints; the solver picks, per letter, which
strand moves first so every band cycle is satisfiable, and appends free
padding arcs to bands where no choice works (a band needs at least two
arcs, and a constrained cycle needs a free step or both directions).

Grid to braid.  Sweep the columns from the seam; a vertical arc moving a
strand from rank i to rank j passes over every strand in between.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from graphlib import TopologicalSorter

from .braid import BraidWord
from .grid import ArcPresentation, InvalidDiagram, Violation


@dataclass(frozen=True)
class TransitionTrace:
    source_kind: str
    letter_to_arcs: tuple[tuple[int, int], ...] = ()
    pad_columns: tuple[int, ...] = ()
    column_to_letters: tuple[tuple[int, ...], ...] = ()

    def to_json(self) -> dict:
        return {"sourceKind": self.source_kind,
                "letterToArcs": [list(p) for p in self.letter_to_arcs],
                "padColumns": list(self.pad_columns),
                "columnToLetters": [list(p) for p in self.column_to_letters]}


FREE, UP, DOWN = 0, 1, -1


def _band_steps(word: BraidWord, choice: list[str], pads: list[int]) -> dict[int, list[int]]:
    steps: dict[int, list[int]] = {k: [] for k in range(1, word.strands + 1)}
    for x, ch in zip(word.letters, choice):
        i, e = abs(x), (1 if x > 0 else -1)
        # 'a': lower strand moves first, so band i+1 is constrained
        if ch == "a":
            steps[i].append(FREE)
            steps[i + 1].append(e)
        else:
            steps[i].append(e)
            steps[i + 1].append(FREE)
    for k in range(1, word.strands + 1):
        steps[k].extend([FREE] * pads[k - 1])
    return steps


def _band_ok(word: BraidWord, choice: list[str], pads: list[int], k: int) -> bool:
    touches = [(j, x) for j, x in enumerate(word.letters) if abs(x) in (k - 1, k)]
    total = len(touches) + pads[k - 1]
    if total == 0:
        return False
    if total == 1:
        j, x = touches[0]
        # the band's only row must be left before it is re-entered
        if abs(x) == k:   # band k is the lower band of this letter
            return choice[j] == "a"
        return choice[j] == "b"
    st = []
    for j, x in touches:
        i, e = abs(x), (1 if x > 0 else -1)
        lower = i == k
        constrained = (choice[j] == "b") if lower else (choice[j] == "a")
        st.append(e if constrained else FREE)
    if pads[k - 1]:
        return True
    return FREE in st or (UP in st and DOWN in st)


def _solve(word: BraidWord) -> tuple[list[str], list[int]]:
    n = word.strands
    choice = ["a"] * len(word.letters)
    pads = [0] * n
    for _ in range(4 * (n + len(word.letters)) + 4):
        bad = [k for k in range(1, n + 1) if not _band_ok(word, choice, pads, k)]
        if not bad:
            return choice, pads
        k = bad[0]
        fixed = False
        for j, x in enumerate(word.letters):
            if abs(x) not in (k - 1, k):
                continue
            other = k + 1 if abs(x) == k else k - 1
            trial = list(choice)
            trial[j] = "b" if trial[j] == "a" else "a"
            if _band_ok(word, trial, pads, k) and (
                    _band_ok(word, trial, pads, other) or not _band_ok(word, choice, pads, other)):
                choice = trial
                fixed = True
                break
        if not fixed:
            touched = any(abs(x) in (k - 1, k) for x in word.letters)
            pads[k - 1] += 1 if touched else 2
    raise AssertionError("band solver did not converge")


def _band_order(steps: list[int]) -> list[int]:
    """Rank of each node 0..m-1 of a band cycle under the step constraints."""
    m = len(steps)
    ts = TopologicalSorter({v: set() for v in range(m)})
    for t, st in enumerate(steps, start=1):
        prev, cur = (t - 1) % m, t % m
        if st == UP:
            ts.add(cur, prev)
        elif st == DOWN:
            ts.add(prev, cur)
    order = list(ts.static_order())
    rank = [0] * m
    for pos, v in enumerate(order):
        rank[v] = pos
    return rank


def braid_to_grid(w: BraidWord) -> tuple[ArcPresentation, TransitionTrace]:
    n = w.strands
    choice, pads = _solve(w)
    steps = _band_steps(w, choice, pads)
    ranks = {k: _band_order(steps[k]) for k in steps}
    count = {k: len(steps[k]) for k in steps}
    cur = {k: 0 for k in steps}    # current node of each band
    used = {k: 0 for k in steps}   # steps taken so far

    def advance(k: int) -> int:
        used[k] += 1
        node = used[k] % count[k]
        return node

    def height(k: int, node: int) -> tuple[int, int]:
        return (k, ranks[k][node])

    verts: list[tuple[tuple[int, int], tuple[int, int]]] = []
    letter_cols = []
    for x, ch in zip(w.letters, choice):
        i = abs(x)
        lo_from, up_from = cur[i], cur[i + 1]
        new_lo = advance(i)       # upper strand lands in band i
        new_up = advance(i + 1)   # lower strand lands in band i+1
        lower_arc = (height(i, lo_from), height(i + 1, new_up))
        upper_arc = (height(i + 1, up_from), height(i, new_lo))
        cur[i], cur[i + 1] = new_lo, new_up
        c0 = len(verts)
        if ch == "a":
            verts.extend([lower_arc, upper_arc])
        else:
            verts.extend([upper_arc, lower_arc])
        letter_cols.append((c0, c0 + 1))
    pad_cols = []
    for k in range(1, n + 1):
        for _ in range(pads[k - 1]):
            frm = cur[k]
            to = advance(k)
            pad_cols.append(len(verts))
            verts.append((height(k, frm), height(k, to)))
            cur[k] = to
    heights = sorted({h for v in verts for h in v})
    rank = {h: r for r, h in enumerate(heights)}
    g = ArcPresentation(tuple(rank[a] for a, _ in verts), tuple(rank[b] for _, b in verts))
    return g, TransitionTrace("braid", tuple(letter_cols), tuple(pad_cols))


def grid_to_braid(g: ArcPresentation) -> tuple[BraidWord, TransitionTrace]:
    C = g.size
    if C < 2:
        raise InvalidDiagram([Violation("EmptyDiagram", "a diagram needs two vertical arcs")])
    order = sorted(r for r in range(C) if g.covers_gap(r, C - 1))
    n = len(order)
    letters: list[int] = []
    per_col = []
    for c in range(C):
        x, o = g.xs[c], g.os[c]
        i = order.index(x)
        order.pop(i)
        j = 0
        while j < len(order) and order[j] < o:
            j += 1
        order.insert(j, o)
        emitted = []
        if j > i:
            for t in range(i + 1, j + 1):
                emitted.append(len(letters))
                letters.append(t)
        elif j < i:
            for t in range(i, j, -1):
                emitted.append(len(letters))
                letters.append(-t)
        per_col.append(tuple(emitted))
    return BraidWord(n, tuple(letters)), TransitionTrace("grid", column_to_letters=tuple(per_col))
