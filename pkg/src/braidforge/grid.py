"""Arc presentations on the cylinder, elementary moves and shearing intervals.

Storage model.  A diagram with C vertical arcs has C columns (cyclic) and C
rows (linear).  ``xs[c]`` is the row where the vertical arc at column c
starts (the row of the horizontal arc ending at c) and ``os[c]`` the row
where it ends (the row of the horizontal arc starting at c).  Horizontal
arcs run forward in theta from their start column to their end column,
wrapping through the seam, so row r covers the gaps start(r), ...,
end(r)-1 (gap g sits between columns g and g+1).

Shearing intervals live in a single block rotated to the seam: columns
0..S-1 are interval residents (S = sum of the interval sizes), columns
S..C-1 are outside.  The outside angular region between the last interval's
right wall and the first interval's left wall is region 0; the thin region
between intervals i and i+1 is region i+1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

from .braid import SCHEMA_VERSION

FLAVOR1 = "HExchangeFlavor1"
FLAVOR2 = "HExchangeFlavor2"
VEXCHANGE = "VExchange"
HSIMPLIFY = "HSimplify"
VSIMPLIFY = "VSimplify"
SHEAR_H = "ShearHExchange"
SHEAR_V = "ShearVSimplify"

MOVE_KINDS = (FLAVOR1, FLAVOR2, VEXCHANGE, HSIMPLIFY, VSIMPLIFY, SHEAR_H, SHEAR_V)
EXCHANGE_KINDS = (FLAVOR1, FLAVOR2, VEXCHANGE, SHEAR_H)
SIMPLIFY_KINDS = (HSIMPLIFY, VSIMPLIFY, SHEAR_V)


class GridError(ValueError):
    pass


class InvalidDiagram(GridError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "invalid diagram")


class EmptyDiagram(GridError):
    pass


class PreconditionViolated(GridError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


# ------------------------------------------------------------------ diagram


@dataclass(frozen=True)
class ArcPresentation:
    xs: tuple[int, ...]
    os: tuple[int, ...]

    # row_start[r] / row_end[r]: columns where row r starts and ends;
    # spans[r]: number of gaps it covers.  Filled in by __post_init__.
    row_start: tuple[int, ...] = field(init=False, repr=False, compare=False)
    row_end: tuple[int, ...] = field(init=False, repr=False, compare=False)
    spans: tuple[int, ...] = field(init=False, repr=False, compare=False)
    size: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        xs, os_ = tuple(self.xs), tuple(self.os)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "os", os_)
        C = len(xs)
        start = [-1] * C
        end = [-1] * C
        try:
            for c in range(C):
                start[os_[c]] = c
                end[xs[c]] = c
        except (IndexError, TypeError):
            start = [-1]
        if (-1 in start or -1 in end or len(os_) != C or (C and min(min(xs), min(os_)) < 0)
                or any(x == o for x, o in zip(xs, os_))):
            raise InvalidDiagram(_perm_violations(xs, os_))
        object.__setattr__(self, "row_start", tuple(start))
        object.__setattr__(self, "row_end", tuple(end))
        object.__setattr__(self, "spans", tuple((e - s) % C for s, e in zip(start, end)))
        object.__setattr__(self, "size", C)

    def span_len(self, r: int) -> int:
        return self.spans[r]

    def covers_gap(self, r: int, g: int) -> bool:
        return (g - self.row_start[r]) % self.size < self.spans[r]

    def rows_covering(self, g: int) -> list[int]:
        C = self.size
        return [r for r, (s, n) in enumerate(zip(self.row_start, self.spans)) if (g - s) % C < n]

    def covers_col(self, r: int, c: int) -> bool:
        """Column c lies in the closed span of row r."""
        return (c - self.row_start[r]) % self.size <= self.spans[r]

    def strictly_inside(self, r: int, c: int) -> bool:
        d = (c - self.row_start[r]) % self.size
        return 0 < d < self.spans[r]

    def is_up(self, c: int) -> bool:
        return self.os[c] > self.xs[c]

    def strands(self) -> int:
        """Horizontal arcs over any gap (constant)."""
        C = self.size
        return sum(1 for r in range(C) if self.covers_gap(r, C - 1))

    def to_json(self, sc: "ShearingConfig | None" = None) -> dict:
        return presentation_to_json(self, sc)

    def __str__(self) -> str:
        return f"ArcPresentation(xs={list(self.xs)}, os={list(self.os)})"


def _perm_violations(xs, os) -> list[Violation]:
    C = len(xs)
    out = []
    if len(os) != C:
        out.append(Violation("BrokenIncidence", "xs and os differ in length"))
        return out
    if sorted(xs) != list(range(C)) or sorted(os) != list(range(C)):
        out.append(Violation("DuplicateRow", "row indices must be a permutation of 0..C-1"))
        return out
    for c in range(C):
        if xs[c] == os[c]:
            out.append(Violation("AlternationBreach", f"vertical arc at column {c} has zero length"))
    return out


def square_unknot() -> ArcPresentation:
    return ArcPresentation((1, 0), (0, 1))


def complexity(g: ArcPresentation) -> int:
    if g.size == 0:
        raise EmptyDiagram("a diagram needs at least two vertical arcs")
    return g.size


# -------------------------------------------------------------- validation


def validate_presentation(data) -> list[Violation]:
    """Check the arc presentation conditions; [] means ok.

    Accepts an ArcPresentation or the grid JSON document (vertical and
    horizontal arc lists).
    """
    if isinstance(data, ArcPresentation):
        v = _perm_violations(data.xs, data.os)
        if not v and data.size == 0:
            v.append(Violation("EmptyDiagram", "no arcs"))
        return v
    return _validate_arc_lists(data)


def _validate_arc_lists(doc: dict) -> list[Violation]:
    out: list[Violation] = []
    verts = doc.get("verticals", [])
    hors = doc.get("horizontals", [])
    if not verts and not hors:
        return [Violation("EmptyDiagram", "no arcs")]
    cols: dict[int, dict] = {}
    rows: dict[int, dict] = {}
    for v in verts:
        c = v["col"]
        if c in cols:
            out.append(Violation("DuplicateColumn", f"column {c} used twice"))
        cols[c] = v
        a, b = v["rows"]
        if a == b:
            out.append(Violation("AlternationBreach", f"vertical arc at column {c} has zero length"))
    for h in hors:
        r = h["row"]
        if r in rows:
            out.append(Violation("DuplicateRow", f"row {r} used twice"))
        rows[r] = h
        s, e = h["cols"]
        if s == e:
            out.append(Violation("AlternationBreach", f"horizontal arc at row {r} has zero length"))
    if out:
        return out
    if sorted(cols) != list(range(len(cols))):
        out.append(Violation("BrokenIncidence", "column indices must be 0..C-1"))
    if sorted(rows) != list(range(len(rows))):
        out.append(Violation("BrokenIncidence", "row indices must be 0..R-1"))
    if len(cols) != len(rows):
        out.append(Violation("BrokenIncidence", "vertical and horizontal arc counts differ"))
    if out:
        return out
    # endpoints: each horizontal endpoint must sit on the vertical arc of that column
    start_at: dict[int, int] = {}
    end_at: dict[int, int] = {}
    for r, h in rows.items():
        s, e = h["cols"]
        for c in (s, e):
            if c not in cols or r not in cols[c]["rows"]:
                out.append(Violation("BrokenIncidence",
                                     f"row {r} endpoint at column {c} meets no vertical arc"))
        if s in start_at:
            out.append(Violation("BrokenIncidence", f"two horizontal arcs start at column {s}"))
        if e in end_at:
            out.append(Violation("BrokenIncidence", f"two horizontal arcs end at column {e}"))
        start_at[s] = r
        end_at[e] = r
    if out:
        return out
    for c, v in cols.items():
        if c not in start_at or c not in end_at:
            out.append(Violation("BrokenIncidence", f"vertical arc at column {c} has a free end"))
            continue
        lo, hi = sorted(v["rows"])
        if v.get("dir", "up") == "up":
            frm, to = lo, hi
        else:
            frm, to = hi, lo
        if end_at[c] != frm or start_at[c] != to:
            out.append(Violation("OrientationBreach",
                                 f"vertical arc at column {c} runs against its horizontal arcs"))
    return out


def presentation_to_json(g: ArcPresentation, sc: "ShearingConfig | None" = None) -> dict:
    sc = sc or ShearingConfig()
    C = g.size
    owner = sc.column_owner()
    verticals = []
    for c in range(C):
        a, b = g.xs[c], g.os[c]
        verticals.append({"col": c, "rows": sorted((a, b)), "dir": "up" if b > a else "down",
                          "inInterval": owner[c] if c < sc.resident else None})
    horizontals = []
    for r in range(C):
        s, e = g.row_start[r], g.row_end[r]
        home = None
        if s < sc.resident and e < sc.resident and owner[s] == owner[e] and s < e:
            home = owner[s]
        horizontals.append({"row": r, "cols": [s, e], "inInterval": home})
    doc = {"schemaVersion": SCHEMA_VERSION, "verticals": verticals, "horizontals": horizontals}
    doc["intervals"] = sc.intervals_json(C)
    return doc


def presentation_from_json(doc: dict) -> tuple[ArcPresentation, "ShearingConfig"]:
    problems = _validate_arc_lists(doc)
    if problems:
        raise InvalidDiagram(problems)
    C = len(doc["verticals"])
    xs = [0] * C
    os = [0] * C
    for h in doc["horizontals"]:
        s, e = h["cols"]
        os[s] = h["row"]
        xs[e] = h["row"]
    g = ArcPresentation(tuple(xs), tuple(os))
    sc = ShearingConfig.from_json(doc.get("intervals", []), doc["verticals"], C)
    return g, sc


# ------------------------------------------------------- shearing intervals


FRONT = "front"
BACK = "back"


@dataclass(frozen=True)
class ShearingConfig:
    """Intervals occupy the resident block at columns 0..resident-1.

    ``sizes[i]`` counts the vertical arcs pushed into interval i and
    ``walls[i]`` holds its (left, right) wall tags.
    """

    sizes: tuple[int, ...] = ()
    walls: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(self.sizes))
        object.__setattr__(self, "walls", tuple(tuple(w) for w in self.walls))
        if len(self.sizes) != len(self.walls) or len(self.sizes) > 3:
            raise GridError("interval sizes and wall tags disagree")

    @property
    def k(self) -> int:
        return len(self.sizes)

    @cached_property
    def resident(self) -> int:
        return sum(self.sizes)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for s in self.sizes:
            out.append(acc)
            acc += s
        return tuple(out)

    def column_owner(self) -> list[Optional[int]]:
        owner: list[Optional[int]] = []
        for i, s in enumerate(self.sizes):
            owner.extend([i] * s)
        return owner

    def intervals_json(self, C: int) -> list[dict]:
        out = []
        for i, (off, w) in enumerate(zip(self.offsets, self.walls)):
            out.append({"gapAfterCol": (off - 1) % C if C else -1, "size": self.sizes[i],
                        "walls": list(w)})
        return out

    def to_json(self, C: int) -> list[dict]:
        return self.intervals_json(C)

    @classmethod
    def from_json(cls, items: list[dict], verticals: list[dict] | None = None,
                  C: int = 0) -> "ShearingConfig":
        if not items:
            return cls()
        sizes = []
        for i, it in enumerate(items):
            if "size" in it:
                sizes.append(int(it["size"]))
            elif verticals is not None:
                sizes.append(sum(1 for v in verticals if v.get("inInterval") == i))
            else:
                sizes.append(0)
        return cls(tuple(sizes), tuple(tuple(it["walls"]) for it in items))

    def with_size(self, i: int, delta: int) -> "ShearingConfig":
        sizes = list(self.sizes)
        sizes[i] += delta
        return ShearingConfig(tuple(sizes), self.walls)


DESTAB_WALLS = ((FRONT, BACK),)
EXCHANGE_WALLS = ((FRONT, FRONT), (BACK, BACK))
FLYPE_WALLS_POS = ((FRONT, FRONT), (BACK, BACK), (FRONT, FRONT))
FLYPE_WALLS_NEG = ((BACK, BACK), (FRONT, FRONT), (BACK, BACK))


def fresh_config(k: int, negative_flype: bool = False) -> ShearingConfig:
    if k == 0:
        return ShearingConfig()
    walls = {1: DESTAB_WALLS, 2: EXCHANGE_WALLS,
             3: FLYPE_WALLS_NEG if negative_flype else FLYPE_WALLS_POS}[k]
    return ShearingConfig((0,) * k, walls)


def rotate_columns(g: ArcPresentation, shift: int) -> ArcPresentation:
    """Column c moves to column c + shift (mod C)."""
    C = g.size
    shift %= C
    if shift == 0:
        return g
    xs = g.xs[C - shift:] + g.xs[:C - shift]
    os = g.os[C - shift:] + g.os[:C - shift]
    return ArcPresentation(xs, os)


def place_shearing_intervals(g: ArcPresentation, k: int) -> list[tuple[ArcPresentation, ShearingConfig, int]]:
    """One fresh configuration per column gap.

    Returns (rotated diagram, config, gap) where ``gap`` is the gap of the
    input diagram hosting the intervals; the diagram is rotated so that gap
    becomes the seam.  For k = 3 both wall taggings are emitted.
    """
    if k == 0:
        return [(g, ShearingConfig(), -1)]
    out = []
    C = g.size
    taggings = [False, True] if k == 3 else [False]
    for neg in taggings:
        for gap in range(C):
            out.append((rotate_columns(g, -(gap + 1)), fresh_config(k, neg), gap))
    return out


def sheared_complexity(g: ArcPresentation, sc: ShearingConfig) -> int:
    return g.size - sc.resident


# ------------------------------------------------------------------ marking


@dataclass(frozen=True)
class Marking:
    edge_path: tuple[tuple[str, int], ...] = ()
    protected_rows: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edge_path", tuple((k, int(i)) for k, i in self.edge_path))
        object.__setattr__(self, "protected_rows", tuple(int(r) for r in self.protected_rows))

    @cached_property
    def shield(self) -> frozenset[int]:
        """Horizontal arcs that shear moves may not touch."""
        return frozenset([i for k, i in self.edge_path if k == "h"] + list(self.protected_rows))

    def edge_rows(self) -> list[int]:
        return [i for k, i in self.edge_path if k == "h"]

    def to_json(self) -> dict:
        return {"edgePath": [[k, i] for k, i in self.edge_path],
                "protectedRows": list(self.protected_rows)}

    @classmethod
    def from_json(cls, d: dict) -> "Marking":
        return cls(tuple((k, i) for k, i in d.get("edgePath", [])),
                   tuple(d.get("protectedRows", [])))

    def transport(self, row_map: dict, col_map: dict) -> Optional["Marking"]:
        """Carry references through a move; None if a protected arc died."""
        if not self.edge_path and not self.protected_rows:
            return self
        path: list[tuple[str, int]] = []
        for kind, i in self.edge_path:
            j = row_map.get(i) if kind == "h" else col_map.get(i)
            if j is None:
                continue
            if path and path[-1] == (kind, j):
                continue
            path.append((kind, j))
        while path and path[0][0] == "v":
            path.pop(0)
        while path and path[-1][0] == "v":
            path.pop()
        if self.edge_path and not path:
            return None
        prot = []
        for r in self.protected_rows:
            j = row_map.get(r)
            if j is None:
                return None
            prot.append(j)
        return Marking(tuple(path), tuple(prot))


# ------------------------------------------------------------------- moves


@dataclass(frozen=True, order=True)
class ElementaryMove:
    kind: str
    operands: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {"kind": self.kind, "operands": list(self.operands)}

    @classmethod
    def from_json(cls, d: dict) -> "ElementaryMove":
        return cls(d["kind"], tuple(int(x) for x in d["operands"]))

    def __str__(self) -> str:
        return f"{self.kind}({', '.join(str(x) for x in self.operands)})"


_KIND_ORDER = {k: i for i, k in enumerate(MOVE_KINDS)}


def _span_closed(g: ArcPresentation, r: int) -> tuple[int, int]:
    return g.row_start[r], g.span_len(r)


def _rows_disjoint(g: ArcPresentation, a: int, b: int) -> bool:
    """Closed column spans of rows a and b share no column."""
    C = g.size
    st, sp = g.row_start, g.spans
    return (st[b] - st[a]) % C > sp[a] and (st[a] - st[b]) % C > sp[b]


def _row_inside(g: ArcPresentation, a: int, b: int) -> bool:
    """Closed span of a lies in the open span of b."""
    d1 = (g.row_start[a] - g.row_start[b]) % g.size
    return 0 < d1 and d1 + g.spans[a] < g.spans[b]


def _rows_exchangeable(g: ArcPresentation, a: int, b: int) -> bool:
    return _rows_disjoint(g, a, b) or _row_inside(g, a, b) or _row_inside(g, b, a)


def _vspan(g: ArcPresentation, c: int) -> tuple[int, int]:
    a, b = g.xs[c], g.os[c]
    return (a, b) if a < b else (b, a)


def _cols_exchangeable(g: ArcPresentation, c: int, d: int) -> bool:
    a0, a1 = _vspan(g, c)
    b0, b1 = _vspan(g, d)
    if a1 < b0 or b1 < a0:
        return True
    if a0 < b0 and b1 < a1:
        return True
    if b0 < a0 and a1 < b1:
        return True
    return False


def _is_outside_row(g: ArcPresentation, sc: ShearingConfig, r: int) -> bool:
    S = sc.resident
    return g.row_start[r] >= S and g.row_end[r] >= S


def _between_clear(g: ArcPresentation, lo: int, hi: int, others: Iterable[int]) -> bool:
    """Every row strictly between heights lo and hi is disjoint from each of ``others``."""
    for m in range(lo + 1, hi):
        for o in others:
            if not _rows_disjoint(g, m, o):
                return False
    return True


# Regions and pieces --------------------------------------------------------


def region_gaps(g: ArcPresentation, sc: ShearingConfig, j: int) -> list[int]:
    """Gap indices (in forward order) of region j; end gaps are partial."""
    C = g.size
    S = sc.resident
    if j == 0:
        return [(S - 1 + t) % C for t in range(C - S + 1)]
    off = sc.offsets[j]
    return [(off - 1) % C]


def region_walls(sc: ShearingConfig, j: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """((interval, side) of the left wall, (interval, side) of the right wall).

    side 1 = that interval's right wall, 0 = its left wall.
    """
    k = sc.k
    if j == 0:
        return (k - 1, 1), (0, 0)
    return (j - 1, 1), (j, 0)


def wall_open(sc: ShearingConfig, interval: int, side: int) -> bool:
    """Whether pushes from the adjacent outside region may cross this wall.

    A left wall is crossed forward and needs a front tag; a right wall is
    crossed backward and needs a back tag.
    """
    tag = sc.walls[interval][side]
    return tag == (FRONT if side == 0 else BACK)


def region_pieces(g: ArcPresentation, sc: ShearingConfig, j: int, r: int) -> list[tuple[int, int]]:
    """Maximal runs [lo, hi] of region-local gap positions covered by row r.

    Region 0 has positions 0..C-S (position t is gap S-1+t, the two ends
    being partial gaps); an inner region has the single position 0.
    """
    C = g.size
    st, ln = g.row_start[r], g.spans[r]
    if j > 0:
        return [(0, 0)] if ((sc.offsets[j] - 1) - st) % C < ln else []
    S = sc.resident
    T = C - S
    t0 = (st - (S - 1)) % C
    end = t0 + ln - 1
    arcs = [(t0, end)] if end < C else [(t0, C - 1), (0, end - C)]
    pieces = []
    for lo, hi in arcs:
        if lo <= T:
            pieces.append((lo, min(hi, T)))
    if S == 0 and any(lo == 0 for lo, _ in pieces):
        # position C is the same seam gap as position 0
        for idx, (lo, hi) in enumerate(pieces):
            if hi == C - 1:
                pieces[idx] = (lo, C)
                break
        else:
            pieces.append((C, C))
    pieces.sort()
    return pieces


def rows_meeting_region(g: ArcPresentation, sc: ShearingConfig, j: int) -> list[int]:
    gaps = region_gaps(g, sc, j)
    return [r for r in range(g.size) if any(g.covers_gap(r, x) for x in gaps)]


# Enumeration ---------------------------------------------------------------


def enumerate_elementary_moves(g: ArcPresentation, sc: ShearingConfig | None = None,
                               m: Marking | None = None) -> list[ElementaryMove]:
    sc = sc or ShearingConfig()
    m = m or Marking()
    C = g.size
    S = sc.resident
    k = sc.k
    shield = m.shield
    out: list[ElementaryMove] = []
    outside = [r for r in range(C) if S == 0 or _is_outside_row(g, sc, r)]
    outside_set = set(outside)

    # flavor 1: row moves to the bottom (0) or top (1) past disjoint rows
    for r in outside:
        if all(_rows_disjoint(g, r, q) for q in range(r + 1, C)) and r != 0:
            out.append(ElementaryMove(FLAVOR1, (r, 0)))
        if all(_rows_disjoint(g, r, q) for q in range(0, r)) and r != C - 1:
            out.append(ElementaryMove(FLAVOR1, (r, 1)))

    # flavor 2: nested or disjoint rows, every row between disjoint from both
    for a in outside:
        for b in range(a + 1, C):
            if b not in outside_set:
                continue
            if not _rows_exchangeable(g, a, b):
                continue
            if _rows_disjoint(g, a, b):
                # only the adjacent-height case is a distinct move
                if b != a + 1:
                    continue
            elif not _between_clear(g, a, b, (a, b)):
                continue
            out.append(ElementaryMove(FLAVOR2, (a, b)))

    # vertical exchange of adjacent outside columns
    if k == 0:
        pairs = [(c, (c + 1) % C) for c in range(C)] if C > 2 else ([(0, 1)] if C == 2 else [])
    else:
        pairs = [(c, c + 1) for c in range(S, C - 1)]
    for c, d in pairs:
        if _cols_exchangeable(g, c, d):
            out.append(ElementaryMove(VEXCHANGE, (c,)))

    # horizontal simplification: merge the two rows joined by vertical c
    if C > 2:
        for c in range(S, C):
            x, o = g.xs[c], g.os[c]
            if x in m.protected_rows or o in m.protected_rows:
                continue
            if g.span_len(x) + g.span_len(o) >= C:
                continue
            lo, hi = min(x, o), max(x, o)
            if _between_clear(g, lo, hi, (o,)):
                out.append(ElementaryMove(HSIMPLIFY, (c, 0)))
            if _between_clear(g, lo, hi, (x,)):
                out.append(ElementaryMove(HSIMPLIFY, (c, 1)))

    # vertical simplification: a row spanning adjacent outside columns
    if C > 2:
        for r in outside:
            s = g.row_start[r]
            e = g.row_end[r]
            if (e - s) % C != 1:
                continue
            if k > 0 and e != s + 1:
                continue
            if g.xs[s] == g.os[e]:
                continue
            if r in m.protected_rows or g.os[e] in m.protected_rows:
                continue
            out.append(ElementaryMove(VSIMPLIFY, (r,)))

    if k > 0:
        out.extend(_shear_h_moves(g, sc, m))
        # shear vertical simplification: push the column next to a wall inside
        if C - S >= 1:
            for side, col, (iv, wside) in ((0, C - 1, (0, 0)), (1, S, (k - 1, 1))):
                if not wall_open(sc, iv, wside):
                    continue
                if g.xs[col] in shield or g.os[col] in shield:
                    continue
                out.append(ElementaryMove(SHEAR_V, (side,)))
    out.sort(key=lambda mv: (_KIND_ORDER[mv.kind], mv.operands))
    return out


def _shear_h_moves(g: ArcPresentation, sc: ShearingConfig, m: Marking) -> list[ElementaryMove]:
    out = []
    shield = m.shield
    for j in range(sc.k):
        (lw_iv, lw_side), (rw_iv, rw_side) = region_walls(sc, j)
        last = g.size - sc.resident if j == 0 else 0
        meet = []
        pieces = {}
        for r in range(g.size):
            ps = region_pieces(g, sc, j, r)
            if ps:
                meet.append(r)
                pieces[r] = ps
        meet.sort()
        for idx in range(len(meet) - 1):
            for a, b in ((meet[idx], meet[idx + 1]), (meet[idx + 1], meet[idx])):
                # a is the inner piece, b the outer piece
                if a in shield or b in shield:
                    continue
                pa, pb = pieces[a], pieces[b]
                if len(pa) != 1 or len(pb) != 1:
                    continue
                (alo, ahi), (blo, bhi) = pa[0], pb[0]
                if not (blo <= alo and ahi <= bhi):
                    continue
                touches_left = blo == 0
                touches_right = bhi == last
                if not (touches_left or touches_right):
                    continue
                if touches_left and not wall_open(sc, lw_iv, lw_side):
                    continue
                if touches_right and not wall_open(sc, rw_iv, rw_side):
                    continue
                out.append(ElementaryMove(SHEAR_H, (j, a, b)))
    return out


# Application ---------------------------------------------------------------


def _relabel_rows(g: ArcPresentation, perm: dict[int, int]) -> ArcPresentation:
    xs = tuple(perm.get(r, r) for r in g.xs)
    os = tuple(perm.get(r, r) for r in g.os)
    return ArcPresentation(xs, os)


def _rebuild(verts: list[tuple[float, float]]) -> tuple[ArcPresentation, dict[float, int]]:
    """Build a diagram from per-column (from-height, to-height) pairs."""
    heights = sorted({h for v in verts for h in v})
    rank = {h: i for i, h in enumerate(heights)}
    xs = tuple(rank[a] for a, _ in verts)
    os = tuple(rank[b] for _, b in verts)
    return ArcPresentation(xs, os), rank


def apply_elementary_move(g: ArcPresentation, sc: ShearingConfig | None, m: Marking | None,
                          mv: ElementaryMove, check: bool = True
                          ) -> tuple[ArcPresentation, ShearingConfig, Marking]:
    sc = sc or ShearingConfig()
    m = m or Marking()
    if check and mv not in enumerate_elementary_moves(g, sc, m):
        raise PreconditionViolated(f"{mv} is not applicable")
    C = g.size
    ident_cols = {c: c for c in range(C)}
    kind, ops = mv.kind, mv.operands
    if kind == FLAVOR1:
        r, to_top = ops
        perm = {}
        if to_top:
            for q in range(r + 1, C):
                perm[q] = q - 1
            perm[r] = C - 1
        else:
            for q in range(0, r):
                perm[q] = q + 1
            perm[r] = 0
        g2 = _relabel_rows(g, perm)
        row_map = {q: perm.get(q, q) for q in range(C)}
        return g2, sc, _transport(m, row_map, ident_cols)
    if kind == FLAVOR2:
        a, b = ops
        perm = {a: b, b: a}
        row_map = {q: perm.get(q, q) for q in range(C)}
        return _relabel_rows(g, perm), sc, _transport(m, row_map, ident_cols)
    if kind == VEXCHANGE:
        c = ops[0]
        d = (c + 1) % C
        xs, os = list(g.xs), list(g.os)
        xs[c], xs[d] = xs[d], xs[c]
        os[c], os[d] = os[d], os[c]
        col_map = dict(ident_cols)
        col_map[c], col_map[d] = d, c
        return ArcPresentation(tuple(xs), tuple(os)), sc, _transport(m, {q: q for q in range(C)}, col_map)
    if kind == HSIMPLIFY:
        c, keep = ops
        x, o = g.xs[c], g.os[c]
        keep_row, drop_row = (x, o) if keep == 0 else (o, x)
        verts = []
        col_map = {}
        for d in range(C):
            if d == c:
                col_map[d] = None
                continue
            col_map[d] = len(verts)
            a, b = g.xs[d], g.os[d]
            a = keep_row if a == drop_row else a
            b = keep_row if b == drop_row else b
            verts.append((a, b))
        g2, rank = _rebuild(verts)
        row_map = {q: rank[q] for q in range(C) if q != drop_row}
        row_map[drop_row] = rank[keep_row]
        return g2, sc, _transport(m, row_map, col_map)
    if kind == VSIMPLIFY:
        r = ops[0]
        s, e = g.row_start[r], g.row_end[r]
        verts = []
        col_map = {}
        for d in range(C):
            if d == e:
                continue
            a, b = g.xs[d], g.os[d]
            if d == s:
                b = g.os[e]
            col_map[d] = len(verts)
            verts.append((a, b))
        col_map[e] = col_map[s]
        g2, rank = _rebuild(verts)
        row_map = {q: rank[q] for q in range(C) if q != r}
        row_map[r] = None
        return g2, sc, _transport(m, row_map, col_map)
    if kind == SHEAR_V:
        side = ops[0]
        if side == 0:
            g2 = rotate_columns(g, 1)
            col_map = {c: (c + 1) % C for c in range(C)}
            return g2, sc.with_size(0, 1), _transport(m, {q: q for q in range(C)}, col_map)
        return g, sc.with_size(sc.k - 1, 1), m
    if kind == SHEAR_H:
        return _apply_shear_h(g, sc, m, *ops)
    raise PreconditionViolated(f"unknown move kind {kind}")


def _transport(m: Marking, row_map: dict, col_map: dict) -> Marking:
    out = m.transport(row_map, col_map)
    if out is None:
        raise PreconditionViolated("move destroys a protected arc")
    return out


def _apply_shear_h(g: ArcPresentation, sc: ShearingConfig, m: Marking, j: int, a: int, b: int):
    C = g.size
    last = C - sc.resident if j == 0 else 0
    (alo, ahi) = region_pieces(g, sc, j, a)[0]
    (blo, bhi) = region_pieces(g, sc, j, b)[0]
    (lw_iv, _), (rw_iv, _) = region_walls(sc, j)
    # per column: [from-height, to-height]; heights are floats so new rows
    # can be slotted next to old ones
    cols: list[list[float]] = [[float(g.xs[c]), float(g.os[c])] for c in range(C)]
    ids = list(range(C))  # identity of each column slot (new slots get None)
    sizes = list(sc.sizes)
    toward = 1.0 if b > a else -1.0
    piece_h = {a: float(a), b: float(b)}
    step = {a: 0.25 * toward, b: -0.25 * toward}

    def jog(row: int, left_wall: bool):
        # split the current J-piece height of ``row`` at the wall
        old = piece_h[row]
        new = old + step[row]
        step[row] /= 2
        if left_wall:
            # strand: interval (left of J) -> wall -> J.  Insert the jog at the
            # end of the interval on the left; the J part continues at ``new``.
            iv = lw_iv
            pos = sc_offsets(sizes)[iv] + sizes[iv]
            # the vertical leaving the old row at its old end now leaves ``new``
            for col in cols:
                if col[0] == old:
                    col[0] = new
                    break
            cols.insert(pos, [old, new])
            ids.insert(pos, None)
            sizes[iv] += 1
        else:
            # strand: J -> wall -> interval on the right.  Insert the jog at the
            # start of that interval; J part ends at the jog at height ``new``.
            iv = rw_iv
            pos = sc_offsets(sizes)[iv]
            for col in cols:
                if col[1] == old:
                    col[1] = new
                    break
            cols.insert(pos, [new, old])
            ids.insert(pos, None)
            sizes[iv] += 1
        piece_h[row] = new

    # region 0's right-hand wall is I_1's left wall, at the seam: inserting at
    # offset 0 keeps the block at the seam.
    if blo == 0:
        jog(b, True)
        if alo == 0:
            jog(a, True)
    if bhi == last:
        jog(b, False)
        if ahi == last:
            jog(a, False)
    ha, hb = piece_h[a], piece_h[b]

    def swapped(h: float) -> float:
        return hb if h == ha else ha if h == hb else h

    g2, rank = _rebuild([(swapped(p), swapped(q)) for p, q in cols])
    row_map = {q: rank[swapped(float(q))] for q in range(C)}
    col_map = {}
    for new_c, old_c in enumerate(ids):
        if old_c is not None:
            col_map[old_c] = new_c
    sc2 = ShearingConfig(tuple(sizes), sc.walls)
    return g2, sc2, _transport(m, row_map, col_map)


def sc_offsets(sizes: list[int]) -> list[int]:
    out, acc = [], 0
    for s in sizes:
        out.append(acc)
        acc += s
    return out


# ------------------------------------------------------------ canonical key


def canonical_key(g: ArcPresentation, sc: ShearingConfig | None, m: Marking | None):
    """Rank-normalized view of the diagram outside the intervals."""
    sc = sc or ShearingConfig()
    m = m or Marking()
    if sc.k == 0:
        return (g.xs, g.os, m.edge_path, m.protected_rows)
    C = g.size
    S = sc.resident
    starts = g.row_start
    spans = g.spans
    rows = range(C)

    def covering(gap: int) -> list[int]:
        return [r for r in rows if (gap - starts[r]) % C < spans[r]]

    # the outside region runs from the gap before column S to the seam gap
    left = covering((S - 1) % C)
    walls = [left, left if S == 0 else covering(C - 1)]
    for off in sc.offsets[1:]:
        walls.append(covering((off - 1) % C))
    xs, os_ = g.xs[S:], g.os[S:]
    visible = set(xs)
    visible.update(os_)
    for w in walls:
        visible.update(w)
    rank = {r: i for i, r in enumerate(sorted(visible))}
    outside = tuple(rank[r] for r in xs) + tuple(rank[r] for r in os_)
    iface = tuple(tuple(rank[r] for r in w) for w in walls)
    path = tuple((kd, rank.get(i, -1) if kd == "h" else i - S) for kd, i in m.edge_path)
    prot = tuple(rank.get(r, -1) for r in m.protected_rows)
    return (outside, iface, path, prot)


# --------------------------------------------------- components and linking


def grid_components(g: ArcPresentation) -> tuple[int, list[int]]:
    """(component count, component of each row).

    Components are numbered by the lowest height-rank, among the rows
    covering the seam gap, of any of their rows; components missing the seam
    come afterwards (cannot happen for valid diagrams).
    """
    C = g.size
    comp_of_row = [-1] * C
    raw = 0
    for r0 in range(C):
        if comp_of_row[r0] >= 0:
            continue
        r = r0
        while comp_of_row[r] < 0:
            comp_of_row[r] = raw
            r = g.os[g.row_end[r]]
        raw += 1
    seam_rows = sorted(r for r in range(C) if g.covers_gap(r, C - 1))
    order: list[int] = []
    for r in seam_rows:
        if comp_of_row[r] not in order:
            order.append(comp_of_row[r])
    for c in range(raw):
        if c not in order:
            order.append(c)
    renum = {old: new for new, old in enumerate(order)}
    return raw, [renum[c] for c in comp_of_row]


def grid_crossings(g: ArcPresentation) -> list[tuple[int, int, int]]:
    """(column, row, sign) for every vertical-over-horizontal crossing."""
    C = g.size
    out = []
    for c in range(C):
        lo, hi = _vspan(g, c)
        sign = 1 if g.is_up(c) else -1
        for r in range(lo + 1, hi):
            if g.strictly_inside(r, c):
                out.append((c, r, sign))
    return out


def grid_components_and_linking(g: ArcPresentation) -> tuple[int, tuple[tuple[int, ...], ...]]:
    count, comp = grid_components(g)
    raw = [[0] * count for _ in range(count)]
    for c, r, sign in grid_crossings(g):
        # the vertical arc at c belongs to the component of the row it leaves
        a, b = comp[g.xs[c]], comp[r]
        if a == b:
            raw[a][a] += sign
        else:
            raw[a][b] += sign
            raw[b][a] += sign
    for a in range(count):
        for b in range(count):
            if a != b:
                raw[a][b] //= 2
    return count, tuple(tuple(x) for x in raw)
