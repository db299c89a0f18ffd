"""ASCII and SVG pictures of arc presentations.

The cylinder is cut along the seam, which sits at the left edge.  Row 0 is
drawn at the bottom.  Vertical arcs pass over horizontal ones, so a
horizontal line is broken wherever a vertical arc crosses it.
"""

from __future__ import annotations

from pathlib import Path

from .grid import ArcPresentation, ShearingConfig

CELL = 24
MARGIN = 16

# (left, right, up, down) -> box character
_BOX = {
    (1, 1, 0, 0): "─", (0, 0, 1, 1): "│",
    (0, 1, 1, 0): "└", (1, 0, 1, 0): "┘", (0, 1, 0, 1): "┌", (1, 0, 0, 1): "┐",
    (0, 0, 0, 0): " ",
}


def _vertical_through(g: ArcPresentation, c: int, r: int) -> bool:
    lo, hi = sorted((g.xs[c], g.os[c]))
    return lo < r < hi


def render_ascii(g: ArcPresentation, sc: ShearingConfig | None = None) -> str:
    """One character per column and per column gap, plus a seam column."""
    C = g.size
    sc = sc or ShearingConfig()
    lines = []
    if sc.k:
        owner = sc.column_owner()
        head = [" "]
        for c in range(C):
            head.append(str(owner[c] + 1) if c < sc.resident else ".")
            head.append(" ")
        lines.append("".join(head).rstrip())
    for r in range(C - 1, -1, -1):
        s, e = g.row_start[r], g.row_end[r]
        wraps = g.covers_gap(r, C - 1)
        cells = ["─" if wraps else "┊"]
        for c in range(C):
            if c == s or c == e:
                lo, hi = sorted((g.xs[c], g.os[c]))
                cells.append(_BOX[(int(c == e), int(c == s), int(r == lo), int(r == hi))])
            elif _vertical_through(g, c, r):
                cells.append("│")
            elif g.strictly_inside(r, c):
                cells.append("─")
            else:
                cells.append(" ")
            cells.append("─" if g.covers_gap(r, c) else " ")
        lines.append("".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def _fmt(v: float) -> str:
    return f"{v:.1f}".rstrip("0").rstrip(".")


def render_svg(g: ArcPresentation, sc: ShearingConfig | None = None, title: str = "") -> str:
    C = g.size
    sc = sc or ShearingConfig()
    width = 2 * MARGIN + CELL * (C + 1)
    height = 2 * MARGIN + CELL * (C + 1)

    def x(c: float) -> float:
        return MARGIN + CELL * (c + 1)

    def y(r: float) -> float:
        return MARGIN + CELL * (C - r)

    seam_x = MARGIN + CELL / 2
    right_x = width - MARGIN
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">']
    if title:
        out.append(f"<title>{_escape(title)}</title>")
    out.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>')
    owner = sc.column_owner()
    for i, off in enumerate(sc.offsets):
        size = sc.sizes[i]
        x0 = x(off) - CELL / 2
        w = CELL * max(size, 0) if size else CELL / 4
        if not size:
            x0 = x(off) - CELL / 2 - CELL / 8
        out.append(f'<rect x="{_fmt(x0)}" y="{MARGIN}" width="{_fmt(w)}" '
                   f'height="{height - 2 * MARGIN}" fill="#e4e4ee" class="interval" '
                   f'data-walls="{sc.walls[i][0]}-{sc.walls[i][1]}"/>')
    out.append(f'<line x1="{_fmt(seam_x)}" y1="{MARGIN}" x2="{_fmt(seam_x)}" '
               f'y2="{height - MARGIN}" stroke="#c03030" stroke-dasharray="4 3" class="seam"/>')
    gap = 4
    for r in range(C):
        s, e = g.row_start[r], g.row_end[r]
        yy = y(r)
        if s < e:
            pieces = [(x(s), x(e))]
        else:
            pieces = [(x(s), right_x), (seam_x, x(e))]
        breaks = sorted(x(c) for c in range(C)
                        if g.strictly_inside(r, c) and _vertical_through(g, c, r))
        resident = s < sc.resident and e < sc.resident and sc.k and owner[s] == owner[e] and s < e
        style = ' opacity="0.45"' if resident else ""
        for a, b in pieces:
            cur = a
            for bx in breaks:
                if a < bx < b:
                    out.append(_hline(cur, bx - gap, yy, style))
                    cur = bx + gap
            out.append(_hline(cur, b, yy, style))
    for c in range(C):
        style = ' opacity="0.45"' if c < sc.resident else ""
        out.append(f'<line x1="{_fmt(x(c))}" y1="{_fmt(y(g.xs[c]))}" x2="{_fmt(x(c))}" '
                   f'y2="{_fmt(y(g.os[c]))}" stroke="#000000" stroke-width="2"{style}/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _hline(a: float, b: float, yy: float, style: str) -> str:
    return (f'<line x1="{_fmt(a)}" y1="{_fmt(yy)}" x2="{_fmt(b)}" y2="{_fmt(yy)}" '
            f'stroke="#1f4f9f" stroke-width="2"{style}/>')


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_diagram(g: ArcPresentation, fmt: str = "ascii", sc: ShearingConfig | None = None,
                   path: str | Path | None = None) -> str:
    if fmt == "ascii":
        text = render_ascii(g, sc)
    elif fmt == "svg":
        text = render_svg(g, sc)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def write_frames(frames, directory: str | Path) -> list[Path]:
    """Write one SVG per (diagram, config) frame; returns the paths."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, (g, sc) in enumerate(frames):
        p = d / f"frame_{i:03d}.svg"
        p.write_text(render_svg(g, sc, title=f"step {i}"), encoding="utf-8")
        paths.append(p)
    return paths
