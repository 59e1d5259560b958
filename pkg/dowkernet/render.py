"""
Minimal SVG output: horizontal dendrograms and persistence barcodes.

Layout is computed here; the markup lives in templates/*.svg.j2. Coordinates
are rounded to two decimals so the same input always gives the same text.
"""
import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from jinja2 import Environment, FileSystemLoader, select_autoescape

from dowkernet.hierarchy import Dendrogram
from dowkernet.persistence import Barcode

TEMPLATE_DIR = Path(__file__).parent / "templates"

_env = Environment(
    loader=FileSystemLoader(str(TEMPLATE_DIR)),
    autoescape=select_autoescape(enabled_extensions=("svg", "j2"), default=True),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)

LEFT_MARGIN = 110
RIGHT_MARGIN = 30
TOP_MARGIN = 20
ROW_HEIGHT = 18
PLOT_WIDTH = 500


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _ticks(upper: float, scale, count: int = 5) -> List[Dict[str, str]]:
    if upper <= 0:
        return [{"x": _fmt(scale(0.0)), "label": "0"}]
    return [
        {"x": _fmt(scale(upper * k / count)), "label": f"{upper * k / count:.3g}"}
        for k in range(count + 1)
    ]


def _leaf_order(d: Dendrogram) -> List[int]:
    """Leaves left-to-right so that no bracket crosses another."""
    n = len(d.leaves)
    if not d.merges:
        return list(range(n))
    order, stack = [], [n + len(d.merges) - 1]
    while stack:
        c = stack.pop()
        if c < n:
            order.append(c)
        else:
            m = d.merges[c - n]
            stack.extend((m.right, m.left))
    return order


def render_dendrogram_svg(d: Dendrogram, title: str = "single-linkage dendrogram",
                          metadata: Sequence[str] = ()) -> str:
    """Horizontal dendrogram: leaf labels on the y axis, merge heights on the x axis."""
    n = len(d.leaves)
    top = d.final_height if d.final_height > 0 else 1.0
    x0, x1 = LEFT_MARGIN, LEFT_MARGIN + PLOT_WIDTH

    def scale(h: float) -> float:
        return x0 + (h / top) * (x1 - x0)

    pos: Dict[int, tuple] = {}
    for row, leaf in enumerate(_leaf_order(d)):
        pos[leaf] = (scale(0.0), TOP_MARGIN + row * ROW_HEIGHT)

    brackets = []
    for k, m in enumerate(d.merges):
        (xa, ya), (xb, yb) = pos[m.left], pos[m.right]
        xm = scale(m.height)
        brackets.append(
            f"M {_fmt(xa)} {_fmt(ya)} H {_fmt(xm)} V {_fmt(yb)} H {_fmt(xb)}"
        )
        pos[n + k] = (xm, (ya + yb) / 2.0)

    axis_y = TOP_MARGIN + max(n - 1, 0) * ROW_HEIGHT + ROW_HEIGHT
    return _env.get_template("dendrogram.svg.j2").render(
        title=title,
        metadata=list(metadata),
        width=x1 + RIGHT_MARGIN,
        height=axis_y + 30,
        x0=x0,
        x1=x1,
        axis_y=axis_y,
        ticks=_ticks(d.final_height, scale),
        leaves=[{"label": d.leaves[i], "y": _fmt(pos[i][1] + 4)} for i in range(n)],
        brackets=brackets,
    )


def render_barcode_svg(bars: Sequence[Barcode], cap: float, dims: Optional[Sequence[int]] = None,
                       title: str = "persistence barcode", metadata: Sequence[str] = ()) -> str:
    """One horizontal bar per interval, grouped by dimension; essential bars end at the cap.

    ``dims`` lists the dimensions to draw, including empty ones; by default
    only dimensions with at least one bar appear.
    """
    finite = [v for b in bars for v in (b.birth, b.death) if math.isfinite(v)]
    upper = max(finite + ([cap] if math.isfinite(cap) else []) + [0.0]) or 1.0
    x0, x1 = 40, 40 + PLOT_WIDTH
    dims = sorted({b.dimension for b in bars}) if dims is None else sorted(dims)

    def scale(v: float) -> float:
        return x0 + (min(v, upper) / upper) * (x1 - x0)

    groups, row = [], 0
    for dim in dims:
        lines = []
        group_y = TOP_MARGIN + row * ROW_HEIGHT
        for b in sorted((b for b in bars if b.dimension == dim), key=lambda b: (b.birth, b.death)):
            lines.append({
                "x1": _fmt(scale(b.birth)),
                "x2": _fmt(scale(b.death if math.isfinite(b.death) else upper)),
                "y": _fmt(TOP_MARGIN + row * ROW_HEIGHT),
                "essential": b.essential,
            })
            row += 1
        groups.append({"dimension": dim, "y": _fmt(group_y + 4), "bars": lines})
        row += 1

    axis_y = TOP_MARGIN + row * ROW_HEIGHT
    return _env.get_template("barcode.svg.j2").render(
        title=title,
        metadata=list(metadata),
        width=x1 + RIGHT_MARGIN,
        height=axis_y + 30,
        x0=x0,
        x1=x1,
        axis_y=axis_y,
        ticks=_ticks(upper, scale),
        groups=groups,
    )
