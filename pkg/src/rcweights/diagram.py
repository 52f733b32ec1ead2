"""Arrow diagrams: facts drawn on a compactified extended real line.

The axis maps an exponent e to x = W * (1 + phi(e)) / 2 where
phi(t) = t / (1 + |t|) and phi(+-inf) = +-1, so the whole line fits the
canvas with the landmarks 0 and 1 visually separated.  Strong facts are
solid double-headed arrows, weak facts dashed ones; overlapping arrows
stack on alternating lanes above and below the axis purely for legibility
(the vertical position carries no meaning).

Rendering is deterministic: a fixed spec yields a byte-identical SVG 1.1
document, so diagrams are golden-file testable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .engine import Derivation
from .exponents import Exp
from .facts import RCFact, name_class


@dataclass(frozen=True)
class DiagramSpec:
    width: float = 640.0
    lane_gap: float = 30.0
    axis_pad: float = 46.0       # vertical room for ticks and labels
    font_size: float = 12.0
    label_classes: bool = True   # prefer class names over raw pairs


@dataclass
class PlacedArrow:
    x1: float
    x2: float
    y: float
    lane: int
    dashed: bool
    label: str
    lo_text: str
    hi_text: str


@dataclass
class Tick:
    x: float
    text: str


@dataclass
class Layout:
    spec: DiagramSpec
    arrows: list
    ticks: list
    axis_y: float
    height: float
    title: str = ""


def phi(e: Exp) -> float:
    if e.is_pos_inf:
        return 1.0
    if e.is_neg_inf:
        return -1.0
    t = float(e.value)
    return t / (1.0 + abs(t))


def axis_x(e: Exp, width: float) -> float:
    return width * (1.0 + phi(e)) / 2.0


def _arrow_label(fact: RCFact, spec: DiagramSpec) -> str:
    if fact.weak:
        return f"RCweak({fact.pair.lo},{fact.pair.hi})"
    if spec.label_classes:
        named = name_class(fact.pair)
        if named:
            return named
    return f"RC({fact.pair.lo},{fact.pair.hi})"


def layout(facts: Iterable[RCFact], spec: DiagramSpec = DiagramSpec(),
           title: str = "") -> Layout:
    """Place one arrow per fact; x positions follow the exponent order."""
    facts = list(facts)
    if not facts:
        raise ValueError("nothing to draw: empty fact list")
    # lane assignment: greedily reuse the innermost lane without overlap,
    # alternating above (+1, +2, ...) and below (-1, -2, ...)
    lanes: dict[int, list] = {}
    placed = []
    for i, fact in enumerate(facts):
        x1 = axis_x(fact.pair.lo, spec.width)
        x2 = axis_x(fact.pair.hi, spec.width)
        lane = None
        k = 1
        while lane is None:
            for cand in (k, -k):
                spans = lanes.setdefault(cand, [])
                if all(x2 < a or b < x1 for a, b in spans):
                    lane = cand
                    spans.append((x1, x2))
                    break
            k += 1
        placed.append(PlacedArrow(
            x1=x1, x2=x2, y=0.0, lane=lane, dashed=fact.weak,
            label=_arrow_label(fact, spec),
            lo_text=str(fact.pair.lo), hi_text=str(fact.pair.hi)))
    max_lane = max(abs(a.lane) for a in placed)
    axis_y = spec.axis_pad + max_lane * spec.lane_gap
    height = 2.0 * axis_y
    for arrow in placed:
        arrow.y = axis_y - arrow.lane * spec.lane_gap
    ticks = {}
    for e in [Exp.finite(0), Exp.finite(1)]:
        ticks[axis_x(e, spec.width)] = str(e)
    for fact in facts:
        for e in (fact.pair.lo, fact.pair.hi):
            ticks[axis_x(e, spec.width)] = str(e)
    tick_list = [Tick(x, t) for x, t in sorted(ticks.items())]
    return Layout(spec, placed, tick_list, axis_y, height, title)


# --------------------------------------------------------------------------
# SVG rendering
# --------------------------------------------------------------------------

def _f(v: float) -> str:
    return f"{v:.2f}"


_HEADER = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
    'width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n'
    '<defs>\n'
    '<marker id="ah" viewBox="0 0 10 10" refX="8" refY="5" markerWidth="7" '
    'markerHeight="7" orient="auto-start-reverse">'
    '<path d="M 0 1 L 9 5 L 0 9 z" fill="#000000"/></marker>\n'
    '</defs>\n'
)


def _render_panel(out: list, lay: Layout, y_off: float) -> None:
    spec = lay.spec
    ay = y_off + lay.axis_y
    if lay.title:
        out.append(
            f'<text x="{_f(spec.width / 2.0)}" y="{_f(y_off + spec.font_size + 2.0)}" '
            f'font-size="{_f(spec.font_size)}" font-family="monospace" '
            f'text-anchor="middle">{lay.title}</text>\n')
    # the axis: one path spanning the full canvas
    out.append(
        f'<path class="axis" d="M 0 {_f(ay)} L {_f(spec.width)} {_f(ay)}" '
        'stroke="#555555" stroke-width="1" fill="none"/>\n')
    for tick in lay.ticks:
        out.append(
            f'<line x1="{_f(tick.x)}" y1="{_f(ay - 4.0)}" x2="{_f(tick.x)}" '
            f'y2="{_f(ay + 4.0)}" stroke="#555555" stroke-width="1"/>\n')
        out.append(
            f'<text x="{_f(tick.x)}" y="{_f(ay + 16.0)}" '
            f'font-size="{_f(spec.font_size - 2.0)}" font-family="monospace" '
            f'text-anchor="middle" fill="#555555">{tick.text}</text>\n')
    for arrow in lay.arrows:
        y = y_off + arrow.y
        dash = ' stroke-dasharray="6,4"' if arrow.dashed else ""
        out.append(
            f'<path class="arrow" d="M {_f(arrow.x1)} {_f(y)} L {_f(arrow.x2)} '
            f'{_f(y)}" stroke="#000000" stroke-width="1.5" fill="none"'
            f'{dash} marker-start="url(#ah)" marker-end="url(#ah)"/>\n')
        mid = 0.5 * (arrow.x1 + arrow.x2)
        out.append(
            f'<text x="{_f(mid)}" y="{_f(y - 5.0)}" '
            f'font-size="{_f(lay.spec.font_size)}" font-family="monospace" '
            f'text-anchor="middle">{arrow.label}</text>\n')
        for x, text, anchor in ((arrow.x1, arrow.lo_text, "end"),
                                (arrow.x2, arrow.hi_text, "start")):
            out.append(
                f'<text x="{_f(x)}" y="{_f(y + 4.0)}" '
                f'font-size="{_f(lay.spec.font_size - 2.0)}" '
                f'font-family="monospace" text-anchor="{anchor}" '
                f'fill="#333333">{text}</text>\n')


def render_svg(lay: Layout) -> str:
    """Standalone SVG for a single panel."""
    out = [_HEADER.format(w=_f(lay.spec.width), h=_f(lay.height))]
    _render_panel(out, lay, 0.0)
    out.append("</svg>\n")
    return "".join(out)


def render_panels(layouts: list) -> str:
    """One document with the panels stacked vertically."""
    if not layouts:
        raise ValueError("nothing to draw: no panels")
    width = max(lay.spec.width for lay in layouts)
    height = sum(lay.height for lay in layouts)
    out = [_HEADER.format(w=_f(width), h=_f(height))]
    y = 0.0
    for lay in layouts:
        _render_panel(out, lay, y)
        y += lay.height
    out.append("</svg>\n")
    return "".join(out)


# --------------------------------------------------------------------------
# Derivation rendering: one panel per step
# --------------------------------------------------------------------------

def derivation_layouts(derivation: Derivation,
                       spec: DiagramSpec = DiagramSpec()) -> list:
    """One panel per rule application: the step's inputs plus its result.

    Sibling halves of one split (consecutive SPLIT steps sharing parents)
    are drawn together in a single panel, matching how a split is one
    move even though it yields two arrows.
    """
    by_index = {n.index: n for n in derivation.nodes}
    steps = derivation.steps()
    layouts = []
    i = 0
    while i < len(steps):
        step = steps[i]
        produced = [step.fact]
        if step.rule == "SPLIT":
            while (i + 1 < len(steps) and steps[i + 1].rule == "SPLIT"
                   and steps[i + 1].parents == step.parents):
                i += 1
                produced.append(steps[i].fact)
        facts = []
        for p in step.parents:
            parent = by_index[p].fact
            if isinstance(parent, RCFact):
                facts.append(parent)
        facts.extend(produced)
        layouts.append(layout(facts, spec, title=step.rule))
        i += 1
    return layouts


def render_derivation(derivation: Derivation,
                      spec: DiagramSpec = DiagramSpec(),
                      split: bool = False):
    """Render a derivation; one stacked document, or one per step."""
    lays = derivation_layouts(derivation, spec)
    if split:
        return [render_svg(lay) for lay in lays]
    return render_panels(lays)
