"""Combinatorial planar knot/link diagrams.

A diagram is stored as crossings with four ports (over-in, over-out,
under-in, under-out), each holding a segment id, plus the counterclockwise
rotation of the ports in the plane.  Everything downstream (regions, arcs,
writhe, gluing equations) is derived from this structure.

Conventions for PD codes follow the Mathematica/KnotAtlas style
``PD[X[a,b,c,d], ...]``: ``a`` is the incoming under-strand edge and
``b,c,d`` list the remaining edges counterclockwise.  Edge labels run
1..2N along the orientation, so the over-strand direction is recovered
from label succession; the crossing sign is +1 exactly when the over-strand
enters at the ``d`` slot.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum


class DiagramError(ValueError):
    """Base class for diagram construction failures."""


class MalformedCode(DiagramError):
    pass


class LabelMultiplicity(DiagramError):
    pass


class NonPlanar(DiagramError):
    pass


class AllOverComponent(DiagramError):
    pass


class InconsistentRotation(DiagramError):
    pass


class MultiComponent(DiagramError):
    pass


class PortRole(Enum):
    OVER_IN = "over_in"
    OVER_OUT = "over_out"
    UNDER_IN = "under_in"
    UNDER_OUT = "under_out"

    @property
    def is_out(self):
        return self in (PortRole.OVER_OUT, PortRole.UNDER_OUT)

    @property
    def is_over(self):
        return self in (PortRole.OVER_IN, PortRole.OVER_OUT)


OI, OO, UI, UO = PortRole.OVER_IN, PortRole.OVER_OUT, PortRole.UNDER_IN, PortRole.UNDER_OUT


class SegmentType(Enum):
    """Strand role of a segment at (tail crossing, head crossing)."""

    OVER_TO_UNDER = "over_to_under"   # leaves as over-strand, arrives as under-strand
    UNDER_TO_OVER = "under_to_over"
    OVER_TO_OVER = "over_to_over"     # a one-segment under-arc
    UNDER_TO_UNDER = "under_to_under"  # a one-segment over-arc


@dataclass(frozen=True)
class Crossing:
    id: int
    sign: int
    ports: dict  # PortRole -> segment id

    @property
    def rotation(self):
        """Ports in counterclockwise planar order, starting at over-in.

        The rotation is determined by the sign: at a positive crossing the
        under-strand crosses right-to-left as seen along the over-strand.
        """
        if self.sign > 0:
            return (OI, UI, OO, UO)
        return (OI, UO, OO, UI)

    def rotation_segments(self):
        return tuple(self.ports[r] for r in self.rotation)

    def ccw_next(self, role):
        rot = self.rotation
        return rot[(rot.index(role) + 1) % 4]

    def cw_next(self, role):
        rot = self.rotation
        return rot[(rot.index(role) - 1) % 4]


@dataclass(frozen=True)
class Segment:
    id: int
    tail: tuple  # (crossing id, PortRole out)
    head: tuple  # (crossing id, PortRole in)


@dataclass(frozen=True)
class Region:
    """A complementary region, as the cyclic list of its boundary corners.

    ``corners[i] = (crossing id, seg_in, seg_out, port_in, port_out)`` in the
    order met when walking the boundary with the region on the left
    (counterclockwise for bounded regions).
    """

    id: int
    corners: tuple

    @property
    def crossings(self):
        return tuple(c[0] for c in self.corners)

    def boundary_segments(self):
        return tuple(c[2] for c in self.corners)


@dataclass(frozen=True)
class Diagram:
    crossings: dict      # id -> Crossing
    segments: dict       # id -> Segment
    regions: tuple       # of Region
    components: tuple    # of tuple of segment ids, in traversal order
    name: str = ""
    base_crossing: int = field(default=0)

    # -- basic queries ---------------------------------------------------

    @property
    def n(self):
        return len(self.crossings)

    def writhe(self):
        return sum(x.sign for x in self.crossings.values())

    def self_writhe(self, component_index):
        comp = set(self.components[component_index])
        w = 0
        for x in self.crossings.values():
            if x.ports[OI] in comp and x.ports[UI] in comp:
                w += x.sign
        return w

    def component_of(self, seg_id):
        for i, comp in enumerate(self.components):
            if seg_id in comp:
                return i
        raise KeyError(seg_id)

    def is_knot(self):
        return len(self.components) == 1

    def next_segment(self, seg_id):
        """Segment continuing seg_id along the orientation."""
        xid, role = self.segments[seg_id].head
        out_role = OO if role == OI else UO
        return self.crossings[xid].ports[out_role]

    def segment_type(self, seg_id):
        s = self.segments[seg_id]
        t_over = s.tail[1] == OO
        h_over = s.head[1] == OI
        if t_over and not h_over:
            return SegmentType.OVER_TO_UNDER
        if not t_over and h_over:
            return SegmentType.UNDER_TO_OVER
        if t_over and h_over:
            return SegmentType.OVER_TO_OVER
        return SegmentType.UNDER_TO_UNDER

    def travel_frame(self, seg_id, at_tail):
        """(crossing, role, left segment, right segment) for a traveller on seg_id.

        Left/right are the opposite-strand segments adjacent in the rotation,
        taken relative to the direction of travel (tail -> head).
        """
        s = self.segments[seg_id]
        xid, role = s.tail if at_tail else s.head
        x = self.crossings[xid]
        if at_tail:
            left, right = x.ccw_next(role), x.cw_next(role)
        else:
            left, right = x.cw_next(role), x.ccw_next(role)
        return x, role, x.ports[left], x.ports[right]

    # -- arcs and traversal ----------------------------------------------

    def over_arcs(self):
        """Maximal segment runs between consecutive under-passings."""
        return self._arcs(break_role=UI)

    def under_arcs(self):
        return self._arcs(break_role=OI)

    def _arcs(self, break_role):
        # an arc starts on the segment leaving a break and ends on the one
        # arriving at the next break; break_role=UI gives over-arcs.
        start_role = UO if break_role == UI else OO
        arcs = []
        for comp in self.components:
            starts = [i for i, s in enumerate(comp)
                      if self.segments[s].tail[1] == start_role]
            if not starts:
                raise AllOverComponent(
                    "component is always the %s-strand" %
                    ("over" if break_role == UI else "under"))
            k = starts[0]
            run = []
            for s in comp[k:] + comp[:k]:
                run.append(s)
                if self.segments[s].head[1] == break_role:
                    arcs.append(tuple(run))
                    run = []
            if run:
                raise InconsistentRotation("arc run did not close")
        return arcs

    def arc_over_crossing(self, xid):
        """The over-arc passing over crossing xid."""
        seg = self.crossings[xid].ports[OO]
        for arc in self.over_arcs():
            if seg in arc:
                return arc
        raise KeyError(xid)

    def underpass_order(self, base_crossing=None, component=None):
        """Crossing indices in the order they are under-passed, following the
        orientation from the over-arc of the base crossing."""
        if component is None:
            if not self.is_knot():
                raise MultiComponent("use the per-component variant")
            component = 0
        base = base_crossing if base_crossing is not None else self.default_base(component)
        start = self.crossings[base].ports[OO]
        if start not in self.components[component]:
            raise DiagramError("base crossing's over-arc is not on that component")
        order, signs = [], []
        s = start
        while True:
            xid, role = self.segments[s].head
            if role == UI:
                order.append(xid)
                signs.append(self.crossings[xid].sign)
            s = self.next_segment(s)
            if s == start:
                break
        return order, signs

    def default_base(self, component=0):
        """Crossing whose over-strand carries the lowest segment label."""
        best = None
        for x in self.crossings.values():
            if x.ports[OO] not in self.components[component]:
                continue
            key = min(x.ports[OO], x.ports[OI])
            if best is None or key < best[0]:
                best = (key, x.id)
        if best is None:
            raise AllOverComponent("component is never the over-strand")
        return best[1]

    # -- regions ----------------------------------------------------------

    def region_index(self):
        """Map (crossing id, port_in role, port_out role) -> region id for corners."""
        idx = {}
        for reg in self.regions:
            for (xid, _si, _so, pin, pout) in reg.corners:
                idx[(xid, pin, pout)] = reg.id
        return idx

    def segment_sides(self):
        """Map segment id -> (left region id, right region id), looking tail to head."""
        sides = {}
        for reg in self.regions:
            for (xid, _si, so, _pin, pout) in reg.corners:
                seg = self.segments[so]
                if seg.tail == (xid, pout):
                    sides.setdefault(so, [None, None])[0] = reg.id
                else:
                    sides.setdefault(so, [None, None])[1] = reg.id
        return {s: tuple(lr) for s, lr in sides.items()}

    def corner_regions(self, xid):
        """Region ids at the four corners of a crossing, keyed by the CCW port
        pair (role, ccw_next(role)) that bounds the corner."""
        x = self.crossings[xid]
        idx = self.region_index()
        out = {}
        for role in x.rotation:
            nxt = x.ccw_next(role)
            # the corner between ports role and nxt: it is entered either
            # arriving via role and leaving via nxt is not the trace rule;
            # corners were recorded as (port_in, port_out) with port_out = cw(port_in)
            out[(role, nxt)] = idx[(xid, nxt, role)]
        return out

    # -- serialization ----------------------------------------------------

    def to_json(self):
        return json.dumps({
            "name": self.name,
            "crossings": [
                {"id": x.id, "sign": x.sign,
                 "ports": {r.value: x.ports[r] for r in PortRole}}
                for x in sorted(self.crossings.values(), key=lambda c: c.id)],
            "segments": [
                {"id": s.id,
                 "tail": [s.tail[0], s.tail[1].value],
                 "head": [s.head[0], s.head[1].value]}
                for s in sorted(self.segments.values(), key=lambda s: s.id)],
            "regions": [
                {"id": r.id,
                 "corners": [[c[0], c[1], c[2]] for c in r.corners]}
                for r in self.regions],
            "components": [list(c) for c in self.components],
            "writhe": self.writhe(),
        }, indent=2)

    def mirror(self):
        """The mirror diagram: every rotation reflected, signs negated."""
        crossings = {x.id: Crossing(x.id, -x.sign, dict(x.ports))
                     for x in self.crossings.values()}
        return assemble(crossings, name=self.name + "*" if self.name else "")


def parse_pd(text, name=""):
    """Parse a PD code string ``PD[X[a,b,c,d], ...]`` into a Diagram.

    Also accepts a JSON document ``{"name": ..., "pd": ...}``.
    """
    text = text.strip()
    if text.startswith("{"):
        doc = json.loads(text)
        return parse_pd(doc["pd"], name=doc.get("name", name))
    m = re.fullmatch(r"\s*PD\s*\[(.*)\]\s*", text, re.S)
    if not m:
        raise MalformedCode("expected PD[X[a,b,c,d], ...]")
    quads = re.findall(r"X\s*\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]", m.group(1))
    leftover = re.sub(r"X\s*\[\s*\d+\s*,\s*\d+\s*,\s*\d+\s*,\s*\d+\s*\]|[,\s]", "", m.group(1))
    if leftover or not quads:
        raise MalformedCode("unrecognized tokens in PD code: %r" % leftover)
    quads = [tuple(int(v) for v in q) for q in quads]

    n = len(quads)
    labels = [v for q in quads for v in q]
    counts = {}
    for v in labels:
        counts[v] = counts.get(v, 0) + 1
    if sorted(counts) != list(range(1, 2 * n + 1)) or any(c != 2 for c in counts.values()):
        raise LabelMultiplicity("edge labels must be 1..2N, each used exactly twice")

    def succ(x):
        return x % (2 * n) + 1

    crossings = {}
    for i, (a, b, c, d) in enumerate(quads, start=1):
        # under strand: a -> c.  over strand: {b, d} with labels increasing.
        if succ(d) == b and succ(b) != d:
            over_in, over_out, sign = d, b, +1
        elif succ(b) == d and succ(d) != b:
            over_in, over_out, sign = b, d, -1
        elif succ(d) == b and succ(b) == d:
            # kink-sized ambiguity: resolve by strand continuation at this crossing
            if c == d or a == b:
                over_in, over_out, sign = d, b, +1
            else:
                over_in, over_out, sign = b, d, -1
        else:
            raise MalformedCode(
                "crossing X[%d,%d,%d,%d]: over-strand labels not consecutive" % (a, b, c, d))
        crossings[i] = Crossing(i, sign, {UI: a, UO: c, OI: over_in, OO: over_out})
    return assemble(crossings, name=name)


def assemble(crossings, name=""):
    """Build a full Diagram (segments, faces, components) from crossings.

    Raises NonPlanar if the face count is not N+2, DiagramError if the
    diagram is disconnected or port references are inconsistent.
    """
    n = len(crossings)
    ends = {}
    for x in crossings.values():
        for role in PortRole:
            ends.setdefault(x.ports[role], {}).setdefault(
                "out" if role.is_out else "in", []).append((x.id, role))
    segments = {}
    for sid, e in sorted(ends.items()):
        if len(e.get("out", [])) != 1 or len(e.get("in", [])) != 1:
            raise DiagramError("segment %s is not attached to exactly one out- and one in-port" % sid)
        segments[sid] = Segment(sid, e["out"][0], e["in"][0])

    # components: follow orientation
    seen = set()
    components = []
    for sid in sorted(segments):
        if sid in seen:
            continue
        comp, s = [], sid
        while s not in seen:
            seen.add(s)
            comp.append(s)
            xid, role = segments[s].head
            s = crossings[xid].ports[OO if role == OI else UO]
        components.append(tuple(comp))

    # connectivity across crossings
    if n:
        reach, stack = {next(iter(crossings))}, [next(iter(crossings))]
        while stack:
            xid = stack.pop()
            for role in PortRole:
                seg = segments[crossings[xid].ports[role]]
                for other in (seg.tail[0], seg.head[0]):
                    if other not in reach:
                        reach.add(other)
                        stack.append(other)
        if len(reach) != n:
            raise DiagramError("diagram is disconnected")

    regions = _trace_faces(crossings, segments)
    if len(regions) != n + 2:
        raise NonPlanar("face trace found %d regions, expected %d" % (len(regions), n + 2))

    for comp in components:
        head_roles = {segments[s].head[1] for s in comp}
        if head_roles != {OI, UI}:
            raise AllOverComponent(
                "every component must both over- and under-pass some crossing")

    return Diagram(crossings=crossings, segments=segments,
                   regions=tuple(regions), components=tuple(components), name=name)


def _trace_faces(crossings, segments):
    """Face orbits of the rotation system.

    Half-edges are (crossing id, port role): the segment-end at that port,
    walked away from the crossing.  The successor leaves the far end through
    the clockwise-next port, which keeps the traced region on the left.
    """
    unused = {(x.id, role) for x in crossings.values() for role in PortRole}
    regions = []
    while unused:
        h = min(unused, key=lambda t: (t[0], t[1].value))
        start, cycle = h, []
        while True:
            unused.discard(h)
            xid, role = h
            seg = segments[crossings[xid].ports[role]]
            far = seg.head if (xid, role) == seg.tail else seg.tail
            fxid, frole = far
            out_role = crossings[fxid].cw_next(frole)
            cycle.append((fxid, seg.id, crossings[fxid].ports[out_role], frole, out_role))
            h = (fxid, out_role)
            if h == start:
                break
            if h not in unused:
                raise InconsistentRotation("face orbits do not partition the directed sides")
        regions.append(cycle)
    out = [Region(i, tuple(cyc)) for i, cyc in enumerate(regions, start=1)]
    if sum(len(r.corners) for r in out) != 4 * len(crossings):
        raise InconsistentRotation("face orbits do not partition the directed sides")
    return out
