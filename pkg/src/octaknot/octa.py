"""Cross-ratio algebra of the per-crossing ideal octahedron.

Each crossing of a diagram carries an ideal octahedron whose bottom and top
vertices sit on the two strands and whose four side vertices carry the
adjacent segment variables.  This module evaluates the twelve cross-ratios
of that octahedron, builds the per-segment equations in segment variables
(z) and the per-region gluing equations in region variables (w), and
converts between the two pictures.

Positional conventions (which neighbours enter which factor) are fixed once
and validated by the labelled figure-eight and trefoil fixtures in the test
suite; they are expressed through ``Diagram.travel_frame`` so the crossing
sign never appears explicitly in the formulas.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

from .diagram import OI, OO, UI, UO, SegmentType


class Infinity:
    """The point at infinity on the Riemann sphere (exact, not a big float)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "oo"


oo = Infinity()


class DegenerateTetrahedron(ArithmeticError):
    pass


class DegenerateInput(ArithmeticError):
    pass


class InconsistentSolution(ArithmeticError):
    pass


class ZeroLabel(ArithmeticError):
    pass


def cross_ratio(vi, vj, vk, vl):
    """[vi,vj;vk,vl] = (vi-vl)(vj-vk) / ((vi-vk)(vj-vl)), with oo by limits."""
    pts = [vi, vj, vk, vl]
    at_inf = [p is oo for p in pts]
    if sum(at_inf) > 1:
        raise DegenerateTetrahedron("repeated ideal point")
    if at_inf[0]:
        val = _div(pts[1] - pts[2], pts[1] - pts[3])
    elif at_inf[1]:
        val = _div(pts[0] - pts[3], pts[0] - pts[2])
    elif at_inf[2]:
        val = _div(pts[0] - pts[3], pts[1] - pts[3])
    elif at_inf[3]:
        val = _div(pts[1] - pts[2], pts[0] - pts[2])
    else:
        num = (pts[0] - pts[3]) * (pts[1] - pts[2])
        den = (pts[0] - pts[2]) * (pts[1] - pts[3])
        val = _div(num, den)
    if val == 0 or val == 1:
        raise DegenerateTetrahedron("cross-ratio in {0, 1, oo}")
    return val


def _div(a, b):
    if b == 0:
        raise DegenerateTetrahedron("coincident ideal points")
    return a / b


def triple(z):
    """(z, z', z'') with z' = 1/(1-z) and z'' = 1 - 1/z."""
    return z, 1.0 / (1.0 - z), 1.0 - 1.0 / z


def _p(z):
    return 1.0 / (1.0 - z)


def _pp(z):
    return 1.0 - 1.0 / z


@dataclass(frozen=True)
class ZAssignment:
    """Nonzero complex value per segment plus the deformation parameter m."""

    z: dict
    m: complex = 1.0 + 0j

    def scaled(self, c):
        return ZAssignment({k: c * v for k, v in self.z.items()}, self.m)

    def inverted(self):
        return ZAssignment({k: 1.0 / v for k, v in self.z.items()}, 1.0 / self.m)

    def to_jsonable(self):
        return {"m": [self.m.real, self.m.imag],
                "z": {str(k): [v.real, v.imag] for k, v in self.z.items()}}


@dataclass(frozen=True)
class WAssignment:
    """Nonzero complex value per region plus the deformation parameter m."""

    w: dict
    m: complex = 1.0 + 0j

    def scaled(self, c):
        return WAssignment({k: c * v for k, v in self.w.items()}, self.m)

    def to_jsonable(self):
        return {"m": [self.m.real, self.m.imag],
                "w": {str(k): [v.real, v.imag] for k, v in self.w.items()}}


# ---------------------------------------------------------------------------
# segment-variable (four-term) side
# ---------------------------------------------------------------------------

def _end_factor(diagram, za, seg_id, at_tail):
    """Cross-ratio factor contributed by one end of a segment.

    Over ends give (z - z_left)/(z - z_right); under ends give
    z_left (z - z_right) / (z_right (z - z_left)).  These are the values of
    the hypotenuse cross-ratios alpha, 1/gamma, alpha-hat, 1/gamma-hat.
    """
    z = za.z
    x, role, left, right = diagram.travel_frame(seg_id, at_tail)
    zc, zl, zr = z[seg_id], z[left], z[right]
    if role.is_over:
        num, den = zc - zl, zc - zr
    else:
        num, den = zl * (zc - zr), zr * (zc - zl)
    if den == 0:
        raise DegenerateInput("vanishing denominator at segment %s" % seg_id)
    return num / den


def segment_equation(diagram, za, seg_id):
    """(lhs, rhs) of the m-hyperbolicity equation of one segment.

    lhs is oriented so that rhs is m for over-to-under and under-to-over
    segments and 1 for the single-segment-arc types.
    """
    ft = _end_factor(diagram, za, seg_id, True)
    fh = _end_factor(diagram, za, seg_id, False)
    st = diagram.segment_type(seg_id)
    if st in (SegmentType.OVER_TO_UNDER, SegmentType.UNDER_TO_OVER):
        return ft * fh, za.m
    if ft == 0 or fh == 0:
        raise DegenerateInput("degenerate end factor at segment %s" % seg_id)
    return ft / fh, 1.0 + 0j


def residuals_z(diagram, za):
    """Multiplicative residual lhs/rhs - 1 per segment; all zero on a solution."""
    out = {}
    for s in diagram.segments:
        lhs, rhs = segment_equation(diagram, za, s)
        out[s] = lhs / rhs - 1.0
    return out


def redundancy_product(diagram, za):
    """Product of all segment equations in the paper's orientation.

    Identically 1 for arbitrary nondegenerate z, which is the redundancy of
    the segment system; a strong self-test of the positional conventions.
    """
    total = 1.0 + 0j
    for s in diagram.segments:
        lhs, _rhs = segment_equation(diagram, za, s)
        st = diagram.segment_type(s)
        if st in (SegmentType.OVER_TO_UNDER, SegmentType.OVER_TO_OVER):
            total *= lhs
        else:
            total /= lhs
    return total


def check_nondegenerate_z(diagram, za, tol=0.0):
    """Adjacency constraint: z nonzero, neighbours at each corner distinct."""
    failures = []
    for s, v in za.z.items():
        if abs(v) <= tol:
            failures.append(("zero", s))
    for x in diagram.crossings.values():
        segs = x.rotation_segments()
        for i in range(4):
            a, b = segs[i], segs[(i + 1) % 4]
            if abs(za.z[a] - za.z[b]) <= tol:
                failures.append(("adjacent_equal", (x.id, a, b)))
    return failures


def four_distinct_failures(diagram, za, tol=0.0):
    """Knot rule: the four segment values at each crossing are mutually distinct."""
    failures = []
    for x in diagram.crossings.values():
        vals = [za.z[s] for s in x.rotation_segments()]
        for i in range(4):
            for j in range(i + 1, 4):
                if abs(vals[i] - vals[j]) <= tol:
                    failures.append((x.id, i, j))
    return failures


def crossing_label(diagram, za, xid):
    """Parabolic strength of the loop joining the two strands of a crossing.

    (z_ui - z_uo)(1/z_oi - 1/z_oo): the difference of the under-strand values
    times the difference of reciprocal over-strand values.  Nonzero for knot
    solutions.
    """
    x = diagram.crossings[xid]
    z = za.z
    lam = (z[x.ports[UI]] - z[x.ports[UO]]) * (1.0 / z[x.ports[OI]] - 1.0 / z[x.ports[OO]])
    if lam == 0:
        raise ZeroLabel("crossing %s has zero label" % xid)
    return lam


# ---------------------------------------------------------------------------
# octahedron shapes
# ---------------------------------------------------------------------------

LETTERS = ("a", "b", "c", "d")

# corner letter -> unordered pair of port roles bounding the corner
CORNER_PORTS = {
    "a": frozenset((OI, UI)),
    "b": frozenset((UI, OO)),
    "c": frozenset((OO, UO)),
    "d": frozenset((UO, OI)),
}


def corner_letter(pin_role, pout_role):
    """Corner letter for the wedge between two rotation-adjacent ports."""
    return _LETTER_OF[frozenset((pin_role, pout_role))]


_LETTER_OF = {pair: letter for letter, pair in CORNER_PORTS.items()}


def corner_letter_map(diagram, xid):
    """Map corner letter -> region id for the crossing's four corners."""
    regions = diagram.corner_regions(xid)
    return {corner_letter(r1, r2): reg for (r1, r2), reg in regions.items()}


@dataclass(frozen=True)
class OctaShape:
    """The twelve edge cross-ratios of one crossing's octahedron."""

    crossing: int
    alpha: complex
    beta: complex
    gamma: complex
    delta: complex
    alpha_hat: complex
    beta_hat: complex
    gamma_hat: complex
    delta_hat: complex
    tau: dict          # corner letter -> cross-ratio of the side edge
    tau_regions: dict  # region id -> same values
    top: object = field(default=oo)
    bottom: object = field(default=0.0 + 0j)

    def tau_product(self):
        t = 1.0 + 0j
        for v in self.tau.values():
            t *= v
        return t


def hypotenuse_ratios(diagram, za, xid):
    """(alpha, gamma, alpha_hat, gamma_hat) of a crossing in segment variables."""
    x = diagram.crossings[xid]
    alpha = _end_factor(diagram, za, x.ports[OI], False)
    gamma = 1.0 / _end_factor(diagram, za, x.ports[OO], True)
    alpha_hat = _end_factor(diagram, za, x.ports[UI], False)
    gamma_hat = 1.0 / _end_factor(diagram, za, x.ports[UO], True)
    return alpha, gamma, alpha_hat, gamma_hat


def tau_from_z(diagram, za, xid):
    """Side-edge cross-ratios as ratios of adjacent segment variables.

    Going counterclockwise around a region, the corner at this crossing
    contributes z(incoming boundary segment) / z(outgoing boundary segment).
    Returns {corner letter: value}.
    """
    out = {}
    for reg in diagram.regions:
        for (cx, si, so, pin, pout) in reg.corners:
            if cx == xid:
                out[corner_letter(pin, pout)] = za.z[si] / za.z[so]
    return out


def shape_from_z(diagram, za, xid):
    """OctaShape of crossing xid from segment variables."""
    alpha, gamma, alpha_hat, gamma_hat = hypotenuse_ratios(diagram, za, xid)
    x = diagram.crossings[xid]
    if x.sign > 0:
        beta = _p(alpha) * _pp(gamma)
        delta = _pp(alpha) * _p(gamma)
        beta_hat = _p(alpha_hat) * _pp(gamma_hat)
        delta_hat = _pp(alpha_hat) * _p(gamma_hat)
    else:
        beta = _pp(alpha) * _p(gamma)
        delta = _p(alpha) * _pp(gamma)
        beta_hat = _pp(alpha_hat) * _p(gamma_hat)
        delta_hat = _p(alpha_hat) * _pp(gamma_hat)
    tau = tau_from_z(diagram, za, xid)
    letters = corner_letter_map(diagram, xid)
    tau_regions = {letters[t]: tau[t] for t in LETTERS}
    return OctaShape(crossing=xid, alpha=alpha, beta=beta, gamma=gamma, delta=delta,
                     alpha_hat=alpha_hat, beta_hat=beta_hat, gamma_hat=gamma_hat,
                     delta_hat=delta_hat, tau=tau, tau_regions=tau_regions)


def tau_from_hypotenuses(diagram, za, xid):
    """Corner taus from the five-term cross-ratios, via z'/z'' combinations.

    Independent route to the same values as tau_from_z; used as a
    consistency check between the four- and five-term subdivisions.
    """
    alpha, gamma, alpha_hat, gamma_hat = hypotenuse_ratios(diagram, za, xid)
    central = 1.0 / (alpha * gamma)
    if diagram.crossings[xid].sign > 0:
        return {
            "a": _pp(alpha) * _p(central) * _pp(alpha_hat),
            "b": _p(gamma) * _pp(central) * _p(alpha_hat),
            "c": _pp(gamma) * _p(central) * _pp(gamma_hat),
            "d": _p(alpha) * _pp(central) * _p(gamma_hat),
        }
    return {
        "a": _p(alpha) * _pp(central) * _p(alpha_hat),
        "b": _pp(gamma) * _p(central) * _pp(alpha_hat),
        "c": _p(gamma) * _pp(central) * _p(gamma_hat),
        "d": _pp(alpha) * _p(central) * _pp(gamma_hat),
    }


# ---------------------------------------------------------------------------
# region-variable (five-term) side
# ---------------------------------------------------------------------------

def tau_from_w(diagram, wa, xid):
    """Side-edge cross-ratios of a crossing from region variables.

    Returns {corner letter: tau}.  Uses the principal branch of sqrt(m).
    """
    x = diagram.crossings[xid]
    sm = cmath.sqrt(wa.m)
    letters = corner_letter_map(diagram, xid)
    a, b, c, d = (wa.w[letters[t]] for t in LETTERS)
    core = a * c - b * d
    if core == 0:
        raise DegenerateInput("w_a w_c = w_b w_d at crossing %s" % xid)
    if x.sign > 0:
        sa, sc = 1.0 / sm, sm
    else:
        sa, sc = sm, 1.0 / sm
    den_a = (b - sa * a) * (d - sa * a)
    den_c = (b - sc * c) * (d - sc * c)
    den_b = (sa * a - b) * (sc * c - b)
    den_d = (sa * a - d) * (sc * c - d)
    for name, den in (("a", den_a), ("b", den_b), ("c", den_c), ("d", den_d)):
        if den == 0:
            raise DegenerateInput("degenerate corner %s at crossing %s" % (name, xid))
    return {
        "a": den_a / (-core),
        "b": core / den_b,
        "c": den_c / (-core),
        "d": core / den_d,
    }


def residuals_w(diagram, wa):
    """Gluing-equation residual per region: product of corner taus minus 1."""
    taus = {xid: tau_from_w(diagram, wa, xid) for xid in diagram.crossings}
    out = {}
    for reg in diagram.regions:
        prod = 1.0 + 0j
        for (cx, _si, _so, pin, pout) in reg.corners:
            prod *= taus[cx][corner_letter(pin, pout)]
        out[reg.id] = prod - 1.0
    return out


def pinched_value(diagram, wa, xid):
    """Linear expression vanishing exactly when the octahedron is pinched."""
    x = diagram.crossings[xid]
    sm = cmath.sqrt(wa.m)
    letters = corner_letter_map(diagram, xid)
    a, b, c, d = (wa.w[letters[t]] for t in LETTERS)
    if x.sign > 0:
        return a / sm - b + sm * c - d
    return sm * a - b + c / sm - d


def check_nondegenerate_w(diagram, wa, tol=0.0):
    """The five non-degeneracy inequations per crossing."""
    sm = cmath.sqrt(wa.m)
    failures = []
    for xid, x in diagram.crossings.items():
        letters = corner_letter_map(diagram, xid)
        a, b, c, d = (wa.w[letters[t]] for t in LETTERS)
        sa, sc = (1.0 / sm, sm) if x.sign > 0 else (sm, 1.0 / sm)
        checks = [a * c - b * d, sa * a - b, sa * a - d, sc * c - b, sc * c - d]
        for i, v in enumerate(checks):
            if abs(v) <= tol:
                failures.append((xid, i))
    return failures


def pinched_closure(diagram, seed):
    """Least set of crossings containing seed and closed under the rule that a
    region with all but one corner pinched pinches the last corner."""
    pinched = set(seed)
    changed = True
    while changed:
        changed = False
        for reg in diagram.regions:
            missing = [c[0] for c in reg.corners if c[0] not in pinched]
            if len(missing) == 1:
                pinched.add(missing[0])
                changed = True
    return pinched


def z_to_w(diagram, za, base_region=None, tol=1e-9):
    """Integrate region variables from a segment-variable solution.

    The ratio of the two region variables across a segment is the
    hypotenuse cross-ratio at either end divided by sqrt(m) (for over ends)
    or its reciprocal times sqrt(m) (under ends); the arrow points from the
    right-hand region to the left-hand region of the oriented segment.
    Gauge: the base region (default: region 1) gets w = 1.
    """
    sm = cmath.sqrt(za.m)
    sides = diagram.segment_sides()
    ratio = {}
    for s in diagram.segments:
        tail_role = diagram.segments[s].tail[1]
        if tail_role == OO:
            v = _end_factor(diagram, za, s, True) / sm
        else:
            v = sm / _end_factor(diagram, za, s, True)
        head_role = diagram.segments[s].head[1]
        if head_role == OI:
            v2 = _end_factor(diagram, za, s, False) / sm
        else:
            v2 = sm / _end_factor(diagram, za, s, False)
        if abs(v - v2) > tol * max(1.0, abs(v)):
            raise InconsistentSolution(
                "segment %s: arrow values disagree (not a solution?)" % s)
        ratio[s] = v   # w[left] / w[right]

    if base_region is None:
        base_region = diagram.regions[0].id
    w = {base_region: 1.0 + 0j}
    frontier = [base_region]
    while frontier:
        reg = frontier.pop()
        for s, (lft, rgt) in sides.items():
            if reg == lft and rgt not in w:
                w[rgt] = w[reg] / ratio[s]
                frontier.append(rgt)
            elif reg == rgt and lft not in w:
                w[lft] = w[reg] * ratio[s]
                frontier.append(lft)
    if len(w) != len(diagram.regions):
        raise InconsistentSolution("region graph not connected")
    # closure check on every segment
    for s, (lft, rgt) in sides.items():
        err = abs(w[lft] - ratio[s] * w[rgt])
        if err > tol * max(1.0, abs(w[lft])):
            raise InconsistentSolution("path-dependent integration at segment %s" % s)
    return WAssignment(w, za.m)
