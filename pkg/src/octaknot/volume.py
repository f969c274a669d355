"""Dilogarithm machinery and hyperbolic volume of a solution.

The volume of one crossing's octahedron is the sum of the Bloch-Wigner
values of the four side-edge cross-ratios (the four-term subdivision);
summing over crossings gives the volume of the pseudo-hyperbolic structure.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import octa

PI2_6 = math.pi ** 2 / 6.0

# Bernoulli numbers B_0 .. B_44 (odd ones beyond B_1 vanish), as floats
_BERNOULLI = [
    1.0, -0.5, 1.0 / 6, 0.0, -1.0 / 30, 0.0, 1.0 / 42, 0.0, -1.0 / 30, 0.0,
    5.0 / 66, 0.0, -691.0 / 2730, 0.0, 7.0 / 6, 0.0, -3617.0 / 510, 0.0,
    43867.0 / 798, 0.0, -174611.0 / 330, 0.0, 854513.0 / 138, 0.0,
    -236364091.0 / 2730, 0.0, 8553103.0 / 6, 0.0, -23749461029.0 / 870, 0.0,
    8615841276005.0 / 14322, 0.0, -7709321041217.0 / 510, 0.0,
    2577687858367.0 / 6, 0.0, -26315271553053477373.0 / 1919190, 0.0,
    2929993913841559.0 / 6, 0.0, -261082718496449122051.0 / 13530, 0.0,
    1520097643918070802691.0 / 1806, 0.0, -27833269579301024235023.0 / 690,
]


def dilog(z):
    """Li_2(z) for complex z, principal branch, ~1e-14 accurate.

    Reduces |z| <= 1 and Re z <= 1/2 via the inversion and reflection
    identities, then sums the Bernoulli series in -log(1-z).
    """
    z = complex(z)
    if z == 0:
        return 0.0 + 0.0j
    if z == 1:
        return complex(PI2_6)
    if abs(z) > 1.0:
        # Li2(z) = -Li2(1/z) - pi^2/6 - log(-z)^2 / 2
        lz = cmath.log(-z)
        return -_dilog_small(1.0 / z) - PI2_6 - 0.5 * lz * lz
    return _dilog_small(z)


def _dilog_small(z):
    if abs(z - 1.0) < 1e-300:
        return complex(PI2_6)
    if z.real > 0.5:
        # Li2(z) = pi^2/6 - log(z)log(1-z) - Li2(1-z)
        return PI2_6 - cmath.log(z) * cmath.log(1.0 - z) - _series(1.0 - z)
    return _series(z)


def _series(z):
    """Bernoulli series Li2(z) = sum B_n w^{n+1} / (n+1)!, w = -log(1-z)."""
    w = -cmath.log(1.0 - z)
    total = 0.0 + 0.0j
    wp = w
    fact = 1.0
    for n, b in enumerate(_BERNOULLI):
        if b != 0.0:
            contrib = b * wp / fact
            total += contrib
            if n > 4 and abs(contrib) < 1e-18 * max(1.0, abs(total)):
                break
        wp *= w
        fact *= (n + 2)
    return total


def bloch_wigner(z):
    """D(z) = Im Li2(z) + arg(1-z) log|z|: volume of the ideal tetrahedron
    with cross-ratio z.  Real cross-ratios give exactly 0."""
    z = complex(z)
    if z == 0 or z == 1:
        raise octa.DegenerateTetrahedron("Bloch-Wigner at 0 or 1")
    if z.imag == 0.0:
        return 0.0
    return (dilog(z).imag + cmath.phase(1.0 - z) * math.log(abs(z)))


@dataclass
class VolumeReport:
    total: float
    per_crossing: dict      # crossing id -> {corner letter: tetrahedron volume}
    flat_count: int

    def to_jsonable(self):
        return {"total": self.total,
                "per_crossing": {str(k): v for k, v in self.per_crossing.items()},
                "flat_count": self.flat_count}


def volume_z(diagram, za, flat_tol=1e-9):
    """Volume of a segment-variable solution: Bloch-Wigner sum over the four
    side-edge cross-ratios of every crossing."""
    return _volume(diagram, lambda xid: octa.tau_from_z(diagram, za, xid), flat_tol)


def volume_w(diagram, wa, flat_tol=1e-9):
    """Volume of a region-variable solution; pinched octahedra (all taus 1)
    contribute zero."""
    def taus(xid):
        try:
            return octa.tau_from_w(diagram, wa, xid)
        except octa.DegenerateInput:
            if abs(octa.pinched_value(diagram, wa, xid)) <= flat_tol:
                return {t: 1.0 + 0j for t in octa.LETTERS}
            raise
    return _volume(diagram, taus, flat_tol)


def _volume(diagram, tau_of, flat_tol):
    per, total, flats = {}, 0.0, 0
    for xid in sorted(diagram.crossings):
        taus = tau_of(xid)
        vols = {}
        for letter, t in taus.items():
            if abs(t.imag) <= flat_tol:
                vols[letter] = 0.0
                flats += 1
            else:
                vols[letter] = bloch_wigner(t)
        per[xid] = vols
        total += math.fsum(vols.values())
    return VolumeReport(total=math.fsum(
        math.fsum(v.values()) for v in per.values()), per_crossing=per, flat_count=flats)


def five_term_volume(diagram, za, xid, flat_tol=1e-9):
    """Volume of one octahedron via the five-term subdivision: the two
    hypotenuse pairs plus the central tetrahedron (alpha*gamma)^-1."""
    alpha, gamma, alpha_hat, gamma_hat = octa.hypotenuse_ratios(diagram, za, xid)
    central = 1.0 / (alpha * gamma)
    total = 0.0
    for t in (alpha, gamma, alpha_hat, gamma_hat, central):
        if abs(complex(t).imag) > flat_tol:
            total += bloch_wigner(t)
    return total
