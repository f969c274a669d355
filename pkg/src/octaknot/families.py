"""Closed-form solution families: T(2,N) torus knots and J(N,-M) knots.

The per-segment equations inside a twist region have a Fibonacci-type
structure: solutions are ratios of consecutive terms of sequences obeying
F_{i+1} = W F_i + F_{i-1}.  Closing the diagram forces W^2 (written Lambda)
to be a root of an exact integer polynomial, the Riley polynomial of the
knot; each root gives one representation class, with three free gauge
parameters p, q, r.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from math import gcd

import numpy as np

from . import octa
from .diagram import Crossing, OI, OO, UI, UO, assemble


class BadParity(ValueError):
    pass


class DegenerateGauge(ArithmeticError):
    pass


class IllConditioned(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# exact integer polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntPoly:
    """Dense integer-coefficient polynomial, ascending degree."""

    coeffs: tuple
    var: str = "L"

    @staticmethod
    def of(*coeffs, var="L"):
        return IntPoly(_trim(tuple(int(c) for c in coeffs)), var)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -1

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly(_trim(tuple(x + y for x, y in zip(a, b))), self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        return self + IntPoly(tuple(-c for c in other.coeffs), self.var)

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return IntPoly((), self.var)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(_trim(tuple(out)), self.var)

    __rmul__ = __mul__
    __radd__ = __add__

    def _coerce(self, other):
        if isinstance(other, IntPoly):
            return other
        return IntPoly.of(other, var=self.var)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        return IntPoly(_trim(tuple(i * c for i, c in enumerate(self.coeffs))[1:]), self.var)

    def content(self):
        g = 0
        for c in self.coeffs:
            g = gcd(g, abs(c))
        return g

    def is_squarefree(self):
        return _poly_gcd_degree(self.coeffs, self.derivative().coeffs) == 0

    def pretty(self, symbol=None):
        symbol = symbol or self.var
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                term = str(mag)
            else:
                head = "" if mag == 1 else str(mag)
                term = head + symbol + ("^%d" % i if i > 1 else "")
            if not parts:
                parts.append(("-" if c < 0 else "") + term)
            else:
                parts.append(("- " if c < 0 else "+ ") + term)
        return " ".join(parts)

    def to_jsonable(self):
        return {"variable": self.var, "coefficients": list(self.coeffs)}


def _trim(coeffs):
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


def _poly_gcd_degree(a, b):
    """Degree of gcd over Q, via exact Fraction arithmetic."""
    from fractions import Fraction
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    def trim(p):
        while p and p[-1] == 0:
            p.pop()
        return p
    a, b = trim(a), trim(b)
    while b:
        # a mod b
        r = a[:]
        while len(r) >= len(b) and trim(r):
            f = r[-1] / b[-1]
            shift = len(r) - len(b)
            for i, c in enumerate(b):
                r[i + shift] -= f * c
            r = trim(r)
        a, b = b, r
    return len(a) - 1 if a else -1


def poly_roots(poly, polish_steps=8):
    """All complex roots of an IntPoly, companion-matrix eigenvalues plus
    Newton polish; raises IllConditioned when a polished root stays bad."""
    cs = [float(c) for c in poly.coeffs]
    if len(cs) < 2:
        return []
    roots = np.roots(list(reversed(cs))).astype(complex)
    dp = poly.derivative()
    scale = max(abs(c) for c in poly.coeffs)
    out = []
    for r in roots:
        x = complex(r)
        for _ in range(polish_steps):
            d = dp(x)
            if d == 0:
                break
            x -= poly(x) / d
        if abs(poly(x)) > 1e-9 * scale * max(1.0, abs(x)) ** poly.degree:
            raise IllConditioned("root %s has residual %g" % (x, abs(poly(x))))
        out.append(x)
    out.sort(key=lambda v: (round(v.real, 9), round(v.imag, 9)))
    return out


# ---------------------------------------------------------------------------
# W-Fibonacci sequences
# ---------------------------------------------------------------------------

def fibo_base(i, W):
    """Base W-Fibonacci term B_i (B_0 = 0, B_1 = 1), any integer index.

    W may be numeric or an IntPoly; the recursion only needs + and *.
    """
    one = W * 0 + 1 if isinstance(W, IntPoly) else 1.0 + 0j
    zero = W * 0 if isinstance(W, IntPoly) else 0.0 + 0j
    if i >= 0:
        a, b = zero, one
        for _ in range(i):
            a, b = b, W * b + a
        return a
    a, b = zero, one
    for _ in range(-i):
        a, b = b - W * a, a
    return a


def fibo_pair_poly(n):
    """(B_n as IntPoly in Lambda, parity): B_n(W) has only W^(n-1 mod 2)
    parity powers; even-index terms carry one factor of W = sqrt(Lambda)."""
    coeffs_W = [0] * (max(n, 1))
    a, b = [0], [1]
    for _ in range(n):
        nxt = [0] * (len(b) + 1)
        for i, c in enumerate(b):
            nxt[i + 1] += c
        for i, c in enumerate(a):
            nxt[i] += c
        a, b = b, nxt
    coeffs_W = a
    even = _trim(tuple(coeffs_W[0::2]))
    odd = _trim(tuple(coeffs_W[1::2]))
    if even and odd:
        raise AssertionError("mixed parity in base Fibonacci term")
    if odd:
        return IntPoly(odd), 1
    return IntPoly(even), 0


def riley_torus(N):
    """Riley polynomial of T(2,N): B_N with W^2 = Lambda.  N odd >= 3."""
    if N % 2 == 0 or N < 3:
        raise BadParity("T(2,N) is a knot only for odd N >= 3")
    poly, parity = fibo_pair_poly(N)
    if parity != 0:
        raise AssertionError("odd-index base term should be even in W")
    return poly


def riley_jnm(N, M):
    """Riley polynomial of J(N,-M): B'_{M+1} + (-1)^(N/2) B'_M B_{N-1},
    where B' is the base W'-Fibonacci sequence for W' = (-1)^(N/2) sqrt(L) B_N.

    N even >= 2, M >= 1.  Exact in Lambda: W'^1 terms pair with the odd
    parity of B', making every B'_j a polynomial in Lambda.
    """
    if N % 2 != 0 or N < 2:
        raise BadParity("the closed form needs even N")
    if M < 1:
        raise BadParity("M must be at least 1")
    sign = -1 if (N // 2) % 2 else 1
    bn, parity = fibo_pair_poly(N)
    if parity != 1:
        raise AssertionError("even-index base term should be odd in W")
    # W'^2 = Lambda * B_N(W)^2 = Lambda * bn^2(Lambda) * Lambda^... ; with
    # B_N = sqrt(L) * bn(L) we get W' = sign * L * bn(L), an exact IntPoly.
    Wp = IntPoly.of(0, sign) * bn
    bp_m = fibo_base(M, Wp)
    bp_m1 = fibo_base(M + 1, Wp)
    bn_minus, par2 = fibo_pair_poly(N - 1)
    if par2 != 0:
        raise AssertionError("B_{N-1} should be a Lambda polynomial")
    out = bp_m1 + sign * (bp_m * bn_minus)
    if not out.is_monic():
        out = IntPoly(tuple(-c for c in out.coeffs), out.var)
    return out


# ---------------------------------------------------------------------------
# labelled family diagrams
# ---------------------------------------------------------------------------

def torus_diagram(N):
    """T(2,N) with the labels used by the closed form: crossing i has
    incoming over-strand 2i-1 on top, incoming under-strand 2i on the bottom,
    and the strands swap; the two closure arcs double as 1 and 2."""
    cr = {}
    for i in range(1, N + 1):
        ti, bi = 2 * i - 1, 2 * i
        to = 2 * i + 1 if i < N else 1
        bo = 2 * i + 2 if i < N else 2
        cr[i] = Crossing(i, +1, {OI: ti, OO: bo, UI: bi, UO: to})
    return assemble(cr, name="T(2,%d)" % N)


def jnm_diagram(N, M):
    """J(N,-M): an N-crossing twist region joined to an M-crossing clasp
    region of the opposite handedness.  Segment ids 1..2N+2 run through the
    twist and 2N+3..2N+2M through the clasp interior; the four junction
    segments carry double labels in the closed form.  For even M the two
    regions have antiparallel strands and opposite crossing signs; for odd M
    the regions share one sign and the twist strands run parallel."""
    def zp(j):  # z'_j -> segment id
        if j == 1:
            return 2 * N + 2
        if j == 2:
            return 2
        if j == 2 * M + 1:
            return 2 * N + 1
        if j == 2 * M + 2:
            return 1
        return 2 * N + j
    cr = {}
    for i in range(1, N + 1):
        s = [2 * i - 1, 2 * i, 2 * i + 1, 2 * i + 2]
        if M % 2 == 0:
            ports = ({OI: s[0], OO: s[3], UI: s[2], UO: s[1]} if i % 2
                     else {OI: s[3], OO: s[0], UI: s[1], UO: s[2]})
        else:
            ports = {OI: s[0], OO: s[3], UI: s[1], UO: s[2]}
        cr[i] = Crossing(i, +1, ports)
    for i in range(1, M + 1):
        s = [zp(2 * i - 1), zp(2 * i), zp(2 * i + 1), zp(2 * i + 2)]
        if M % 2 == 0:
            ports = ({OI: s[1], OO: s[2], UI: s[3], UO: s[0]} if i % 2
                     else {OI: s[2], OO: s[1], UI: s[0], UO: s[3]})
            k_sign = -1
        else:
            ports = ({OI: s[2], OO: s[1], UI: s[0], UO: s[3]} if i % 2
                     else {OI: s[1], OO: s[2], UI: s[3], UO: s[0]})
            k_sign = +1
        cr[N + i] = Crossing(N + i, k_sign, ports)
    return assemble(cr, name="J(%d,-%d)" % (N, M))


# ---------------------------------------------------------------------------
# closed-form solutions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilySolution:
    tag: str
    lam: complex
    gauge: tuple
    diagram: object
    assignment: object


GAUGE_SEQUENCE = ((1, 2, 5), (2, 3, 7), (1.5, -2, 4), (0.7, 2.3, -1.9), (3, -5, 2))


def torus_solution(N, lam, gauge=None):
    """Boundary-parabolic solution of T(2,N) for a Riley root lam."""
    d = torus_diagram(N)
    for pqr in ([gauge] if gauge else GAUGE_SEQUENCE):
        try:
            z = _torus_values(N, lam, *pqr)
            za = octa.ZAssignment(z, 1.0 + 0j)
            if octa.check_nondegenerate_z(d, za, tol=1e-12):
                raise DegenerateGauge("degenerate gauge %s" % (pqr,))
            return FamilySolution("T(2,%d)" % N, complex(lam), tuple(pqr), d, za)
        except (ZeroDivisionError, DegenerateGauge):
            if gauge:
                raise
    raise DegenerateGauge("no usable gauge for T(2,%d) at %s" % (N, lam))


def _torus_values(N, lam, p, q, r):
    sL = cmath.sqrt(lam)
    B = lambda i: fibo_base(i, sL)
    z = {}
    for i in range(1, N + 1):
        z[2 * i - 1] = (p * q * sL * B(i - 1) + p * (r - q) * B(i)) / \
                       ((r - q) * B(i - 2) + p * sL * B(i - 1))
        z[2 * i] = (p * q * sL * B(i - 2) + p * (r - q) * B(i - 1)) / \
                   ((r - q) * B(i - 1) + p * sL * B(i))
    return z


def jnm_solution(N, M, lam, gauge=None):
    """Boundary-parabolic solution of J(N,-M) for a Riley root lam."""
    d = jnm_diagram(N, M)
    for pqr in ([gauge] if gauge else GAUGE_SEQUENCE):
        try:
            z = _jnm_values(N, M, lam, *pqr)
            za = octa.ZAssignment(z, 1.0 + 0j)
            if octa.check_nondegenerate_z(d, za, tol=1e-12):
                raise DegenerateGauge("degenerate gauge %s" % (pqr,))
            return FamilySolution("J(%d,-%d)" % (N, M), complex(lam), tuple(pqr), d, za)
        except (ZeroDivisionError, DegenerateGauge):
            if gauge:
                raise
    raise DegenerateGauge("no usable gauge for J(%d,-%d) at %s" % (N, M, lam))


def _jnm_values(N, M, lam, p, q, r):
    sL = cmath.sqrt(lam)
    B = lambda i: fibo_base(i, sL)
    sign = -1.0 if (N // 2) % 2 else 1.0
    FN = p * q * sL * B(N - 1) + p * (r - q) * B(N)
    GN2 = (r - q) * B(N) + p * sL * B(N + 1)
    Wp = sign * sL * B(N)
    Bp = lambda i: fibo_base(i, Wp)
    z = {}
    for i in range(1, N + 2):
        z[2 * i - 1] = (p * q * sL * B(i - 1) + p * (r - q) * B(i)) / \
                       ((r - q) * B(i - 2) + p * sL * B(i - 1))
        z[2 * i] = (p * q * sL * B(i - 2) + p * (r - q) * B(i - 1)) / \
                   ((r - q) * B(i - 1) + p * sL * B(i))
    zp = {}
    for i in range(2, M + 1):
        zp[2 * i - 1] = (sign * FN * Bp(i - 2) + p * q * sL * Bp(i - 1)) / \
                        (p * sL * Bp(i - 1) + sign * GN2 * Bp(i))
        zp[2 * i] = (sign * FN * Bp(i - 1) + p * q * sL * Bp(i)) / \
                    (p * sL * Bp(i - 2) + sign * GN2 * Bp(i - 1))
    out = {}
    for i in range(1, 2 * N + 3):
        out[i] = z[i]
    for j, v in zp.items():
        out[2 * N + j] = v
    return out


def family_cusp_shape(tag, lam, N=None, M=None):
    """Closed-form cusp shape of a family class.

    For even M the value is conjugated: the underlying cusp formula pairs
    each Riley root with the conjugate class there (see the decisions
    ledger), and this function returns the cusp of the class whose segment
    variables the generator actually produces for ``lam``.
    """
    if tag == "torus":
        return complex(-2 * N)
    sL = cmath.sqrt(lam)
    B = lambda i: fibo_base(i, sL)
    par = -2.0 if M % 2 else 0.0
    val = par * N + 2 * (B(N + 1) + B(N - 1)) / (B(N + 1) - B(N - 1))
    # for even M the generated solutions realize the opposite longitude
    # orientation of the closed formula; see the decisions ledger
    return -val if M % 2 == 0 else val
