"""Two-dimensional modified Euler-Maclaurin summation over unions of unit squares.

A finite set P of integer pairs is split into an explicitly summed part P0
and the rest P1. Each (i, j) in P1 stands for the half-open square
[i, i+1) x [j, j+1); the sum over P1 is approximated by an area term A
(double grating integral), a line term L over the oriented boundary and a
vertex term V over the signed corners of that boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import AccuracyError
from .memf1d import BoundReport, _abs_integral, grating_integral

_DIRS = {(1, 0), (0, 1), (-1, 0), (0, -1)}


# --------------------------------------------------------------------------
# Regions and boundaries
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GridRegion:
    squares: frozenset

    def __init__(self, squares):
        object.__setattr__(self, "squares", frozenset((int(i), int(j)) for i, j in squares))

    @classmethod
    def rectangle(cls, a, b, c, d):
        """Squares covering [a, b) x [c, d)."""
        return cls((i, j) for i in range(a, b) for j in range(c, d))

    def __len__(self):
        return len(self.squares)

    def __iter__(self):
        return iter(sorted(self.squares))

    def boundary_edges(self):
        """Directed unit edges with the region on their left, sorted."""
        edges = set()
        for i, j in self.squares:
            for e in (
                ((i, j), (i + 1, j)),
                ((i + 1, j), (i + 1, j + 1)),
                ((i + 1, j + 1), (i, j + 1)),
                ((i, j + 1), (i, j)),
            ):
                rev = (e[1], e[0])
                if rev in edges:
                    edges.remove(rev)
                else:
                    edges.add(e)
        return sorted(edges)

    def vertex_signs(self):
        """Corner weights from the per-square rule (+ at lower-left/upper-right)."""
        out = {}
        for i, j in self.squares:
            for v, s in (((i, j), 1), ((i + 1, j + 1), 1), ((i, j + 1), -1), ((i + 1, j), -1)):
                out[v] = out.get(v, 0) + s
        return {v: s for v, s in out.items() if s != 0}


@dataclass
class BoundaryPath:
    loops: list  # each loop: list of directed edges in traversal order
    orientation: list  # +1 counterclockwise (outer), -1 clockwise (hole)
    corners: list = field(default_factory=list)  # (i, j, sign)

    @property
    def edges(self):
        return [e for loop in self.loops for e in loop]

    def loop_corners(self, index):
        return _loop_corners(self.loops[index])


def _direction(edge):
    (x0, y0), (x1, y1) = edge
    return (x1 - x0, y1 - y0)


def _left(d):
    return (-d[1], d[0])


def _right(d):
    return (d[1], -d[0])


def _loop_corners(loop):
    out = []
    for k, edge in enumerate(loop):
        prev = loop[k - 1]
        d_in, d_out = _direction(prev), _direction(edge)
        if d_in == d_out:
            continue
        vertical_in = d_in[0] == 0
        out.append((edge[0][0], edge[0][1], 1 if vertical_in else -1))
    return out


def trace_boundary(region):
    """Oriented boundary loops of a union of unit squares with signed corners.

    Outer loops run counterclockwise and holes clockwise (region on the left).
    At a vertex where the boundary touches itself the walk turns left, which
    keeps each loop around a single connected piece.
    """
    if not isinstance(region, GridRegion):
        region = GridRegion(region)
    if not region.squares:
        raise ValueError("cannot trace the boundary of an empty region")
    outgoing = {}
    for e in region.boundary_edges():
        outgoing.setdefault(e[0], []).append(e)
    remaining = set(region.boundary_edges())
    loops, orient = [], []
    while remaining:
        start = min(remaining)
        loop = [start]
        remaining.discard(start)
        cur = start
        while True:
            d = _direction(cur)
            options = [e for e in outgoing[cur[1]] if e in remaining or e == start]
            pick = None
            for want in (_left(d), d, _right(d)):
                for e in options:
                    if _direction(e) == want:
                        pick = e
                        break
                if pick:
                    break
            if pick is None or pick == start:
                break
            loop.append(pick)
            remaining.discard(pick)
            cur = pick
        area2 = sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in loop)
        loops.append(loop)
        orient.append(1 if area2 > 0 else -1)
    corners = [c for loop in loops for c in _loop_corners(loop)]
    return BoundaryPath(loops=loops, orientation=orient, corners=corners)


# --------------------------------------------------------------------------
# Operators
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CutParams2D:
    n: int = 2
    p: int = 0
    n2: int | None = None
    p2: int | None = None
    explicit_set: frozenset = frozenset()

    def __post_init__(self):
        if self.n2 is None:
            object.__setattr__(self, "n2", self.n)
        if self.p2 is None:
            object.__setattr__(self, "p2", self.p)
        object.__setattr__(self, "explicit_set", frozenset(self.explicit_set))
        if min(self.n, self.n2) < 1 or min(self.p, self.p2) < 0:
            raise ValueError(f"invalid 2D cut {self}")


def _partial(f, direction, order, x, y, other=0):
    if direction == "x":
        return f.partial(order, other, x, y)
    return f.partial(other, order, x, y)


def operator_B_apply(f, direction, n, p, x, y, other=0):
    """(B_{n,p} f)(x, y) along ``direction``; ``other`` differentiates the other axis first."""
    terms = [-0.5 * np.asarray(_partial(f, direction, 0, x, y, other))]
    for r in range(1, n // 2 + 1):
        terms.append((-1) ** (r + 1) * kernels.tail(2 * r, p) * np.asarray(_partial(f, direction, 2 * r - 1, x, y, other)))
    out = sum(terms)
    return float(out) if np.ndim(out) == 0 else out


def operator_b_apply(f, direction, n, p, x, y):
    """Derivative of B_{n,p} f along ``direction``."""
    terms = [-0.5 * np.asarray(_partial(f, direction, 1, x, y))]
    for r in range(1, n // 2 + 1):
        terms.append((-1) ** (r + 1) * kernels.tail(2 * r, p) * np.asarray(_partial(f, direction, 2 * r, x, y)))
    out = sum(terms)
    return float(out) if np.ndim(out) == 0 else out


def operator_c_envelope(f, direction, n, p, x, y):
    """Pointwise envelope T_{n,p} |d^n f| of the discarded-mode operator."""
    out = kernels.tail(n, p) * np.abs(np.asarray(_partial(f, direction, n, x, y)))
    return float(out) if np.ndim(out) == 0 else out


def operator_BB_apply(f, n, p, n2, p2, x, y):
    """B^x_{n,p} B^y_{n2,p2} f at a point."""
    cx = [(0, -0.5)] + [(2 * r - 1, (-1) ** (r + 1) * kernels.tail(2 * r, p)) for r in range(1, n // 2 + 1)]
    cy = [(0, -0.5)] + [(2 * r - 1, (-1) ** (r + 1) * kernels.tail(2 * r, p2)) for r in range(1, n2 // 2 + 1)]
    return math.fsum(wx * wy * float(f.partial(mu, nu, x, y)) for mu, wx in cx for nu, wy in cy)


def _B1(g, n, p, t):
    """1D operator B_{n,p} applied to g at t."""
    terms = [-0.5 * float(g.derivative(0, t))]
    for r in range(1, n // 2 + 1):
        terms.append((-1) ** (r + 1) * kernels.tail(2 * r, p) * float(g.derivative(2 * r - 1, t)))
    return math.fsum(terms)


# --------------------------------------------------------------------------
# Quadrature on unit cells (non-separable functions)
# --------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _gl(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def _cell_nodes(p):
    return 2 * p + 24


def _segment_integral(fn, lo, p):
    """int_lo^{lo+1} a_p(t) fn(t) dt by Gauss-Legendre, checked at two orders."""
    vals = []
    for n in (_cell_nodes(p), _cell_nodes(p) + 12):
        t, w = _gl(n)
        t = lo + t
        vals.append(float(np.dot(w, kernels.grating_kernel(p, t) * np.asarray(fn(t)))))
    if abs(vals[0] - vals[1]) > 1e-12 * (1 + abs(vals[1])):
        raise AccuracyError("segment quadrature unresolved", estimate=vals[1], error=abs(vals[0] - vals[1]))
    return vals[1]


def _square_integral(f, i, j, p, p2):
    vals = []
    for extra in (0, 12):
        nx, ny = _cell_nodes(p) + extra, _cell_nodes(p2) + extra
        tx, wx = _gl(nx)
        ty, wy = _gl(ny)
        X, Y = np.meshgrid(i + tx, j + ty, indexing="ij")
        F = np.asarray(f.partial(0, 0, X, Y)) * kernels.grating_kernel(p, X) * kernels.grating_kernel(p2, Y)
        vals.append(float(wx @ F @ wy))
    if abs(vals[0] - vals[1]) > 1e-12 * (1 + abs(vals[1])):
        raise AccuracyError("cell quadrature unresolved", estimate=vals[1], error=abs(vals[0] - vals[1]))
    return vals[1]


def _abs_square(fn, i, j, sub=8, nodes=10):
    """int over the unit cell of |fn| by composite GL at two resolutions, margin added."""
    vals = []
    for s in (sub, 2 * sub):
        t, w = _gl(nodes)
        edges = np.arange(s) / s
        pts = (edges[:, None] + t[None, :] / s).ravel()
        wts = np.tile(w / s, s)
        X, Y = np.meshgrid(i + pts, j + pts, indexing="ij")
        vals.append(float(wts @ np.abs(np.asarray(fn(X, Y))) @ wts))
    return vals[1] + abs(vals[1] - vals[0])


def _abs_segment(fn, lo, sub=8, nodes=10):
    vals = []
    for s in (sub, 2 * sub):
        t, w = _gl(nodes)
        pts = lo + ((np.arange(s) / s)[:, None] + t[None, :] / s).ravel()
        vals.append(float(np.tile(w / s, s) @ np.abs(np.asarray(fn(pts)))))
    return vals[1] + abs(vals[1] - vals[0])


# --------------------------------------------------------------------------
# Summation
# --------------------------------------------------------------------------

@dataclass
class SummationEstimate2D:
    head: float
    area: float
    line: float
    vertex: float
    bounds: list = field(default_factory=list)

    @property
    def total(self):
        return self.head + self.area + self.line + self.vertex

    def best_bound(self):
        return min(self.bounds, key=lambda b: b.value) if self.bounds else None


class _Pieces:
    """Per-function caches of the 1D grating integrals on unit intervals."""

    def __init__(self, f, cut):
        self.f = f
        self.cut = cut
        self.sep = f.factors
        self._gx = {}
        self._gy = {}

    def grating_x(self, i):
        if i not in self._gx:
            self._gx[i] = grating_integral(self.sep[0], i, i + 1, self.cut.p)
        return self._gx[i]

    def grating_y(self, j):
        if j not in self._gy:
            self._gy[j] = grating_integral(self.sep[1], j, j + 1, self.cut.p2)
        return self._gy[j]

    def area(self, i, j):
        if self.sep:
            return self.grating_x(i) * self.grating_y(j)
        return _square_integral(self.f, i, j, self.cut.p, self.cut.p2)

    def horizontal(self, i, y0):
        """int_i^{i+1} a_p(x) (B^y f)(x, y0) dx."""
        c = self.cut
        if self.sep:
            return self.grating_x(i) * _B1(self.sep[1], c.n2, c.p2, y0)
        return _segment_integral(lambda x: operator_B_apply(self.f, "y", c.n2, c.p2, x, np.full_like(x, y0)), i, c.p)

    def vertical(self, x0, j):
        """int_j^{j+1} a_p'(y) (B^x f)(x0, y) dy."""
        c = self.cut
        if self.sep:
            return self.grating_y(j) * _B1(self.sep[0], c.n, c.p, x0)
        return _segment_integral(lambda y: operator_B_apply(self.f, "x", c.n, c.p, np.full_like(y, x0), y), j, c.p2)


def _line_term(pieces, path):
    terms = []
    for (x0, y0), (x1, y1) in path.edges:
        if y0 == y1:
            # -int a_p B^y f dx along the edge direction
            i = min(x0, x1)
            sgn = 1.0 if x1 > x0 else -1.0
            terms.append(-sgn * pieces.horizontal(i, y0))
        else:
            j = min(y0, y1)
            sgn = 1.0 if y1 > y0 else -1.0
            terms.append(sgn * pieces.vertical(x0, j))
    return math.fsum(terms)


def memf_sum_region(f, P, cut, *, with_bounds=True):
    """Cut of sum_{(i,j) in P} f(i, j): explicit P0 plus A + L + V over P1."""
    P = frozenset((int(i), int(j)) for i, j in P)
    P0 = cut.explicit_set
    if not P0 <= P:
        raise ValueError("explicit_set must be a subset of P")
    P1 = sorted(P - P0)
    head = math.fsum(float(f.value(i, j)) for i, j in sorted(P0))
    if not P1:
        return SummationEstimate2D(head=head, area=0.0, line=0.0, vertex=0.0)
    region = GridRegion(P1)
    path = trace_boundary(region)
    pieces = _Pieces(f, cut)
    area = math.fsum(pieces.area(i, j) for i, j in P1)
    line = _line_term(pieces, path)
    vertex = math.fsum(
        s * operator_BB_apply(f, cut.n, cut.p, cut.n2, cut.p2, i, j) for i, j, s in sorted(path.corners)
    )
    est = SummationEstimate2D(head=head, area=area, line=line, vertex=vertex)
    if with_bounds and cut.n > 1 and cut.n2 > 1:
        est.bounds = [remainder_bound_2d(f, region, cut.n, cut.p, cut.n2, cut.p2)]
    return est


def memf_sum_rectangle(f, a, b, c, d, cut, *, with_bounds=True):
    """Cut of the sum over integer pairs in [a, b) x [c, d)."""
    if not (a < b and c < d):
        raise ValueError("need a < b and c < d")
    return memf_sum_region(f, GridRegion.rectangle(a, b, c, d).squares, cut, with_bounds=with_bounds)


# --------------------------------------------------------------------------
# Remainder bounds
# --------------------------------------------------------------------------

class _AbsIntegrals:
    """Integrals of |f_{mu,nu}| over unit cells and unit boundary edges."""

    def __init__(self, f):
        self.f = f
        self.sep = f.factors
        self._cache = {}

    def _one(self, g, order, lo):
        key = (id(g), order, lo)
        if key not in self._cache:
            self._cache[key] = _abs_integral(g, order, lo, lo + 1)[0]
        return self._cache[key]

    def cell(self, mu, nu, i, j):
        if self.sep:
            return self._one(self.sep[0], mu, i) * self._one(self.sep[1], nu, j)
        return _abs_square(lambda x, y: self.f.partial(mu, nu, x, y), i, j)

    def hedge(self, mu, nu, i, y0):
        """int_i^{i+1} |f_{mu,nu}(x, y0)| dx."""
        if self.sep:
            return self._one(self.sep[0], mu, i) * abs(float(self.sep[1].derivative(nu, y0)))
        return _abs_segment(lambda x: self.f.partial(mu, nu, x, np.full_like(x, y0)), i)

    def vedge(self, mu, nu, x0, j):
        if self.sep:
            return abs(float(self.sep[0].derivative(mu, x0))) * self._one(self.sep[1], nu, j)
        return _abs_segment(lambda y: self.f.partial(mu, nu, np.full_like(y, x0), y), j)


def _region_parts(region):
    if not isinstance(region, GridRegion):
        region = GridRegion(region)
    edges = region.boundary_edges()
    hor = sorted((min(x0, x1), y0) for (x0, y0), (x1, y1) in edges if y0 == y1)
    ver = sorted((x0, min(y0, y1)) for (x0, y0), (x1, y1) in edges if x0 == x1)
    return sorted(region.squares), hor, ver


def remainder_bound_2d(f, region, n, p, n2, p2):
    """Certified bound on the 2D remainder for orders (n, p) in x and (n2, p2) in y."""
    if n < 2 or n2 < 2:
        raise ValueError("2D remainder bound needs n, n' > 1")
    squares, hor, ver = _region_parts(region)
    I = _AbsIntegrals(f)
    Tn, Tn2 = kernels.tail(n, p), kernels.tail(n2, p2)

    def area(mu, nu):
        return math.fsum(I.cell(mu, nu, i, j) for i, j in squares)

    def hline(mu, nu):
        return math.fsum(I.hedge(mu, nu, i, y0) for i, y0 in hor)

    def vline(mu, nu):
        return math.fsum(I.vedge(mu, nu, x0, j) for x0, j in ver)

    terms = [
        Tn * ((2 * p2 + 1) * area(n, 0) + 0.5 * hline(n, 0)),
        Tn2 * ((2 * p + 1) * area(0, n2) + 0.5 * vline(0, n2)),
        Tn * math.fsum(kernels.tail(2 * r, p2) * hline(n, 2 * r - 1) for r in range(1, n2 // 2 + 1)),
        Tn2 * math.fsum(kernels.tail(2 * r, p) * vline(2 * r - 1, n2) for r in range(1, n // 2 + 1)),
        Tn * Tn2 * area(n, n2),
    ]
    return BoundReport("A", math.fsum(terms), ("integrals of |partials| over region and boundary",))


def remainder_bound_2d_symmetric(f, region, n, p):
    """Bound with equal orders in both directions, x and y terms merged."""
    if n < 2:
        raise ValueError("2D remainder bound needs n > 1")
    squares, hor, ver = _region_parts(region)
    I = _AbsIntegrals(f)
    Tn = kernels.tail(n, p)
    both_area = math.fsum(I.cell(n, 0, i, j) + I.cell(0, n, i, j) for i, j in squares)
    both_line = math.fsum(I.vedge(0, n, x0, j) for x0, j in ver) + math.fsum(I.hedge(n, 0, i, y0) for i, y0 in hor)
    mixed = math.fsum(
        kernels.tail(2 * r, p)
        * (
            math.fsum(I.hedge(n, 2 * r - 1, i, y0) for i, y0 in hor)
            + math.fsum(I.vedge(2 * r - 1, n, x0, j) for x0, j in ver)
        )
        for r in range(1, n // 2 + 1)
    )
    top = math.fsum(I.cell(n, n, i, j) for i, j in squares)
    value = Tn * ((2 * p + 1) * both_area + 0.5 * both_line) + Tn * mixed + Tn * Tn * top
    return BoundReport("A", value, ("integrals of |partials| over region and boundary", "n' = n, p' = p"))
