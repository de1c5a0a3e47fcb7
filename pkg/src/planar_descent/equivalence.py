"""Classification and exhaustive equivalence search for configurations.

The central operation enumerates every projective-linear map carrying one
configuration onto another.  A map is pinned down by where it sends a
projective frame, so with one general-position 4-subset of the source
fixed, every ordered general-position 4-tuple of the target is a
candidate, and each candidate is accepted or rejected by testing the
remaining points.  The search is exact and complete.

Degenerate configurations (all points on a line, or all but one) have
infinite planar automorphism groups; they are reduced to the projective
line, where triples of distinct points play the role of frames.

The inner enumeration runs on cleared-denominator Gaussian-integer
coordinates: candidate tuples are filtered and tested with pure integer
arithmetic, and only surviving maps are rebuilt over Q(i).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Optional

from .errors import InternalError, InvalidInputError
from .gaussian import GaussianRational, format_gq, gq
from .plane import (
    Line,
    PointConfig,
    ProjPoint,
    SemiProjMap,
    collinear,
    line_through,
)

MAX_POINTS = 20


class NeedsReductionError(InvalidInputError):
    """The operation needs a general-position 4-subset; route through reduce_to_line."""


class WrongClassError(InvalidInputError):
    """The configuration is not in the class this operation expects."""


class TooSmallError(InvalidInputError):
    """Fewer than three points on the line: the automorphism group is infinite."""


class TooManyPointsError(InvalidInputError):
    """Enumeration is guarded; exactness is kept by rejecting large inputs."""


class UndecidedDegenerateError(InvalidInputError):
    """Degenerate shape whose reduced problem still has infinitely many symmetries."""


class ConfigTag(Enum):
    HAS_FRAME = "HasFrame"
    LINE_PLUS_POINT = "LinePlusPoint"
    COLLINEAR = "Collinear"
    TINY = "Tiny"


@dataclass(frozen=True)
class ConfigClass:
    """Classification verdict plus its witness."""

    tag: ConfigTag
    frame: Optional[tuple] = None
    line: Optional[Line] = None
    residue: Optional[ProjPoint] = None


def _general_position(quad):
    a, b, c, d = quad
    return not (
        collinear(a, b, c)
        or collinear(a, b, d)
        or collinear(a, c, d)
        or collinear(b, c, d)
    )


def classify(config: PointConfig, max_points: int = MAX_POINTS) -> ConfigClass:
    """Sort a configuration into one of four mutually exclusive classes.

    Tiny: n <= 3.  HasFrame: some 4-subset in general position (the
    witness is the lexicographically least one).  Otherwise, with n >= 4,
    the points lie on a line (Collinear) or on a line plus one point off
    it (LinePlusPoint); no further case exists.
    """
    n = len(config)
    if n > max_points:
        raise TooManyPointsError(
            f"{n} points exceed the enumeration guard of {max_points}"
        )
    if n <= 3:
        return ConfigClass(ConfigTag.TINY)
    pts = config.points
    for quad in itertools.combinations(pts, 4):
        if _general_position(quad):
            return ConfigClass(ConfigTag.HAS_FRAME, frame=quad)
    spanning = line_through(pts[0], pts[1])
    if all(spanning.contains(p) for p in pts[2:]):
        return ConfigClass(ConfigTag.COLLINEAR, line=spanning)
    for residue in pts:
        rest = [p for p in pts if p != residue]
        line = line_through(rest[0], rest[1])
        if all(line.contains(p) for p in rest[2:]) and not line.contains(residue):
            return ConfigClass(ConfigTag.LINE_PLUS_POINT, line=line, residue=residue)
    raise InternalError("frameless configuration is neither collinear nor line-plus-point")


# --- integer fast path ---------------------------------------------------------
#
# A Gaussian integer is a pair of Python ints (re, im); a point is a
# 6-tuple (ar, ai, br, bi, cr, ci).  No normalization happens inside the
# loop: proportionality is tested through vanishing 2x2 minors.


def _int_triple(point: ProjPoint):
    denominators = []
    for c in point.coords:
        denominators.append(c.re.denominator)
        denominators.append(c.im.denominator)
    m = lcm(*denominators)
    out = []
    for c in point.coords:
        out.append(int(c.re * m))
        out.append(int(c.im * m))
    return tuple(out)


def _zdet3(p, q, r):
    ar, ai, br, bi, cr, ci = p
    dr, di, er, ei, fr, fi = q
    gr, gi, hr, hi, ir, ii = r
    # cofactors along the first row
    m0r = (er * ir - ei * ii) - (fr * hr - fi * hi)
    m0i = (er * ii + ei * ir) - (fr * hi + fi * hr)
    m1r = (dr * ir - di * ii) - (fr * gr - fi * gi)
    m1i = (dr * ii + di * ir) - (fr * gi + fi * gr)
    m2r = (dr * hr - di * hi) - (er * gr - ei * gi)
    m2i = (dr * hi + di * hr) - (er * gi + ei * gr)
    re = (ar * m0r - ai * m0i) - (br * m1r - bi * m1i) + (cr * m2r - ci * m2i)
    im = (ar * m0i + ai * m0r) - (br * m1i + bi * m1r) + (cr * m2i + ci * m2r)
    return re, im


def _zmatvec(m, v):
    ar, ai, br, bi, cr, ci = v
    out = []
    for r0, i0, r1, i1, r2, i2 in m:
        re = (r0 * ar - i0 * ai) + (r1 * br - i1 * bi) + (r2 * cr - i2 * ci)
        im = (r0 * ai + i0 * ar) + (r1 * bi + i1 * br) + (r2 * ci + i2 * cr)
        out.append(re)
        out.append(im)
    return tuple(out)


def _zproportional(u, v):
    ur0, ui0, ur1, ui1, ur2, ui2 = u
    vr0, vi0, vr1, vi1, vr2, vi2 = v
    if (ur0 * vr1 - ui0 * vi1) - (ur1 * vr0 - ui1 * vi0) or (
        ur0 * vi1 + ui0 * vr1
    ) - (ur1 * vi0 + ui1 * vr0):
        return False
    if (ur0 * vr2 - ui0 * vi2) - (ur2 * vr0 - ui2 * vi0) or (
        ur0 * vi2 + ui0 * vr2
    ) - (ur2 * vi0 + ui2 * vr0):
        return False
    if (ur1 * vr2 - ui1 * vi2) - (ur2 * vr1 - ui2 * vi1) or (
        ur1 * vi2 + ui1 * vr2
    ) - (ur2 * vi1 + ui2 * vr1):
        return False
    return True


def _zframe_matrix(v1, v2, v3, v4):
    """Columns d_k * v_k, the frame matrix scaled to stay integral."""
    d1 = _zdet3(v4, v2, v3)
    d2 = _zdet3(v1, v4, v3)
    d3 = _zdet3(v1, v2, v4)
    rows = []
    for k in range(3):
        r1, i1 = v1[2 * k], v1[2 * k + 1]
        r2, i2 = v2[2 * k], v2[2 * k + 1]
        r3, i3 = v3[2 * k], v3[2 * k + 1]
        rows.append(
            (
                d1[0] * r1 - d1[1] * i1,
                d1[0] * i1 + d1[1] * r1,
                d2[0] * r2 - d2[1] * i2,
                d2[0] * i2 + d2[1] * r2,
                d3[0] * r3 - d3[1] * i3,
                d3[0] * i3 + d3[1] * r3,
            )
        )
    return tuple(rows)


def _zadjugate(m):
    def cof(r0, r1, c0, c1):
        ar, ai = m[r0][2 * c0], m[r0][2 * c0 + 1]
        br, bi = m[r0][2 * c1], m[r0][2 * c1 + 1]
        cr, ci = m[r1][2 * c0], m[r1][2 * c0 + 1]
        dr, di = m[r1][2 * c1], m[r1][2 * c1 + 1]
        return (
            (ar * dr - ai * di) - (br * cr - bi * ci),
            (ar * di + ai * dr) - (br * ci + bi * cr),
        )

    c = [[cof(1, 2, 1, 2), cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
         [cof(1, 2, 0, 2), cof(0, 2, 0, 2), cof(0, 1, 0, 2)],
         [cof(1, 2, 0, 1), cof(0, 2, 0, 1), cof(0, 1, 0, 1)]]
    rows = []
    for r in range(3):
        row = []
        for k in range(3):
            re, im = c[r][k]
            if (r + k) % 2:
                re, im = -re, -im
            row.append(re)
            row.append(im)
        rows.append(tuple(row))
    return tuple(rows)


def _zmatmul(a, b):
    rows = []
    for r in range(3):
        ar = a[r]
        row = []
        for c in range(3):
            re = 0
            im = 0
            for k in range(3):
                xr, xi = ar[2 * k], ar[2 * k + 1]
                yr, yi = b[k][2 * c], b[k][2 * c + 1]
                re += xr * yr - xi * yi
                im += xr * yi + xi * yr
            row.append(re)
            row.append(im)
        rows.append(tuple(row))
    return tuple(rows)


def _map_from_int_matrix(m, antiholo=False):
    rows = tuple(
        tuple(
            GaussianRational(Fraction(row[2 * c]), Fraction(row[2 * c + 1]))
            for c in range(3)
        )
        for row in m
    )
    return SemiProjMap(rows, antiholo)


# --- equivalences and automorphisms --------------------------------------------


def equivalences(source: PointConfig, target: PointConfig,
                 max_points: int = MAX_POINTS):
    """Every g in PGL3 with g(source) = target, sorted canonically.

    Requires a general-position 4-subset in the source (NeedsReductionError
    otherwise).  The list is complete: any such g sends the witness frame
    to an ordered general-position 4-tuple of the target, all of which are
    tried.  Different sizes yield the empty list.
    """
    cls = classify(source, max_points)
    if cls.tag is not ConfigTag.HAS_FRAME:
        raise NeedsReductionError(
            f"{cls.tag.value} configuration: no frame to anchor the search"
        )
    if len(target) > max_points:
        raise TooManyPointsError(
            f"{len(target)} points exceed the enumeration guard of {max_points}"
        )
    if len(source) != len(target):
        return []

    frame = cls.frame
    frame_adj = _zadjugate(
        _zframe_matrix(*(_int_triple(p) for p in frame))
    )
    frame_set = set(frame)
    probes = [_int_triple(p) for p in source if p not in frame_set]
    target_ints = [_int_triple(p) for p in target.points]
    nt = len(target_ints)

    found = []
    for combo in itertools.combinations(range(nt), 4):
        quad = [target_ints[i] for i in combo]
        a, b, c, d = quad
        if _zdet3(a, b, c) == (0, 0) or _zdet3(a, b, d) == (0, 0) \
                or _zdet3(a, c, d) == (0, 0) or _zdet3(b, c, d) == (0, 0):
            continue
        for perm in itertools.permutations(quad):
            g = _zmatmul(_zframe_matrix(*perm), frame_adj)
            ok = True
            for s in probes:
                image = _zmatvec(g, s)
                if not any(_zproportional(image, t) for t in target_ints):
                    ok = False
                    break
            if ok:
                found.append(g)

    maps = sorted((_map_from_int_matrix(g) for g in found), key=SemiProjMap.key)
    if len({m.key() for m in maps}) != len(maps):
        raise InternalError("duplicate maps in equivalence enumeration")
    return maps


def aut_group(config: PointConfig, max_points: int = MAX_POINTS):
    """The automorphism group of the configuration, verified to be a group."""
    elements = equivalences(config, config, max_points)
    table = {g.key() for g in elements}
    if SemiProjMap.identity().key() not in table:
        raise InternalError("automorphism enumeration lost the identity")
    for g in elements:
        if g.inverse().key() not in table:
            raise InternalError("automorphism set not closed under inverse")
        for h in elements:
            if (g * h).key() not in table:
                raise InternalError("automorphism set not closed under composition")
    return elements


# --- the projective line --------------------------------------------------------


def _canonical_pair(coords):
    lead = next((c for c in coords if c), None)
    if lead is None:
        raise InvalidInputError("projective coordinates must not all be zero")
    inv = lead.inverse()
    return tuple(c * inv for c in coords)


class P1Point:
    """A point of the projective line, leftmost nonzero coordinate scaled to 1."""

    __slots__ = ("coords",)

    def __init__(self, s, t):
        self.coords = _canonical_pair((gq(s), gq(t)))

    def conj(self):
        return P1Point(*(c.conj() for c in self.coords))

    def key(self):
        return tuple(format_gq(c) for c in self.coords)

    def __eq__(self, other):
        if not isinstance(other, P1Point):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(("p1", self.coords))

    def __lt__(self, other):
        return self.key() < other.key()

    def __repr__(self):
        return f"P1Point{self.coords!r}"

    def __str__(self):
        return "(" + ":".join(format_gq(c) for c in self.coords) + ")"


class P1Config:
    """A finite set of distinct points on the projective line."""

    __slots__ = ("points",)

    def __init__(self, points):
        pts = sorted(points, key=P1Point.key)
        if not pts:
            raise InvalidInputError("a configuration needs at least one point")
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise InvalidInputError(f"duplicate point {a}")
        self.points = tuple(pts)

    def conj(self):
        return P1Config(p.conj() for p in self.points)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __contains__(self, p):
        return p in self.points

    def __eq__(self, other):
        if not isinstance(other, P1Config):
            return NotImplemented
        return self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return "P1Config([" + ", ".join(str(p) for p in self.points) + "])"


def _det2(p, q):
    return p.coords[0] * q.coords[1] - p.coords[1] * q.coords[0]


class P1Map:
    """An invertible map of the projective line, optionally semilinear."""

    __slots__ = ("matrix", "antiholo")

    def __init__(self, matrix, antiholo=False):
        rows = tuple(tuple(gq(x) for x in row) for row in matrix)
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise InvalidInputError("matrix must be 2x2")
        lead = next((x for row in rows for x in row if x), None)
        if lead is None:
            raise InvalidInputError("zero matrix is not a projective map")
        inv = lead.inverse()
        rows = tuple(tuple(x * inv for x in row) for row in rows)
        if not (rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]):
            raise InvalidInputError("matrix is singular")
        self.matrix = rows
        self.antiholo = bool(antiholo)

    @classmethod
    def identity(cls):
        return cls(((1, 0), (0, 1)))

    def is_identity(self):
        return not self.antiholo and self.matrix == P1Map.identity().matrix

    def raw_square(self):
        """The matrix of self . self before canonical rescaling, as rows."""
        rhs = tuple(tuple(x.conj() for x in row) for row in self.matrix) \
            if self.antiholo else self.matrix
        m = self.matrix
        return tuple(
            tuple(m[r][0] * rhs[0][c] + m[r][1] * rhs[1][c] for c in range(2))
            for r in range(2)
        )

    def apply(self, obj):
        if isinstance(obj, P1Config):
            return P1Config(self.apply(p) for p in obj)
        s, t = obj.coords
        if self.antiholo:
            s, t = s.conj(), t.conj()
        m = self.matrix
        return P1Point(m[0][0] * s + m[0][1] * t, m[1][0] * s + m[1][1] * t)

    def compose(self, other):
        rhs = tuple(tuple(x.conj() for x in row) for row in other.matrix) \
            if self.antiholo else other.matrix
        m = self.matrix
        prod = tuple(
            tuple(m[r][0] * rhs[0][c] + m[r][1] * rhs[1][c] for c in range(2))
            for r in range(2)
        )
        return P1Map(prod, self.antiholo ^ other.antiholo)

    def __mul__(self, other):
        if not isinstance(other, P1Map):
            return NotImplemented
        return self.compose(other)

    def inverse(self):
        m = self.matrix
        adj = ((m[1][1], -m[0][1]), (-m[1][0], m[0][0]))
        if self.antiholo:
            adj = tuple(tuple(x.conj() for x in row) for row in adj)
        return P1Map(adj, self.antiholo)

    def key(self):
        # identity sorts first within each flag class
        return (self.antiholo, not self.is_identity()) + tuple(
            format_gq(x) for row in self.matrix for x in row
        )

    def __eq__(self, other):
        if not isinstance(other, P1Map):
            return NotImplemented
        return self.antiholo == other.antiholo and self.matrix == other.matrix

    def __hash__(self):
        return hash(("p1map", self.antiholo, self.matrix))

    def __lt__(self, other):
        return self.key() < other.key()

    def __repr__(self):
        kind = "antiholo" if self.antiholo else "holo"
        rows = "; ".join(" ".join(format_gq(x) for x in row) for row in self.matrix)
        return f"P1Map<{kind}: {rows}>"


def cross_ratio(z1: P1Point, z2: P1Point, z3: P1Point, z4: P1Point) -> GaussianRational:
    """cr(z1, z2, z3, z4) = ((z1-z3)(z2-z4)) / ((z1-z4)(z2-z3)), homogeneously."""
    num = _det2(z1, z3) * _det2(z2, z4)
    den = _det2(z1, z4) * _det2(z2, z3)
    if not den:
        raise InvalidInputError("cross-ratio undefined: repeated point")
    return num / den


def _triple_frame_matrix(q0, q1, q2):
    """2x2 matrix sending (1:0), (0:1), (1:1) to the given distinct triple."""
    d0 = _det2(q2, q1)
    d1 = _det2(q0, q2)
    return (
        (d0 * q0.coords[0], d1 * q1.coords[0]),
        (d0 * q0.coords[1], d1 * q1.coords[1]),
    )


def pgl2_equivalences(source: P1Config, target: P1Config,
                      max_points: int = MAX_POINTS):
    """Every holomorphic map of the line with g(source) = target, sorted.

    Any ordered triple of distinct points is a frame on the line, so the
    first three source points are fixed and all ordered target triples
    are tried.  Fewer than three points leaves infinitely many maps
    (TooSmallError).
    """
    if len(source) < 3 or len(target) < 3:
        raise TooSmallError(
            "configurations on the line need at least three points"
        )
    if len(source) > max_points or len(target) > max_points:
        raise TooManyPointsError(
            f"enumeration guard of {max_points} points exceeded"
        )
    if len(source) != len(target):
        return []
    base = source.points[:3]
    mb = _triple_frame_matrix(*base)
    base_inv = ((mb[1][1], -mb[0][1]), (-mb[1][0], mb[0][0]))
    source_rest = [p for p in source.points if p not in set(base)]
    target_set = set(target.points)

    found = []
    for triple in itertools.permutations(target.points, 3):
        mt = _triple_frame_matrix(*triple)
        prod = tuple(
            tuple(
                mt[r][0] * base_inv[0][c] + mt[r][1] * base_inv[1][c]
                for c in range(2)
            )
            for r in range(2)
        )
        g = P1Map(prod)
        if all(g.apply(p) in target_set for p in source_rest):
            found.append(g)
    found.sort(key=P1Map.key)
    if len({g.key() for g in found}) != len(found):
        raise InternalError("duplicate maps in line enumeration")
    return found


# --- reduction to the line -------------------------------------------------------


@dataclass(frozen=True)
class LineReduction:
    """A degenerate configuration re-read on its spanning line.

    `basis` holds two vectors spanning the line (the reduced row echelon
    basis of the dual's kernel), `off` a third vector completing them to
    a basis of the plane: the residue point if there is one, else the
    unit vector off the line.  `config` collects the on-line points in
    the chart  s*basis[0] + t*basis[1]  ->  (s:t).
    """

    config: P1Config
    basis: tuple
    off: tuple
    line: Line
    residue: Optional[ProjPoint]

    def to_plane(self, p: P1Point) -> ProjPoint:
        s, t = p.coords
        b0, b1 = self.basis
        return ProjPoint(*(s * b0[k] + t * b1[k] for k in range(3)))

    def chart_matrix(self):
        """Columns basis[0], basis[1], off: standard coordinates -> plane."""
        b0, b1 = self.basis
        w = self.off
        return tuple((b0[k], b1[k], w[k]) for k in range(3))

    def conj(self) -> "LineReduction":
        return LineReduction(
            config=self.config.conj(),
            basis=tuple(tuple(x.conj() for x in b) for b in self.basis),
            off=tuple(x.conj() for x in self.off),
            line=self.line.conj(),
            residue=self.residue.conj() if self.residue else None,
        )


def reduce_to_line(config: PointConfig, max_points: int = MAX_POINTS) -> LineReduction:
    """Rewrite a Collinear or LinePlusPoint configuration on the line itself."""
    cls = classify(config, max_points)
    if cls.tag is ConfigTag.COLLINEAR:
        line, residue = cls.line, None
    elif cls.tag is ConfigTag.LINE_PLUS_POINT:
        line, residue = cls.line, cls.residue
    else:
        raise WrongClassError(
            f"reduce_to_line expects Collinear or LinePlusPoint, got {cls.tag.value}"
        )
    d = line.dual
    pivot = next(k for k in range(3) if d[k])
    free = [k for k in range(3) if k != pivot]
    zero, one = GaussianRational(0), GaussianRational(1)

    def basis_vector(f):
        v = [zero, zero, zero]
        v[f] = one
        v[pivot] = -d[f] / d[pivot]
        return tuple(v)

    b0, b1 = basis_vector(free[0]), basis_vector(free[1])
    on_line = [p for p in config if residue is None or p != residue]
    p1pts = [P1Point(p.coords[free[0]], p.coords[free[1]]) for p in on_line]
    if residue is not None:
        off = residue.coords
    else:
        off = tuple(one if k == pivot else zero for k in range(3))
    return LineReduction(
        config=P1Config(p1pts),
        basis=(b0, b1),
        off=off,
        line=line,
        residue=residue,
    )
