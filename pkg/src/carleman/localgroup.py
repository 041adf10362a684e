"""Local Lie group on the covering of the punctured plane.

Points of the plane act on each other by translation; removing the point
sigma = (-1, 0) and passing to the universal cover turns this into a local
group whose elements carry, besides their base point, the accumulated
continuous argument of (z - sigma) along the path that produced them. The
integer sheet index is that winding measured against the straight reference
path from the identity.

Product convention: the product of xbar and ybar lifts the RIGHT factor's
canonical straight path, translated to start at the base of xbar. The right
factor must itself be straight-representable (its stored angle must agree
with its straight lift); lifting arbitrary path histories is excluded from
the domain because translation moves the puncture and changes homotopy
classes. That restriction is exactly the locality of the local group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    ReferencePathError,
    SingularPath,
    UndefinedInverse,
    UndefinedProduct,
)

SINGULAR_POINT = (-1.0, 0.0)
CLEARANCE = 1e-9
ANGLE_TOL = 1e-6 * 2 * math.pi
MAX_STEP = math.pi / 4
_MAX_DEPTH = 60


@dataclass(frozen=True)
class CoveredPoint:
    """Point of the punctured plane plus accumulated argument around sigma."""

    z: tuple
    theta: float

    def __post_init__(self):
        if _dist_point(self.z, SINGULAR_POINT) <= CLEARANCE:
            raise ValueError("point coincides with the puncture")
        straight = math.atan2(self.z[1] - SINGULAR_POINT[1], self.z[0] - SINGULAR_POINT[0])
        residue = (self.theta - straight) % (2 * math.pi)
        if min(residue, 2 * math.pi - residue) > ANGLE_TOL:
            raise ValueError("stored angle is inconsistent with the base point")


def identity_element() -> CoveredPoint:
    return CoveredPoint((0.0, 0.0), 0.0)


def _dist_point(p, q) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def _segment_clearance(p, q) -> float:
    """Distance from the puncture to the segment [p, q]."""
    sx, sy = SINGULAR_POINT
    dx, dy = q[0] - p[0], q[1] - p[1]
    norm_sq = dx * dx + dy * dy
    if norm_sq == 0.0:
        return _dist_point(p, SINGULAR_POINT)
    t = ((sx - p[0]) * dx + (sy - p[1]) * dy) / norm_sq
    t = max(0.0, min(1.0, t))
    return _dist_point((p[0] + t * dx, p[1] + t * dy), SINGULAR_POINT)


def _turn(p, q) -> float:
    """Signed angle from (p - sigma) to (q - sigma), in (-pi, pi]."""
    ax, ay = p[0] - SINGULAR_POINT[0], p[1] - SINGULAR_POINT[1]
    bx, by = q[0] - SINGULAR_POINT[0], q[1] - SINGULAR_POINT[1]
    return math.atan2(ax * by - ay * bx, ax * bx + ay * by)


def _segment_angle(p, q, depth: int = 0) -> float:
    """Continuous argument change along [p, q], bisecting to steps <= pi/4."""
    step = _turn(p, q)
    if abs(step) <= MAX_STEP:
        return step
    if depth >= _MAX_DEPTH:
        raise SingularPath("angle subdivision failed to converge")
    mid = ((p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0)
    return _segment_angle(p, mid, depth + 1) + _segment_angle(mid, q, depth + 1)


def lift_segment(start: CoveredPoint, target) -> CoveredPoint:
    """Continue the stored angle along the straight segment to the target."""
    target = (float(target[0]), float(target[1]))
    if target == start.z:
        return start
    if _segment_clearance(start.z, target) <= CLEARANCE:
        raise SingularPath(
            f"segment from {start.z} to {target} passes through the puncture"
        )
    return CoveredPoint(target, start.theta + _segment_angle(start.z, target))


def _straight_lift(target) -> CoveredPoint:
    try:
        return lift_segment(identity_element(), target)
    except SingularPath as exc:
        raise ReferencePathError(str(exc)) from exc


def is_straight_representable(p: CoveredPoint) -> bool:
    """True when the stored angle agrees with the straight lift from the identity."""
    try:
        ref = _straight_lift(p.z)
    except ReferencePathError:
        return False
    return abs(ref.theta - p.theta) <= ANGLE_TOL


def local_product(x: CoveredPoint, y: CoveredPoint) -> CoveredPoint:
    """Lift, starting at x, of the straight segment from base(x) to base(x) + base(y).

    Defined only when y is straight-representable and the translated segment
    clears the puncture; normalized so the identity laws hold on the nose.
    """
    if not is_straight_representable(y):
        raise UndefinedProduct(
            "right factor is not straight-representable; product undefined here"
        )
    endpoint = (x.z[0] + y.z[0], x.z[1] + y.z[1])
    try:
        return lift_segment(x, endpoint)
    except SingularPath as exc:
        raise UndefinedProduct(str(exc)) from exc


def local_inverse(x: CoveredPoint) -> CoveredPoint:
    """The element y with local_product(y, x) = identity, when defined."""
    if not is_straight_representable(x):
        raise UndefinedInverse("element is not straight-representable")
    neg = (-x.z[0], -x.z[1])
    try:
        y = lift_segment(identity_element(), neg)
    except SingularPath as exc:
        raise UndefinedInverse(str(exc)) from exc
    try:
        round_trip = local_product(y, x)
    except UndefinedProduct as exc:
        raise UndefinedInverse(str(exc)) from exc
    if _dist_point(round_trip.z, (0.0, 0.0)) > 1e-9 or abs(round_trip.theta) > 1e-9:
        raise UndefinedInverse("round trip failed to return to the identity")
    return y


def sheet_index(x: CoveredPoint) -> int:
    """Winding count of x against its straight reference path."""
    ref = _straight_lift(x.z)
    k = (x.theta - ref.theta) / (2 * math.pi)
    nearest = round(k)
    if abs(k - nearest) * 2 * math.pi > 4 * ANGLE_TOL:
        raise ValueError("stored angle is not an integer number of sheets away")
    return int(nearest)


@dataclass(frozen=True)
class AssociativityReport:
    """Both bracketings of the triangle product and their sheet indices."""

    a: tuple
    b: tuple
    c: tuple
    left: CoveredPoint
    right: CoveredPoint
    sheet_left: int
    sheet_right: int
    triangle_winding: int

    @property
    def broken(self) -> bool:
        return self.sheet_left != self.sheet_right

    def to_json(self) -> dict:
        return {
            "a": list(self.a),
            "b": list(self.b),
            "c": list(self.c),
            "left_base": list(self.left.z),
            "right_base": list(self.right.z),
            "left_theta_over_pi": self.left.theta / math.pi,
            "right_theta_over_pi": self.right.theta / math.pi,
            "sheet_left": self.sheet_left,
            "sheet_right": self.sheet_right,
            "triangle_winding": self.triangle_winding,
            "broken": self.broken,
        }


def associativity_demo() -> AssociativityReport:
    """Translate around the triangle (-2,1), (0,-2), (2,1) both ways.

    The closed triangle encircles the puncture once, so the two bracketings
    end at the same base point (the origin) but on different sheets.
    """
    a, b, c = (-2.0, 1.0), (0.0, -2.0), (2.0, 1.0)
    abar = _straight_lift(a)
    bbar = _straight_lift(b)
    cbar = _straight_lift(c)
    left = local_product(local_product(abar, bbar), cbar)
    right = local_product(abar, local_product(bbar, cbar))
    e = identity_element()
    walk = lift_segment(e, a)
    walk = lift_segment(walk, (a[0] + b[0], a[1] + b[1]))
    walk = lift_segment(walk, (0.0, 0.0))
    winding = round(walk.theta / (2 * math.pi))
    return AssociativityReport(
        a, b, c, left, right, sheet_index(left), sheet_index(right), int(winding)
    )
