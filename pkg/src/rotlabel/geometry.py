"""Exact and certified conflict predicates for rotating map labels.

A label is a zero-width segment anchored at a feature point.  When the map
rotates, every label turns in lockstep about its own anchor so that it keeps
its on-screen orientation.  Two labels conflict when their segments touch at
some rotation phase.  Label pairs that share an orientation admit an exact
closed form; mixed orientations are decided by a certified branch-and-bound
over the rotation phase.

Conventions: segments and disks are closed sets, so touching counts as
intersecting and as containing.  Threshold comparisons are exact (no
epsilon) and use squared distances where possible; only the fixed-position
predicate is tolerance-based.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi

# Decision tolerance for the fixed-position conflict predicate, in the
# instance's coordinate units.
DEFAULT_FP_TOLERANCE = 1e-9

# Orientation differences below this (mod pi) dispatch to the exact
# parallel closed form instead of the numeric phase search.
_PARALLEL_EPS = 1e-12

# Evaluation budget for the certified phase search.  Exceeding it means the
# distance function is adversarially flat near its minimum.
_SEARCH_BUDGET = 1_000_000


class DegenerateLabelError(ValueError):
    """Zero-length label, or a label pair that degenerates to one point."""


@dataclass(frozen=True)
class Point:
    """A feature point on the map, in map units."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class SweepDisk:
    """The disk a rotating label sweeps: centred at the anchor, radius equal
    to the label's maximum reach."""

    centre: Point
    radius: float

    def __post_init__(self) -> None:
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError(f"sweep disk radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class RotatingSegment:
    """An anchored rotating label.

    ``anchor_offset`` is the distance from the segment's down endpoint to the
    anchor, so the segment reaches ``anchor_offset`` below and
    ``length - anchor_offset`` above the anchor along its orientation.
    ``orientation`` is the angle from vertical at rotation phase zero,
    normalised into [0, 2*pi) at construction.
    """

    anchor: Point
    length: float
    anchor_offset: float = 0.0
    orientation: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.length) and self.length > 0.0):
            raise DegenerateLabelError(f"label length must be positive, got {self.length}")
        if not (0.0 <= self.anchor_offset <= self.length):
            raise ValueError(
                f"anchor offset {self.anchor_offset} outside [0, {self.length}]"
            )
        if not math.isfinite(self.orientation):
            raise ValueError("orientation must be finite")
        object.__setattr__(self, "orientation", self.orientation % TWO_PI)

    @property
    def down_reach(self) -> float:
        return self.anchor_offset

    @property
    def up_reach(self) -> float:
        return self.length - self.anchor_offset

    @property
    def max_reach(self) -> float:
        return max(self.down_reach, self.up_reach)

    def sweep_disk(self) -> SweepDisk:
        return SweepDisk(self.anchor, self.max_reach)

    def endpoints(self, phase: float = 0.0) -> tuple[tuple[float, float], tuple[float, float]]:
        """Down and up endpoints of the placed segment at a rotation phase."""
        ux, uy = _direction(self.orientation + phase)
        ax, ay = self.anchor.x, self.anchor.y
        lo = (ax - self.down_reach * ux, ay - self.down_reach * uy)
        hi = (ax + self.up_reach * ux, ay + self.up_reach * uy)
        return lo, hi


def _direction(angle: float) -> tuple[float, float]:
    # "Up" unit vector rotated counterclockwise by `angle`.
    return (-math.sin(angle), math.cos(angle))


def _dist_sq(a: Point, b: Point) -> float:
    dx = a.x - b.x
    dy = a.y - b.y
    return dx * dx + dy * dy


def conflicts_vertical(
    anchor_a: Point,
    down_a: float,
    up_a: float,
    anchor_b: Point,
    down_b: float,
    up_b: float,
) -> bool:
    """Decide whether two lockstep-rotating parallel labels ever touch.

    The labels stay parallel at every phase, so they can only meet when their
    common direction lines up with the anchor-to-anchor axis; that happens
    twice per turn, once per sign.  Conflict holds iff

        |ab| <= max(up_a + down_b, up_b + down_a)

    with the closed convention (equality counts as a conflict).  Symmetric in
    its arguments.
    """
    if min(down_a, up_a, down_b, up_b) < 0.0:
        raise ValueError("label reaches must be non-negative")
    d_sq = _dist_sq(anchor_a, anchor_b)
    if d_sq == 0.0 and down_a + up_a == 0.0 and down_b + up_b == 0.0:
        raise DegenerateLabelError("coincident anchors with zero-length labels")
    threshold = max(up_a + down_b, up_b + down_a)
    return d_sq <= threshold * threshold


def centre_disjoint(a: SweepDisk, b: SweepDisk) -> bool:
    """True when neither closed disk contains the other's centre.

    For vertical bottom-anchored labels this is exactly the complement of
    ``conflicts_vertical`` on their sweep disks.
    """
    r = max(a.radius, b.radius)
    return _dist_sq(a.centre, b.centre) > r * r


# ---------------------------------------------------------------------------
# Segment-segment distance (closed segments)
# ---------------------------------------------------------------------------

def _cross(ox: float, oy: float, ax: float, ay: float, bx: float, by: float) -> float:
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def _on_bbox(px: float, py: float, ax: float, ay: float, bx: float, by: float) -> bool:
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def _segments_intersect(p1, p2, q1, q2) -> bool:
    d1 = _cross(q1[0], q1[1], q2[0], q2[1], p1[0], p1[1])
    d2 = _cross(q1[0], q1[1], q2[0], q2[1], p2[0], p2[1])
    d3 = _cross(p1[0], p1[1], p2[0], p2[1], q1[0], q1[1])
    d4 = _cross(p1[0], p1[1], p2[0], p2[1], q2[0], q2[1])
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        return True
    if d1 == 0 and _on_bbox(p1[0], p1[1], q1[0], q1[1], q2[0], q2[1]):
        return True
    if d2 == 0 and _on_bbox(p2[0], p2[1], q1[0], q1[1], q2[0], q2[1]):
        return True
    if d3 == 0 and _on_bbox(q1[0], q1[1], p1[0], p1[1], p2[0], p2[1]):
        return True
    if d4 == 0 and _on_bbox(q2[0], q2[1], p1[0], p1[1], p2[0], p2[1]):
        return True
    return False


def _point_segment_distance(px, py, ax, ay, bx, by) -> float:
    vx = bx - ax
    vy = by - ay
    norm_sq = vx * vx + vy * vy
    if norm_sq == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * vx + (py - ay) * vy) / norm_sq
    t = max(0.0, min(1.0, t))
    return math.hypot(px - (ax + t * vx), py - (ay + t * vy))


def segment_segment_distance(p1, p2, q1, q2) -> float:
    """Euclidean distance between two closed segments given by endpoints."""
    if _segments_intersect(p1, p2, q1, q2):
        return 0.0
    return min(
        _point_segment_distance(p1[0], p1[1], q1[0], q1[1], q2[0], q2[1]),
        _point_segment_distance(p2[0], p2[1], q1[0], q1[1], q2[0], q2[1]),
        _point_segment_distance(q1[0], q1[1], p1[0], p1[1], p2[0], p2[1]),
        _point_segment_distance(q2[0], q2[1], p1[0], p1[1], p2[0], p2[1]),
    )


# ---------------------------------------------------------------------------
# Certified minimum distance over a full rotation
# ---------------------------------------------------------------------------

def min_rotational_distance(a: RotatingSegment, b: RotatingSegment, resolution: float) -> float:
    """Minimum distance between two lockstep-rotating labels, certified to
    within ``resolution`` of the true minimum over a full turn.

    Works in the co-rotating frame of ``a``: its segment stays at the phase
    zero placement while ``b`` keeps a fixed direction and its anchor travels
    the circle of radius |ab| around ``a``'s anchor.  Moving the anchor is the
    only motion, so the distance is |ab|-Lipschitz in the phase, which gives
    certified lower bounds for branch-and-bound over the phase interval.
    """
    if not (resolution > 0.0):
        raise ValueError(f"resolution must be positive, got {resolution}")
    wx = b.anchor.x - a.anchor.x
    wy = b.anchor.y - a.anchor.y
    lip = math.hypot(wx, wy)
    if lip == 0.0:
        # Both segments contain the shared anchor point at every phase.
        return 0.0

    pa_lo, pa_hi = a.endpoints(0.0)
    ubx, uby = _direction(b.orientation)
    down_b = b.down_reach
    up_b = b.up_reach
    ax, ay = a.anchor.x, a.anchor.y

    def dist_at(theta: float) -> float:
        c = math.cos(theta)
        s = math.sin(theta)
        bx = ax + c * wx + s * wy
        by = ay - s * wx + c * wy
        q1 = (bx - down_b * ubx, by - down_b * uby)
        q2 = (bx + up_b * ubx, by + up_b * uby)
        return segment_segment_distance(pa_lo, pa_hi, q1, q2)

    evals = 0
    best = math.inf
    heap: list[tuple[float, float, float]] = []
    n0 = 64
    width = TWO_PI / n0
    for i in range(n0):
        lo = i * width
        mid = lo + width / 2.0
        f = dist_at(mid)
        evals += 1
        if f < best:
            best = f
        heapq.heappush(heap, (f - lip * width / 2.0, lo, lo + width))

    while heap:
        if best == 0.0:
            return 0.0
        bound, lo, hi = heapq.heappop(heap)
        if best - bound <= resolution:
            return best
        mid = (lo + hi) / 2.0
        for sub_lo, sub_hi in ((lo, mid), (mid, hi)):
            sub_mid = (sub_lo + sub_hi) / 2.0
            f = dist_at(sub_mid)
            evals += 1
            if f < best:
                best = f
            sub_bound = f - lip * (sub_hi - sub_lo) / 2.0
            if best - sub_bound > resolution:
                heapq.heappush(heap, (sub_bound, sub_lo, sub_hi))
        if evals > _SEARCH_BUDGET:
            raise RuntimeError("certified phase search exceeded its evaluation budget")
    return best


def conflicts_fp(
    a: RotatingSegment,
    b: RotatingSegment,
    tolerance: float = DEFAULT_FP_TOLERANCE,
) -> bool:
    """Decide whether two fixed-position labels ever touch during rotation.

    Fast paths: a sweep disk containing the other anchor always conflicts
    (the larger label passes over that anchor, which stays on the other
    segment); sweep disks separated by more than the tolerance never
    conflict; parallel orientations use the exact closed form.  The general
    case runs the certified phase search and reports a conflict when the
    minimum distance is within the tolerance.
    """
    if not (tolerance > 0.0):
        raise ValueError(f"tolerance must be positive, got {tolerance}")
    disk_a = a.sweep_disk()
    disk_b = b.sweep_disk()
    if not centre_disjoint(disk_a, disk_b):
        return True
    gap = (
        math.dist((a.anchor.x, a.anchor.y), (b.anchor.x, b.anchor.y))
        - disk_a.radius
        - disk_b.radius
    )
    if gap > tolerance:
        return False
    diff = (a.orientation - b.orientation) % math.pi
    if diff < _PARALLEL_EPS or math.pi - diff < _PARALLEL_EPS:
        half_turns = (a.orientation - b.orientation) % TWO_PI
        flipped = abs(half_turns - math.pi) < 1.0  # opposite direction
        if flipped:
            down_b, up_b = b.up_reach, b.down_reach
        else:
            down_b, up_b = b.down_reach, b.up_reach
        return conflicts_vertical(
            a.anchor, a.down_reach, a.up_reach, b.anchor, down_b, up_b
        )
    return min_rotational_distance(a, b, tolerance / 4.0) <= tolerance
