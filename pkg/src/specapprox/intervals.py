"""Canonical arithmetic on compact subsets of the real line.

A compact set is stored either as an :class:`IntervalSet` (sorted union of
disjoint closed intervals) or as a :class:`PointSet` (sorted finite set of
reals).  Canonical form makes set predicates cheap and reproducible:
Lebesgue measure is a sum of component lengths, and Hausdorff distance
reduces to evaluating a piecewise-linear distance function at finitely many
candidate points, so no grid discretization enters the exact paths.

Endpoint comparisons accept an absolute tolerance (default ``1e-12``) so
that eigenvalue-level noise from downstream pipelines does not flip merge
or containment decisions.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

DEFAULT_TOL = 1e-12


class EmptySetError(ValueError):
    """An operation produced or received an empty set."""


class InvalidRadiusError(ValueError):
    """Fattening radius was negative."""


@dataclass(frozen=True, order=True)
class Interval:
    """Closed interval [lo, hi]; degenerate (lo == hi) allowed."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError(f"interval endpoints must be finite, got [{self.lo}, {self.hi}]")
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class IntervalSet:
    """Canonical finite union of closed intervals.

    Components are sorted and separated by strictly positive gaps.  Build
    instances through :func:`normalize` unless the input is already known
    to be canonical.
    """

    intervals: tuple[Interval, ...]

    def __post_init__(self):
        if not self.intervals:
            raise EmptySetError("interval set must contain at least one component")
        for a, b in zip(self.intervals, self.intervals[1:]):
            if b.lo <= a.hi:
                raise ValueError(f"components not separated: [{a.lo}, {a.hi}] then [{b.lo}, {b.hi}]")

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    @property
    def lo(self) -> float:
        return self.intervals[0].lo

    @property
    def hi(self) -> float:
        return self.intervals[-1].hi


@dataclass(frozen=True)
class PointSet:
    """Finite set of reals, stored strictly increasing."""

    points: tuple[float, ...]

    def __post_init__(self):
        if not self.points:
            raise EmptySetError("point set must contain at least one point")
        for x in self.points:
            if not math.isfinite(x):
                raise ValueError(f"point must be finite, got {x}")
        for a, b in zip(self.points, self.points[1:]):
            if b <= a:
                raise ValueError("points must be strictly increasing")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


CompactSet = IntervalSet | PointSet


def point_set(values, tol: float = 0.0) -> PointSet:
    """Sort values and drop duplicates closer than tol, then build a PointSet."""
    vals = sorted(float(v) for v in values)
    if not vals:
        raise EmptySetError("point set must contain at least one point")
    kept = [vals[0]]
    for v in vals[1:]:
        if v - kept[-1] > tol:
            kept.append(v)
    return PointSet(tuple(kept))


def _as_interval(item) -> Interval:
    if isinstance(item, Interval):
        return item
    lo, hi = item
    return Interval(float(lo), float(hi))


def normalize(raw, tol: float = DEFAULT_TOL) -> IntervalSet:
    """Canonicalize an iterable of intervals (or (lo, hi) pairs).

    Sorts by left endpoint and merges components that overlap, touch, or
    leave a gap of at most ``tol``.  Raises :class:`EmptySetError` on empty
    input.
    """
    items = sorted((_as_interval(it) for it in raw))
    if not items:
        raise EmptySetError("cannot normalize an empty collection of intervals")
    merged = [items[0]]
    for iv in items[1:]:
        last = merged[-1]
        if iv.lo <= last.hi + tol:
            if iv.hi > last.hi:
                merged[-1] = Interval(last.lo, iv.hi)
        else:
            merged.append(iv)
    return IntervalSet(tuple(merged))


def as_intervals(a: CompactSet, tol: float = DEFAULT_TOL) -> IntervalSet:
    """View a compact set as an IntervalSet (points become degenerate intervals)."""
    if isinstance(a, IntervalSet):
        return a
    return normalize(((x, x) for x in a.points), tol)


def fatten(a: CompactSet, delta: float, tol: float = DEFAULT_TOL) -> IntervalSet:
    """Closed delta-neighborhood: union of [x - delta, x + delta] over x in a.

    delta = 0 is the identity on interval sets and turns a point set into
    degenerate intervals.  Negative delta raises :class:`InvalidRadiusError`.
    """
    if delta < 0:
        raise InvalidRadiusError(f"fattening radius must be nonnegative, got {delta}")
    if isinstance(a, PointSet):
        raw = ((x - delta, x + delta) for x in a.points)
    else:
        raw = ((iv.lo - delta, iv.hi + delta) for iv in a.intervals)
    return normalize(raw, tol)


def lebesgue(a: CompactSet) -> float:
    """Total length of the components (zero for point sets)."""
    if isinstance(a, PointSet):
        return 0.0
    return float(sum(iv.length for iv in a.intervals))


def components(a: CompactSet) -> tuple[int, float]:
    """(component count, largest component diameter)."""
    if isinstance(a, PointSet):
        return len(a.points), 0.0
    return len(a.intervals), max(iv.length for iv in a.intervals)


def distance_to_set(b: CompactSet, x: float) -> float:
    """Distance from the point x to the set b (zero when x lies in b)."""
    if isinstance(b, PointSet):
        pts = b.points
        i = bisect_left(pts, x)
        best = math.inf
        if i < len(pts):
            best = pts[i] - x
        if i > 0:
            best = min(best, x - pts[i - 1])
        return best
    ivs = b.intervals
    los = [iv.lo for iv in ivs]
    i = bisect_right(los, x) - 1
    if i >= 0 and x <= ivs[i].hi:
        return 0.0
    best = math.inf
    if i >= 0:
        best = x - ivs[i].hi
    if i + 1 < len(ivs):
        best = min(best, ivs[i + 1].lo - x)
    return best


def _gap_midpoints(b: CompactSet):
    if isinstance(b, PointSet):
        seq = b.points
        return [(a + c) / 2.0 for a, c in zip(seq, seq[1:])]
    ivs = b.intervals
    return [(a.hi + c.lo) / 2.0 for a, c in zip(ivs, ivs[1:])]


def directed_distance(a: CompactSet, b: CompactSet) -> float:
    """sup over points of a of the distance to b.

    The distance-to-b function is piecewise linear with slope +-1, with
    local maxima only at midpoints of b's gaps, so the supremum over a is
    attained at a component endpoint of a or at a gap midpoint of b lying
    inside a.  Evaluating those finitely many candidates is exact.
    """
    if isinstance(a, PointSet):
        cands = list(a.points)
    else:
        cands = [e for iv in a.intervals for e in (iv.lo, iv.hi)]
        for m in _gap_midpoints(b):
            if distance_to_set(a, m) == 0.0:
                cands.append(m)
    return max(distance_to_set(b, x) for x in cands)


def hausdorff_distance(a: CompactSet, b: CompactSet) -> float:
    """max of the two directed distances; a metric on nonempty compact sets."""
    return max(directed_distance(a, b), directed_distance(b, a))


def contains_set(outer: CompactSet, inner: CompactSet, tol: float = DEFAULT_TOL) -> bool:
    """Whether inner lies in the tol-neighborhood of outer.

    Equivalent to directed_distance(inner, outer) <= tol, which is the
    fattening characterization of inclusion; exact for tol = 0.
    """
    return directed_distance(inner, outer) <= tol


def sets_equal(a: CompactSet, b: CompactSet, tol: float = DEFAULT_TOL) -> bool:
    return hausdorff_distance(a, b) <= tol


def contains_point(a: CompactSet, x: float, tol: float = DEFAULT_TOL) -> bool:
    return distance_to_set(a, x) <= tol


def set_to_obj(a: CompactSet):
    """JSON-ready form: [[lo, hi], ...] for intervals, [x, ...] for points."""
    if isinstance(a, PointSet):
        return list(a.points)
    return [[iv.lo, iv.hi] for iv in a.intervals]


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def set_from_obj(obj, tol: float = DEFAULT_TOL) -> CompactSet:
    """Parse the JSON form; a flat list of numbers is a point set."""
    if not isinstance(obj, list) or not obj:
        raise EmptySetError("compact set JSON must be a nonempty list")
    if all(_is_number(x) for x in obj):
        return point_set(obj)
    if all(
        isinstance(x, (list, tuple)) and len(x) == 2 and all(_is_number(e) for e in x)
        for x in obj
    ):
        return normalize(obj, tol)
    raise ValueError("compact set JSON must be a list of numbers or of [lo, hi] pairs")
