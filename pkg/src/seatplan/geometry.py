"""Planar predicates used for collision checking.

All predicates are conservative: points on an obstacle boundary and
segments that merely graze a polygon edge or vertex count as blocked.
Tolerance is an absolute EPS in length units, so thresholds are applied
to real distances (point-to-line), never to raw cross products.
"""

import math

EPS = 1e-9


def dist(a, b):
    return math.hypot(b[0] - a[0], b[1] - a[1])


def _signed_offset(a, b, p):
    """Perpendicular signed distance from p to the line through a,b.

    Returns 0.0 for a degenerate (zero-length) reference segment.
    """
    ab = (b[0] - a[0], b[1] - a[1])
    n = math.hypot(*ab)
    if n == 0.0:
        return 0.0
    return ((b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])) / n


def point_segment_distance(p, a, b):
    ab = (b[0] - a[0], b[1] - a[1])
    n2 = ab[0] * ab[0] + ab[1] * ab[1]
    if n2 == 0.0:
        return dist(p, a)
    t = ((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / n2
    t = min(1.0, max(0.0, t))
    return dist(p, (a[0] + t * ab[0], a[1] + t * ab[1]))


def point_on_segment(p, a, b, eps=EPS):
    return point_segment_distance(p, a, b) <= eps


def point_in_polygon(p, vertices, eps=EPS):
    """Classify p against a closed polygon.

    Returns 1 for strictly inside, 0 for on the boundary (within eps),
    -1 for outside. Even-odd ray casting; the boundary band is checked
    explicitly first so the crossing count never has to break ties.
    """
    n = len(vertices)
    for i in range(n):
        if point_on_segment(p, vertices[i], vertices[(i + 1) % n], eps):
            return 0
    inside = False
    x, y = p
    for i in range(n):
        ax, ay = vertices[i]
        bx, by = vertices[(i + 1) % n]
        if (ay > y) != (by > y):
            x_cross = ax + (y - ay) * (bx - ax) / (by - ay)
            if x < x_cross:
                inside = not inside
    return 1 if inside else -1


def segments_intersect(p1, p2, q1, q2, eps=EPS):
    """True if segments p1p2 and q1q2 share any point (within eps).

    Touching endpoints, tangency at a vertex and collinear overlap all
    count as intersections.
    """
    d1 = _signed_offset(q1, q2, p1)
    d2 = _signed_offset(q1, q2, p2)
    d3 = _signed_offset(p1, p2, q1)
    d4 = _signed_offset(p1, p2, q2)
    if ((d1 > eps and d2 < -eps) or (d1 < -eps and d2 > eps)) and (
        (d3 > eps and d4 < -eps) or (d3 < -eps and d4 > eps)
    ):
        return True
    if abs(d1) <= eps and point_on_segment(p1, q1, q2, eps):
        return True
    if abs(d2) <= eps and point_on_segment(p2, q1, q2, eps):
        return True
    if abs(d3) <= eps and point_on_segment(q1, p1, p2, eps):
        return True
    if abs(d4) <= eps and point_on_segment(q2, p1, p2, eps):
        return True
    return False


def segment_intersects_polygon(a, b, vertices, eps=EPS):
    n = len(vertices)
    for i in range(n):
        if segments_intersect(a, b, vertices[i], vertices[(i + 1) % n], eps):
            return True
    return False


def polygon_is_simple(vertices, eps=EPS):
    """Check that no two non-adjacent edges intersect and no edge degenerates."""
    n = len(vertices)
    if n < 3:
        return False
    edges = [(vertices[i], vertices[(i + 1) % n]) for i in range(n)]
    for a, b in edges:
        if dist(a, b) <= eps:
            return False
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                continue
            if segments_intersect(edges[i][0], edges[i][1], edges[j][0], edges[j][1], eps):
                return False
    return True
