"""Deterministic planar embedding of boundary-forest diagrams.

Basis elements of the n-box spaces are forests attached to n marked points on
a line (parts of size 2 are strands, larger parts are caterpillar trees with a
chosen leg order).  This module draws such a forest in the upper half plane
with exact rational coordinates, finds all edge crossings by segment
intersection, and assembles the combinatorial map.  Over/under at a crossing
follows a fixed documented rule: the path created earlier in the construction
order passes over.

The construction raises DegenerateGeometry on triple points or touching
segments and is retried with a different jitter; the default layout is clean
for every basis diagram with n <= 6.
"""

from __future__ import annotations

from fractions import Fraction

from .diagram import Diagram, T, X


class DegenerateGeometry(Exception):
    pass


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _seg_intersect(p1, p2, q1, q2):
    """Proper interior intersection of two segments, else None; degenerate
    contacts raise."""
    r = _sub(p2, p1)
    s = _sub(q2, q1)
    denom = _cross(r, s)
    qp = _sub(q1, p1)
    if denom == 0:
        if _cross(qp, r) == 0:
            t0 = qp[0] * r[0] + qp[1] * r[1]
            rr = r[0] * r[0] + r[1] * r[1]
            t1 = t0 + (s[0] * r[0] + s[1] * r[1])
            lo, hi = min(t0, t1), max(t0, t1)
            if hi <= 0 or lo >= rr:
                return None  # disjoint or touching at one endpoint
            raise DegenerateGeometry("collinear overlap")
        return None
    t = Fraction(_cross(qp, s), denom)
    u = Fraction(_cross(qp, r), denom)
    if t < 0 or t > 1 or u < 0 or u > 1:
        return None
    t_end = t in (0, 1)
    u_end = u in (0, 1)
    if t_end and u_end:
        return None  # meeting at a common endpoint (a tree vertex)
    if t_end or u_end:
        raise DegenerateGeometry("endpoint in the interior of another segment")
    return (p1[0] + t * r[0], p1[1] + t * r[1])


def _angle_key(d):
    """Total order on directions, counterclockwise starting just above +x."""
    x, y = d
    if x == 0 and y == 0:
        raise DegenerateGeometry("zero direction")
    if y > 0:
        return (0, Fraction(-x, y))
    if y == 0:
        return (0 if x > 0 else 1, Fraction(-10 ** 12) if x > 0 else Fraction(-10 ** 12))
    return (1, Fraction(-x, y))


def _legs_at(order, k, i):
    """Boundary slots attached to spine vertex u_i of the caterpillar."""
    own = []
    if i == 1:
        own += [order[0], order[1]]
    if i >= 2:
        own.append(order[i])
    if i == k - 2:
        own.append(order[k - 1])
    return own


def _is_nested(order):
    """True when successive leg pairs nest, as in (p1 p4)(p2 p3)."""
    lo, hi = min(order), max(order)
    return order[0] == lo and order[1] == hi


class _Path:
    __slots__ = ("pts", "ends", "index")

    def __init__(self, pts, end_a, end_b, index):
        self.pts = [tuple(map(Fraction, p)) for p in pts]
        self.ends = (end_a, end_b)  # ("slot", i) or ("tv", name)
        self.index = index


def draw_forest(n, parts, jitter=0):
    """Diagram of the forest; parts = [(sorted points, caterpillar order)].

    Size-2 parts are strands; a part of size k >= 3 becomes the caterpillar
    whose spine vertices u_1..u_{k-2} carry legs (order[0], order[1]) at u_1,
    order[i+1] at u_i, and order[k-1] at u_{k-2}.
    """
    paths = []
    tvs = {}
    for pi, (pts, order) in enumerate(parts):
        k = len(pts)
        depth = sum(1 for (q, _) in parts
                    if q is not pts and q[0] < pts[0] and q[-1] > pts[-1])
        y = Fraction(1, depth + 1) - Fraction(pi + 1, 997 + 31 * jitter)
        if y <= 0:
            raise DegenerateGeometry("depth jitter underflow")
        lo, hi = Fraction(pts[0]), Fraction(pts[-1])
        if k == 2:
            apex = (Fraction(lo + hi, 2) + Fraction(pi, 1013 + 29 * jitter), y)
            paths.append(_Path([(lo, 0), apex, (hi, 0)],
                               ("slot", pts[0]), ("slot", pts[1]), len(paths)))
            continue
        nested = len(order) >= 4 and list(order) != sorted(order) and _is_nested(order)
        spine = []
        for i in range(1, k - 1):
            wobble = (i * i * 7 + i * 13 + pi * 29 + jitter * 17) % 101 + 1
            if nested:
                # descending spine with each vertex over its own legs, so
                # pairings like (p1 p4)(p2 p3) embed without crossings
                own = _legs_at(order, k, i)
                xpos = Fraction(sum(own), len(own)) \
                    + Fraction(wobble, 1009 + 37 * jitter)
                yy = y * Fraction(2, i + 1)
            else:
                xpos = lo + (hi - lo) * Fraction(i, k - 1) \
                    + Fraction(wobble, 1009 + 37 * jitter)
                yy = y
            name = f"u{pi}_{i}"
            tvs[name] = (xpos, yy)
            spine.append(name)
        for i in range(len(spine) - 1):
            paths.append(_Path([tvs[spine[i]], tvs[spine[i + 1]]],
                               ("tv", spine[i]), ("tv", spine[i + 1]), len(paths)))
        legs = [(order[0], spine[0]), (order[1], spine[0])]
        for i in range(2, k - 1):
            legs.append((order[i], spine[i - 1]))
        legs.append((order[k - 1], spine[-1]))
        for slot, uname in legs:
            paths.append(_Path([(Fraction(slot), 0), tvs[uname]],
                               ("slot", slot), ("tv", uname), len(paths)))
    return _assemble(n, paths)


def _assemble(n, paths):
    # intersections
    segs = []
    for p in paths:
        for i in range(len(p.pts) - 1):
            segs.append((p.index, i, p.pts[i], p.pts[i + 1]))
    percell = {}
    cross_over = {}
    ncross = 0
    pts_seen = {}
    for a in range(len(segs)):
        for b in range(a + 1, len(segs)):
            ia, sa, p1, p2 = segs[a]
            ib, sb, q1, q2 = segs[b]
            if ia == ib:
                continue
            pt = _seg_intersect(p1, p2, q1, q2)
            if pt is None:
                continue
            if pt in pts_seen:
                raise DegenerateGeometry("triple point")
            pts_seen[pt] = True
            cid = ncross
            ncross += 1
            cross_over[cid] = min(ia, ib)
            percell.setdefault((ia, sa), []).append((pt, cid))
            percell.setdefault((ib, sb), []).append((pt, cid))

    # split paths into arcs at crossing points
    anchors = {}   # anchor key -> list of (direction, dart, path index)
    arcs = []      # (endA, endB) with end = ("slot", i) | ("dart", dart)
    dart_n = 0

    def attach(anchor, direction, pathidx):
        nonlocal dart_n
        if anchor[0] == "slot":
            return ("slot", anchor[1])
        d = dart_n
        dart_n += 1
        anchors.setdefault(anchor, []).append((direction, d, pathidx))
        return ("dart", d)

    for p in paths:
        stations = [(p.ends[0], p.pts[0])]
        for i in range(len(p.pts) - 1):
            here = list(percell.get((p.index, i), ()))
            a = p.pts[i]
            here.sort(key=lambda t: (t[0][0] - a[0]) ** 2 + (t[0][1] - a[1]) ** 2)
            for pt, cid in here:
                stations.append((("x", cid), pt))
            if i + 1 < len(p.pts) - 1:
                stations.append((("bend",), p.pts[i + 1]))
        stations.append((p.ends[1], p.pts[-1]))
        real = [j for j, (anc, _) in enumerate(stations) if anc[0] != "bend"]
        for u, w in zip(real, real[1:]):
            anc_a, pt_a = stations[u]
            anc_b, pt_b = stations[w]
            da = attach(anc_a, _sub(stations[u + 1][1], pt_a), p.index)
            db = attach(anc_b, _sub(stations[w - 1][1], pt_b), p.index)
            arcs.append((da, db))

    verts = []
    for key in sorted(anchors, key=str):
        items = sorted(anchors[key], key=lambda t: _angle_key(t[0]))
        ports = [d for _, d, _ in items]
        if key[0] == "tv":
            if len(ports) != 3:
                raise DegenerateGeometry("tree vertex degree != 3")
            verts.append((T, tuple(ports)))
        else:
            if len(ports) != 4:
                raise DegenerateGeometry("crossing degree != 4")
            over = cross_over[key[1]]
            owners = [pidx for _, _, pidx in items]
            if owners[0] == owners[2] and owners[1] == owners[3]:
                pass
            else:
                raise DegenerateGeometry("crossing strands not opposite")
            rot = 0 if owners[0] == over else 1
            verts.append((X, tuple(ports[rot:] + ports[:rot])))

    # boundary legs and arcs
    bnd = [None] * n
    arc_pairs = {}
    edge_list = []
    for (ka, va), (kb, vb) in arcs:
        if ka == "dart" and kb == "dart":
            edge_list.append((va, vb))
        elif ka == "slot" and kb == "slot":
            aid = ("a", len(arc_pairs))
            arc_pairs[aid] = True
            bnd[va] = ("arc", aid)
            bnd[vb] = ("arc", aid)
        else:
            slot = va if ka == "slot" else vb
            dart = vb if ka == "slot" else va
            bnd[slot] = ("leg", dart)
    boundary = []
    for i in range(n):
        e = bnd[i]
        if e is None:
            raise DegenerateGeometry(f"slot {i} unattached")
        boundary.append(e[1] if e[0] == "leg" else e)
    diag = Diagram(verts, edge_list, boundary)
    if not diag.euler_check():
        raise DegenerateGeometry("assembled map is not planar")
    return diag


def forest_diagram(n, parts):
    """draw_forest with retries over jitters; raises if all degenerate."""
    last = None
    for jitter in range(8):
        try:
            return draw_forest(n, parts, jitter)
        except DegenerateGeometry as e:
            last = e
    raise last
