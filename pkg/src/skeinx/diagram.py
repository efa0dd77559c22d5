"""Combinatorial model of framed unoriented trivalent tangles with crossings.

A :class:`Diagram` lives in a disk: vertices are trivalent (``T``) or
crossings (``X``), each with a counterclockwise rotation of dart ids; an
involution ``theta`` pairs darts into internal edges.  The ``n`` boundary legs
are listed counterclockwise; each leg either enters the graph at a vertex dart
or is one end of a vertex-free boundary-to-boundary arc.  Crossings keep their
over-strand in rotation slots {0, 2} (tuples are rotated on construction to
enforce this), so reversing every rotation is exactly the mirror image and
flips all crossings.  Framing is the blackboard framing; free zero-framed
circles are a counter.

Open diagrams are compared rel boundary; closed diagrams up to
orientation-preserving sphere isotopy, via a minimal breadth-first code over
all starting darts (:meth:`Diagram.key`).

Text format (round-trips bit-exactly)::

    diagram  ::= header NL vertex* edge* boundary NL
    header   ::= "tangle" SP "circles=" INT
    vertex   ::= "v" INT SP ("T" | "X") NL            ; 0-based, in order
    edge     ::= "e" SP PORT SP PORT NL
    boundary ::= "bd" (SP LEG)*
    LEG      ::= PORT | "arc" INT                      ; arc ids pair up legs
    PORT     ::= INT "." INT                           ; vertex.slot, slots CCW
"""

from __future__ import annotations

T = "T"
X = "X"


class DiagramError(ValueError):
    pass


class Diagram:
    """Immutable trivalent tangle with signed crossings in a disk.

    Attributes:
        verts: tuple of (kind, ports) with ports a CCW tuple of dart ids.
        theta: dict pairing darts into internal edges.
        battach: tuple of boundary attachments, one per leg (CCW): ("d", dart)
            for a leg entering a vertex, ("a", j) for an arc to leg j.
        circles: number of free circle components.
    """

    __slots__ = ("verts", "theta", "battach", "circles", "_key", "_faces")

    def __init__(self, verts, edges, boundary, circles=0):
        vmap = {}
        nverts = []
        for kind, ports in verts:
            if kind == T and len(ports) != 3:
                raise DiagramError("trivalent vertex needs 3 ports")
            if kind == X and len(ports) != 4:
                raise DiagramError("crossing needs 4 ports")
            nps = []
            for d in ports:
                if d in vmap:
                    raise DiagramError(f"dart {d} used twice")
                vmap[d] = len(vmap)
                nps.append(vmap[d])
            nverts.append((kind, tuple(nps)))
        theta = {}
        for a, b in edges:
            a, b = vmap[a], vmap[b]
            if a == b or a in theta or b in theta:
                raise DiagramError("bad edge list")
            theta[a] = b
            theta[b] = a
        batt = []
        arc_first = {}
        for i, leg in enumerate(boundary):
            if isinstance(leg, tuple) and len(leg) == 2 and leg[0] == "arc":
                aid = leg[1]
                if aid in arc_first:
                    j = arc_first.pop(aid)
                    batt[j] = ("a", i)
                    batt.append(("a", j))
                else:
                    arc_first[aid] = i
                    batt.append(None)
            else:
                d = vmap[leg]
                if d in theta:
                    raise DiagramError("boundary leg on an internal edge")
                batt.append(("d", d))
        if arc_first:
            raise DiagramError("unpaired arc id in boundary")
        used = set(theta)
        used.update(d for e in batt if e and e[0] == "d" for d in [e[1]])
        if len(used) != len(vmap):
            raise DiagramError("dangling dart neither edge nor boundary")
        self.verts = tuple(nverts)
        self.theta = theta
        self.battach = tuple(batt)
        self.circles = circles
        self._key = None
        self._faces = None

    # ---------------------------------------------------------------- queries

    @property
    def n(self):
        return len(self.battach)

    def is_closed(self):
        return not self.battach

    def num_crossings(self):
        return sum(1 for k, _ in self.verts if k == X)

    def num_trivalent(self):
        return sum(1 for k, _ in self.verts if k == T)

    def size(self):
        return (self.num_crossings(), self.num_trivalent())

    def dart_vertex(self):
        out = {}
        for vi, (_, ports) in enumerate(self.verts):
            for si, d in enumerate(ports):
                out[d] = (vi, si)
        return out

    # ------------------------------------------------------------------ faces

    def _aug(self):
        """Rotation + involution including a virtual outer vertex.

        Returns (rot, theta) over keys: real darts, and ("b", i) for boundary
        slots.  The outer vertex sees the legs clockwise (reversed).
        """
        rot = {}
        for vi, (_, ports) in enumerate(self.verts):
            for si, d in enumerate(ports):
                rot[d] = (vi, si, ports)
        n = self.n
        bports = tuple(("b", i) for i in reversed(range(n)))
        for si, p in enumerate(bports):
            rot[p] = (-1, si, bports)
        theta = dict(self.theta)
        for i, att in enumerate(self.battach):
            if att[0] == "d":
                theta[("b", i)] = att[1]
                theta[att[1]] = ("b", i)
            else:
                theta[("b", i)] = ("b", att[1])
        return rot, theta

    def all_faces(self):
        """All faces of the augmented sphere map, as dart walks (deterministic)."""
        rot, theta = self._aug()
        order = sorted(rot, key=lambda d: (0, d, 0) if isinstance(d, int) else (1, d[1], 0))
        unseen = set(rot)
        faces = []
        for d0 in order:
            if d0 not in unseen:
                continue
            walk = []
            d = d0
            while True:
                walk.append(d)
                unseen.discard(d)
                e = theta[d]
                vi, si, ports = rot[e]
                d = ports[(si - 1) % len(ports)]
                if d == d0:
                    break
            faces.append(walk)
        return faces

    def faces(self):
        """Internal faces (those not touching the boundary), as dart walks."""
        if self._faces is None:
            self._faces = [w for w in self.all_faces()
                           if not any(isinstance(d, tuple) for d in w)]
        return self._faces

    def euler_check(self):
        """V - E + F = 2 for the augmented sphere map (disk embeddability)."""
        nb = 1 if self.n else 0
        v = len(self.verts) + nb
        e = len(self.theta) // 2 + sum(1 for a in self.battach if a[0] == "d") \
            + sum(1 for a in self.battach if a[0] == "a") // 2
        f = len(self.all_faces())
        if v == 0 and e == 0:
            return True
        return v - e + f == 2

    # ---------------------------------------------------------------- rebuild

    def _raw(self):
        """(verts, edges, boundary) in constructor format, arcs by fresh ids."""
        verts = [(k, tuple(ps)) for k, ps in self.verts]
        edges = []
        for a, b in self.theta.items():
            if a < b:
                edges.append((a, b))
        boundary = []
        arc_id = {}
        for i, att in enumerate(self.battach):
            if att[0] == "d":
                boundary.append(att[1])
            else:
                j = att[1]
                key = (min(i, j), max(i, j))
                arc_id.setdefault(key, len(arc_id))
                boundary.append(("arc", arc_id[key]))
        return verts, edges, boundary

    def mirror(self):
        """Reflection in the plane: reverse all rotations and the boundary."""
        verts, edges, boundary = self._raw()
        mverts = [(k, (ps[0],) + tuple(reversed(ps[1:]))) for k, ps in verts]
        n = self.n
        mbnd = list(reversed(boundary))
        return Diagram(mverts, edges, mbnd, self.circles)

    def rotated(self, k=1):
        """Rotate the boundary so old leg k becomes new leg 0."""
        if not self.n:
            return self
        verts, edges, boundary = self._raw()
        k %= self.n
        return Diagram(verts, edges, boundary[k:] + boundary[:k], self.circles)

    def tensor(self, other):
        verts, edges, boundary = self._raw()
        overts, oedges, obnd = other._raw()
        f = lambda d: ("o", d)
        overts = [(k, tuple(f(d) for d in ps)) for k, ps in overts]
        oedges = [(f(a), f(b)) for a, b in oedges]
        obnd = [("arc", ("o", leg[1])) if isinstance(leg, tuple) and leg[0] == "arc"
                else f(leg) for leg in obnd]
        boundary = [("arc", ("s", leg[1])) if isinstance(leg, tuple) and leg[0] == "arc"
                    else leg for leg in boundary]
        return Diagram(verts + overts, edges + oedges, boundary + obnd,
                       self.circles + other.circles)

    def glue(self, other, pairs):
        """Join self leg i to other leg j for each (i, j); remaining legs form
        the new boundary (self's first, then other's)."""
        return _glue(self, other, pairs)

    def self_glue(self, i, j):
        """Join legs i and j of this diagram by an arc outside nothing --
        i.e. identify the two legs."""
        return _glue(self, None, [(i, j)])

    def close_with(self, other):
        """Closure pairing: self leg i to other leg n-1-i; returns closed Diagram."""
        if self.n != other.n:
            raise DiagramError("arity mismatch in pairing")
        n = self.n
        return _glue(self, other, [(i, n - 1 - i) for i in range(n)])

    def add_circles(self, k):
        verts, edges, boundary = self._raw()
        return Diagram(verts, edges, boundary, self.circles + k)

    # ---------------------------------------------------------------- key etc.

    def key(self):
        if self._key is None:
            if self.battach:
                self._key = _open_code(self)
            else:
                self._key = _closed_code(self)
        return self._key

    def components(self):
        """(closed connected sub-diagrams, free circle count); closed only."""
        if self.battach:
            raise DiagramError("components() expects a closed diagram")
        dv = {}
        for vi, (_, ports) in enumerate(self.verts):
            for d in ports:
                dv[d] = vi
        adj = {vi: set() for vi in range(len(self.verts))}
        for a, b in self.theta.items():
            adj[dv[a]].add(dv[b])
        seen = set()
        out = []
        for start in range(len(self.verts)):
            if start in seen:
                continue
            comp = [start]
            seen.add(start)
            stack = [start]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        stack.append(w)
            comp = sorted(comp)
            darts = set(d for vi in comp for d in self.verts[vi][1])
            verts = [self.verts[vi] for vi in comp]
            edges = [(a, b) for a, b in self.theta.items() if a < b and a in darts]
            out.append(Diagram(verts, edges, []))
        return out, self.circles

    # ------------------------------------------------------------------- text

    def text(self):
        lines = [f"tangle circles={self.circles}"]
        dv = self.dart_vertex()
        for vi, (kind, _) in enumerate(self.verts):
            lines.append(f"v{vi} {kind}")
        for a, b in sorted((a, b) for a, b in self.theta.items() if a < b):
            va, sa = dv[a]
            vb, sb = dv[b]
            lines.append(f"e {va}.{sa} {vb}.{sb}")
        legs = []
        arc_ids = {}
        for i, att in enumerate(self.battach):
            if att[0] == "d":
                v, s = dv[att[1]]
                legs.append(f"{v}.{s}")
            else:
                key = (min(i, att[1]), max(i, att[1]))
                arc_ids.setdefault(key, len(arc_ids))
                legs.append(f"arc{arc_ids[key]}")
        lines.append("bd" + ("" if not legs else " " + " ".join(legs)))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(s):
        verts = []
        edges = []
        boundary = []
        circles = 0
        for line in s.strip().splitlines():
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "tangle":
                for tok in parts[1:]:
                    if tok.startswith("circles="):
                        circles = int(tok[8:])
            elif parts[0].startswith("v") and parts[0] != "v":
                idx = int(parts[0][1:])
                if idx != len(verts):
                    raise DiagramError("vertices must be listed in order")
                kind = parts[1]
                verts.append((kind, tuple((idx, s0) for s0 in range(3 if kind == T else 4))))
            elif parts[0] == "e":
                a = tuple(int(x) for x in parts[1].split("."))
                b = tuple(int(x) for x in parts[2].split("."))
                edges.append((a, b))
            elif parts[0] == "bd":
                for tok in parts[1:]:
                    if tok.startswith("arc"):
                        boundary.append(("arc", int(tok[3:])))
                    else:
                        boundary.append(tuple(int(x) for x in tok.split(".")))
        return Diagram(verts, edges, boundary, circles)

    def __repr__(self):
        return (f"Diagram(T={self.num_trivalent()}, X={self.num_crossings()}, "
                f"n={self.n}, circles={self.circles})")

    def __eq__(self, other):
        return isinstance(other, Diagram) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


# ----------------------------------------------------------------- gluing


def _glue(left: Diagram, right, pairs):
    """Shared implementation of glue / self_glue / close_with."""
    lv, le, _ = left._raw()
    verts = [(k, tuple(("s", d) for d in ps)) for k, ps in lv]
    edges = [(("s", a), ("s", b)) for a, b in le]
    circles = left.circles
    if right is not None:
        rv, re_, _ = right._raw()
        verts += [(k, tuple(("o", d) for d in ps)) for k, ps in rv]
        edges += [(("o", a), ("o", b)) for a, b in re_]
        circles += right.circles
        atts = {"s": left.battach, "o": right.battach}
        joins = [(("s", i), ("o", j)) for i, j in pairs]
    else:
        atts = {"s": left.battach}
        joins = [(("s", i), ("s", j)) for i, j in pairs]
        if any(i == j for i, j in pairs):
            raise DiagramError("cannot glue a leg to itself")
    join_of = {}
    for a, b in joins:
        if a in join_of or b in join_of or a == b:
            raise DiagramError("leg glued twice")
        join_of[a] = b
        join_of[b] = a

    def inner(pos):
        side, i = pos
        att = atts[side][i]
        if att[0] == "d":
            return ("dart", (side, att[1]))
        return ("pos", (side, att[1]))

    def walk(p0):
        """From joined position p0, walk inward; returns (endpoint, traversed).

        endpoint is ("dart", d), ("pos", live position) or ("loop", None)."""
        traversed = set()
        p = p0
        while True:
            traversed.add(p)
            kind, val = inner(p)
            if kind == "dart":
                return ("dart", val), traversed
            q = val
            if q not in join_of:
                return ("pos", q), traversed
            traversed.add(q)
            p = join_of[q]
            if p == p0:
                return ("loop", None), traversed

    resolved = {}
    processed = set()
    new_edges = []
    for a in list(join_of):
        if a in processed:
            continue
        b = join_of[a]
        e1, tr1 = walk(a)
        if e1[0] == "loop":
            circles += 1
            processed |= tr1
            processed.add(b)
            continue
        e2, tr2 = walk(b)
        processed |= tr1 | tr2
        processed.add(a)
        processed.add(b)
        (k1, v1), (k2, v2) = e1, e2
        if k1 == "dart" and k2 == "dart":
            new_edges.append((v1, v2))
        elif k1 == "dart":
            resolved[v2] = ("dart", v1)
        elif k2 == "dart":
            resolved[v1] = ("dart", v2)
        else:
            resolved[v1] = ("pos", v2)
            resolved[v2] = ("pos", v1)

    order = [("s", i) for i in range(len(atts["s"])) if ("s", i) not in join_of]
    if right is not None:
        order += [("o", i) for i in range(len(atts["o"])) if ("o", i) not in join_of]
    boundary = []
    arc_seen = {}
    for p in order:
        kind, val = resolved.get(p) or inner(p)
        if kind == "dart":
            boundary.append(val)
        else:
            key = frozenset((p, val)) if p not in resolved else frozenset((p, val, "r"))
            arc_seen.setdefault(key, len(arc_seen))
            boundary.append(("arc", arc_seen[key]))
    return Diagram(verts, edges + new_edges, boundary, circles)


# ----------------------------------------------------------------- encoding


def _closed_code(diag: Diagram) -> bytes:
    if not diag.verts:
        return b"empty;circ=%d" % diag.circles
    dv = diag.dart_vertex()
    best = None
    for d0 in sorted(dv):
        code = _code_from(diag, [d0], dv)
        if code is None:
            continue
        if best is None or code < best:
            best = code
    if best is None:
        # disconnected: canonical component multiset
        comps, circ = diag.components()
        parts = sorted(c.key() for c in comps)
        return b"DISC[" + b"//".join(parts) + b"];circ=%d" % circ
    return best + b";circ=%d" % diag.circles


def _open_code(diag: Diagram) -> bytes:
    dv = diag.dart_vertex()
    seeds = []
    arcs = []
    for i, att in enumerate(diag.battach):
        if att[0] == "d":
            seeds.append(att[1])
        else:
            arcs.append((min(i, att[1]), max(i, att[1])))
    head = b"bd:" + b",".join(
        b"a%d.%d" % a for a in sorted(set(arcs))) + b";"
    code = _code_from(diag, seeds, dv, allow_extra=True)
    if code is None:
        code = b""
    # disconnected closed pieces floating inside an open diagram
    reached = _reachable(diag, seeds)
    rest = [vi for vi in range(len(diag.verts)) if vi not in reached]
    if rest:
        sub = _subdiagram(diag, rest)
        code += b"++" + sub.key()
    return b"open:" + head + code + b";circ=%d" % diag.circles


def _reachable(diag, seed_darts):
    dv = diag.dart_vertex()
    seen = set()
    stack = [dv[d][0] for d in seed_darts]
    seen.update(stack)
    while stack:
        vi = stack.pop()
        for d in diag.verts[vi][1]:
            e = diag.theta.get(d)
            if e is not None:
                wj = dv[e][0]
                if wj not in seen:
                    seen.add(wj)
                    stack.append(wj)
    return seen


def _subdiagram(diag, vis):
    darts = set(d for vi in vis for d in diag.verts[vi][1])
    verts = [diag.verts[vi] for vi in vis]
    edges = [(a, b) for a, b in diag.theta.items() if a < b and a in darts]
    return Diagram(verts, edges, [])


def _code_from(diag, seed_darts, dv, allow_extra=False):
    """BFS code seeded at the given darts in order; None if disconnected
    (unless allow_extra)."""
    order = {}
    entry = {}
    queue = []
    for d in seed_darts:
        vi, si = dv[d]
        if vi not in order:
            order[vi] = len(queue)
            entry[vi] = si
            queue.append(vi)
    out = bytearray()
    qi = 0
    while qi < len(queue):
        vi = queue[qi]
        qi += 1
        kind, ports = diag.verts[vi]
        deg = len(ports)
        s0 = entry[vi]
        out += (b"X%d|" % (s0 % 2)) if kind == X else b"T|"
        for k in range(deg):
            d = ports[(s0 + k) % deg]
            e = diag.theta.get(d)
            if e is None:
                # boundary leg: identify which slot
                for bi, att in enumerate(diag.battach):
                    if att[0] == "d" and att[1] == d:
                        out += b"b%d," % bi
                        break
                continue
            wj, sj = dv[e]
            if wj not in order:
                order[wj] = len(queue)
                entry[wj] = sj
                queue.append(wj)
                out += b"n,"
            else:
                out += b"v%d.%d," % (order[wj], (sj - entry[wj]) % len(diag.verts[wj][1]))
        out += b";"
    if not allow_extra and len(order) != len(diag.verts):
        return None
    return bytes(out)
