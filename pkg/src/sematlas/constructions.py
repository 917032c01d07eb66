"""Infinite families at Euler characteristic 0 and the operators between them.

Grid generators produce the equivelar series on the torus (two rows of n
columns, the vertical wrap shifted by three columns) and the Klein bottle
(n columns of three vertices each, the horizontal wrap swapping two rows).
Subdivision operators consume the generators' grid tags; truncation, dual,
the (3,12,12) -> (3,4,6,4) expansion, the quad-diagonalization to (3^4,6)
and the orientation double cover are intrinsic and work on any valid map.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import (
    FaceSeqType,
    PolyhedralMap,
    canonical_face,
    edge_key,
    euler_characteristic,
    is_orientable,
    is_semi_equivelar,
    validate,
)


class ParamOutOfRange(ValueError):
    pass


class NotGridMap(ValueError):
    """The operation needs a generator-tagged grid map."""


class ParityError(ValueError):
    """The grid admits no closed alternating pattern."""


class NoConsistentDiagonalization(ValueError):
    pass


class AlreadyOrientable(ValueError):
    """The orientation double cover of an orientable map is disconnected."""


class NotTruncation(ValueError):
    """The operation needs a map of type (3,12,12)."""


FAMILY_ALIASES = {
    "3^6": "3^6", "3x6": "3^6", "36": "3^6",
    "4^4": "4^4", "4x4": "4^4", "44": "4^4",
    "6^3": "6^3", "6x3": "6^3", "63": "6^3",
}


@dataclass(frozen=True)
class SeriesParams:
    """Parameters of an equivelar grid series.

    The figures' torus series start at n = 7 and the Klein series at
    n = 3; smaller n (or another vertical ``twist``) are accepted exactly
    when the resulting identifications still satisfy every polyhedral
    condition -- the validator is the arbiter.  ``twist`` is the column
    shift of the torus grids' vertical wrap; the drawn series use -3, and
    the alternating subdivision needs an even twist (its figure uses -4).
    """

    family: str   # one of 3^6, 4^4, 6^3
    surface: str  # torus | klein_bottle
    n: int
    twist: Optional[int] = None

    def __post_init__(self):
        fam = FAMILY_ALIASES.get(self.family)
        if fam is None:
            raise ParamOutOfRange(f"unknown family {self.family!r}")
        object.__setattr__(self, "family", fam)
        surface = {"torus": "torus", "klein": "klein_bottle",
                   "klein_bottle": "klein_bottle"}.get(self.surface)
        if surface is None:
            raise ParamOutOfRange(f"unknown surface {self.surface!r}")
        object.__setattr__(self, "surface", surface)
        if self.n < 3:
            raise ParamOutOfRange("series need n >= 3")
        if self.twist is not None and (surface != "torus" or fam == "6^3"):
            raise ParamOutOfRange("twist applies to torus grid families only")


def equivelar_series(params: SeriesParams) -> PolyhedralMap:
    """The equivelar map of the requested family, surface and size."""
    fam, surf, n = params.family, params.surface, params.n
    try:
        if surf == "torus":
            if fam == "6^3":
                return _torus_63(n)
            twist = -3 if params.twist is None else params.twist
            builder = {"3^6": _torus_36, "4^4": _torus_44}[fam]
            return builder(n, twist)
        builder = {"3^6": _klein_36, "4^4": _klein_44, "6^3": _klein_63}[fam]
        return builder(n)
    except (ValueError, AssertionError) as exc:
        if isinstance(exc, ParamOutOfRange):
            raise
        raise ParamOutOfRange(
            f"{fam} on {surf} with n={n} does not close up: {exc}") from exc


def _series_tags(family: str, surface: str, n: int, coords: dict,
                 twist: Optional[int] = None) -> dict:
    series = {"family": family, "surface": surface, "n": n}
    if twist is not None:
        series["twist"] = twist
    return {
        "series": series,
        "coords": {str(v): list(rc) for v, rc in coords.items()},
    }


def _torus_44(n: int, twist: int = -3) -> PolyhedralMap:
    # row 0: b_j = j; row 1: m_j = n + j; the vertical wrap re-enters
    # row 0 shifted by ``twist`` columns
    b = lambda j: j % n
    m = lambda j: n + (j % n)
    faces = []
    for j in range(n):
        faces.append((b(j), b(j + 1), m(j + 1), m(j)))
        faces.append((m(j), m(j + 1), b(j + 1 + twist), b(j + twist)))
    coords = {b(j): (0, j) for j in range(n)}
    coords.update({m(j): (1, j) for j in range(n)})
    return validate(faces, 2 * n,
                    tags=_series_tags("4^4", "torus", n, coords, twist))


def _torus_36(n: int, twist: int = -3) -> PolyhedralMap:
    b = lambda j: j % n
    m = lambda j: n + (j % n)
    faces = []
    for j in range(n):
        faces.append((b(j), b(j + 1), m(j + 1)))
        faces.append((b(j), m(j + 1), m(j)))
        faces.append((m(j), m(j + 1), b(j + 1 + twist)))
        faces.append((m(j), b(j + 1 + twist), b(j + twist)))
    coords = {b(j): (0, j) for j in range(n)}
    coords.update({m(j): (1, j) for j in range(n)})
    return validate(faces, 2 * n,
                    tags=_series_tags("3^6", "torus", n, coords, twist))


def _torus_63(n: int) -> PolyhedralMap:
    # cycle 0..2n-1 plus chords i ~ i-5 at even i; one hexagon per chord pair
    N = 2 * n
    faces = []
    for i in range(0, N, 2):
        faces.append((i, (i + 1) % N, (i + 2) % N,
                      (i - 3) % N, (i - 4) % N, (i - 5) % N))
    coords = {v: (0, v) for v in range(N)}
    return validate(faces, N, tags=_series_tags("6^3", "torus", n, coords))


def _klein_grid(n: int):
    a = lambda j: j % n
    b = lambda j: n + (j % n)
    c = lambda j: 2 * n + (j % n)
    quads = []
    for j in range(n - 1):
        quads.append((a(j), a(j + 1), b(j + 1), b(j)))
        quads.append((b(j), b(j + 1), c(j + 1), c(j)))
        quads.append((c(j), c(j + 1), a(j + 1), a(j)))
    # the horizontal wrap swaps the two upper rows (orientation reversal)
    quads.append((a(n - 1), a(0), c(0), b(n - 1)))
    quads.append((b(n - 1), c(0), b(0), c(n - 1)))
    quads.append((c(n - 1), b(0), a(0), a(n - 1)))
    coords = {a(j): (0, j) for j in range(n)}
    coords.update({b(j): (1, j) for j in range(n)})
    coords.update({c(j): (2, j) for j in range(n)})
    return quads, coords


def _klein_44(n: int) -> PolyhedralMap:
    quads, coords = _klein_grid(n)
    return validate(quads, 3 * n,
                    tags=_series_tags("4^4", "klein_bottle", n, coords))


def _klein_36(n: int) -> PolyhedralMap:
    quads, coords = _klein_grid(n)
    faces = []
    for (p, q, r, s) in quads:
        # diagonal from the second corner of the lower edge
        faces.append((p, q, s))
        faces.append((q, r, s))
    return validate(faces, 3 * n,
                    tags=_series_tags("3^6", "klein_bottle", n, coords))


def _klein_63(n: int) -> PolyhedralMap:
    m = dual(_klein_36(n))
    tags = dict(m.tags)
    tags["series"] = {"family": "6^3", "surface": "klein_bottle", "n": n}
    return PolyhedralMap(m.n_vertices, m.faces, tags=tags)


# -- intrinsic operators ------------------------------------------------------


def dual(m: PolyhedralMap) -> PolyhedralMap:
    """Swap vertices and faces; the dual face at v is v's face fan."""
    faces = [m.fan(v) for v in range(m.n_vertices)]
    return validate(faces, m.n_faces)


def truncate(m: PolyhedralMap) -> PolyhedralMap:
    """Cut every vertex: one new vertex per (vertex, incident edge) pair."""
    ids: dict[tuple[int, int], int] = {}
    for v in range(m.n_vertices):
        for u in m.link(v):
            ids[(v, u)] = len(ids)
    faces = []
    for v in range(m.n_vertices):
        faces.append(tuple(ids[(v, u)] for u in m.link(v)))
    for face in m.faces:
        p = len(face)
        new = []
        for i in range(p):
            x, xp, xn = face[i], face[i - 1], face[(i + 1) % p]
            new.append(ids[(x, xp)])
            new.append(ids[(x, xn)])
        faces.append(tuple(new))
    return validate(faces, len(ids))


def double_cover(m: PolyhedralMap) -> tuple[PolyhedralMap, dict[int, int]]:
    """Orientation double cover of a non-orientable flat map.

    Returns the cover plus the two-to-one vertex projection.  Cover vertex
    2v + s lies over v; the two sheets at v are the two senses of its fan.
    """
    if euler_characteristic(m) != 0:
        from .classify import NotFlat
        raise NotFlat("double cover implemented for flat maps only")
    if is_orientable(m):
        raise AlreadyOrientable(
            "orientation double cover of an orientable map is disconnected")
    succ = []
    for v in range(m.n_vertices):
        cycle = m.link(v)
        succ.append({cycle[i]: cycle[(i + 1) % len(cycle)]
                     for i in range(len(cycle))})
    faces = []
    for face in m.faces:
        p = len(face)
        for direction in (1, -1):
            seq = face if direction == 1 else tuple(reversed(face))
            lifted = []
            for i in range(p):
                a, v, bnext = seq[i - 1], seq[i], seq[(i + 1) % p]
                sense = 0 if succ[v][a] == bnext else 1
                lifted.append(2 * v + sense)
            faces.append(tuple(lifted))
    cover = validate(faces, 2 * m.n_vertices)
    projection = {w: w // 2 for w in range(2 * m.n_vertices)}
    return cover, projection


def verify_covering(cover: PolyhedralMap, base: PolyhedralMap,
                    proj: dict[int, int]) -> bool:
    """Whether ``proj`` is a 2-to-1 covering map restricting to an
    isomorphism on every closed vertex star."""
    if cover.n_vertices != 2 * base.n_vertices:
        return False
    if sorted(proj) != list(range(cover.n_vertices)):
        return False
    fibers: dict[int, list[int]] = {}
    for w, v in proj.items():
        if not 0 <= v < base.n_vertices:
            return False
        fibers.setdefault(v, []).append(w)
    if any(len(f) != 2 for f in fibers.values()) or len(fibers) != base.n_vertices:
        return False
    base_keys = {}
    for f in base.faces:
        base_keys[canonical_face(f)] = base_keys.get(canonical_face(f), 0)
    for f in cover.faces:
        image = tuple(proj[w] for w in f)
        if len(set(image)) != len(image):
            return False
        key = canonical_face(image)
        if key not in base_keys:
            return False
        base_keys[key] += 1
    if any(cnt != 2 for cnt in base_keys.values()):
        return False
    from .core import cyclic_equal
    for w in range(cover.n_vertices):
        lk = cover.link(w)
        image = tuple(proj[u] for u in lk)
        if len(set(image)) != len(image):
            return False
        if not cyclic_equal(image, base.link(proj[w])):
            return False
    return True


# -- grid-tagged subdivision operators ---------------------------------------


def _grid_info(m: PolyhedralMap):
    series = m.tags.get("series")
    coords = m.tags.get("coords")
    if not series or not coords or series.get("family") != "4^4":
        raise NotGridMap("operation needs a tagged (4^4) series map")
    coord = {int(v): tuple(rc) for v, rc in coords.items()}
    return series["surface"], int(series["n"]), coord


def _edge_is_horizontal(coord, u, v, n) -> bool:
    cu, cv = coord[u][1], coord[v][1]
    return (cu - cv) % n in (1, n - 1)


def _quad_bands(m: PolyhedralMap, coord, n) -> list[list[int]]:
    """Closed bands of quads glued along their column-direction edges.

    The two-row torus grid has two bands of n quads; on the Klein grid the
    row flip splices two of the three layers into one band of 2n quads,
    leaving the middle band of n.
    """
    seen = [False] * m.n_faces
    bands = []
    for start in range(m.n_faces):
        if seen[start]:
            continue
        band = []
        stack = [start]
        seen[start] = True
        while stack:
            fi = stack.pop()
            band.append(fi)
            face = m.faces[fi]
            for i in range(len(face)):
                u, v = face[i], face[(i + 1) % len(face)]
                if _edge_is_horizontal(coord, u, v, n):
                    continue
                fa, fb = m.edge_faces(u, v)
                other = fb if fa == fi else fa
                if not seen[other]:
                    seen[other] = True
                    stack.append(other)
        bands.append(sorted(band))
    return bands


def _oriented_quad(m: PolyhedralMap, coord, n, face):
    """Corner roles (bl, br, tr, tl) of a grid quad, derived from the
    coordinate tags so they are independent of the stored rotation."""
    edges = [(face[i], face[(i + 1) % 4]) for i in range(4)]
    horizontal = [e for e in edges if _edge_is_horizontal(coord, e[0], e[1], n)]
    if len(horizontal) != 2:
        raise NotGridMap("quad does not have two row-direction edges")
    horizontal.sort(key=lambda e: min(coord[v][0] for v in e))
    (u, v), _top = horizontal
    if (coord[u][1] + 1) % n == coord[v][1]:
        bl, br = u, v
    else:
        bl, br = v, u
    nbrs_in_face = {face[i]: {face[i - 1], face[(i + 1) % 4]} for i in range(4)}
    tl = next(w for w in nbrs_in_face[bl] if w != br)
    tr = next(w for w in nbrs_in_face[br] if w != bl)
    return bl, br, tr, tl


def subdivide_layer_diagonals(m: PolyhedralMap) -> PolyhedralMap:
    """One diagonal in every quad of one grid layer, all leaning the same
    way.

    On the two-row torus series every vertex borders the subdivided layer
    from both sides and the result is a semi-equivelar (3,3,3,4,4) map; on
    the three-row Klein series one vertex row never touches a single
    layer, so the output there is a valid map but not semi-equivelar.
    """
    surface, n, coord = _grid_info(m)
    if any(len(f) != 4 for f in m.faces):
        raise NotGridMap("input must be a quadrangulation")
    bands = _quad_bands(m, coord, n)
    chosen = min(bands, key=lambda b: (
        len(b), sorted(canonical_face(m.faces[fi]) for fi in b)))
    faces = []
    in_layer = set(chosen)
    for fi, face in enumerate(m.faces):
        if fi not in in_layer:
            faces.append(face)
            continue
        bl, br, tr, tl = _oriented_quad(m, coord, n, face)
        faces.append((bl, br, tl))
        faces.append((br, tr, tl))
    return validate(faces, m.n_vertices, tags=dict(m.tags))


def subdivide_alternate_diagonals(m: PolyhedralMap) -> PolyhedralMap:
    """Diagonals in a checkerboard half of the quads, no two sharing an edge.

    Needs the torus grid with an even column count AND an even vertical
    twist: with an odd twist (the drawn series' -3) the two quad layers
    re-glue so that some subdivided pair meets along the wrap, which is
    why the figure for this series carries a twist of -4.  The three-row
    Klein grid has an odd quad cycle along each column; no pattern exists.
    """
    surface, n, coord = _grid_info(m)
    if surface != "torus":
        raise ParityError(
            "three stacked quad layers admit no alternating pattern")
    series = m.tags["series"]
    twist = int(series.get("twist", -3))
    if n % 2:
        raise ParityError(f"column count {n} is odd; alternation cannot close")
    if twist % 2:
        raise ParityError(
            f"vertical twist {twist} is odd: the checkerboard meets itself "
            f"across the wrap; build the series with an even twist")
    by_coord = {tuple(rc): v for v, rc in coord.items()}
    b = lambda j: by_coord[(0, j % n)]
    mm = lambda j: by_coord[(1, j % n)]
    faces = []
    for j in range(n):
        # lower-layer quads split at odd j, upper at even j; diagonal
        # choices follow the drawn pattern
        if j % 2 == 1:
            faces.append((b(j), b(j + 1), mm(j)))
            faces.append((b(j + 1), mm(j + 1), mm(j)))
        else:
            faces.append((b(j), b(j + 1), mm(j + 1), mm(j)))
        if j % 2 == 0:
            faces.append((mm(j), mm(j + 1), b(j + 1 + twist)))
            faces.append((mm(j), b(j + 1 + twist), b(j + twist)))
        else:
            faces.append((mm(j), mm(j + 1), b(j + 1 + twist), b(j + twist)))
    return validate(faces, m.n_vertices, tags=dict(m.tags))


def subdivide_to_3636(m: PolyhedralMap) -> PolyhedralMap:
    """Overlay a (3,6,3,6) pattern on a (4^4) series map.

    One pair of vertices per carrier edge, one crossing vertex per
    center-class quad, one per cross edge between edge-class quads; the
    grid's own vertices disappear.  The pattern alternates quad classes
    across carrier edges, which fixes the admissible carrier direction
    per surface (rows on the torus, columns on the Klein bottle with an
    even column count).
    """
    surface, n, coord = _grid_info(m)
    quads = list(m.faces)
    if any(len(f) != 4 for f in quads):
        raise NotGridMap("input must be a quadrangulation")

    for horizontal_carriers in (True, False):
        coloring = _checkerboard(m, coord, n, horizontal_carriers)
        if coloring is not None:
            break
    else:
        raise ParityError("no carrier direction admits an alternating "
                          "center/edge quad coloring")

    def carrier(u, v):
        return _edge_is_horizontal(coord, u, v, n) == horizontal_carriers

    # orient each quad (c1L, c2L, c2R, c1R): carrier edges (c1L,c2L),(c1R,c2R)
    oriented = []
    for f in quads:
        if carrier(f[0], f[1]):
            c1l, c2l, c2r, c1r = f[0], f[1], f[2], f[3]
        else:
            c1l, c2l, c2r, c1r = f[1], f[2], f[3], f[0]
        assert carrier(c1l, c2l) and carrier(c1r, c2r)
        oriented.append((c1l, c2l, c2r, c1r))

    fresh = iter(range(10 ** 9))
    ov: dict[tuple[tuple[int, int], int], int] = {}
    for (u, v) in m.edges:
        if carrier(u, v):
            e = edge_key(u, v)
            ov[(e, u)] = next(fresh)
            ov[(e, v)] = next(fresh)
    bq: dict[int, int] = {}     # center quad index -> crossing vertex
    bh: dict[tuple[int, int], int] = {}  # cross edge -> crossing vertex
    for qi, f in enumerate(oriented):
        if coloring[qi] == 0:
            bq[qi] = next(fresh)
    for (u, v) in m.edges:
        if not carrier(u, v):
            fa, fb = m.edge_faces(u, v)
            if coloring[fa] == 1:
                bh[edge_key(u, v)] = next(fresh)

    # carrier edges of each vertex, for the crossing pairs
    vertex_carriers: dict[int, list[tuple[int, int]]] = {}
    for (u, v) in m.edges:
        if carrier(u, v):
            e = edge_key(u, v)
            vertex_carriers.setdefault(u, []).append(e)
            vertex_carriers.setdefault(v, []).append(e)
    if any(len(es) != 2 for es in vertex_carriers.values()):
        raise NotGridMap("carrier edges do not pair up at every vertex")

    faces = []
    for qi, (c1l, c2l, c2r, c1r) in enumerate(oriented):
        el, er = edge_key(c1l, c2l), edge_key(c1r, c2r)
        if coloring[qi] == 0:
            bb = bq[qi]
            faces.append((ov[(el, c1l)], ov[(el, c2l)], bb))
            faces.append((ov[(er, c1r)], ov[(er, c2r)], bb))
        else:
            eb, et = edge_key(c1l, c1r), edge_key(c2l, c2r)
            faces.append((ov[(el, c1l)], ov[(el, c2l)], bh[et],
                          ov[(er, c2r)], ov[(er, c1r)], bh[eb]))
    for e, crossing in bh.items():
        for p in e:
            e1, e2 = vertex_carriers[p]
            faces.append((ov[(e1, p)], ov[(e2, p)], crossing))
    for (u, v) in m.edges:
        if carrier(u, v):
            continue
        fa, fb = m.edge_faces(u, v)
        if coloring[fa] != 0:
            continue
        hexagon = []
        for p, first in ((u, fa), (v, fb)):
            e1, e2 = vertex_carriers[p]
            q1, q2 = _quads_of_carrier(m, e1), _quads_of_carrier(m, e2)
            # order the pair so the hexagon runs e(in fa), e(in fb), B(fb)...
            if fa in q1 and fb in q2:
                ea, eb_ = e1, e2
            else:
                ea, eb_ = e2, e1
            if p == u:
                hexagon += [ov[(ea, p)], ov[(eb_, p)], bq[fb]]
            else:
                hexagon += [ov[(eb_, p)], ov[(ea, p)], bq[fa]]
        faces.append(tuple(hexagon))

    # compact the labels
    used = sorted({v for f in faces for v in f})
    remap = {v: i for i, v in enumerate(used)}
    out_faces = [tuple(remap[v] for v in f) for f in faces]
    tags = {"series": {"family": "3,6,3,6", "surface": surface, "n": n}}
    return validate(out_faces, len(used), tags=tags)


def _quads_of_carrier(m: PolyhedralMap, e: tuple[int, int]) -> tuple[int, int]:
    return m.edge_faces(*e)


def _checkerboard(m: PolyhedralMap, coord, n, horizontal_carriers: bool):
    """2-color quads: equal across cross edges, opposite across carrier
    edges.  Returns the coloring list or None."""
    color = [-1] * m.n_faces
    color[0] = 0
    stack = [0]
    while stack:
        fi = stack.pop()
        face = m.faces[fi]
        for i in range(len(face)):
            u, v = face[i], face[(i + 1) % len(face)]
            fa, fb = m.edge_faces(u, v)
            other = fb if fa == fi else fa
            is_carrier = _edge_is_horizontal(coord, u, v, n) == horizontal_carriers
            want = color[fi] ^ 1 if is_carrier else color[fi]
            if color[other] == -1:
                color[other] = want
                stack.append(other)
            elif color[other] != want:
                return None
    return color


def build_3464_from_312sq(m: PolyhedralMap) -> PolyhedralMap:
    """Expand a (3,12,12) map into the (3,4,6,4) map on four times the
    vertices: each 12-gon gains an inner 12-vertex ring and a hexagonal
    core, each triangle edge a quad, and each edge between two 12-gons is
    replaced by a hexagon."""
    if is_semi_equivelar(m) != FaceSeqType((3, 12, 12)):
        raise NotTruncation("input must be a semi-equivelar (3,12,12) map")
    triangles = [f for f in m.faces if len(f) == 3]
    twelves = [f for f in m.faces if len(f) == 12]
    tri_edges = set()
    for f in triangles:
        p = len(f)
        for i in range(p):
            tri_edges.add(edge_key(f[i], f[(i + 1) % p]))

    fresh = iter(range(m.n_vertices, 10 ** 9))
    ring: dict[tuple[int, int], int] = {}   # (12-gon index, position) -> id
    core: dict[tuple[int, int], int] = {}
    aligned = []
    for wi, w in enumerate(twelves):
        # rotate so that (w[0], w[1]) is a triangle edge
        if edge_key(w[0], w[1]) not in tri_edges:
            w = w[1:] + w[:1]
        assert edge_key(w[0], w[1]) in tri_edges
        aligned.append(w)
        for i in range(12):
            ring[(wi, i)] = next(fresh)
        for k in range(6):
            core[(wi, k)] = next(fresh)

    faces = [tuple(f) for f in triangles]
    for wi, w in enumerate(aligned):
        faces.append(tuple(core[(wi, k)] for k in range(6)))
        for k in range(6):
            i = 2 * k
            # ring edge under a triangle edge: quad outside, triangle inside
            faces.append((w[i], w[i + 1], ring[(wi, i + 1)], ring[(wi, i)]))
            faces.append((ring[(wi, i)], ring[(wi, i + 1)], core[(wi, k)]))
            # ring edge under an old edge: quad toward the core
            faces.append((core[(wi, k)], ring[(wi, i + 1)],
                          ring[(wi, (i + 2) % 12)], core[(wi, (k + 1) % 6)]))
    # hexagons replacing each edge shared by two 12-gons
    position = {}
    for wi, w in enumerate(aligned):
        for i, v in enumerate(w):
            position[(wi, v)] = i
    face_to_twelve = {}
    for fi, f in enumerate(m.faces):
        if len(f) == 12:
            face_to_twelve[fi] = len(face_to_twelve)
    for (u, v) in m.edges:
        if (u, v) in tri_edges:
            continue
        fa, fb = m.edge_faces(u, v)
        w1, w2 = face_to_twelve[fa], face_to_twelve[fb]
        hexagon = (u, ring[(w1, position[(w1, u)])], ring[(w1, position[(w1, v)])],
                   v, ring[(w2, position[(w2, v)])], ring[(w2, position[(w2, u)])])
        faces.append(hexagon)
    used = sorted({x for f in faces for x in f})
    remap = {x: i for i, x in enumerate(used)}
    return validate([tuple(remap[x] for x in f) for f in faces], len(used))


def subdivide_3464_to_346(m: PolyhedralMap) -> PolyhedralMap:
    """Cut every quad of a (3,4,6,4) map by one diagonal so each vertex
    ends with four triangles.

    Each vertex lies in exactly two quads and needs the diagonal of
    exactly one of them, an XOR condition that propagates through the
    quad-sharing graph; each connected component leaves two consistent
    choices and the lexicographically smaller face set is taken.
    """
    if is_semi_equivelar(m) != FaceSeqType((3, 4, 6, 4)):
        raise NoConsistentDiagonalization(
            "input must be a semi-equivelar (3,4,6,4) map")
    quads = [fi for fi, f in enumerate(m.faces) if len(f) == 4]
    qindex = {fi: k for k, fi in enumerate(quads)}
    # vertex -> [(quad slot, position parity)]
    incidence: dict[int, list[tuple[int, int]]] = {}
    for fi in quads:
        face = m.faces[fi]
        for pos, v in enumerate(face):
            incidence.setdefault(v, []).append((qindex[fi], pos % 2))
    delta = [-1] * len(quads)
    components = []
    for start in range(len(quads)):
        if delta[start] != -1:
            continue
        comp = [start]
        delta[start] = 0
        stack = [start]
        while stack:
            k = stack.pop()
            for v in m.faces[quads[k]]:
                pair = incidence[v]
                if len(pair) != 2:
                    raise NoConsistentDiagonalization(
                        f"vertex {v} lies in {len(pair)} quads, expected 2")
                (k1, p1), (k2, p2) = pair
                other, po = ((k2, p2) if k1 == k else (k1, p1))
                ps = p1 if k1 == k else p2
                want = delta[k] ^ 1 ^ ps ^ po
                if delta[other] == -1:
                    delta[other] = want
                    comp.append(other)
                    stack.append(other)
                elif delta[other] != want:
                    raise NoConsistentDiagonalization(
                        "diagonal parity conflicts around a quad cycle")
        components.append(comp)

    def cut(fi: int, d: int):
        a, b, c, e = m.faces[fi]
        if d == 0:
            return [(a, b, c), (a, c, e)]
        return [(b, c, e), (b, e, a)]

    faces = [tuple(f) for f in m.faces if len(f) != 4]
    for comp in components:
        variants = []
        for flip in (0, 1):
            chunk = []
            for k in comp:
                chunk.extend(cut(quads[k], delta[k] ^ flip))
            variants.append(sorted(canonical_face(f) for f in chunk))
        chosen = 0 if variants[0] <= variants[1] else 1
        for k in comp:
            faces.extend(cut(quads[k], delta[k] ^ chosen))
    return validate(faces, m.n_vertices)
