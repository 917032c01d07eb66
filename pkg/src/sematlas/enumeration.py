"""Exhaustive classification of semi-equivelar maps of a given type.

The search mirrors the by-hand case analysis that classifies small maps:
fix one canonical closed fan around vertex 0, then repeatedly pick the
least vertex whose fan is still open and try every face that can extend
it, with fresh vertices always taking the least unused label.  Pruning
uses the exact per-size face budgets, the edge-in-two-faces rule, the
pairwise face-intersection condition, and the requirement that every
partial fan embeds consecutively in the target cyclic type.  Survivors
are deduplicated by canonical form, so the output lists every map of the
requested type and vertex count exactly once up to isomorphism.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .core import FaceSeqType, PolyhedralMap, cyclic_equal, edge_key, is_semi_equivelar
from .classify import canonical_form

BUDGET_ENV = "SEM_ATLAS_BUDGET"

#: The eight face-sequence types with mixed face sizes admitting flat maps.
ALL_FLAT_TYPES = (
    FaceSeqType((3, 3, 3, 4, 4)),
    FaceSeqType((3, 3, 4, 3, 4)),
    FaceSeqType((3, 4, 6, 4)),
    FaceSeqType((4, 8, 8)),
    FaceSeqType((3, 3, 3, 3, 6)),
    FaceSeqType((3, 6, 3, 6)),
    FaceSeqType((3, 12, 12)),
    FaceSeqType((4, 6, 12)),
)

#: One-size types; their flat series are produced by generators instead.
EQUIVELAR_TYPES = (
    FaceSeqType((3, 3, 3, 3, 3, 3)),
    FaceSeqType((4, 4, 4, 4)),
    FaceSeqType((6, 6, 6)),
)


class BudgetExceeded(RuntimeError):
    """Search node budget ran out before the cell was exhausted."""


@dataclass(frozen=True)
class Infeasible:
    """Witness that no map of the type exists on the vertex count."""

    reason: str

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class FaceCountProfile:
    counts: tuple[tuple[int, int], ...]  # (face size, count), size-sorted
    n_edges: int

    def count(self, size: int) -> int:
        return dict(self.counts).get(size, 0)


def face_counts(t: FaceSeqType, n: int):
    """Per-size face counts forced by the type, or Infeasible.

    A vertex of type ``t`` meets mult(p) faces of size p, and a p-gon has
    p vertices, so count(p) = n * mult(p) / p; any non-integral count
    rules the pair (t, n) out.
    """
    if n < 1:
        return Infeasible("vertex count must be positive")
    counts = []
    for size in sorted(set(t.sizes)):
        num = n * t.multiplicity(size)
        if num % size:
            return Infeasible(
                f"count of {size}-gons would be {num}/{size}, not an integer")
        counts.append((size, num // size))
    if (n * t.degree) % 2:
        return Infeasible(f"odd incidence total {n * t.degree}")
    return FaceCountProfile(tuple(counts), (n * t.degree) // 2)


def star_vertex_bound(t: FaceSeqType) -> int:
    """Vertices needed by the closed star of a single vertex.

    All link vertices of one vertex are distinct in a polyhedral map, so
    the star needs 1 + sum(p - 2) labels; identifications cannot reduce it.
    """
    return 1 + sum(p - 2 for p in t.sizes)


def min_vertices_gate(t: FaceSeqType, n_max: int) -> list[int]:
    """All vertex counts <= n_max passing divisibility and the star bound."""
    lo = star_vertex_bound(t)
    return [n for n in range(lo, n_max + 1)
            if not isinstance(face_counts(t, n), Infeasible)]


def gate_reason(t: FaceSeqType, n_max: int) -> str:
    """Human-readable reason when the gate rejects every n <= n_max."""
    lo = star_vertex_bound(t)
    if lo > n_max:
        return (f"the closed star of one vertex already needs {lo} vertices, "
                f"more than {n_max}")
    divisors = [p // _gcd(p, t.multiplicity(p)) for p in set(t.sizes)]
    return (f"no n in {lo}..{n_max} gives integral face counts "
            f"(n must be a multiple of {_lcm_all(divisors)} and >= {lo})")


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _lcm_all(xs: Iterable[int]) -> int:
    out = 1
    for x in xs:
        out = out * x // _gcd(out, x)
    return out


# -- the backtracking search --------------------------------------------------


@lru_cache(maxsize=None)
def _embeddings(sizes: tuple[int, ...], t: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
    """(offset, direction) pairs embedding ``sizes`` as a consecutive run
    of the cyclic sequence ``t``."""
    d = len(t)
    k = len(sizes)
    if k > d:
        return ()
    out = []
    for direction in (1, -1):
        for off in range(d):
            if all(sizes[i] == t[(off + direction * i) % d] for i in range(k)):
                out.append((off, direction))
    return tuple(out)


@lru_cache(maxsize=None)
def _next_sizes(sizes: tuple[int, ...], t: tuple[int, ...]) -> frozenset[int]:
    """Face sizes that may follow ``sizes`` when the fan keeps growing."""
    d = len(t)
    k = len(sizes)
    return frozenset(t[(off + direction * k) % d]
                     for off, direction in _embeddings(sizes, t))


class _Searcher:
    """Mutable depth-first search state with explicit undo.

    ``fast_prunes`` guards the two purely-speed prunes (fan-extension
    lookahead and the partial face-intersection check during candidate
    generation); the search is complete with or without them, which the
    test suite cross-checks on small cells.
    """

    def __init__(self, t: FaceSeqType, n: int, profile: FaceCountProfile,
                 budget: Optional[int], fast_prunes: bool = True):
        self.t = t.sizes
        self.deg = len(t.sizes)
        self.n = n
        self.budget = budget
        self.fast_prunes = fast_prunes
        self.nodes = 0
        self.faces: list[tuple[int, ...]] = []
        self.face_sets: list[frozenset[int]] = []
        self.edge_uses: dict[tuple[int, int], int] = {}
        self.vertex_faces: list[list[int]] = [[] for _ in range(n)]
        # an open fragment is (neighbors tuple, sizes tuple); a closed fan
        # is stored as the single entry ("closed",)
        self.fragments: list[list] = [[] for _ in range(n)]
        self.used = 0
        self.budgets = {size: cnt for size, cnt in profile.counts}
        self.results: list[PolyhedralMap] = []
        self.seen_forms: set[bytes] = set()

    # -- fragment plumbing --

    def _merge_corner(self, v: int, a: int, b: int, size: int):
        """Insert the corner a-v-b spanned by a ``size``-gon into v's fans.

        Returns an undo record or the string "fail".
        """
        frags = self.fragments[v]
        if frags and frags[0] == ("closed",):
            return "fail"
        ia = ib = -1
        for i, (nbrs, _sizes) in enumerate(frags):
            if nbrs[0] == a or nbrs[-1] == a:
                ia = i
            if nbrs[0] == b or nbrs[-1] == b:
                ib = i
        old = list(frags)
        if ia == -1 and ib == -1:
            frags.append(((a, b), (size,)))
        elif ia != -1 and ib != -1 and ia == ib:
            nbrs, sizes = frags[ia]
            # the corner joins the two ends of one fragment: the fan closes
            if nbrs[-1] == a and nbrs[0] == b:
                cyc = sizes + (size,)
            elif nbrs[0] == a and nbrs[-1] == b:
                cyc = tuple(reversed(sizes)) + (size,)
            else:
                return "fail"
            if len(cyc) != self.deg or not cyclic_equal(cyc, self.t):
                return "fail"
            frags[:] = [("closed",)]
            return old
        else:
            nbrs_a = sizes_a = None
            if ia != -1:
                nbrs_a, sizes_a = frags[ia]
                if nbrs_a[0] == a:
                    nbrs_a, sizes_a = tuple(reversed(nbrs_a)), tuple(reversed(sizes_a))
            nbrs_b = sizes_b = None
            if ib != -1:
                nbrs_b, sizes_b = frags[ib]
                if nbrs_b[-1] == b:
                    nbrs_b, sizes_b = tuple(reversed(nbrs_b)), tuple(reversed(sizes_b))
            if nbrs_a is None:
                nbrs_a, sizes_a = (a,), ()
            if nbrs_b is None:
                nbrs_b, sizes_b = (b,), ()
            merged = (nbrs_a + nbrs_b, sizes_a + (size,) + sizes_b)
            keep = [f for i, f in enumerate(frags) if i not in (ia, ib)]
            keep.append(merged)
            frags[:] = keep
        # prune: fragments must still fit the cyclic type
        total_faces = 0
        for nbrs, sizes in (f for f in frags if f != ("closed",)):
            if not _embeddings(sizes, self.t):
                frags[:] = old
                return "fail"
            total_faces += len(sizes)
        if frags != [("closed",)] and total_faces + len(frags) > self.deg:
            frags[:] = old
            return "fail"
        return old

    # -- candidate application --

    def _try_face(self, face: tuple[int, ...]) -> Optional[list]:
        """Commit ``face`` if every incremental condition holds."""
        p = len(face)
        fset = frozenset(face)
        # pairwise intersection with existing faces
        shared: dict[int, int] = {}
        for v in face:
            if v < self.used:
                for fi in self.vertex_faces[v]:
                    shared[fi] = shared.get(fi, 0) + 1
        for fi, cnt in shared.items():
            if cnt < 2:
                continue
            if cnt > 2:
                return None
            common = fset & self.face_sets[fi]
            u, w = sorted(common)
            if (u, w) not in _edge_set(self.faces[fi]) or (u, w) not in _edge_set(face):
                return None
        undo: list = [("faces",)]
        self.faces.append(face)
        self.face_sets.append(fset)
        fid = len(self.faces) - 1
        ok = True
        for i in range(p):
            e = edge_key(face[i], face[(i + 1) % p])
            uses = self.edge_uses.get(e, 0)
            if uses >= 2:
                ok = False
                break
            self.edge_uses[e] = uses + 1
            undo.append(("edge", e))
        if ok:
            for v in face:
                self.vertex_faces[v].append(fid)
                undo.append(("vface", v))
                if len(self.vertex_faces[v]) > self.deg:
                    ok = False
                    break
        if ok:
            for i, v in enumerate(face):
                a, b = face[i - 1], face[(i + 1) % p]
                rec = self._merge_corner(v, a, b, p)
                if rec == "fail":
                    ok = False
                    break
                undo.append(("frag", v, rec))
        if not ok:
            self._undo(undo)
            return None
        return undo

    def _undo(self, undo: list) -> None:
        for rec in reversed(undo):
            kind = rec[0]
            if kind == "faces":
                self.faces.pop()
                self.face_sets.pop()
            elif kind == "edge":
                e = rec[1]
                if self.edge_uses[e] == 1:
                    del self.edge_uses[e]
                else:
                    self.edge_uses[e] -= 1
            elif kind == "vface":
                self.vertex_faces[rec[1]].pop()
            elif kind == "frag":
                self.fragments[rec[1]][:] = rec[2]

    # -- slot selection and candidate generation --

    def _open_vertex(self) -> Optional[tuple[int, int, tuple[int, ...]]]:
        """Least open vertex, its chosen open end, and allowed next sizes."""
        for v in range(self.used):
            frags = self.fragments[v]
            if not frags or frags[0] == ("closed",):
                continue
            nbrs, sizes = min(frags)
            # extend at the end with the smaller neighbour label
            if nbrs[0] <= nbrs[-1]:
                nbrs, sizes = tuple(reversed(nbrs)), tuple(reversed(sizes))
            end = nbrs[-1]
            allowed = tuple(sorted(
                s for s in _next_sizes(sizes, self.t)
                if self.budgets.get(s, 0) > 0
                and (not self.fast_prunes or self._extension_ok(end, v, s))))
            return (v, end, allowed)
        return None

    def _extension_ok(self, vertex: int, via: int, size: int) -> bool:
        """Whether a ``size``-gon can join ``vertex``'s fan across the edge
        to ``via``.  Valid only when that edge already carries one face."""
        for frag in self.fragments[vertex]:
            if frag == ("closed",):
                return False
            nbrs, sizes = frag
            if nbrs[-1] == via:
                return size in _next_sizes(sizes, self.t)
            if nbrs[0] == via:
                return size in _next_sizes(tuple(reversed(sizes)), self.t)
        return False  # saturated interior edge; cannot host another face

    def _candidates(self, v: int, end: int, size: int):
        """Faces of ``size`` gluing onto the open edge {v, end}, in
        lexicographic order with fresh labels taking the least unused."""
        out: list[tuple[int, ...]] = []
        prefix = [end, v]
        mult = self.t.count(size)

        def admissible(prev: int, cand: int) -> bool:
            e = edge_key(prev, cand)
            uses = self.edge_uses.get(e, 0)
            if uses >= 2:
                return False
            if cand >= self.used:
                return True
            if len(self.vertex_faces[cand]) >= self.deg:
                return False
            if uses == 1 and self.fast_prunes:
                # the new face sits next to the edge's one face in both fans
                if not self._extension_ok(cand, prev, size):
                    return False
                if not self._extension_ok(prev, cand, size):
                    return False
            pcount = 0
            for fi in self.vertex_faces[cand]:
                if len(self.faces[fi]) == size:
                    pcount += 1
                if not self.fast_prunes:
                    continue
                # partial face-intersection check: once two shared vertices
                # sit at non-adjacent prefix positions (interior), the faces
                # can never meet in just an edge
                fs = self.face_sets[fi]
                others = [i for i, u in enumerate(prefix) if u in fs]
                if not others:
                    continue
                if len(others) >= 2:
                    return False
                i = others[0]
                j = len(prefix)
                if i == j - 1:
                    if edge_key(prefix[i], cand) not in _edge_set(self.faces[fi]):
                        return False
                elif i != 0:
                    return False
            if pcount >= mult:
                return False
            return True

        def extend(pos: int, used_now: int):
            # face cycle: (end, v, w, x1, ..., x_{size-3}); pos counts
            # filled positions beyond the prefix
            if pos == size - 2:
                last = prefix[-1]
                e = edge_key(last, end)
                uses = self.edge_uses.get(e, 0)
                if uses >= 2:
                    return
                if uses == 1 and last < self.used and self.fast_prunes and (
                        not self._extension_ok(last, end, size)
                        or not self._extension_ok(end, last, size)):
                    return
                out.append(tuple(prefix))
                return
            prev = prefix[-1]
            cap = min(used_now + 1, self.n)
            for cand in range(cap):
                if cand in prefix:
                    continue
                if not admissible(prev, cand):
                    continue
                prefix.append(cand)
                extend(pos + 1, max(used_now, cand + 1))
                prefix.pop()

        extend(0, self.used)
        return out

    # -- main recursion --

    def run(self) -> None:
        self._initial_link()
        self._recurse()

    def _initial_link(self) -> None:
        """Fix the canonical closed fan around vertex 0 (the WLOG step)."""
        t = self.t
        self.used = 2
        link0 = [1]
        faces = []
        for i, p in enumerate(t):
            interior = list(range(self.used, self.used + p - 3))
            self.used += p - 3
            if i < len(t) - 1:
                nxt = self.used
                self.used += 1
            else:
                nxt = 1
            faces.append((0, link0[-1], *interior, nxt))
            link0.append(nxt)
        for f in faces:
            self.budgets[len(f)] -= 1
            assert self.budgets[len(f)] >= 0, "star exceeds face budget"
            undo = self._try_face(f)
            assert undo is not None, "canonical star must glue cleanly"

    def _recurse(self) -> None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded(
                f"exceeded {self.budget} search nodes (set {BUDGET_ENV})")
        slot = self._open_vertex()
        if slot is None:
            self._emit_if_complete()
            return
        v, end, allowed = slot
        for size in allowed:
            for face in self._candidates(v, end, size):
                # fresh labels inside the face advance the used counter
                new_used = max(self.used, 1 + max(face))
                self.budgets[size] -= 1
                undo = self._try_face(face)
                if undo is not None:
                    old_used = self.used
                    self.used = new_used
                    self._recurse()
                    self.used = old_used
                    self._undo(undo)
                self.budgets[size] += 1

    def _emit_if_complete(self) -> None:
        if self.used != self.n:
            return
        if any(vv for vv in self.budgets.values()):
            return
        m = PolyhedralMap(self.n, list(self.faces))
        got = is_semi_equivelar(m)
        assert got == FaceSeqType(self.t), (
            f"search emitted a map of type {got}, wanted {FaceSeqType(self.t)}")
        form = canonical_form(m).form
        if form not in self.seen_forms:
            self.seen_forms.add(form)
            self.results.append(m)


def _edge_set(face: Sequence[int]) -> set[tuple[int, int]]:
    p = len(face)
    return {edge_key(face[i], face[(i + 1) % p]) for i in range(p)}


def _env_budget() -> Optional[int]:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else None


def enumerate_sems(t: FaceSeqType, n: int,
                   budget: Optional[int] = None) -> list[PolyhedralMap]:
    """All maps of type ``t`` on ``n`` vertices, one per isomorphism class.

    Deterministic: repeated runs return identical maps in identical order.
    ``budget`` (or the SEM_ATLAS_BUDGET environment variable) caps the
    number of search nodes; exceeding it raises BudgetExceeded.
    """
    profile = face_counts(t, n)
    if isinstance(profile, Infeasible):
        return []
    if n < star_vertex_bound(t):
        return []
    searcher = _Searcher(t, n, profile, budget if budget is not None else _env_budget())
    searcher.run()
    return searcher.results


@dataclass
class ReportRow:
    type: FaceSeqType
    n: int
    total: int
    orientable: int
    non_orientable: int
    maps: list[PolyhedralMap] = field(repr=False, default_factory=list)
    infeasible_reason: Optional[str] = None


def classify_all(n_max: int, types: Optional[Sequence[FaceSeqType]] = None,
                 budget: Optional[int] = None) -> list[ReportRow]:
    """Classification table over the given types for all feasible n <= n_max."""
    from .core import is_orientable, euler_characteristic  # local: avoid cycle

    rows: list[ReportRow] = []
    for t in (types if types is not None else ALL_FLAT_TYPES):
        ns = min_vertices_gate(t, n_max)
        if not ns:
            rows.append(ReportRow(t, 0, 0, 0, 0,
                                  infeasible_reason=gate_reason(t, n_max)))
            continue
        for n in ns:
            maps = enumerate_sems(t, n, budget=budget)
            orient = sum(1 for m in maps if is_orientable(m))
            for m in maps:
                assert euler_characteristic(m) == 0, (
                    f"enumerated map of type {t} on {n} vertices has "
                    f"chi = {euler_characteristic(m)}; closed flat types force 0")
            rows.append(ReportRow(t, n, len(maps), orient, len(maps) - orient,
                                  maps=maps))
    return rows
