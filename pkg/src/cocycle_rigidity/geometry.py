"""Cayley-graph geometry over an element oracle.

Everything here is driven by one lazily grown breadth-first search from the
identity.  Vertices of each sphere are discovered in shortlex order of their
generator words, so the first parent recorded for a vertex spells its
lexicographically minimal geodesic word.
"""

from __future__ import annotations

import os
import threading
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import PreconditionError, RadiusExceeded
from .groups import Group

DEFAULT_MAX_RADIUS = 64


def default_max_radius() -> int:
    value = os.environ.get("COCYCLE_MAX_RADIUS")
    return int(value) if value else DEFAULT_MAX_RADIUS


@dataclass(frozen=True)
class GeodesicPath:
    """A map from the integer interval ``start .. start+len(vertices)-1`` into G."""

    start: int
    vertices: tuple

    @property
    def stop(self) -> int:
        return self.start + len(self.vertices) - 1

    @property
    def domain(self) -> range:
        return range(self.start, self.stop + 1)

    def __getitem__(self, n: int):
        if not self.start <= n <= self.stop:
            raise IndexError(n)
        return self.vertices[n - self.start]

    def __len__(self) -> int:
        return len(self.vertices)

    def restrict(self, lo: int, hi: int) -> "GeodesicPath":
        if lo < self.start or hi > self.stop:
            raise IndexError((lo, hi))
        return GeodesicPath(lo, self.vertices[lo - self.start : hi - self.start + 1])

    def image(self, lo: int | None = None, hi: int | None = None) -> list:
        lo = self.start if lo is None else lo
        hi = self.stop if hi is None else hi
        return [self[n] for n in range(lo, hi + 1)]


@dataclass
class EndsReport:
    r: int
    R_max: int
    unbounded: int
    bounded: int
    bounded_elements: list = field(default_factory=list)
    N_of_r: int = 0
    caveat: bool = False


class CayleyExplorer:
    """Memoized BFS over the Cayley graph of ``group``.

    Growth is lazy and capped at ``max_radius``; anything that would need a
    larger ball raises :class:`RadiusExceeded`.  Once :meth:`prepopulate`
    has run to radius r, queries at or below r only read the caches.
    """

    def __init__(self, group: Group, max_radius: int | None = None):
        self.group = group
        self.max_radius = default_max_radius() if max_radius is None else max_radius
        e = group.identity
        self._norm = {e: 0}
        self._parent = {}
        self._order = {e: 0}
        self._spheres = [[e]]
        self._exhausted = len(group.generators) == 0
        self._lock = threading.RLock()
        self._ends_cache = {}
        self._window_cache = {}

    # -- growth -----------------------------------------------------------

    @property
    def radius(self) -> int:
        """Largest radius whose sphere has been fully enumerated."""
        return len(self._spheres) - 1

    @property
    def exhausted(self) -> bool:
        """True once BFS has enumerated the whole (finite) group."""
        return self._exhausted

    def _grow(self) -> bool:
        if self._exhausted:
            return False
        if self.radius >= self.max_radius:
            raise RadiusExceeded(
                f"exploration of {self.group.spec} would exceed the maximum radius {self.max_radius}",
                self.max_radius,
            )
        g_mul = self.group.mul
        gens = self.group.generators
        nxt = []
        level = self.radius + 1
        for p in self._spheres[-1]:
            for i, s in enumerate(gens):
                g = g_mul(p, s)
                if g not in self._norm:
                    self._norm[g] = level
                    self._parent[g] = (i, p)
                    self._order[g] = len(self._order)
                    nxt.append(g)
        if not nxt:
            self._exhausted = True
            return False
        self._spheres.append(nxt)
        return True

    def prepopulate(self, r: int) -> None:
        with self._lock:
            while self.radius < r and self._grow():
                pass

    def _require(self, r: int) -> None:
        if r > self.max_radius:
            raise RadiusExceeded(f"radius {r} exceeds the maximum radius {self.max_radius}", r)
        if self.radius < r:
            self.prepopulate(r)

    # -- metric -----------------------------------------------------------

    def word_norm(self, g) -> int:
        n = self._norm.get(g)
        if n is not None:
            return n
        with self._lock:
            while g not in self._norm:
                if not self._grow():
                    raise PreconditionError(
                        f"{self.group.label(g)} is not reachable from the generators of {self.group.spec}"
                    )
            return self._norm[g]

    def distance(self, g, h) -> int:
        return self.word_norm(self.group.mul(self.group.inv(g), h))

    def order_key(self, g) -> int:
        """Position of ``g`` in the canonical (shortlex) enumeration."""
        self.word_norm(g)
        return self._order[g]

    def sphere(self, r: int) -> list:
        self._require(r)
        if r > self.radius:
            return []
        return list(self._spheres[r])

    def ball(self, r: int) -> list:
        """Elements of norm at most r, in canonical BFS order."""
        self._require(r)
        out = []
        for level in self._spheres[: r + 1]:
            out.extend(level)
        return out

    def sphere_sizes(self, r: int) -> list[int]:
        self._require(r)
        return [len(s) for s in self._spheres[: r + 1]] + [0] * max(0, r - self.radius)

    # -- words --------------------------------------------------------------

    def word(self, g) -> list[int]:
        """Generator indices of the lexicographically minimal geodesic word for g."""
        self.word_norm(g)
        out = []
        while g in self._parent:
            i, g = self._parent[g]
            out.append(i)
        out.reverse()
        return out

    def word_label(self, g) -> str:
        w = self.word(g)
        if not w:
            return "e"
        names = self.group.generator_names
        return ".".join(names[i] for i in w)

    def parse_word(self, text: str):
        """Evaluate a word label (any word, not necessarily canonical)."""
        if text == "e":
            return self.group.identity
        return self.group.product(
            self.group.generators[self.group.generator_index(name)] for name in text.split(".")
        )

    def translated(self, h, sites: tuple, key=None) -> tuple:
        """``h * sites``, memoized on ``(h, key)``; ``key`` names the site tuple."""
        if key is None:
            return tuple(self.group.mul(h, b) for b in sites)
        ck = (key, h)
        out = self._window_cache.get(ck)
        if out is None:
            mul = self.group.mul
            out = tuple(mul(h, b) for b in sites)
            self._window_cache[ck] = out
        return out

    # -- geodesics ----------------------------------------------------------

    def geodesic_segment(self, g) -> GeodesicPath:
        mul = self.group.mul
        gens = self.group.generators
        verts = [self.group.identity]
        for i in self.word(g):
            verts.append(mul(verts[-1], gens[i]))
        return GeodesicPath(0, tuple(verts))

    def is_path(self, path: GeodesicPath) -> bool:
        return all(self.distance(a, b) == 1 for a, b in zip(path.vertices, path.vertices[1:]))

    def is_geodesic(self, path: GeodesicPath) -> bool:
        """Exhaustive check of d(path(m), path(n)) = |m - n|."""
        v = path.vertices
        for j in range(len(v)):
            for k in range(j + 1, len(v)):
                if self.distance(v[j], v[k]) != k - j:
                    return False
        return True

    def extend_biinfinite_geodesic(self, n: int, lookahead: int = 2) -> GeodesicPath:
        """Centered geodesic on ``-n..n`` cut from one fixed biinfinite geodesic.

        Centered segments (gamma(0) = identity) form a prefix tree when grown
        one level at a time, a level adding one vertex on each side.  At every
        level the lexicographically least child (right step, then left step,
        by generator index) is taken among those that still extend
        ``lookahead`` further levels.  Each level depends only on the earlier
        ones, so the output for n is the restriction of the output for n + 1.
        """
        if n < 0:
            raise ValueError("n must be non-negative")
        self._require(2 * (n + lookahead))
        gens = self.group.generators
        mul = self.group.mul
        e = self.group.identity
        left, right = e, e

        def extends(lft, rgt, level, depth) -> bool:
            if depth == 0:
                return True
            for s in gens:
                new_left = mul(lft, s)
                for t in gens:
                    new_right = mul(rgt, t)
                    if self.distance(new_left, new_right) == 2 * level + 2:
                        if extends(new_left, new_right, level + 1, depth - 1):
                            return True
            return False

        lefts, rights = [e], [e]
        for level in range(n):
            chosen = None
            for t in gens:
                new_right = mul(right, t)
                for s in gens:
                    new_left = mul(left, s)
                    if self.distance(new_left, new_right) != 2 * level + 2:
                        continue
                    if extends(new_left, new_right, level + 1, lookahead):
                        chosen = (new_left, new_right)
                        break
                if chosen:
                    break
            if chosen is None:
                raise PreconditionError(
                    f"no geodesic of span {2 * level + 2} through the identity extends "
                    f"{lookahead} more levels in {self.group.spec}"
                )
            left, right = chosen
            lefts.append(left)
            rights.append(right)
        verts = tuple(reversed(lefts[1:])) + tuple(rights)
        return GeodesicPath(-n, verts)

    # -- neighborhoods ------------------------------------------------------

    def l_neighborhood(self, T: Iterable, L: int) -> list:
        """``{g : d(g, t) <= L for some t in T}``, ordered canonically."""
        T = list(T)
        if not T:
            return []
        far = max(self.word_norm(t) for t in T)
        self._require(far + L)
        ball = self.ball(L)
        mul = self.group.mul
        out = {mul(t, b) for t in T for b in ball}
        return sorted(out, key=self.order_key)

    def half_geodesic_intersection_check(self, path: GeodesicPath, L: int):
        """Test that the L-neighborhoods of the two halves meet inside B(3L).

        Returns ``(ok, witness)``; ``witness`` is an offending element or None.
        """
        n = min(-path.start, path.stop)
        if n < 2 * L:
            raise PreconditionError(f"need a geodesic on -n..n with n >= 2L = {2 * L}, got n = {n}")
        if path[0] != self.group.identity:
            raise PreconditionError("geodesic must pass through the identity at index 0")
        forward = self.l_neighborhood(path.image(0, n), L)
        backward = set(self.l_neighborhood(path.image(-n, 0), L))
        for g in forward:
            if g in backward and self.word_norm(g) > 3 * L:
                return False, g
        return True, None

    # -- ends ---------------------------------------------------------------

    def component_report(self, r: int, R_max: int | None = None) -> EndsReport:
        """Connected components of B(R_max) minus B(r) in the explored Cayley graph.

        A component counts as unbounded when it reaches norm R_max.  The
        classification of bounded components is exact; unbounded ones are only
        certified up to the cutoff, which sets ``caveat``.
        """
        if R_max is None:
            R_max = 2 * r + 4
        if R_max <= r:
            raise PreconditionError(f"R_max = {R_max} must exceed r = {r}")
        key = (r, R_max)
        cached = self._ends_cache.get(key)
        if cached is not None:
            return cached
        self._require(R_max)
        outer = [g for level in self._spheres[r + 1 : R_max + 1] for g in level]
        parent = {g: g for g in outer}

        def find(g):
            root = g
            while parent[root] != root:
                root = parent[root]
            while parent[g] != root:
                parent[g], g = root, parent[g]
            return root

        mul = self.group.mul
        gens = self.group.generators
        for g in outer:
            for s in gens:
                h = mul(g, s)
                if h in parent:
                    a, b = find(g), find(h)
                    if a != b:
                        if self._order[a] < self._order[b]:
                            parent[b] = a
                        else:
                            parent[a] = b
        components = {}
        for g in outer:
            components.setdefault(find(g), []).append(g)
        unbounded = 0
        bounded_elements = []
        bounded = 0
        for members in components.values():
            if any(self._norm[g] == R_max for g in members):
                unbounded += 1
            else:
                bounded += 1
                bounded_elements.extend(members)
        bounded_elements.sort(key=self._order.__getitem__)
        N = max([r] + [self._norm[g] for g in bounded_elements])
        report = EndsReport(
            r=r,
            R_max=R_max,
            unbounded=unbounded,
            bounded=bounded,
            bounded_elements=bounded_elements,
            N_of_r=N,
            caveat=unbounded > 0,
        )
        self._ends_cache[key] = report
        return report

    def N(self, r: int, R_max: int | None = None) -> int:
        return self.component_report(r, R_max).N_of_r

    def path_avoiding_ball(self, start, goal, r: int, R_max: int) -> GeodesicPath | None:
        """Shortest path from ``start`` to ``goal`` through vertices of norm in (r, R_max].

        ``None`` means no such path exists inside B(R_max).
        """
        for g in (start, goal):
            n = self.word_norm(g)
            if n > R_max:
                raise RadiusExceeded(f"{self.group.label(g)} lies outside B({R_max})", R_max)
            if n <= r:
                raise PreconditionError(f"{self.group.label(g)} lies inside B({r})")
        self._require(R_max)
        mul = self.group.mul
        gens = self.group.generators
        prev = {start: None}
        queue = deque([start])
        while queue:
            g = queue.popleft()
            if g == goal:
                break
            for s in gens:
                h = mul(g, s)
                if h in prev:
                    continue
                n = self._norm.get(h)
                if n is None or n <= r or n > R_max:
                    continue
                prev[h] = g
                queue.append(h)
        if goal not in prev:
            return None
        verts = [goal]
        while prev[verts[-1]] is not None:
            verts.append(prev[verts[-1]])
        verts.reverse()
        return GeodesicPath(0, tuple(verts))


def metric_violations(explorer: CayleyExplorer, elements: Sequence) -> list[str]:
    """Exhaustively check the metric axioms and left-invariance of d on ``elements``."""
    G = explorer.group
    d = explorer.distance
    label = G.label
    out = []
    for g in elements:
        if d(g, g) != 0:
            out.append(f"d({label(g)},{label(g)}) != 0")
        for h in elements:
            dgh = d(g, h)
            if dgh != d(h, g):
                out.append(f"asymmetric at {label(g)}, {label(h)}")
            if g != h and dgh == 0:
                out.append(f"zero distance between distinct {label(g)}, {label(h)}")
            for k in elements:
                if dgh > d(g, k) + d(k, h):
                    out.append(f"triangle inequality fails at {label(g)}, {label(k)}, {label(h)}")
                if d(G.mul(k, g), G.mul(k, h)) != dgh:
                    out.append(f"left-invariance fails at {label(k)}; {label(g)}, {label(h)}")
    return out
