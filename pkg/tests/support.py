"""Shared builders for seeded twisted cocycles and small brute-force oracles."""

import itertools
import random
from collections import deque

from cocycle_rigidity.cocycle import make_twisted, random_commuting_images, random_transfer
from cocycle_rigidity.formats import parse_group
from cocycle_rigidity.geometry import CayleyExplorer
from cocycle_rigidity.shift import Alphabet

S3_LABELS = ["()", "(0 1)", "(0 2)", "(1 2)", "(0 1 2)", "(0 2 1)"]


def target_pool(H):
    if H.spec == "S(3)":
        return [H.parse_label(s) for s in S3_LABELS]
    if H.spec == "Z^1":
        return [(k,) for k in range(-3, 4)]
    raise ValueError(H.spec)


class TwistedCase:
    """A twisted coboundary ``b0(sx) phi0(s) b0(x)^-1`` with known ingredients."""

    def __init__(self, seed, target="S(3)", rho=1, group="Z^2", symbols="01"):
        rng = random.Random(seed)
        self.G = parse_group(group)
        self.H = parse_group(target)
        self.E = CayleyExplorer(self.G)
        self.A = Alphabet.of(symbols)
        pool = target_pool(self.H)
        images = random_commuting_images(rng, self.H, len(self.G.generators) // 2, pool)
        self.phi0 = dict(enumerate(images))
        self.rho = rho
        self.inner = tuple(self.E.ball(rho))
        self.b0 = random_transfer(rng, self.A, len(self.inner), pool)
        self.c = make_twisted(self.phi0, self.b0, rho, self.E, self.A, self.H)
        self.h0 = self.b0[(self.A.zero_index,) * len(self.inner)]

    def phi0_of(self, g):
        """phi0 extended to G = Z^d as a homomorphism."""
        H = self.H
        out = H.identity
        for i, n in enumerate(g):
            out = H.mul(out, H.pow(self.phi0[i], n))
        return out

    def expected_phi(self, g):
        H = self.H
        return H.mul(H.mul(self.h0, self.phi0_of(g)), H.inv(self.h0))

    def b0_of(self, x):
        return self.b0[x.read(self.inner)]

    def expected_b(self, x):
        return self.H.mul(self.b0_of(x), self.H.inv(self.h0))


def bfs_norms(group, radius):
    """Word norms by plain breadth-first search, independent of the explorer."""
    dist = {group.identity: 0}
    queue = deque([group.identity])
    while queue:
        g = queue.popleft()
        if dist[g] == radius:
            continue
        for s in group.generators:
            h = group.mul(g, s)
            if h not in dist:
                dist[h] = dist[g] + 1
                queue.append(h)
    return dist


def count_components(group, r, R):
    """(unbounded, bounded) components of B(R) minus B(r), by flood fill."""
    dist = bfs_norms(group, R)
    outside = {g for g, n in dist.items() if n > r}
    seen = set()
    unbounded = bounded = 0
    for start in outside:
        if start in seen:
            continue
        seen.add(start)
        stack = [start]
        reaches = False
        while stack:
            g = stack.pop()
            reaches |= dist[g] == R
            for s in group.generators:
                h = group.mul(g, s)
                if h in outside and h not in seen:
                    seen.add(h)
                    stack.append(h)
        if reaches:
            unbounded += 1
        else:
            bounded += 1
    return unbounded, bounded


def lattice_ball(d, r):
    return [v for v in itertools.product(range(-r, r + 1), repeat=d) if sum(map(abs, v)) <= r]
