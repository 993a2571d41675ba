"""Continuous H-valued cocycles over A^G given by local rules.

A cocycle is stored through its values on the positive generators, each a
function of the pattern of x on the window B(L).  Every other value is
obtained by telescoping along the canonical geodesic word; inverse
generators use ``c(s^-1, x) = c(s, s^-1 x)^-1``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .errors import EnumerationCapExceeded, PreconditionError
from .geometry import CayleyExplorer, GeodesicPath
from .groups import Group
from .shift import (
    DEFAULT_ENUMERATION_CAP,
    Alphabet,
    Configuration,
    enumerate_patterns,
    pattern_count,
    random_configuration,
)

EXHAUSTIVE_WINDOW_LIMIT = 1 << 16
EXHAUSTIVE_BUDGET = 1 << 18


class TableRule:
    """Rule given by a complete table from window patterns to H elements."""

    kind = "table"

    def __init__(self, table: Mapping[tuple, object]):
        self.table = dict(table)

    def __call__(self, values: tuple):
        return self.table[values]

    def __eq__(self, other):
        return isinstance(other, TableRule) and self.table == other.table

    def with_entry(self, values: tuple, h) -> "TableRule":
        table = dict(self.table)
        table[values] = h
        return TableRule(table)


class WeightedSiteSum:
    """``c(s, x) = prod_j w_j ** index(x(site_j))`` over the window in canonical order."""

    kind = "weighted-site-sum"

    def __init__(self, target: Group, weights: Sequence, n_symbols: int):
        self.target = target
        self.weights = tuple(weights)
        self._powers = [[target.pow(w, k) for k in range(n_symbols)] for w in self.weights]

    def __call__(self, values: tuple):
        mul = self.target.mul
        out = self.target.identity
        for pw, v in zip(self._powers, values):
            if v:
                out = mul(out, pw[v])
        return out

    def __eq__(self, other):
        return isinstance(other, WeightedSiteSum) and self.weights == other.weights


def positive_generators(group: Group) -> list[int]:
    """One generator index from each {s, s^-1} pair, first occurrence wins."""
    chosen = []
    for i, s in enumerate(group.generators):
        if any(group.generators[j] in (s, group.inv(s)) for j in chosen):
            continue
        chosen.append(i)
    return chosen


class LocalCocycle:
    """A continuous cocycle with window radius ``L``.

    ``rules`` maps each positive generator index to a callable taking the
    tuple of symbol indices of x on B(L) (canonical order) to an element
    of ``target``.
    """

    def __init__(
        self,
        explorer: CayleyExplorer,
        target: Group,
        alphabet: Alphabet,
        L: int,
        rules: Mapping[int, Callable],
        positive: Sequence[int] | None = None,
    ):
        G = explorer.group
        self.explorer = explorer
        self.group = G
        self.target = target
        self.alphabet = alphabet
        self.L = L
        self.positive = list(positive_generators(G) if positive is None else positive)
        if set(rules) != set(self.positive):
            raise PreconditionError("rules must be given for exactly the positive generators")
        self.rules = dict(rules)
        self.window = tuple(explorer.ball(L))
        self._wkey = ("window", L)
        self._role = []
        for s in G.generators:
            role = None
            for p in self.positive:
                if G.generators[p] == s:
                    role = (p, False)
                    break
            if role is None:
                for p in self.positive:
                    if G.generators[p] == G.inv(s):
                        role = (p, True)
                        break
            if role is None:
                raise PreconditionError(f"generator {G.label(s)} is not covered by the positive generators")
            self._role.append(role)
        self._gen_inv = [G.inv(s) for s in G.generators]

    # -- evaluation ---------------------------------------------------------

    def step_sites(self, i: int, kinv) -> tuple:
        """Sites of x read by ``c(s_i, k x)`` where ``kinv = k^-1``."""
        p, inverted = self._role[i]
        if inverted:
            kinv = self.group.mul(kinv, self.group.generators[p])
        return self.explorer.translated(kinv, self.window, self._wkey)

    def _evaluate_word(self, word: Sequence[int], x: Configuration, kinv, trace):
        G, H = self.group, self.target
        result = H.identity
        for i in reversed(word):
            p, inverted = self._role[i]
            values = x.read(self.step_sites(i, kinv))
            if trace is not None:
                trace.append((p, values))
            v = self.rules[p](values)
            if inverted:
                v = H.inv(v)
            result = H.mul(v, result)
            kinv = G.mul(kinv, self._gen_inv[i])
        return result

    def evaluate(self, g, x: Configuration, shift_by=None, trace: list | None = None):
        """``c(g, k x)`` with ``k = shift_by`` (identity by default).

        ``g`` is written as its canonical geodesic word ``w_1 ... w_l`` and the
        value is ``c(w_1, w_2..w_l kx) ... c(w_l, kx)``.  ``trace`` collects the
        ``(positive generator, window values)`` of every rule lookup.
        """
        kinv = self.group.identity if shift_by is None else self.group.inv(shift_by)
        return self._evaluate_word(self.explorer.word(g), x, kinv, trace)

    def evaluate_word(self, word: Sequence[int], x: Configuration, shift_by=None):
        """Telescope along an arbitrary generator word instead of the canonical one."""
        kinv = self.group.identity if shift_by is None else self.group.inv(shift_by)
        return self._evaluate_word(word, x, kinv, None)

    def sites_read(self, g, shift_by=None) -> set:
        G = self.group
        kinv = G.identity if shift_by is None else G.inv(shift_by)
        out = set()
        for i in reversed(self.explorer.word(g)):
            out.update(self.step_sites(i, kinv))
            kinv = G.mul(kinv, self._gen_inv[i])
        return out

    # -- rule access --------------------------------------------------------

    def is_tabulated(self) -> bool:
        return all(isinstance(r, TableRule) for r in self.rules.values())

    def with_rule(self, p: int, rule) -> "LocalCocycle":
        rules = dict(self.rules)
        rules[p] = rule
        return LocalCocycle(self.explorer, self.target, self.alphabet, self.L, rules, self.positive)

    def tabulated(self, cap: int = DEFAULT_ENUMERATION_CAP) -> "LocalCocycle":
        """Same cocycle with every rule expanded to a complete table."""
        rules = {}
        for p, rule in self.rules.items():
            table = {pat.values: rule(pat.values) for pat in enumerate_patterns(self.alphabet, self.window, cap)}
            rules[p] = TableRule(table)
        return LocalCocycle(self.explorer, self.target, self.alphabet, self.L, rules, self.positive)


# -- constructors -------------------------------------------------------------


def make_hom_cocycle(phi0: Mapping[int, object], explorer: CayleyExplorer, alphabet: Alphabet, target: Group):
    """Cocycle ``c(g, x) = phi0(g)``; ``phi0`` maps positive generator indices to H."""
    positive = positive_generators(explorer.group)
    rules = {p: TableRule({(a,): phi0[p] for a in range(len(alphabet))}) for p in positive}
    return LocalCocycle(explorer, target, alphabet, 0, rules, positive)


def make_twisted(
    phi0: Mapping[int, object],
    b0: Mapping[tuple, object],
    rho: int,
    explorer: CayleyExplorer,
    alphabet: Alphabet,
    target: Group,
    cap: int = DEFAULT_ENUMERATION_CAP,
):
    """Coboundary twist ``c(s, x) = b0((s x)|B(rho)) phi0(s) b0(x|B(rho))^-1``, tabulated on B(rho+1)."""
    G, H = explorer.group, target
    positive = positive_generators(G)
    L = rho + 1
    window = tuple(explorer.ball(L))
    inner = window[: len(explorer.ball(rho))]
    rules = {}
    for p in positive:
        s_inv = G.inv(G.generators[p])
        shifted_sites = [G.mul(s_inv, b) for b in inner]
        table = {}
        for pat in enumerate_patterns(alphabet, window, cap):
            x = dict(zip(window, pat.values))
            here = pat.values[: len(inner)]
            there = tuple(x[b] for b in shifted_sites)
            table[pat.values] = H.mul(H.mul(b0[there], phi0[p]), H.inv(b0[here]))
        rules[p] = TableRule(table)
    return LocalCocycle(explorer, target, alphabet, L, rules, positive)


def random_transfer(rng: random.Random, alphabet: Alphabet, n_sites: int, pool: Sequence):
    """Uniformly random map from patterns on ``n_sites`` sites to ``pool``."""
    return {
        pat.values: pool[rng.randrange(len(pool))]
        for pat in enumerate_patterns(alphabet, tuple(range(n_sites)))
    }


def random_commuting_images(rng: random.Random, target: Group, count: int, pool: Sequence) -> list:
    """``count`` pairwise commuting elements drawn from ``pool`` (a homomorphism Z^count -> H)."""
    mul = target.mul
    for _ in range(10_000):
        images = [pool[rng.randrange(len(pool))] for _ in range(count)]
        if all(mul(a, b) == mul(b, a) for a in images for b in images):
            return images
    raise PreconditionError("could not draw commuting images from the pool")


# -- checks ---------------------------------------------------------------------


@dataclass
class IdentityFailure:
    g: object
    h: object
    window: dict
    left: object
    right: object
    lookups: list


@dataclass
class CocycleReport:
    checked_pairs: int = 0
    checked: int = 0
    exhaustive_pairs: int = 0
    sampled_pairs: int = 0
    seed: int | None = None
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _ordered(explorer: CayleyExplorer, sites) -> tuple:
    return tuple(sorted(sites, key=explorer.order_key))


def check_identity(
    c: LocalCocycle,
    r_check: int,
    samples: int = 10_000,
    seed: int = 0,
    exhaustive: bool | None = None,
    limit: int = EXHAUSTIVE_WINDOW_LIMIT,
    budget: int = EXHAUSTIVE_BUDGET,
) -> CocycleReport:
    """Check ``c(gh, x) = c(g, hx) c(h, x)`` for all g, h in B(r_check).

    For each pair only the sites actually read by the three evaluations
    matter (a subset of B(2 r_check + L)).  In automatic mode a pair is
    enumerated exhaustively when its window has at most ``limit`` patterns
    and the running total of enumerated patterns (smallest windows first)
    stays within ``budget``; the remaining pairs share ``samples`` seeded
    random configurations round-robin.  ``exhaustive=True`` enumerates
    every pair, ``False`` samples every pair.
    """
    E = c.explorer
    G, H = c.group, c.target
    E.prepopulate(2 * r_check + c.L)
    ball = E.ball(r_check)
    report = CocycleReport(seed=seed)

    def check(g, h, x, window):
        trace = []
        left = c.evaluate(G.mul(g, h), x, trace=trace)
        right = H.mul(c.evaluate(g, x, shift_by=h, trace=trace), c.evaluate(h, x, trace=trace))
        report.checked += 1
        if left != right:
            report.failures.append(IdentityFailure(g, h, dict(zip(window, x.read(window))), left, right, trace))

    pairs = []
    for g in ball:
        for h in ball:
            window = _ordered(E, c.sites_read(G.mul(g, h)) | c.sites_read(g, h) | c.sites_read(h))
            pairs.append((g, h, window, pattern_count(c.alphabet, len(window))))
    report.checked_pairs = len(pairs)

    if exhaustive:
        chosen = set(range(len(pairs)))
        for g, h, window, count in pairs:
            if count > DEFAULT_ENUMERATION_CAP:
                raise EnumerationCapExceeded(f"pair ({G.label(g)}, {G.label(h)}) has a window of {count} patterns")
    elif exhaustive is None:
        chosen, total = set(), 0
        for j in sorted(range(len(pairs)), key=lambda j: (pairs[j][3], j)):
            count = pairs[j][3]
            if count > limit or total + count > budget:
                break
            chosen.add(j)
            total += count
    else:
        chosen = set()

    sampled = []
    for j, (g, h, window, count) in enumerate(pairs):
        if j not in chosen:
            sampled.append((g, h, window))
            continue
        report.exhaustive_pairs += 1
        for pat in enumerate_patterns(c.alphabet, window, DEFAULT_ENUMERATION_CAP):
            check(g, h, pat.totalize(c.alphabet), window)
    report.sampled_pairs = len(sampled)
    if sampled:
        rng = random.Random(seed)
        for j in range(samples):
            g, h, window = sampled[j % len(sampled)]
            x = random_configuration(rng, c.alphabet, window)
            check(g, h, x, window)
    return report


def dependence_window_check(c: LocalCocycle, path: GeodesicPath, x: Configuration, y: Configuration) -> bool:
    """Compare ``c(path(n)^-1, .) c(path(0)^-1, .)^-1`` at x and y.

    x and y must agree on the L-neighborhood of the path.
    """
    E, G, H = c.explorer, c.group, c.target
    nbhd = E.l_neighborhood(path.vertices, c.L)
    if x.read(nbhd) != y.read(nbhd):
        raise PreconditionError("x and y differ on the L-neighborhood of the path")
    first, last = G.inv(path.vertices[0]), G.inv(path.vertices[-1])

    def quotient(z):
        return H.mul(c.evaluate(last, z), H.inv(c.evaluate(first, z)))

    return quotient(x) == quotient(y)
