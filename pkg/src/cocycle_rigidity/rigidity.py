"""Trivializing a continuous cocycle over the full shift of a one-ended group.

The homomorphism is ``phi(g) = c(g, 0)``.  For an eventually-zero x the
transfer value is ``b(x) = c(g_x, x)^-1 phi(g_x)``, where ``g_x`` is any
element with ``|g_x| > N(||x|| + L)``; we take the first element of the
sphere of radius ``N(||x|| + L) + 1`` in canonical order.  ``b`` factors
through the pattern on B(3L), which gives the extension to all of A^G.

On groups with more than one end the construction can break; every sweep
here reports such breakage as an :class:`ObstructionWitness` instead of
raising.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .cocycle import EXHAUSTIVE_WINDOW_LIMIT, LocalCocycle
from .errors import EnumerationCapExceeded, NotInDelta, PreconditionError
from .geometry import GeodesicPath
from .shift import (
    DEFAULT_ENUMERATION_CAP,
    Configuration,
    enumerate_patterns,
    pattern_count,
    random_configuration,
    support_norm,
    truncate,
)

INDEPENDENCE = "independence-failure"
LOCALITY = "locality-failure"
NO_PATH = "no-avoiding-path"
COHOMOLOGY = "cohomology-failure"


def _map(fn, items, threads: int = 1) -> list:
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# -- phi and b -------------------------------------------------------------------


def compute_phi(c: LocalCocycle, g):
    cache = c.__dict__.setdefault("_phi_cache", {})
    value = cache.get(g)
    if value is None:
        value = c.evaluate(g, Configuration.zero(c.alphabet))
        cache[g] = value
    return value


@dataclass
class PhiReport:
    r: int
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_phi_homomorphism(c: LocalCocycle, r: int) -> PhiReport:
    """Exhaustively test phi(gh) = phi(g) phi(h) on B(r) x B(r)."""
    G, H = c.group, c.target
    ball = c.explorer.ball(r)
    report = PhiReport(r)
    for g in ball:
        for h in ball:
            left = compute_phi(c, G.mul(g, h))
            right = H.mul(compute_phi(c, g), compute_phi(c, h))
            report.checked += 1
            if left != right:
                report.failures.append((g, h, left, right))
    return report


def reach(c: LocalCocycle, x: Configuration) -> int:
    """``N(||x|| + L)``: norms beyond this see x only through the unbounded end."""
    return c.explorer.N(support_norm(x, c.explorer) + c.L)


def choose_gx(c: LocalCocycle, x: Configuration):
    """First element, in canonical order, of the sphere of radius N(||x|| + L) + 1."""
    radius = reach(c, x) + 1
    sphere = c.explorer.sphere(radius)
    if not sphere:
        raise PreconditionError(f"{c.group.spec} has no element of norm {radius}")
    return sphere[0]


def b_value(c: LocalCocycle, g, x: Configuration):
    """``c(g, x)^-1 phi(g)``: the transfer value seen from g."""
    H = c.target
    return H.mul(H.inv(c.evaluate(g, x)), compute_phi(c, g))


def compute_b(c: LocalCocycle, x: Configuration):
    return b_value(c, choose_gx(c, x), x)


# -- obstructions ----------------------------------------------------------------


@dataclass
class ObstructionWitness:
    kind: str
    x: Configuration
    details: dict

    def replay(self, c: LocalCocycle) -> bool:
        """Re-run the named check; True when it still fails."""
        d = self.details
        if self.kind == INDEPENDENCE:
            return check_independence(c, self.x, [d["g1"], d["g2"]]) is not None
        if self.kind == LOCALITY:
            return check_locality(c, self.x, d["y"]) is not None
        if self.kind == NO_PATH:
            E = c.explorer
            return E.path_avoiding_ball(d["from"], d["to"], d["r"], d["R_max"]) is None
        if self.kind == COHOMOLOGY:
            g = d["g"]
            H = c.target
            table = d["b_table"]
            right = H.mul(H.mul(table.b(self.x, shift_by=g), compute_phi(c, g)), H.inv(table.b(self.x)))
            return c.evaluate(g, self.x) != right
        raise ValueError(f"unknown obstruction kind {self.kind!r}")


def check_independence(c: LocalCocycle, x: Configuration, candidates) -> ObstructionWitness | None:
    """All candidates g with |g| > N(||x|| + L) must give the same ``c(g, x)^-1 phi(g)``."""
    bound = reach(c, x)
    E = c.explorer
    for g in candidates:
        if E.word_norm(g) <= bound:
            raise PreconditionError(f"candidate {c.group.label(g)} has norm <= N(||x|| + L) = {bound}")
    if not candidates:
        return None
    first = candidates[0]
    b_first = b_value(c, first, x)
    for g in candidates[1:]:
        b_g = b_value(c, g, x)
        if b_g != b_first:
            return ObstructionWitness(INDEPENDENCE, x, {"g1": first, "g2": g, "b1": b_first, "b2": b_g})
    return None


def candidate_elements(c: LocalCocycle, x: Configuration, per_sphere: int = 5) -> list:
    """Up to ``per_sphere`` evenly spread elements from each of the spheres N+2 and N+3."""
    bound = reach(c, x)
    out = []
    for radius in (bound + 2, bound + 3):
        sphere = c.explorer.sphere(radius)
        if len(sphere) <= per_sphere:
            out.extend(sphere)
        else:
            step = len(sphere) / per_sphere
            out.extend(sphere[int(k * step)] for k in range(per_sphere))
    return out


def avoiding_path_witness(c: LocalCocycle, x: Configuration, g, g_other, R_max: int | None = None):
    """Witness when no path joins g^-1 and g_other^-1 outside B(||x|| + L)."""
    E, G = c.explorer, c.group
    r = support_norm(x, E) + c.L
    a, b = G.inv(g), G.inv(g_other)
    if R_max is None:
        R_max = max(E.word_norm(a), E.word_norm(b)) + r + 2
    if E.path_avoiding_ball(a, b, r, R_max) is None:
        return ObstructionWitness(NO_PATH, x, {"from": a, "to": b, "r": r, "R_max": R_max})
    return None


def check_locality(c: LocalCocycle, x: Configuration, y: Configuration) -> ObstructionWitness | None:
    """b(x) = b(y) whenever x and y agree on B(3L)."""
    for z in (x, y):
        if not z.in_delta():
            raise NotInDelta("locality is only defined for eventually-zero configurations")
    core = c.explorer.ball(3 * c.L)
    if x.read(core) != y.read(core):
        raise PreconditionError("x and y differ on B(3L)")
    bx, by = compute_b(c, x), compute_b(c, y)
    if bx != by:
        return ObstructionWitness(LOCALITY, x, {"y": y, "bx": bx, "by": by})
    return None


# -- the transfer table ------------------------------------------------------------


class TransferTable:
    """b as a function of the pattern on B(3L).

    When ``complete`` every pattern is present.  Otherwise entries are
    computed on first use from the zero-extension of the pattern (and
    remembered); ``cocycle`` may be None for a frozen, read-only table.
    """

    def __init__(self, c: LocalCocycle | None, sites: tuple, entries: dict, complete: bool):
        self.cocycle = c
        self.sites = sites
        self.entries = entries
        self.complete = complete
        self._key = ("btable", len(sites))
        if c is not None:
            self._site_norms = [c.explorer.word_norm(g) for g in sites]

    @property
    def radius(self) -> int:
        return 3 * self.cocycle.L if self.cocycle else None

    def __getitem__(self, values: tuple):
        value = self.entries.get(values)
        if value is None:
            if self.cocycle is None:
                raise KeyError(values)
            if self.complete:
                raise KeyError(values)
            c = self.cocycle
            zero = c.alphabet.zero_index
            norm = max((n for n, v in zip(self._site_norms, values) if v != zero), default=0)
            gx = c.explorer.sphere(c.explorer.N(norm + c.L) + 1)[0]
            value = b_value(c, gx, Configuration._trusted(c.alphabet, self.sites, values, zero))
            self.entries[values] = value
        return value

    def window(self, x: Configuration, shift_by=None) -> tuple:
        """Pattern of ``k x`` on B(3L), ``k = shift_by``."""
        if shift_by is None:
            return x.read(self.sites)
        E = self.cocycle.explorer
        kinv = E.group.inv(shift_by)
        return x.read(E.translated(kinv, self.sites, self._key))

    def b(self, x: Configuration, shift_by=None):
        return self[self.window(x, shift_by)]

    def copy(self) -> "TransferTable":
        return TransferTable(self.cocycle, self.sites, dict(self.entries), self.complete)


def build_b_table(
    c: LocalCocycle, exhaustive: bool | None = None, cap: int = DEFAULT_ENUMERATION_CAP
) -> TransferTable:
    """Tabulate b over every B(3L)-pattern (zero outside B(3L)).

    With more than ``cap`` patterns the table is lazy unless
    ``exhaustive=True``, which raises instead.
    """
    sites = tuple(c.explorer.ball(3 * c.L))
    count = pattern_count(c.alphabet, len(sites))
    if count > cap:
        if exhaustive:
            raise EnumerationCapExceeded(
                f"b-table needs {len(c.alphabet)}^{len(sites)} = {count} patterns (cap {cap}); "
                "reduce L or the alphabet size"
            )
        return TransferTable(c, sites, {}, complete=False)
    entries = {}
    for pat in enumerate_patterns(c.alphabet, sites, cap):
        entries[pat.values] = compute_b(c, pat.totalize(c.alphabet))
    return TransferTable(c, sites, entries, complete=True)


# -- the main equation -------------------------------------------------------------


@dataclass
class CohomologyFailure:
    g: object
    window: dict
    left: object
    right: object


@dataclass
class CohomologyReport:
    checked: int = 0
    exhaustive: bool = False
    seed: int | None = None
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_cohomology(
    c: LocalCocycle,
    phi_table: dict | None,
    b_table: TransferTable,
    r: int,
    samples: int = 10_000,
    seed: int = 0,
    exhaustive: bool | None = None,
    threads: int = 1,
    limit: int = EXHAUSTIVE_WINDOW_LIMIT,
) -> CohomologyReport:
    """Check ``c(g, x) = b(g x) phi(g) b(x)^-1`` for g in B(r).

    x is exhaustive over patterns on B(r + 3L) (zero outside) when that is
    at most ``limit`` patterns; otherwise ``samples`` seeded configurations
    with random default symbol, g cycling through B(r).  b is read from the
    cut of x to B(|g| + 3L), zero outside, which is the only part of x
    either side depends on.
    """
    E, H = c.explorer, c.target
    zero = c.alphabet.zero_index
    ball = E.ball(r)
    outer = E.ball(r + 3 * c.L)
    count = pattern_count(c.alphabet, len(outer))
    use_all = exhaustive or (exhaustive is None and count <= limit)
    report = CohomologyReport(exhaustive=bool(use_all), seed=None if use_all else seed)

    def phi(g):
        if phi_table is not None and g in phi_table:
            return phi_table[g]
        return compute_phi(c, g)

    def check(item):
        g, x = item
        cut = truncate(x, E.word_norm(g) + 3 * c.L, E) if x.default != zero else x
        left = c.evaluate(g, x)
        right = H.mul(H.mul(b_table.b(cut, shift_by=g), phi(g)), H.inv(b_table.b(cut)))
        if left != right:
            window = E.ball(E.word_norm(g) + 3 * c.L)
            return CohomologyFailure(g, dict(zip(window, x.read(window))), left, right)
        return None

    if use_all:
        patterns = [p.totalize(c.alphabet) for p in enumerate_patterns(c.alphabet, outer, DEFAULT_ENUMERATION_CAP)]
        items = [(g, x) for g in ball for x in patterns]
    else:
        rng = random.Random(seed)
        k = len(c.alphabet)
        items = []
        for j in range(samples):
            g = ball[j % len(ball)]
            default = rng.randrange(k)
            x = random_configuration(rng, c.alphabet, E.ball(E.word_norm(g) + 3 * c.L), default)
            items.append((g, x))
    results = _map(check, items, threads)
    report.checked = len(items)
    report.failures = [f for f in results if f is not None]
    return report


def splice_configurations(c: LocalCocycle, path: GeodesicPath, x: Configuration, y: Configuration) -> Configuration:
    """x on the L-neighborhood of the forward half of ``path``, y on the backward half, 0 elsewhere."""
    E = c.explorer
    n = min(-path.start, path.stop)
    forward = E.l_neighborhood(path.image(0, n), c.L)
    backward = E.l_neighborhood(path.image(-n, 0), c.L)
    values = dict(zip(forward, x.read(forward)))
    for g, a in zip(backward, y.read(backward)):
        if g in values and values[g] != a:
            raise PreconditionError(f"x and y disagree at {c.group.label(g)}, inside both neighborhoods")
        values[g] = a
    return Configuration(c.alphabet, values)


# -- the pipeline --------------------------------------------------------------------


@dataclass
class RigidityOptions:
    r_phi: int = 4
    r_hom: int = 3
    r_cohomology: int = 4
    samples: int = 10_000
    seed: int = 0
    independence_samples: int = 50
    candidates_per_sphere: int = 5
    locality_samples: int = 100
    tail: int = 2
    exhaustive: bool | None = None
    threads: int = 1


@dataclass
class SweepReport:
    checked: int = 0
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.witnesses


@dataclass
class RigidityResult:
    phi_table: dict
    b_table: TransferTable
    L: int
    N_values: dict
    phi_report: PhiReport
    independence: SweepReport
    locality: SweepReport
    verification: CohomologyReport
    obstruction: ObstructionWitness | None = None
    options: RigidityOptions = field(default_factory=RigidityOptions)

    @property
    def ok(self) -> bool:
        return self.obstruction is None


def independence_sweep(c: LocalCocycle, opts: RigidityOptions) -> SweepReport:
    """Zero, every single-site configuration on B(3L), then random ones on B(3L)."""
    E = c.explorer
    core = E.ball(3 * c.L)
    xs = [Configuration.zero(c.alphabet)]
    for g in core:
        for a in range(len(c.alphabet)):
            if a != c.alphabet.zero_index:
                xs.append(Configuration(c.alphabet, {g: a}))
    rng = random.Random(opts.seed)
    xs.extend(random_configuration(rng, c.alphabet, core) for _ in range(opts.independence_samples))
    report = SweepReport()
    for x in xs:
        candidates = candidate_elements(c, x, opts.candidates_per_sphere)
        report.checked += 1
        w = check_independence(c, x, candidates)
        if w is not None:
            blocked = avoiding_path_witness(c, x, w.details["g1"], w.details["g2"])
            w.details["avoiding_path"] = blocked is None
            report.witnesses.append(w)
    return report


def locality_pairs(c: LocalCocycle, count: int, seed: int, tail: int = 2) -> list:
    """Pairs agreeing on B(3L) with independently drawn tails on B(3L + tail) minus B(3L)."""
    E = c.explorer
    core = E.ball(3 * c.L)
    shell = E.ball(3 * c.L + tail)[len(core):]
    rng = random.Random(seed + 1)
    k = len(c.alphabet)
    pairs = []
    while len(pairs) < count:
        base = {g: rng.randrange(k) for g in core}
        tx = {g: rng.randrange(k) for g in shell}
        ty = {g: rng.randrange(k) for g in shell}
        if tx == ty:
            continue
        pairs.append((Configuration(c.alphabet, {**base, **tx}), Configuration(c.alphabet, {**base, **ty})))
    return pairs


def locality_sweep(c: LocalCocycle, opts: RigidityOptions) -> SweepReport:
    report = SweepReport()
    for x, y in locality_pairs(c, opts.locality_samples, opts.seed, opts.tail):
        report.checked += 1
        w = check_locality(c, x, y)
        if w is not None:
            report.witnesses.append(w)
    return report


def rigidify(c: LocalCocycle, opts: RigidityOptions | None = None) -> RigidityResult:
    """Run the whole construction and every verification sweep."""
    opts = opts or RigidityOptions()
    E = c.explorer
    far = 3 * c.L + opts.tail + c.L
    N_values = {r: E.N(r) for r in range(far + 1)}
    phi_table = {g: compute_phi(c, g) for g in E.ball(opts.r_phi)}
    phi_report = check_phi_homomorphism(c, opts.r_hom)
    independence = independence_sweep(c, opts)
    b_table = build_b_table(c, exhaustive=opts.exhaustive if opts.exhaustive else None)
    locality = locality_sweep(c, opts)
    verification = check_cohomology(
        c,
        phi_table,
        b_table,
        min(opts.r_cohomology, opts.r_phi),
        samples=opts.samples,
        seed=opts.seed,
        exhaustive=opts.exhaustive,
        threads=opts.threads,
    )
    obstruction = None
    if independence.witnesses:
        obstruction = independence.witnesses[0]
    elif locality.witnesses:
        obstruction = locality.witnesses[0]
    elif verification.failures:
        f = verification.failures[0]
        obstruction = ObstructionWitness(
            COHOMOLOGY, Configuration(c.alphabet, f.window), {"g": f.g, "left": f.left, "right": f.right, "b_table": b_table}
        )
    return RigidityResult(
        phi_table=phi_table,
        b_table=b_table,
        L=c.L,
        N_values=N_values,
        phi_report=phi_report,
        independence=independence,
        locality=locality,
        verification=verification,
        obstruction=obstruction,
        options=opts,
    )
