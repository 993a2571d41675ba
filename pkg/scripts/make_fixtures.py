"""Regenerate the rule files shipped in src/cocycle_rigidity/fixtures/."""

from pathlib import Path

from cocycle_rigidity.cocycle import LocalCocycle, WeightedSiteSum, make_hom_cocycle, make_twisted
from cocycle_rigidity.formats import dumps_cocycle, parse_group
from cocycle_rigidity.geometry import CayleyExplorer
from cocycle_rigidity.shift import Alphabet

OUT = Path(__file__).resolve().parents[1] / "src" / "cocycle_rigidity" / "fixtures"

# the entry flipped in the corrupted fixture: generator +1, pattern on B(1)
CORRUPT_GENERATOR = 0
CORRUPT_PATTERN = (1, 0, 0, 0, 0)


def z_counterexample():
    G, H = parse_group("Z^1"), parse_group("Z^1")
    E = CayleyExplorer(G)
    A = Alphabet.of("01")
    return LocalCocycle(E, H, A, 0, {0: WeightedSiteSum(H, [(1,)], len(A))})


def z2_hom():
    G, H = parse_group("Z^2"), parse_group("S(3)")
    swap = H.parse_label("(0 1)")
    return make_hom_cocycle({0: swap, 1: swap}, CayleyExplorer(G), Alphabet.of("01"), H)


def z2_twisted():
    G, H = parse_group("Z^2"), parse_group("S(3)")
    E = CayleyExplorer(G)
    A = Alphabet.of("01")
    phi0 = {0: H.parse_label("(0 1 2)"), 1: H.parse_label("(0 2 1)")}
    b0 = {(0,): H.parse_label("(0 1)"), (1,): H.parse_label("(1 2)")}
    return make_twisted(phi0, b0, 0, E, A, H)


def z2_corrupted():
    c = z2_twisted()
    H = c.target
    rule = c.rules[CORRUPT_GENERATOR]
    old = rule(CORRUPT_PATTERN)
    new = H.mul(old, H.parse_label("(0 1)"))
    return c.with_rule(CORRUPT_GENERATOR, rule.with_entry(CORRUPT_PATTERN, new))


FIXTURES = {
    "z_counterexample.cocycle.json": z_counterexample,
    "z2_hom.cocycle.json": z2_hom,
    "z2_twisted.cocycle.json": z2_twisted,
    "z2_corrupted.cocycle.json": z2_corrupted,
}


def main():
    for name, make in FIXTURES.items():
        (OUT / name).write_text(dumps_cocycle(make()), encoding="utf-8")
        print(f"wrote {OUT / name}")


if __name__ == "__main__":
    main()
