"""Element oracles for the finitely generated groups in the registry.

Elements are plain hashable Python values, so oracle equality is ordinary
``==`` and labels are canonical: two elements are equal iff their labels
are equal.

===========  ================================  =====================
family       element representation            label
===========  ================================  =====================
``Z^d``      tuple of ``d`` ints               ``(1,-2)``
``F(k)``     reduced tuple of signed letters   ``aBa`` (``1`` = id)
``C(n)``     int residue                       ``3``
``S(n)``     tuple of images of ``0..n-1``     ``(0 1 2)(3 4)``
products     tuple of factor elements          ``(1,0) x 1``
===========  ================================  =====================
"""

from __future__ import annotations

import re
import string
from typing import Hashable, Sequence

from .errors import LabelError

Element = Hashable


class Group:
    """Abstract finitely generated group given by an element oracle.

    Subclasses define ``identity``, ``mul``, ``inv``, ``label``,
    ``parse_label`` and populate ``generators`` / ``generator_names``.
    The generator list is symmetric and its order is significant: it is
    the tie-break order for every canonical word.
    """

    spec: str
    identity: Element
    generators: tuple
    generator_names: tuple[str, ...]

    def mul(self, g, h):
        raise NotImplementedError

    def inv(self, g):
        raise NotImplementedError

    def label(self, g) -> str:
        raise NotImplementedError

    def parse_label(self, text: str):
        raise NotImplementedError

    def is_finite(self) -> bool:
        return False

    def pow(self, g, n: int):
        if n < 0:
            g, n = self.inv(g), -n
        result = self.identity
        base = g
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def product(self, elements):
        result = self.identity
        for g in elements:
            result = self.mul(result, g)
        return result

    def generator_index(self, name: str) -> int:
        try:
            return self.generator_names.index(name)
        except ValueError:
            raise LabelError(f"unknown generator {name!r} in {self.spec}") from None

    def inverse_indices(self) -> list[int]:
        """For each generator index, the first index holding its inverse."""
        out = []
        for s in self.generators:
            t = self.inv(s)
            out.append(self.generators.index(t))
        return out

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.spec}>"

    def __eq__(self, other) -> bool:
        return isinstance(other, Group) and self.spec == other.spec

    def __hash__(self) -> int:
        return hash(self.spec)


class Lattice(Group):
    """Free abelian group Z^d with generators +e1..+ed, -e1..-ed."""

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("lattice dimension must be positive")
        self.dim = dim
        self.spec = f"Z^{dim}"
        self.identity = (0,) * dim
        pos = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
        neg = [tuple(-v for v in e) for e in pos]
        self.generators = tuple(pos + neg)
        self.generator_names = tuple([f"+{i + 1}" for i in range(dim)] + [f"-{i + 1}" for i in range(dim)])

    def mul(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inv(self, g):
        return tuple(-a for a in g)

    def label(self, g) -> str:
        return "(" + ",".join(str(a) for a in g) + ")"

    def parse_label(self, text: str):
        m = re.fullmatch(r"\((-?\d+(?:,-?\d+)*)\)", text.replace(" ", ""))
        if not m:
            raise LabelError(f"bad lattice label {text!r}")
        values = tuple(int(v) for v in m.group(1).split(","))
        if len(values) != self.dim:
            raise LabelError(f"label {text!r} has wrong dimension for {self.spec}")
        return values


class FreeGroup(Group):
    """Free group on k letters; elements are reduced tuples of +-(i+1)."""

    def __init__(self, rank: int):
        if not 1 <= rank <= 26:
            raise ValueError("free group rank must be between 1 and 26")
        self.rank = rank
        self.spec = f"F({rank})"
        self.identity = ()
        self.generators = tuple((i,) for i in range(1, rank + 1)) + tuple((-i,) for i in range(1, rank + 1))
        letters = string.ascii_lowercase[:rank]
        self.generator_names = tuple(letters) + tuple(letters.upper())

    def mul(self, g, h):
        k = 0
        n = min(len(g), len(h))
        while k < n and g[-1 - k] == -h[k]:
            k += 1
        return g[: len(g) - k] + h[k:]

    def inv(self, g):
        return tuple(-a for a in reversed(g))

    def label(self, g) -> str:
        if not g:
            return "1"
        return "".join(
            string.ascii_lowercase[a - 1] if a > 0 else string.ascii_uppercase[-a - 1] for a in g
        )

    def parse_label(self, text: str):
        if text == "1":
            return ()
        word = ()
        for ch in text:
            if ch in string.ascii_lowercase[: self.rank]:
                letter = (string.ascii_lowercase.index(ch) + 1,)
            elif ch in string.ascii_uppercase[: self.rank]:
                letter = (-(string.ascii_uppercase.index(ch) + 1),)
            else:
                raise LabelError(f"bad free-group label {text!r}")
            word = self.mul(word, letter)
        if self.label(word) != text:
            raise LabelError(f"free-group label {text!r} is not reduced")
        return word


class Cyclic(Group):
    """Cyclic group Z/n with generators +1, -1 (both kept, even when equal)."""

    def __init__(self, order: int):
        if order < 1:
            raise ValueError("cyclic order must be positive")
        self.order = order
        self.spec = f"C({order})"
        self.identity = 0
        if order == 1:
            self.generators = ()
            self.generator_names = ()
        else:
            self.generators = (1 % order, (order - 1) % order)
            self.generator_names = ("t", "T")

    def is_finite(self) -> bool:
        return True

    def mul(self, g, h):
        return (g + h) % self.order

    def inv(self, g):
        return (-g) % self.order

    def label(self, g) -> str:
        return str(g)

    def parse_label(self, text: str):
        if not re.fullmatch(r"\d+", text) or int(text) >= self.order:
            raise LabelError(f"bad residue label {text!r} for {self.spec}")
        return int(text)


class Symmetric(Group):
    """Symmetric group on 0..n-1 generated by (0 1), (0 1 .. n-1) and its inverse.

    Products compose right to left: ``mul(p, q)`` applies ``q`` first.
    """

    def __init__(self, degree: int):
        if degree < 1:
            raise ValueError("symmetric degree must be positive")
        self.degree = degree
        self.spec = f"S({degree})"
        self.identity = tuple(range(degree))
        if degree == 1:
            gens, names = [], []
        elif degree == 2:
            gens, names = [(1, 0)], ["s"]
        else:
            swap = (1, 0) + tuple(range(2, degree))
            cycle = tuple((i + 1) % degree for i in range(degree))
            gens = [swap, cycle, self.inv(cycle)]
            names = ["s", "c", "C"]
        self.generators = tuple(gens)
        self.generator_names = tuple(names)

    def is_finite(self) -> bool:
        return True

    def mul(self, g, h):
        return tuple(g[i] for i in h)

    def inv(self, g):
        out = [0] * len(g)
        for i, j in enumerate(g):
            out[j] = i
        return tuple(out)

    def label(self, g) -> str:
        seen = set()
        cycles = []
        for start in range(len(g)):
            if start in seen or g[start] == start:
                continue
            cyc = [start]
            seen.add(start)
            j = g[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = g[j]
            cycles.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(cycles) or "()"

    def parse_label(self, text: str):
        if not re.fullmatch(r"(\(\d+(?: \d+)*\))+|\(\)", text):
            raise LabelError(f"bad cycle notation {text!r}")
        perm = list(range(self.degree))
        used = set()
        for body in re.findall(r"\(([^)]*)\)", text):
            if not body:
                continue
            points = [int(v) for v in body.split()]
            if any(p >= self.degree or p in used for p in points):
                raise LabelError(f"bad cycle notation {text!r} for {self.spec}")
            used.update(points)
            for a, b in zip(points, points[1:] + points[:1]):
                perm[a] = b
        g = tuple(perm)
        if self.label(g) != text:
            raise LabelError(f"cycle notation {text!r} is not canonical")
        return g


class DirectProduct(Group):
    """Direct product; generators are each factor's generators padded with identities."""

    def __init__(self, factors: Sequence[Group]):
        if len(factors) < 2:
            raise ValueError("a direct product needs at least two factors")
        self.factors = tuple(factors)
        self.spec = " x ".join(f.spec for f in factors)
        self.identity = tuple(f.identity for f in factors)
        gens, names = [], []
        for i, f in enumerate(factors):
            for s, name in zip(f.generators, f.generator_names):
                g = list(self.identity)
                g[i] = s
                gens.append(tuple(g))
                names.append(f"{name}_{i}")
        self.generators = tuple(gens)
        self.generator_names = tuple(names)

    def is_finite(self) -> bool:
        return all(f.is_finite() for f in self.factors)

    def mul(self, g, h):
        return tuple(f.mul(a, b) for f, a, b in zip(self.factors, g, h))

    def inv(self, g):
        return tuple(f.inv(a) for f, a in zip(self.factors, g))

    def label(self, g) -> str:
        return " x ".join(f.label(a) for f, a in zip(self.factors, g))

    def parse_label(self, text: str):
        parts = text.split(" x ")
        if len(parts) != len(self.factors):
            raise LabelError(f"label {text!r} does not match {self.spec}")
        return tuple(f.parse_label(p) for f, p in zip(self.factors, parts))


def check_axioms(group: Group, elements: Sequence) -> list[str]:
    """Exhaustively check the group laws on ``elements``; return violations."""
    problems = []
    e = group.identity
    for g in elements:
        if group.mul(e, g) != g or group.mul(g, e) != g:
            problems.append(f"identity law fails at {group.label(g)}")
        if group.mul(g, group.inv(g)) != e or group.mul(group.inv(g), g) != e:
            problems.append(f"inverse law fails at {group.label(g)}")
        if group.parse_label(group.label(g)) != g:
            problems.append(f"label does not round-trip at {group.label(g)}")
    for g in elements:
        for h in elements:
            gh = group.mul(g, h)
            for k in elements:
                if group.mul(gh, k) != group.mul(g, group.mul(h, k)):
                    problems.append(
                        f"associativity fails at {group.label(g)}, {group.label(h)}, {group.label(k)}"
                    )
    for s in group.generators:
        if group.inv(s) not in group.generators:
            problems.append(f"generator {group.label(s)} has no inverse in the generating set")
    return problems
