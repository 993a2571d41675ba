"""The full shift A^G at desk scale.

A configuration is stored as a default symbol plus a finite table of
overrides, which is enough for everything the rigidity pipeline reads.
Symbols are handled internally as indices into the alphabet.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .errors import EnumerationCapExceeded, NotInDelta, PreconditionError

DEFAULT_ENUMERATION_CAP = 1 << 20


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]
    zero_index: int = 0

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("alphabet must be nonempty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")
        if any(len(s) != 1 for s in self.symbols):
            raise ValueError("alphabet symbols must be single characters")
        if not 0 <= self.zero_index < len(self.symbols):
            raise ValueError("zero_index out of range")

    @classmethod
    def of(cls, symbols: str | Sequence[str], zero: str | None = None) -> "Alphabet":
        symbols = tuple(symbols)
        zero_index = 0 if zero is None else symbols.index(zero)
        return cls(symbols, zero_index)

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def zero(self) -> int:
        return self.zero_index

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise PreconditionError(f"symbol {symbol!r} is not in the alphabet") from None

    def encode(self, values: Sequence[int]) -> str:
        return "".join(self.symbols[v] for v in values)

    def decode(self, text: str) -> tuple[int, ...]:
        return tuple(self.index(ch) for ch in text)


class Configuration:
    """A point of A^G: ``default`` everywhere except on the finite ``overrides``.

    Instances are immutable and always canonical (no override equals the
    default).  ``x(g)`` reads the symbol index at ``g``.
    """

    __slots__ = ("alphabet", "default", "_overrides", "_hash")

    def __init__(self, alphabet: Alphabet, overrides: Mapping | None = None, default: int | None = None):
        self.alphabet = alphabet
        self.default = d = alphabet.zero_index if default is None else default
        k = len(alphabet.symbols)
        if not 0 <= d < k:
            raise ValueError("default symbol out of range")
        items = {g: a for g, a in (overrides or {}).items() if a != d}
        if any(not 0 <= a < k for a in items.values()):
            raise ValueError("symbol index out of range")
        self._overrides = items
        self._hash = None

    @classmethod
    def zero(cls, alphabet: Alphabet) -> "Configuration":
        return cls(alphabet)

    @classmethod
    def _trusted(cls, alphabet: Alphabet, sites: Sequence, values: Sequence, default: int) -> "Configuration":
        # values are known to be valid symbol indices
        x = cls.__new__(cls)
        x.alphabet = alphabet
        x.default = default
        if default == 0:
            x._overrides = dict(itertools.compress(zip(sites, values), values))
        else:
            x._overrides = {g: a for g, a in zip(sites, values) if a != default}
        x._hash = None
        return x

    @property
    def overrides(self) -> dict:
        return dict(self._overrides)

    @property
    def support(self) -> list:
        return list(self._overrides)

    def in_delta(self) -> bool:
        return self.default == self.alphabet.zero_index

    def __call__(self, g) -> int:
        return self._overrides.get(g, self.default)

    def read(self, sites: Sequence) -> tuple[int, ...]:
        return tuple(map(self._overrides.get, sites, itertools.repeat(self.default, len(sites))))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Configuration)
            and self.alphabet == other.alphabet
            and self.default == other.default
            and self._overrides == other._overrides
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.alphabet, self.default, frozenset(self._overrides.items())))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{g!r}: {self.alphabet.symbols[a]!r}" for g, a in self._overrides.items())
        return f"Configuration(default={self.alphabet.symbols[self.default]!r}, {{{body}}})"


@dataclass(frozen=True)
class Pattern:
    """Symbol indices on an explicit ordered finite domain."""

    domain: tuple
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.domain) != len(self.values):
            raise ValueError("pattern values must match the domain")

    def as_dict(self) -> dict:
        return dict(zip(self.domain, self.values))

    def totalize(self, alphabet: Alphabet, default: int | None = None) -> Configuration:
        """The configuration equal to this pattern on its domain and ``default`` (zero) elsewhere."""
        return Configuration(alphabet, self.as_dict(), default)

    def text(self, alphabet: Alphabet) -> str:
        return alphabet.encode(self.values)


def shift(group, g, x: Configuration) -> Configuration:
    """Left translation: ``(g x)(h) = x(g^-1 h)``."""
    mul = group.mul
    return Configuration(x.alphabet, {mul(g, h): a for h, a in x._overrides.items()}, x.default)


def support_norm(x: Configuration, explorer) -> int:
    """Largest word norm of a site where x is nonzero (0 for the zero configuration)."""
    if not x.in_delta():
        raise NotInDelta("support_norm needs a configuration that is zero off a finite set")
    return max((explorer.word_norm(g) for g in x._overrides), default=0)


def restrict(x: Configuration, domain: Sequence) -> Pattern:
    domain = tuple(domain)
    return Pattern(domain, x.read(domain))


def truncate(x: Configuration, r: int, explorer) -> Configuration:
    """Agree with x on B(r) and be zero elsewhere."""
    ball = explorer.ball(r)
    return Configuration._trusted(x.alphabet, ball, x.read(ball), x.alphabet.zero_index)


def pattern_count(alphabet: Alphabet, n_sites: int) -> int:
    return len(alphabet) ** n_sites


def enumerate_patterns(
    alphabet: Alphabet, domain: Sequence, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[Pattern]:
    """All patterns on ``domain`` in lexicographic order (first site most significant)."""
    domain = tuple(domain)
    count = pattern_count(alphabet, len(domain))
    if count > cap:
        raise EnumerationCapExceeded(
            f"{len(alphabet)}^{len(domain)} = {count} patterns exceeds the enumeration cap {cap}"
        )
    for values in itertools.product(range(len(alphabet)), repeat=len(domain)):
        yield Pattern(domain, values)


_BITS = bytes.maketrans(b"01", b"\x00\x01")


def random_indices(rng, k: int, n: int) -> bytes | list[int]:
    """``n`` uniform symbol indices below ``k``; binary alphabets use one bit each."""
    if k == 2:
        if n == 0:
            return b""
        return format(rng.getrandbits(n), f"0{n}b").encode().translate(_BITS)
    return rng.choices(range(k), k=n)


def random_configuration(rng, alphabet: Alphabet, sites: Sequence, default: int | None = None) -> Configuration:
    """Uniform random symbols on ``sites``, ``default`` (zero) elsewhere."""
    values = random_indices(rng, len(alphabet), len(sites))
    return Configuration._trusted(alphabet, sites, values, alphabet.zero_index if default is None else default)
