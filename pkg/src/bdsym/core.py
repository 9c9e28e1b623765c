"""States, truth tables, the nu-superposition and the bijection algebra.

A state of an n-dimensional system is a tuple of bits (mu_1, ..., mu_n).  Its
canonical index puts mu_1 in the most significant position, so the state
written ``011`` has index 3.  Tables store outputs as canonical indices in
input-index order; the public operations accept and return ``StateVector``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    BadSyntax,
    DimensionMismatch,
    DuplicateRow,
    MissingRow,
    NotBijective,
)

MAX_N = 16


def _check_n(n: int) -> None:
    if not isinstance(n, int) or not 1 <= n <= MAX_N:
        raise DimensionMismatch(f"dimension must be an integer in 1..{MAX_N}, got {n!r}")


@dataclass(frozen=True)
class StateVector:
    """A point of B^n.  Also used as a coordinate mask (nu, lambda)."""

    n: int
    bits: tuple[int, ...]

    def __post_init__(self):
        _check_n(self.n)
        if len(self.bits) != self.n:
            raise DimensionMismatch(f"expected {self.n} bits, got {len(self.bits)}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"bits must be 0 or 1: {self.bits!r}")

    @classmethod
    def from_index(cls, n: int, index: int) -> StateVector:
        _check_n(n)
        if not 0 <= index < 1 << n:
            raise ValueError(f"index {index} out of range for n={n}")
        return cls(n, tuple((index >> (n - 1 - i)) & 1 for i in range(n)))

    @classmethod
    def parse(cls, text: str) -> StateVector:
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise BadSyntax(f"not a bit string: {text!r}")
        return cls(len(text), tuple(int(c) for c in text))

    @classmethod
    def zeros(cls, n: int) -> StateVector:
        return cls(n, (0,) * n)

    @classmethod
    def ones(cls, n: int) -> StateVector:
        return cls(n, (1,) * n)

    @cached_property
    def index(self) -> int:
        value = 0
        for b in self.bits:
            value = (value << 1) | b
        return value

    def complement(self) -> StateVector:
        return StateVector(self.n, tuple(1 - b for b in self.bits))

    def _same(self, other: StateVector) -> None:
        if self.n != other.n:
            raise DimensionMismatch(f"dimensions differ: {self.n} vs {other.n}")

    def __xor__(self, other: StateVector) -> StateVector:
        self._same(other)
        return StateVector(self.n, tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def __and__(self, other: StateVector) -> StateVector:
        self._same(other)
        return StateVector(self.n, tuple(a & b for a, b in zip(self.bits, other.bits)))

    def __or__(self, other: StateVector) -> StateVector:
        self._same(other)
        return StateVector(self.n, tuple(a | b for a, b in zip(self.bits, other.bits)))

    def __invert__(self) -> StateVector:
        return self.complement()

    def __str__(self) -> str:
        return "".join(map(str, self.bits))

    def __lt__(self, other: StateVector) -> bool:
        return (self.n, self.index) < (other.n, other.index)


def all_states(n: int) -> Iterator[StateVector]:
    """Every state of B^n in canonical index order."""
    _check_n(n)
    for bits in product((0, 1), repeat=n):
        yield StateVector(n, bits)


def bitstring(n: int, index: int) -> str:
    return format(index, f"0{n}b")


@dataclass(frozen=True)
class TruthTable:
    """A total function B^n -> B^n; ``rows[i]`` is the index of the image of state i."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        _check_n(self.n)
        size = 1 << self.n
        if len(self.rows) != size:
            raise DimensionMismatch(f"a table of dimension {self.n} needs {size} rows, got {len(self.rows)}")
        if any(not 0 <= r < size for r in self.rows):
            raise DimensionMismatch("every output must be a state of the same dimension")

    @classmethod
    def from_function(cls, n: int, func: Callable[[tuple[int, ...]], Sequence[int]]) -> TruthTable:
        """Tabulate ``func``, which maps a bit tuple to a bit sequence."""
        rows = []
        for mu in all_states(n):
            rows.append(StateVector(n, tuple(func(mu.bits))).index)
        return cls(n, tuple(rows))

    @classmethod
    def from_mapping(cls, n: int, mapping: dict[str, str]) -> TruthTable:
        rows = [0] * (1 << n)
        for src, dst in mapping.items():
            rows[StateVector.parse(src).index] = StateVector.parse(dst).index
        return cls(n, tuple(rows))

    @classmethod
    def identity(cls, n: int) -> TruthTable:
        return cls(n, tuple(range(1 << n)))

    @property
    def size(self) -> int:
        return 1 << self.n

    def __call__(self, mu: StateVector) -> StateVector:
        return apply(self, mu)

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.rows, dtype=np.int64)

    def is_bijective(self) -> bool:
        return len(set(self.rows)) == len(self.rows)

    def nu_table(self, nu: StateVector) -> TruthTable:
        """The table of the nu-superposition of this function."""
        _same_dim(self.n, nu.n)
        mask = nu.index
        return TruthTable(self.n, tuple((m & ~mask) | (f & mask) for m, f in enumerate(self.rows)))

    @cached_property
    def nu_tables(self) -> np.ndarray:
        """Array ``T`` with ``T[nu, mu]`` the index of the nu-superposition applied to mu."""
        return _nu_tables(self.array, self.n)

    def __str__(self) -> str:
        return serialize_table(self)


def _nu_tables(f: np.ndarray, n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    return (idx[None, :] & ~idx[:, None]) | (f[None, :] & idx[:, None])


@dataclass(frozen=True)
class BijectionTable(TruthTable):
    """A bijection of B^n, stored as a permutation of the canonical indices."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_bijective():
            raise NotBijective("table is not a permutation of the state indices")

    @property
    def map(self) -> tuple[int, ...]:
        return self.rows

    @classmethod
    def identity(cls, n: int) -> BijectionTable:
        return cls(n, tuple(range(1 << n)))

    def inverse(self) -> BijectionTable:
        return invert_bijection(self)

    def __matmul__(self, other: BijectionTable) -> BijectionTable:
        return compose_bijections(self, other)

    def as_truth_table(self) -> TruthTable:
        return TruthTable(self.n, self.rows)


@dataclass(frozen=True)
class Permutation:
    """A permutation sigma of the coordinates {1, ..., n}, stored 1-based."""

    n: int
    sigma: tuple[int, ...]

    def __post_init__(self):
        _check_n(self.n)
        if sorted(self.sigma) != list(range(1, self.n + 1)):
            raise ValueError(f"not a permutation of 1..{self.n}: {self.sigma!r}")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(n, tuple(range(1, n + 1)))

    def __call__(self, i: int) -> int:
        return self.sigma[i - 1]

    def compose(self, other: Permutation) -> Permutation:
        """``self o other``: i -> self(other(i))."""
        _same_dim(self.n, other.n)
        return Permutation(self.n, tuple(self(other(i)) for i in range(1, self.n + 1)))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, s in enumerate(self.sigma, start=1):
            inv[s - 1] = i
        return Permutation(self.n, tuple(inv))

    def is_identity(self) -> bool:
        return self.sigma == tuple(range(1, self.n + 1))

    def __str__(self) -> str:
        return " ".join(map(str, self.sigma))


def _same_dim(*dims: int) -> None:
    if len(set(dims)) > 1:
        raise DimensionMismatch(f"dimensions differ: {', '.join(map(str, dims))}")


def apply(phi: TruthTable, mu: StateVector) -> StateVector:
    _same_dim(phi.n, mu.n)
    return StateVector.from_index(phi.n, phi.rows[mu.index])


def nu_apply(phi: TruthTable, nu: StateVector, mu: StateVector) -> StateVector:
    """Update exactly the coordinates selected by ``nu``; the others keep their value."""
    _same_dim(phi.n, nu.n, mu.n)
    m, mask = mu.index, nu.index
    return StateVector.from_index(phi.n, (m & ~mask) | (phi.rows[m] & mask))


def excited(phi: TruthTable, mu: StateVector) -> StateVector:
    """Mask of the coordinates i with Phi_i(mu) != mu_i."""
    _same_dim(phi.n, mu.n)
    return StateVector.from_index(phi.n, phi.rows[mu.index] ^ mu.index)


def fixed_points(phi: TruthTable) -> set[StateVector]:
    return {StateVector.from_index(phi.n, i) for i, r in enumerate(phi.rows) if r == i}


def dual(phi: TruthTable) -> TruthTable:
    full = phi.size - 1
    return TruthTable(phi.n, tuple(full ^ phi.rows[full ^ m] for m in range(phi.size)))


def is_self_dual(phi: TruthTable) -> bool:
    return dual(phi).rows == phi.rows


def permutation_bijection(sigma: Permutation) -> BijectionTable:
    """The map (mu_1, ..., mu_n) -> (mu_sigma(1), ..., mu_sigma(n))."""
    n = sigma.n
    rows = []
    for mu in all_states(n):
        rows.append(StateVector(n, tuple(mu.bits[s - 1] for s in sigma.sigma)).index)
    return BijectionTable(n, tuple(rows))


def translation_bijection(lam: StateVector) -> BijectionTable:
    """mu -> mu XOR lambda."""
    k = lam.index
    return BijectionTable(lam.n, tuple(m ^ k for m in range(1 << lam.n)))


def compose_bijections(b1: BijectionTable, b2: BijectionTable) -> BijectionTable:
    """mu -> b1(b2(mu))."""
    _same_dim(b1.n, b2.n)
    return BijectionTable(b1.n, tuple(b1.rows[r] for r in b2.rows))


def invert_bijection(b: BijectionTable) -> BijectionTable:
    inv = [0] * b.size
    for i, r in enumerate(b.rows):
        inv[r] = i
    return BijectionTable(b.n, tuple(inv))


def compose_tables(f: TruthTable, h: TruthTable) -> TruthTable:
    """mu -> f(h(mu)) for arbitrary (not necessarily bijective) tables."""
    _same_dim(f.n, h.n)
    return TruthTable(f.n, tuple(f.rows[r] for r in h.rows))


# --- function-file format -------------------------------------------------

_HEADER = re.compile(r"^n\s*=\s*(\S+)$")
_ROW = re.compile(r"^([01]+)\s*->\s*([01]+)$")


def _statements(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for part in line.split(";"):
            part = part.strip()
            if part:
                yield lineno, part


def parse_rows(statements: Iterable[tuple[int, str]]) -> tuple[int, tuple[int, ...]]:
    """Parse a header and row statements into ``(n, rows)``; shared by the pair-file reader."""
    it = iter(statements)
    try:
        lineno, first = next(it)
    except StopIteration:
        raise BadSyntax("empty input: expected a header line 'n=<int>'") from None
    match = _HEADER.match(first)
    if not match:
        raise BadSyntax(f"expected header 'n=<int>', got {first!r}", lineno)
    try:
        n = int(match.group(1))
    except ValueError:
        raise BadSyntax(f"dimension is not an integer: {match.group(1)!r}", lineno) from None
    if not 1 <= n <= MAX_N:
        raise DimensionMismatch(f"line {lineno}: dimension must be in 1..{MAX_N}, got {n}")

    rows: dict[int, int] = {}
    seen_at: dict[int, int] = {}
    for lineno, stmt in it:
        match = _ROW.match(stmt)
        if not match:
            raise BadSyntax(f"expected '<bits> -> <bits>', got {stmt!r}", lineno)
        src, dst = match.groups()
        if len(src) != n or len(dst) != n:
            raise DimensionMismatch(f"line {lineno}: row {stmt!r} does not have {n} bits on both sides")
        key = int(src, 2)
        if key in rows:
            raise DuplicateRow(f"input {src} already defined on line {seen_at[key]}", lineno)
        rows[key] = int(dst, 2)
        seen_at[key] = lineno
    missing = [bitstring(n, i) for i in range(1 << n) if i not in rows]
    if missing:
        raise MissingRow(f"no row for input state(s) {', '.join(missing)}")
    return n, tuple(rows[i] for i in range(1 << n))


def parse_function(text: str) -> TruthTable:
    """Parse the text of a function file.

    Statements are separated by newlines or ``;``, ``#`` starts a comment,
    and every one of the 2^n input states must appear exactly once.
    """
    n, rows = parse_rows(_statements(text))
    return TruthTable(n, rows)


def parse_bijection(text: str) -> BijectionTable:
    n, rows = parse_rows(_statements(text))
    if len(set(rows)) != len(rows):
        dupes = sorted({bitstring(n, r) for r in rows if rows.count(r) > 1})
        raise NotBijective(f"outputs repeated: {', '.join(dupes)}")
    return BijectionTable(n, rows)


def serialize_table(table: TruthTable) -> str:
    lines = [f"n={table.n}"]
    for i, r in enumerate(table.rows):
        lines.append(f"{bitstring(table.n, i)} -> {bitstring(table.n, r)}")
    return "\n".join(lines) + "\n"
