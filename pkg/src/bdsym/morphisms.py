"""Isomorphisms and anti-isomorphisms between Boolean systems.

A couple (g, g') of bijections of B^n is an isomorphism from Phi to Psi when

    g(Phi^nu(mu)) = Psi^{g'(nu)}(g(mu))        for all nu, mu,

and an anti-isomorphism when

    Psi^{g'(nu)}(g(Phi^nu(mu))) = g(mu)        for all nu, mu.

Checking a couple costs 4^n table lookups and works for any n.  Finding all
couples walks every bijection g (so it is capped at small n) and completes
each g into the couples (g, g') by enumerating perfect matchings between
masks nu and the masks nu' whose superposition of Psi equals the conjugate
g o Phi^nu o g^-1 (or its inverse, for anti-isomorphisms).
"""
from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterator, Literal

import numpy as np

from .core import (
    BijectionTable,
    StateVector,
    TruthTable,
    _same_dim,
    _statements,
    bitstring,
    invert_bijection,
    parse_rows,
    serialize_table,
)
from .errors import BadSyntax, NotBijective, TooLarge
from .matching import perfect_matchings
from .orbits import (
    OrbitPrefix,
    SchedulePrefix,
    TimedSchedule,
    continuous_anti_orbit,
    continuous_orbit,
    discrete_orbit,
    is_anti_orbit,
    lift_hat,
    lift_tilde,
)

Kind = Literal["iso", "anti-iso"]

DEFAULT_MAX_SEARCH_N = 3
DEFAULT_SEED = 20240601


def max_search_n() -> int:
    """Exhaustive-search cap; ``BDSYM_MAX_N`` overrides the default of 3."""
    value = os.environ.get("BDSYM_MAX_N")
    return int(value) if value else DEFAULT_MAX_SEARCH_N


@dataclass(frozen=True)
class MorphismPair:
    g: BijectionTable
    gp: BijectionTable
    kind: Kind = "iso"

    def __post_init__(self):
        if self.kind not in ("iso", "anti-iso"):
            raise ValueError(f"unknown kind {self.kind!r}")
        _same_dim(self.g.n, self.gp.n)
        for name in ("g", "gp"):
            table = getattr(self, name)
            if not isinstance(table, BijectionTable):
                object.__setattr__(self, name, BijectionTable(table.n, table.rows))

    @property
    def n(self) -> int:
        return self.g.n

    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.g.rows, self.gp.rows

    def is_identity(self) -> bool:
        ident = tuple(range(self.g.size))
        return self.g.rows == ident and self.gp.rows == ident

    def to_json(self) -> dict:
        return {"g": list(self.g.rows), "gp": list(self.gp.rows), "kind": self.kind}

    @classmethod
    def from_json(cls, data: dict) -> MorphismPair:
        n = len(data["g"]).bit_length() - 1
        return cls(BijectionTable(n, tuple(data["g"])), BijectionTable(n, tuple(data["gp"])), data["kind"])


class SearchResult(list):
    """Pairs found by a search, in lexicographic (g, g') order.

    ``truncated`` is set when a limit cut the enumeration short; ``count`` is
    the number of pairs found (equal to ``len(self)`` unless the search ran
    with ``count_only``).
    """

    def __init__(self, pairs=(), *, truncated: bool = False, count: int | None = None):
        super().__init__(pairs)
        self.truncated = truncated
        self.count = len(self) if count is None else count


def _check_args(phi: TruthTable, psi: TruthTable, g: TruthTable, gp: TruthTable):
    _same_dim(phi.n, psi.n, g.n, gp.n)
    for name, b in (("g", g), ("g'", gp)):
        if not b.is_bijective():
            raise NotBijective(f"{name} is not a bijection")
    return g.array, gp.array


def iso_defects(phi: TruthTable, psi: TruthTable, g: TruthTable, gp: TruthTable) -> np.ndarray:
    """Boolean array D with D[nu, mu] true where the isomorphism square fails."""
    ga, gpa = _check_args(phi, psi, g, gp)
    lhs = ga[phi.nu_tables]
    rhs = psi.nu_tables[gpa][:, ga]
    return lhs != rhs


def anti_iso_defects(phi: TruthTable, psi: TruthTable, g: TruthTable, gp: TruthTable) -> np.ndarray:
    ga, gpa = _check_args(phi, psi, g, gp)
    images = ga[phi.nu_tables]
    back = np.take_along_axis(psi.nu_tables[gpa], images, axis=1)
    return back != ga[None, :]


def check_iso(phi: TruthTable, psi: TruthTable, g: TruthTable, gp: TruthTable) -> bool:
    return not iso_defects(phi, psi, g, gp).any()


def check_anti_iso(phi: TruthTable, psi: TruthTable, g: TruthTable, gp: TruthTable) -> bool:
    return not anti_iso_defects(phi, psi, g, gp).any()


def _first_defect(defects: np.ndarray, n: int) -> dict | None:
    hits = np.argwhere(defects)
    if not len(hits):
        return None
    nu, mu = (int(v) for v in hits[0])
    return {"nu": bitstring(n, nu), "mu": bitstring(n, mu)}


def invert_pair(p: MorphismPair) -> MorphismPair:
    return MorphismPair(invert_bijection(p.g), invert_bijection(p.gp), p.kind)


# --- search ----------------------------------------------------------------


def _target_tables(phi: TruthTable, kind: Kind) -> np.ndarray | None:
    """Tables T[nu] that g o T[nu] o g^-1 must match; None when no couple can exist.

    For anti-isomorphisms Psi^{nu'} o (g o Phi^nu o g^-1) = id forces every
    Phi^nu to be bijective and Psi^{nu'} to equal the conjugate of its inverse.
    """
    tables = phi.nu_tables
    if kind == "iso":
        return tables
    size = phi.size
    inverse = np.empty_like(tables)
    for nu in range(size):
        row = tables[nu]
        if len(np.unique(row)) != size:
            return None
        inverse[nu, row] = np.arange(size)
    return inverse


def _psi_index(psi: TruthTable) -> dict[bytes, list[int]]:
    index: dict[bytes, list[int]] = {}
    for nup, row in enumerate(psi.nu_tables):
        index.setdefault(row.tobytes(), []).append(nup)
    return index


def completions(
    phi: TruthTable, psi: TruthTable, g: BijectionTable, kind: Kind = "iso"
) -> Iterator[MorphismPair]:
    """Every g' making (g, g') a couple of the given kind, in lexicographic order of g'."""
    _same_dim(phi.n, psi.n, g.n)
    targets = _target_tables(phi, kind)
    if targets is None:
        return
    ga = g.array
    ginv = invert_bijection(g).array
    index = _psi_index(psi)
    candidates = []
    for nu in range(phi.size):
        conj = ga[targets[nu][ginv]]
        found = index.get(conj.tobytes())
        if not found:
            return
        candidates.append(found)
    n = phi.n
    for gp in perfect_matchings(candidates):
        yield MorphismPair(g, BijectionTable(n, gp), kind)


def _all_permutations(size: int) -> np.ndarray:
    return np.array(list(permutations(range(size))), dtype=np.int64).reshape(-1, size)


def _search(
    phi: TruthTable,
    psi: TruthTable,
    kind: Kind,
    limit: int | None,
    count_only: bool,
) -> SearchResult:
    _same_dim(phi.n, psi.n)
    cap = max_search_n()
    if phi.n > cap:
        raise TooLarge(f"exhaustive search is capped at n <= {cap} (set BDSYM_MAX_N to override)")
    targets = _target_tables(phi, kind)
    if targets is None:
        return SearchResult()
    n, size = phi.n, phi.size
    perms = _all_permutations(size)
    inv = np.argsort(perms, axis=1)
    weights = size ** np.arange(size, dtype=np.int64)
    psi_codes: dict[int, list[int]] = {}
    for nup, row in enumerate(psi.nu_tables):
        psi_codes.setdefault(int(row @ weights), []).append(nup)
    known = np.fromiter(psi_codes, dtype=np.int64)

    codes = np.empty((len(perms), size), dtype=np.int64)
    alive = np.ones(len(perms), dtype=bool)
    for nu in range(size):
        conj = np.take_along_axis(perms, targets[nu][inv], axis=1)
        codes[:, nu] = conj @ weights
        alive &= np.isin(codes[:, nu], known)

    pairs: list[MorphismPair] = []
    total = 0
    for gi in np.flatnonzero(alive):
        candidates = [psi_codes[int(c)] for c in codes[gi]]
        g = None
        for gp in perfect_matchings(candidates):
            if limit is not None and total >= limit:
                return SearchResult(pairs, truncated=True, count=total)
            total += 1
            if not count_only:
                if g is None:
                    g = BijectionTable(n, tuple(int(v) for v in perms[gi]))
                pairs.append(MorphismPair(g, BijectionTable(n, gp), kind))
    return SearchResult(pairs, count=total)


def find_isos(
    phi: TruthTable, psi: TruthTable, *, limit: int | None = None, count_only: bool = False
) -> SearchResult:
    """All isomorphism couples from phi to psi, sorted by (g, g')."""
    return _search(phi, psi, "iso", limit, count_only)


def find_anti_isos(
    phi: TruthTable, psi: TruthTable, *, limit: int | None = None, count_only: bool = False
) -> SearchResult:
    """All anti-isomorphism couples from phi to psi, sorted by (g, g')."""
    return _search(phi, psi, "anti-iso", limit, count_only)


# --- equivalence checks over orbits ----------------------------------------

THM28_READING = (
    "relational: the g-image of the forward orbit of Phi, started at g(mu), "
    "must be an anti-semi-orbit branch of Psi under the lifted schedule"
)


@dataclass
class VerificationReport:
    """Outcome of checking the three equivalent characterisations of a couple."""

    theorem: str
    statements: dict[str, bool]
    samples: dict[str, int]
    horizon: int
    budget: int
    seed: int
    exhaustive: bool
    counterexamples: dict[str, dict] = field(default_factory=dict)
    reading: str | None = None

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    @property
    def agree(self) -> bool:
        return len(set(self.statements.values())) == 1

    @property
    def flagged(self) -> bool:
        """The verdicts disagree; the statements should be equivalent."""
        return not self.agree

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "statements": self.statements,
            "pass": self.passed,
            "agree": self.agree,
            "samples": self.samples,
            "horizon": self.horizon,
            "budget": self.budget,
            "seed": self.seed,
            "exhaustive": self.exhaustive,
            "counterexamples": self.counterexamples,
            "reading": self.reading,
        }

    def render(self) -> str:
        lines = [f"{self.theorem}: {'PASS' if self.passed else 'FAIL'}"]
        for name, ok in self.statements.items():
            extra = ""
            if name in self.counterexamples:
                extra = f"  counterexample {self.counterexamples[name]}"
            lines.append(f"  {name}) {'pass' if ok else 'FAIL'}  [{self.samples.get(name, 0)} checks]{extra}")
        mode = "exhaustive" if self.exhaustive else f"random, seed {self.seed}"
        lines.append(f"  horizon K={self.horizon}, budget {self.budget} ({mode})")
        if self.flagged:
            lines.append("  verdicts disagree: flagged for manual analysis")
        if self.reading:
            lines.append(f"  reading: {self.reading}")
        return "\n".join(lines)


def _samples(n: int, horizon: int, budget: int, seed: int):
    """(mu, alpha, times) triples: exhaustive for small spaces, seeded random otherwise."""
    size = 1 << n
    length = horizon + 1
    total = size ** (length + 1)
    exhaustive = (n <= 2 and horizon <= 3) or total <= budget
    if exhaustive:
        def gen():
            for combo in product(range(size), repeat=length + 1):
                mu = StateVector.from_index(n, combo[0])
                alpha = SchedulePrefix(n, tuple(StateVector.from_index(n, c) for c in combo[1:]))
                yield mu, alpha, tuple(float(k) for k in range(length))
        return True, gen()

    rng = random.Random(seed)

    def gen():
        for _ in range(budget):
            mu = StateVector.from_index(n, rng.randrange(size))
            alpha = SchedulePrefix(
                n, tuple(StateVector.from_index(n, rng.randrange(size)) for _ in range(length))
            )
            t, times = rng.uniform(-5.0, 5.0), []
            for _ in range(length):
                times.append(t)
                t += rng.uniform(0.1, 3.0)
            yield mu, alpha, tuple(times)
    return False, gen()


def _fixed_point_statement(psi: TruthTable, g: BijectionTable, gp: BijectionTable):
    """g(mu) = Psi^{g'(0)}(g(mu)) for every mu; returns (count, counterexample)."""
    zero = StateVector.zeros(psi.n)
    mask = gp(zero)
    table = psi.nu_table(mask)
    for m in range(psi.size):
        gm = g.rows[m]
        if table.rows[gm] != gm:
            return psi.size, {"mu": bitstring(psi.n, m), "g'(0)": str(mask)}
    return psi.size, None


def verify_theorem29(
    phi: TruthTable,
    psi: TruthTable,
    g: BijectionTable,
    gp: BijectionTable,
    horizon: int = 4,
    budget: int = 1000,
    seed: int = DEFAULT_SEED,
) -> VerificationReport:
    """Check the diagram, discrete-orbit and timed-orbit forms of an isomorphism couple."""
    defects = iso_defects(phi, psi, g, gp)
    counter: dict[str, dict] = {}
    first = _first_defect(defects, phi.n)
    if first:
        counter["a"] = first
    samples = {"a": int(defects.size), "b": 0, "c": 0}

    count, bad = _fixed_point_statement(psi, g, gp)
    samples["c"] += count
    if bad:
        counter["c"] = {"statement": "fixed-point", **bad}

    exhaustive, triples = _samples(phi.n, horizon, budget, seed)
    for mu, alpha, times in triples:
        if "b" not in counter:
            samples["b"] += 1
            ours = discrete_orbit(phi, mu, alpha)
            theirs = discrete_orbit(psi, g(mu), lift_hat(gp, alpha))
            for k in range(-1, alpha.horizon + 1):
                if g(ours.at(k)) != theirs.at(k):
                    counter["b"] = {"mu": str(mu), "alpha": [str(s) for s in alpha.steps], "k": k}
                    break
        if "c" not in counter:
            samples["c"] += 1
            rho = TimedSchedule(alpha, times)
            ours_t = continuous_orbit(phi, mu, rho)
            theirs_t = continuous_orbit(psi, g(mu), lift_tilde(gp, rho))
            for t in ours_t.sample_points():
                if g(ours_t(t)) != theirs_t(t):
                    counter["c"] = {
                        "mu": str(mu),
                        "rho": [[tt, str(s)] for tt, s in rho.events],
                        "t": t,
                    }
                    break
        if "b" in counter and "c" in counter:
            break

    return VerificationReport(
        theorem="theorem29",
        statements={s: s not in counter for s in "abc"},
        samples=samples,
        horizon=horizon,
        budget=budget,
        seed=seed,
        exhaustive=exhaustive,
        counterexamples=counter,
    )


def verify_theorem28(
    phi: TruthTable,
    psi: TruthTable,
    g: BijectionTable,
    gp: BijectionTable,
    horizon: int = 4,
    budget: int = 1000,
    seed: int = DEFAULT_SEED,
) -> VerificationReport:
    """Check the diagram, discrete and timed anti-orbit forms of an anti-isomorphism couple.

    The orbit statements are read relationally: for every sampled mu and
    schedule, the sequence g(x_{-1}), g(x_0), ..., g(x_K) of images of the
    forward orbit must be a branch of the anti-semi-orbit of Psi from g(mu)
    under the lifted schedule, so that each Psi step walks one forward step
    of Phi backwards.
    """
    defects = anti_iso_defects(phi, psi, g, gp)
    counter: dict[str, dict] = {}
    first = _first_defect(defects, phi.n)
    if first:
        counter["a"] = first
    samples = {"a": int(defects.size), "b": 0, "c": 0}

    count, bad = _fixed_point_statement(psi, g, gp)
    samples["c"] += count
    if bad:
        counter["c"] = {"statement": "fixed-point", **bad}

    exhaustive, triples = _samples(phi.n, horizon, budget, seed)
    for mu, alpha, times in triples:
        forward = discrete_orbit(phi, mu, alpha)
        image = OrbitPrefix.of(g(v) for v in forward.values)
        if "b" not in counter:
            samples["b"] += 1
            lifted = lift_hat(gp, alpha)
            for k in range(-1, alpha.horizon + 1):
                prefix = SchedulePrefix(phi.n, lifted.steps[: k + 1])
                if not is_anti_orbit(psi, prefix, OrbitPrefix(image.start, image.values[: k + 2])):
                    counter["b"] = {"mu": str(mu), "alpha": [str(s) for s in alpha.steps], "k": k}
                    break
        if "c" not in counter:
            samples["c"] += 1
            rho = TimedSchedule(alpha, times)
            lifted_t = lift_tilde(gp, rho)
            ours_t = continuous_orbit(phi, mu, rho)
            failure = None
            if not is_anti_orbit(psi, lifted_t.schedule, image):
                failure = {"t": None}
            else:
                theirs_t = continuous_anti_orbit(psi, image, lifted_t)
                for t in ours_t.sample_points():
                    if g(ours_t(t)) != theirs_t(t):
                        failure = {"t": t}
                        break
            if failure:
                counter["c"] = {
                    "mu": str(mu),
                    "rho": [[tt, str(s)] for tt, s in rho.events],
                    **failure,
                }
        if "b" in counter and "c" in counter:
            break

    return VerificationReport(
        theorem="theorem28",
        statements={s: s not in counter for s in "abc"},
        samples=samples,
        horizon=horizon,
        budget=budget,
        seed=seed,
        exhaustive=exhaustive,
        counterexamples=counter,
        reading=THM28_READING,
    )


# --- pair files ------------------------------------------------------------


def parse_pair(text: str, kind: Kind = "iso") -> MorphismPair:
    """Parse a pair file: a ``g:`` block then a ``g':`` block, each a bijection file."""
    blocks: dict[str, list[tuple[int, str]]] = {}
    current = None
    for lineno, stmt in _statements(text):
        label = stmt.replace(" ", "")
        if label in ("g:", "g':"):
            if label in blocks:
                raise BadSyntax(f"block {label} appears twice", lineno)
            current = label
            blocks[current] = []
            continue
        if current is None:
            raise BadSyntax(f"expected 'g:' before {stmt!r}", lineno)
        blocks[current].append((lineno, stmt))
    missing = [b for b in ("g:", "g':") if b not in blocks]
    if missing:
        raise BadSyntax(f"pair file lacks block(s) {', '.join(missing)}")
    tables = {}
    for label, stmts in blocks.items():
        n, rows = parse_rows(stmts)
        if len(set(rows)) != len(rows):
            raise NotBijective(f"block {label} is not a bijection")
        tables[label] = BijectionTable(n, rows)
    return MorphismPair(tables["g:"], tables["g':"], kind)


def serialize_pair(p: MorphismPair) -> str:
    return "g:\n" + serialize_table(p.g) + "g':\n" + serialize_table(p.gp)
