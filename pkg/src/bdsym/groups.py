"""Automorphism groups and symmetry classification."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable

from .core import (
    BijectionTable,
    Permutation,
    StateVector,
    TruthTable,
    _same_dim,
    all_states,
    bitstring,
    compose_bijections,
    is_self_dual,
    permutation_bijection,
    translation_bijection,
)
from .errors import KindMismatch, NotAnAutomorphism
from .morphisms import (
    MorphismPair,
    check_iso,
    completions,
    find_anti_isos,
    find_isos,
    invert_pair,
    max_search_n,
)


@dataclass(frozen=True)
class PairSet:
    """A duplicate-free set of isomorphism couples kept in lexicographic order."""

    n: int
    pairs: tuple[MorphismPair, ...] = ()

    def __post_init__(self):
        unique = {p.key(): p for p in self.pairs}
        for p in unique.values():
            _same_dim(self.n, p.n)
            if p.kind != "iso":
                raise KindMismatch("a PairSet holds isomorphism couples only")
        object.__setattr__(self, "pairs", tuple(unique[k] for k in sorted(unique)))

    @classmethod
    def of(cls, pairs: Iterable[MorphismPair]) -> PairSet:
        pairs = tuple(pairs)
        if not pairs:
            raise ValueError("cannot infer the dimension of an empty pair collection")
        return cls(pairs[0].n, pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __contains__(self, p: MorphismPair) -> bool:
        return any(q.key() == p.key() for q in self.pairs)

    @property
    def order(self) -> int:
        return len(self.pairs)

    def keys(self) -> set:
        return {p.key() for p in self.pairs}

    def to_json(self) -> dict:
        return {"order": self.order, "pairs": [p.to_json() for p in self.pairs]}


def identity_pair(n: int) -> MorphismPair:
    ident = BijectionTable.identity(n)
    return MorphismPair(ident, ident, "iso")


def compose_pairs(p: MorphismPair, q: MorphismPair) -> MorphismPair:
    """(h, h') o (g, g') = (h o g, h' o g')."""
    _same_dim(p.n, q.n)
    if p.kind != "iso" or q.kind != "iso":
        raise KindMismatch("only isomorphism couples compose into the automorphism group")
    return MorphismPair(compose_bijections(p.g, q.g), compose_bijections(p.gp, q.gp), "iso")


def generate_group(generators: PairSet | Iterable[MorphismPair], phi: TruthTable) -> PairSet:
    """Closure of the generators and the identity under composition and inversion."""
    gens = list(generators)
    for i, p in enumerate(gens):
        _same_dim(phi.n, p.n)
        if p.kind != "iso" or not check_iso(phi, phi, p.g, p.gp):
            raise NotAnAutomorphism(f"generator #{i} is not an automorphism of the function")
    elements = {identity_pair(phi.n).key(): identity_pair(phi.n)}
    queue = list(elements.values())
    for p in gens:
        for q in (p, invert_pair(p)):
            if q.key() not in elements:
                elements[q.key()] = q
                queue.append(q)
    while queue:
        p = queue.pop()
        for s in gens:
            for q in (compose_pairs(p, s), compose_pairs(s, p)):
                if q.key() not in elements:
                    elements[q.key()] = q
                    queue.append(q)
    return PairSet(phi.n, tuple(elements.values()))


def group_defect(s: PairSet | Iterable[MorphismPair], phi: TruthTable) -> str | None:
    """Why ``s`` is not a subgroup of Aut(phi), or None when it is."""
    pairs = list(s)
    if any(p.n != phi.n for p in pairs):
        return "dimension-mismatch"
    keys = {p.key() for p in pairs}
    if identity_pair(phi.n).key() not in keys:
        return "missing-identity"
    for p in pairs:
        if p.kind != "iso" or not check_iso(phi, phi, p.g, p.gp):
            return "not-automorphism"
    for p in pairs:
        if invert_pair(p).key() not in keys:
            return "not-closed-inverse"
        for q in pairs:
            if compose_pairs(p, q).key() not in keys:
                return "not-closed-composition"
    return None


def is_group(s: PairSet | Iterable[MorphismPair], phi: TruthTable) -> bool:
    return group_defect(s, phi) is None


def is_symmetry_group(s: PairSet, phi: TruthTable) -> bool:
    """A subgroup of Aut(phi) of order greater than one."""
    return len(s) > 1 and is_group(s, phi)


def automorphisms(phi: TruthTable) -> PairSet:
    return PairSet(phi.n, tuple(find_isos(phi, phi)))


@dataclass
class SymmetryReport:
    """Symmetry flags of a function with one witness per flag that holds.

    A flag is None when it could not be decided (the full automorphism
    search was beyond the exhaustive cap).
    """

    n: int
    symmetrical: bool | None
    anti_symmetrical: bool | None
    coordinate_symmetric: bool
    translation_symmetric: bool
    self_dual: bool
    aut_order: int | None
    witnesses: dict[str, MorphismPair] = field(default_factory=dict)
    coordinate_permutations: list[Permutation] = field(default_factory=list)
    aut: PairSet | None = None

    @property
    def flags(self) -> dict[str, bool | None]:
        return {
            "symmetrical": self.symmetrical,
            "anti_symmetrical": self.anti_symmetrical,
            "coordinate_symmetric": self.coordinate_symmetric,
            "translation_symmetric": self.translation_symmetric,
            "self_dual": self.self_dual,
        }

    def to_json(self, include_pairs: bool = False) -> dict:
        witnesses = {k: p.to_json() for k, p in self.witnesses.items()}
        if self.coordinate_permutations:
            witnesses["coordinate_permutations"] = [list(s.sigma) for s in self.coordinate_permutations]
        data = {
            "order": self.aut_order,
            "pairs": [p.to_json() for p in self.aut] if include_pairs and self.aut else [],
            "flags": self.flags,
            "witnesses": witnesses,
        }
        return data

    def render(self) -> str:
        def fmt(value):
            return "unknown" if value is None else str(value).lower()

        lines = [f"n = {self.n}", f"card(Aut) = {fmt(self.aut_order)}"]
        for name, value in self.flags.items():
            lines.append(f"{name:22s} {fmt(value)}")
        for name, p in self.witnesses.items():
            g = " ".join(bitstring(self.n, v) for v in p.g.rows)
            gp = " ".join(bitstring(self.n, v) for v in p.gp.rows)
            lines.append(f"witness {name}: g = [{g}], g' = [{gp}]")
        if self.coordinate_permutations:
            sig = ", ".join(f"({s})" for s in self.coordinate_permutations)
            lines.append(f"coordinate permutations sigma: {sig}")
        return "\n".join(lines)


def coordinate_symmetries(phi: TruthTable) -> list[Permutation]:
    """Every sigma != id with (pi_sigma, pi_sigma) in Aut(phi), in lexicographic order."""
    found = []
    for sigma in permutations(range(1, phi.n + 1)):
        perm = Permutation(phi.n, sigma)
        if perm.is_identity():
            continue
        pi = permutation_bijection(perm)
        if check_iso(phi, phi, pi, pi):
            found.append(perm)
    return found


def translation_witness(phi: TruthTable) -> MorphismPair | None:
    """The first (theta^lambda, g') != (id, id) in Aut(phi), scanning lambda in index order."""
    for lam in all_states(phi.n):
        for pair in completions(phi, phi, translation_bijection(lam), "iso"):
            if not pair.is_identity():
                return pair
    return None


def classify(phi: TruthTable) -> SymmetryReport:
    """Compute the symmetry flags of phi.

    The coordinate, translation and duality flags come from targeted
    searches that work beyond the exhaustive cap; card(Aut) and the
    anti-symmetry flag need the full search and are left undecided above it.
    """
    witnesses: dict[str, MorphismPair] = {}
    coords = coordinate_symmetries(phi)
    if coords:
        pi = permutation_bijection(coords[0])
        witnesses["coordinate_symmetric"] = MorphismPair(pi, pi, "iso")
    trans = translation_witness(phi)
    if trans is not None:
        witnesses["translation_symmetric"] = trans

    aut = None
    aut_order = None
    symmetrical: bool | None
    anti: bool | None
    if phi.n <= max_search_n():
        aut = automorphisms(phi)
        aut_order = len(aut)
        symmetrical = aut_order > 1
        if symmetrical:
            witnesses["symmetrical"] = next(p for p in aut if not p.is_identity())
        anti_pairs = find_anti_isos(phi, phi, limit=1)
        anti = bool(anti_pairs)
        if anti:
            witnesses["anti_symmetrical"] = anti_pairs[0]
    else:
        # any non-identity automorphism found by the targeted searches settles the flag
        known = [p for p in witnesses.values() if not p.is_identity()]
        symmetrical = True if known else None
        if known:
            witnesses["symmetrical"] = known[0]
        anti = None

    return SymmetryReport(
        n=phi.n,
        symmetrical=symmetrical,
        anti_symmetrical=anti,
        coordinate_symmetric=bool(coords),
        translation_symmetric=trans is not None,
        self_dual=is_self_dual(phi),
        aut_order=aut_order,
        witnesses=witnesses,
        coordinate_permutations=coords,
        aut=aut,
    )


def edge_image(pair: MorphismPair, edge: tuple[StateVector, StateVector]) -> tuple[StateVector, StateVector]:
    """Where a couple sends a transfer mu -> Phi^nu(mu): kept for isomorphisms, reversed for anti."""
    src, dst = edge
    if pair.kind == "iso":
        return pair.g(src), pair.g(dst)
    return pair.g(dst), pair.g(src)

