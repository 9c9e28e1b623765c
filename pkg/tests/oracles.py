"""Brute-force reference implementations written straight from the definitions.

Nothing here imports the package's algorithms; states are bit tuples and
functions are dicts, so every check walks the defining formula directly.
"""
from itertools import permutations, product


def states(n):
    return list(product((0, 1), repeat=n))


def to_dict(table):
    """Package table -> {bit tuple: bit tuple}."""
    n = table.n
    return {s: tuple(int(c) for c in format(table.rows[i], f"0{n}b")) for i, s in enumerate(states(n))}


def from_dict(n, d):
    return tuple(int("".join(map(str, d[s])), 2) for s in states(n))


def superpose(phi, nu, mu):
    f = phi[mu]
    return tuple(f[i] if nu[i] else mu[i] for i in range(len(mu)))


def is_iso(phi, psi, g, gp, n):
    return all(g[superpose(phi, v, m)] == superpose(psi, gp[v], g[m]) for v in states(n) for m in states(n))


def is_anti_iso(phi, psi, g, gp, n):
    return all(superpose(psi, gp[v], g[superpose(phi, v, m)]) == g[m] for v in states(n) for m in states(n))


def bijections(n):
    S = states(n)
    for p in permutations(S):
        yield dict(zip(S, p))


def brute_pairs(phi, psi, n, anti=False):
    """Set of (g rows, g' rows) over all bijection couples; (2^n)!^2 checks."""
    check = is_anti_iso if anti else is_iso
    B = list(bijections(n))
    return {
        (from_dict(n, g), from_dict(n, gp))
        for g in B
        for gp in B
        if check(phi, psi, g, gp, n)
    }


def brute_preimages(phi, nu, x):
    return {y for y in phi if superpose(phi, nu, y) == x}


def brute_portrait_edges(phi, n):
    edges = set()
    for mu in states(n):
        for nu in states(n):
            nxt = superpose(phi, nu, mu)
            if nxt != mu:
                edges.add((mu, nxt))
    return edges


def brute_system(phi, n, K, anti=False):
    """Stutter-collapsed sequences over all mu and all mask sequences of length K+1."""
    out = set()
    for mu in states(n):
        for alpha in product(states(n), repeat=K + 1):
            seqs = [[mu]]
            for a in alpha:
                nxt = []
                for s in seqs:
                    if anti:
                        nxt += [s + [y] for y in brute_preimages(phi, a, s[-1])]
                    else:
                        nxt.append(s + [superpose(phi, a, s[-1])])
                seqs = nxt
            for s in seqs:
                collapsed = [s[0]]
                for v in s[1:]:
                    if v != collapsed[-1]:
                        collapsed.append(v)
                out.add(tuple(int("".join(map(str, v)), 2) for v in collapsed))
    return out
