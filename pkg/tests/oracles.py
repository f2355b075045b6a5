"""Independent reference computations used to derive frozen test values."""

from __future__ import annotations

import itertools


def plane_partition_heights(n: int) -> list[tuple[tuple[int, ...], ...]]:
    """All plane partitions of n as n x n height matrices, by direct search.

    Fills cells row-major, bounding each height by the cell above and to the
    left; shares no code with the package enumeration.
    """
    cells = [(i, j) for i in range(n) for j in range(n)]
    out = []

    def rec(k, h, left):
        if k == len(cells):
            if left == 0:
                out.append(tuple(tuple(h[i * n + j] for j in range(n)) for i in range(n)))
            return
        i, j = cells[k]
        cap = left
        if i > 0:
            cap = min(cap, h[(i - 1) * n + j])
        if j > 0:
            cap = min(cap, h[i * n + j - 1])
        for v in range(cap + 1):
            h.append(v)
            rec(k + 1, h, left - v)
            h.pop()

    if n == 0:
        return [()]
    rec(0, [], n)
    return out


def macmahon_by_products(n_max: int) -> list[int]:
    """Coefficients via the sigma_2 recursion n c_n = sum_k sigma2(k) c_{n-k}."""
    sigma2 = [0] + [sum(d * d for d in range(1, k + 1) if k % d == 0) for k in range(1, n_max + 1)]
    c = [1] + [0] * n_max
    for n in range(1, n_max + 1):
        c[n] = sum(sigma2[k] * c[n - k] for k in range(1, n + 1)) // n
    return c


def allowed_by_adjacency() -> list[frozenset]:
    """Occupied-position sets of the hexagon with no two sites at distance 1.

    Distances are computed from planar coordinates of the six sites.
    """
    # positions on a regular hexagon: 1 lower-left, 2 lower-right, 3 left,
    # 4 right, 5 upper-left, 6 upper-right
    import math
    coords = {1: (-0.5, -math.sqrt(3) / 2), 2: (0.5, -math.sqrt(3) / 2), 3: (-1.0, 0.0),
              4: (1.0, 0.0), 5: (-0.5, math.sqrt(3) / 2), 6: (0.5, math.sqrt(3) / 2)}
    out = []
    for bits in itertools.product((0, 1), repeat=6):
        occ = [p for p, b in zip(range(1, 7), bits) if b]
        if all(math.dist(coords[p], coords[q]) > 1.0 + 1e-9 for p, q in itertools.combinations(occ, 2)):
            out.append(frozenset(occ))
    return out
