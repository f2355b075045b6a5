"""Classical hexagon model: local classes, gluing rules, tori and partition functions.

The model only ever consumes the class of a hexagon, never its position.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Literal, Mapping, NamedTuple

import numpy as np

from .errors import BeyondBound, MissingWeight, NotAdjacent
from .lattice import HexagonConfig

# pairs of hexagon positions at distance 1; they form a 6-cycle 1-3-5-6-4-2-1
ADJACENT_PAIRS = ((1, 3), (3, 5), (2, 4), (4, 6), (1, 2), (5, 6))

MAX_TORUS_SITES = 24

Rules = Literal["kagome", "vertical"]


@dataclass(frozen=True)
class HexClass:
    """An allowed hexagon configuration, labelled by its occupied positions."""

    label: str
    positions: frozenset

    @property
    def particles(self) -> int:
        return len(self.positions)

    @property
    def config(self) -> HexagonConfig:
        return HexagonConfig.from_positions(self.positions)

    def __repr__(self) -> str:
        return f"HexClass({self.label})"


def _make(label: str) -> HexClass:
    n, _, digits = label.partition("_")
    return HexClass(label, frozenset(int(d) for d in digits))


LABELS = ("0", "1_1", "1_2", "1_3", "1_4", "1_5", "1_6",
          "2_14", "2_15", "2_16", "2_23", "2_25", "2_26", "2_34", "2_36", "2_45",
          "3_236", "3_145")
CLASSES = tuple(_make(lb) for lb in LABELS)
BY_LABEL = {c.label: c for c in CLASSES}
BY_POSITIONS = {c.positions: c for c in CLASSES}


def classify(config: HexagonConfig) -> HexClass | None:
    """Class of ``config``, or ``None`` when the configuration is forbidden."""
    return BY_POSITIONS.get(config.positions)


def violates_embargo(config: HexagonConfig) -> bool:
    """True when two occupied sites of the hexagon are at distance 1."""
    return any(config[i] and config[j] for i, j in ADJACENT_PAIRS)


def enumerate_allowed() -> list[HexClass]:
    """Scan all 64 configurations and keep those without nearest-neighbour pairs."""
    out = []
    for bits in itertools.product((False, True), repeat=6):
        cfg = HexagonConfig(bits)
        if not violates_embargo(cfg):
            out.append(BY_POSITIONS[cfg.positions])
    return sorted(out, key=lambda c: LABELS.index(c.label))


def particle_tally(classes) -> tuple[int, ...]:
    counts = Counter(c.particles for c in classes)
    return tuple(counts.get(n, 0) for n in range(4))


# -- weight tables ------------------------------------------------------------

@dataclass(frozen=True)
class WeightTable:
    """Complex Boltzmann weight for each of the 18 classes."""

    weights: Mapping[str, complex]

    def __post_init__(self):
        missing = [lb for lb in LABELS if lb not in self.weights]
        if missing:
            raise MissingWeight(f"weight table lacks classes {missing}")
        extra = set(self.weights) - set(LABELS)
        if extra:
            raise ValueError(f"unknown class labels {sorted(extra)}")
        object.__setattr__(self, "weights", {lb: complex(self.weights[lb]) for lb in LABELS})

    def __getitem__(self, key: str | HexClass) -> complex:
        return self.weights[key.label if isinstance(key, HexClass) else key]

    @classmethod
    def uniform(cls, value: complex = 1.0) -> "WeightTable":
        return cls({lb: value for lb in LABELS})

    @classmethod
    def random(cls, rng: np.random.Generator) -> "WeightTable":
        """Independent standard complex normal weights."""
        z = rng.normal(size=len(LABELS)) + 1j * rng.normal(size=len(LABELS))
        return cls(dict(zip(LABELS, z)))

    @classmethod
    def from_energies(cls, energies: Mapping[str, float], beta: float) -> "WeightTable":
        """Weights ``exp(-beta * energy)``."""
        return cls({lb: np.exp(-beta * energies[lb]) for lb in LABELS})

    def to_json(self) -> str:
        return json.dumps({lb: [w.real, w.imag] for lb, w in self.weights.items()})

    @classmethod
    def from_json(cls, text: str) -> "WeightTable":
        rec = json.loads(text)
        return cls({lb: complex(v[0], v[1]) for lb, v in rec.items()})


# -- gluing -------------------------------------------------------------------

class PlacedHexagon(NamedTuple):
    """A hexagon configuration at anchor ``(a, m)``."""

    a: int
    m: int
    config: HexagonConfig


def glue_check(A: PlacedHexagon, B: PlacedHexagon, rules: Rules) -> bool:
    """Check the shared-site equalities between two neighbouring hexagons.

    Horizontal neighbours (same row, anchors two apart) share one X site.
    Under kagome rules a hexagon and one in the next row offset by one share
    one Y site; under vertical rules a hexagon and the one directly above
    share both upper Y sites.

    Raises
    ------
    NotAdjacent
        If the anchors are not neighbours under ``rules``.
    """
    if B.a < A.a or (B.a == A.a and B.m < A.m):
        A, B = B, A
    da, dm = B.a - A.a, B.m - A.m
    ca, cb = A.config, B.config
    if da == 0 and dm == 2:
        return ca[4] == cb[3]
    if da == 1 and rules == "kagome":
        if dm == 1:
            return ca[6] == cb[1]
        if dm == -1:
            return ca[5] == cb[2]
    if da == 1 and rules == "vertical" and dm == 0:
        return ca[5] == cb[1] and ca[6] == cb[2]
    raise NotAdjacent(f"anchors ({A.a}, {A.m}) and ({B.a}, {B.m}) are not adjacent under {rules} rules")


@dataclass(frozen=True)
class TorusSpec:
    """Periodic ``M`` x ``N`` block of hexagons.

    Row ``n`` holds ``M`` hexagons. Under kagome rules its anchors are
    ``m = 2j + n``; an odd ``N`` closes the torus with a one-slot helical
    shift so that row parities stay consistent across the seam. Under
    vertical rules all rows use ``m = 2j``.
    """

    M: int
    N: int
    rules: Rules = "vertical"

    def __post_init__(self):
        if self.M < 1 or self.N < 1:
            raise ValueError("M and N must be positive")
        if self.rules not in ("kagome", "vertical"):
            raise ValueError(f"unknown rules {self.rules!r}")

    @property
    def n_sites(self) -> int:
        return 3 * self.M * self.N

    @property
    def twist(self) -> int:
        return self.N % 2 if self.rules == "kagome" else 0

    def offset(self, n: int) -> int:
        return n % 2 if self.rules == "kagome" else 0

    def anchor(self, n: int, j: int) -> tuple[int, int]:
        return n, 2 * j + self.offset(n)

    def cell_of(self, a: int, m: int) -> tuple[int, int]:
        """Torus cell of an unwrapped anchor."""
        wraps, n = divmod(a, self.N)
        m0 = m - wraps * self.twist - self.offset(n)
        return n, (m0 // 2) % self.M

    def canonical_site(self, kind: str, row: int, pos: int) -> tuple[str, int, int]:
        """Reduce a site to its representative in rows ``0..N-1`` and slots ``0..2M-1``.

        X sites are indexed by ``m``, Y sites by slot ``s`` with ``r = s + 1/2``.
        """
        wraps, n = divmod(row, self.N)
        pos -= wraps * self.twist
        return kind, n, pos % (2 * self.M)

    def cell_sites(self, n: int, j: int) -> tuple[tuple[str, int, int], ...]:
        _, m = self.anchor(n, j)
        raw = (("Y", n - 1, m), ("Y", n - 1, m + 1), ("X", n, m),
               ("X", n, m + 2), ("Y", n, m), ("Y", n, m + 1))
        return tuple(self.canonical_site(*s) for s in raw)

    def neighbor_pairs(self) -> list[tuple[tuple[int, int], tuple[int, int], int, int]]:
        """Pairs of cells with the unwrapped anchor offset of the second."""
        out = []
        ups = ((1, 1), (1, -1)) if self.rules == "kagome" else ((1, 0),)
        for n in range(self.N):
            for j in range(self.M):
                a, m = self.anchor(n, j)
                for da, dm in ((0, 2),) + ups:
                    out.append(((n, j), self.cell_of(a + da, m + dm), da, dm))
        return out


@dataclass(frozen=True)
class ConfigTally:
    """Number of cells in each class."""

    counts: tuple[int, ...]

    @classmethod
    def of(cls, grid) -> "ConfigTally":
        c = Counter(cell.label for row in grid for cell in row)
        return cls(tuple(c.get(lb, 0) for lb in LABELS))

    def as_dict(self) -> dict[str, int]:
        return dict(zip(LABELS, self.counts))


def _check_bound(spec: TorusSpec) -> None:
    if spec.n_sites > MAX_TORUS_SITES:
        raise BeyondBound(f"torus has {spec.n_sites} sites; exhaustive bound is {MAX_TORUS_SITES}")


def enumerate_torus_configs(spec: TorusSpec) -> Iterator[tuple[tuple[tuple[HexClass, ...], ...], ConfigTally]]:
    """All consistent class assignments of the torus.

    Backtracks over the torus sites, classifying every hexagon as soon as its
    six sites are fixed.
    """
    _check_bound(spec)
    cells = [(n, j) for n in range(spec.N) for j in range(spec.M)]
    cell_sites = {c: spec.cell_sites(*c) for c in cells}
    sites = sorted({s for ss in cell_sites.values() for s in ss})
    order = {s: i for i, s in enumerate(sites)}
    # each cell is checked once its last site is assigned
    ready: dict[int, list] = {}
    for c, ss in cell_sites.items():
        ready.setdefault(max(order[s] for s in ss), []).append(c)
    values = [False] * len(sites)

    def rec(k: int):
        if k == len(sites):
            grid = tuple(
                tuple(classify(HexagonConfig(tuple(values[order[s]] for s in cell_sites[(n, j)])))
                      for j in range(spec.M))
                for n in range(spec.N))
            yield grid, ConfigTally.of(grid)
            return
        for v in (False, True):
            values[k] = v
            if all(classify(HexagonConfig(tuple(values[order[s]] for s in cell_sites[c]))) is not None
                   for c in ready.get(k, ())):
                yield from rec(k + 1)
        values[k] = False

    yield from rec(0)


def count_torus_configs_by_gluing(spec: TorusSpec) -> int:
    """Independent count: every class assignment filtered by :func:`glue_check`.

    Cost grows as ``18**(M*N)``; meant as an oracle for tiny tori.
    """
    _check_bound(spec)
    cells = [(n, j) for n in range(spec.N) for j in range(spec.M)]
    pairs = spec.neighbor_pairs()
    count = 0
    for assignment in itertools.product(CLASSES, repeat=len(cells)):
        grid = dict(zip(cells, assignment))
        ok = True
        for (n, j), other, da, dm in pairs:
            a, m = spec.anchor(n, j)
            A = PlacedHexagon(a, m, grid[(n, j)].config)
            B = PlacedHexagon(a + da, m + dm, grid[other].config)
            if not glue_check(A, B, spec.rules):
                ok = False
                break
        count += ok
    return count


def classical_partition_function(spec: TorusSpec, table: WeightTable,
                                 method: Literal["auto", "exhaustive", "transfer"] = "auto") -> complex:
    """Sum over torus configurations of the product of hexagon weights.

    ``transfer`` (vertical rules only) evaluates ``Tr t^N`` with the row
    transfer matrix; ``auto`` picks it for vertical rules beyond the
    exhaustive bound.
    """
    if method == "auto":
        method = "exhaustive" if spec.n_sites <= MAX_TORUS_SITES else "transfer"
    if method == "transfer":
        if spec.rules != "vertical":
            raise ValueError("transfer-trace evaluation needs vertical rules")
        from .lax import transfer_matrix
        t = transfer_matrix(table, spec.M, "even", "vertical").entries
        return complex(np.trace(np.linalg.matrix_power(t, spec.N)))
    total = 0j
    w = np.array([table[lb] for lb in LABELS])
    for _, tally in enumerate_torus_configs(spec):
        total += np.prod(w ** np.array(tally.counts))
    return complex(total)
