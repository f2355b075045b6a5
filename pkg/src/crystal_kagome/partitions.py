"""Plane partitions: representation, enumeration and the MacMahon series."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .errors import BeyondBound

DEFAULT_MAX_BOXES = 12


class BoxCoord(NamedTuple):
    """Position of a unit box in the first octant."""

    i: int
    j: int
    k: int

    def predecessors(self) -> list["BoxCoord"]:
        """Boxes that must be present for this one to be supported."""
        out = []
        if self.i > 0:
            out.append(BoxCoord(self.i - 1, self.j, self.k))
        if self.j > 0:
            out.append(BoxCoord(self.i, self.j - 1, self.k))
        if self.k > 0:
            out.append(BoxCoord(self.i, self.j, self.k - 1))
        return out

    def successors(self) -> list["BoxCoord"]:
        return [
            BoxCoord(self.i + 1, self.j, self.k),
            BoxCoord(self.i, self.j + 1, self.k),
            BoxCoord(self.i, self.j, self.k + 1),
        ]


@dataclass(frozen=True)
class PlanePartition:
    """A finite lower set of boxes.

    Parameters
    ----------
    boxes : frozenset of BoxCoord
        The occupied boxes. The constructor checks the lower-set property.
    """

    boxes: frozenset

    def __post_init__(self):
        boxes = frozenset(BoxCoord(*b) for b in self.boxes)
        object.__setattr__(self, "boxes", boxes)
        for b in boxes:
            if min(b) < 0:
                raise ValueError(f"negative box coordinate {tuple(b)}")
            for p in b.predecessors():
                if p not in boxes:
                    raise ValueError(f"box {tuple(b)} is unsupported (missing {tuple(p)})")

    @classmethod
    def empty(cls) -> "PlanePartition":
        return cls(frozenset())

    @classmethod
    def from_boxes(cls, boxes: Iterable[Sequence[int]]) -> "PlanePartition":
        return cls(frozenset(BoxCoord(*b) for b in boxes))

    @classmethod
    def from_heights(cls, heights: Sequence[Sequence[int]]) -> "PlanePartition":
        """Build from the height matrix ``heights[i][j]`` (stack size at column (i, j))."""
        boxes = set()
        for i, row in enumerate(heights):
            for j, h in enumerate(row):
                if h < 0:
                    raise ValueError("heights must be nonnegative")
                boxes.update(BoxCoord(i, j, k) for k in range(h))
        return cls(frozenset(boxes))

    def heights(self) -> list[list[int]]:
        """Row-major height matrix, trimmed of empty rows and trailing zeros."""
        if not self.boxes:
            return []
        ni = 1 + max(b.i for b in self.boxes)
        nj = 1 + max(b.j for b in self.boxes)
        h = [[0] * nj for _ in range(ni)]
        for b in self.boxes:
            h[b.i][b.j] = max(h[b.i][b.j], b.k + 1)
        return [row[: 1 + max(j for j, x in enumerate(row) if x)] for row in h]

    def sorted_boxes(self) -> list[BoxCoord]:
        """Boxes in lexicographic order; this is always a valid growth order."""
        return sorted(self.boxes)

    def __len__(self) -> int:
        return len(self.boxes)

    def __contains__(self, box) -> bool:
        return BoxCoord(*box) in self.boxes

    def __lt__(self, other: "PlanePartition") -> bool:
        return (len(self), self.sorted_boxes()) < (len(other), other.sorted_boxes())

    def add(self, box: BoxCoord) -> "PlanePartition":
        return PlanePartition(self.boxes | {BoxCoord(*box)})

    def remove(self, box: BoxCoord) -> "PlanePartition":
        return PlanePartition(self.boxes - {BoxCoord(*box)})


def addable_boxes(pp: PlanePartition) -> set[BoxCoord]:
    """Boxes whose addition keeps ``pp`` a plane partition."""
    candidates = {BoxCoord(0, 0, 0)}
    for b in pp.boxes:
        candidates.update(b.successors())
    return {
        c for c in candidates
        if c not in pp.boxes and all(p in pp.boxes for p in c.predecessors())
    }


def removable_boxes(pp: PlanePartition) -> set[BoxCoord]:
    """Boxes whose removal keeps ``pp`` a plane partition."""
    return {b for b in pp.boxes if not any(s in pp.boxes for s in b.successors())}


@lru_cache(maxsize=None)
def _level(n: int) -> tuple[PlanePartition, ...]:
    if n == 0:
        return (PlanePartition.empty(),)
    out = []
    for parent in _level(n - 1):
        for c in sorted(addable_boxes(parent)):
            child = parent.add(c)
            # emit each child only from its canonical parent
            if min(removable_boxes(child)) == c:
                out.append(child)
    return tuple(out)


def enumerate_partitions(n: int, max_boxes: int = DEFAULT_MAX_BOXES) -> list[PlanePartition]:
    """All plane partitions with exactly ``n`` boxes.

    Breadth-first growth from the empty partition; a partition is produced
    only from the parent obtained by deleting its lexicographically smallest
    removable box, so the list has no duplicates and a fixed order.

    Raises
    ------
    BeyondBound
        If ``n`` exceeds ``max_boxes``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > max_boxes:
        raise BeyondBound(f"n={n} exceeds the enumeration bound {max_boxes}")
    return list(_level(n))


@dataclass(frozen=True)
class MacMahonSeries:
    """Coefficients of the plane-partition generating function, indexed by box count."""

    coeffs: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)


def macmahon_coeffs(n_max: int) -> MacMahonSeries:
    """Series of prod_{n>=1} (1 - q^n)^(-n) through order ``n_max``, in exact integers."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    c = [1] + [0] * n_max
    for n in range(1, n_max + 1):
        # n-fold division by (1 - q^n) is a strided prefix sum
        for _ in range(n):
            for k in range(n, n_max + 1):
                c[k] += c[k - n]
    return MacMahonSeries(tuple(c))
