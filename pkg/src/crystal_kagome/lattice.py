"""Kagome occupation encoding of plane-partition states.

Sites live on two kinds of horizontal chains. X chains sit on integer
positions ``m`` with ``m`` of the same parity as the row index ``a`` (spacing
2). Y chains sit on half-integer positions ``r`` (spacing 1); a Y position is
stored as the odd integer ``r2 = 2r``.

A state is stored as the finite set of sites whose occupation differs from
the empty-crystal vacuum, together with the finite window of hexagons that
were scanned to build it. Outside the flips the vacuum pattern applies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Literal, NamedTuple

from .errors import IllegalFlip, NotAPartitionState, WindowTooSmall
from .partitions import BoxCoord, PlanePartition, addable_boxes

# occupied hexagon positions before and after a box is created
CREATE_FROM = frozenset({1, 4, 5})
CREATE_TO = frozenset({2, 3, 6})


class SiteId(NamedTuple):
    """A lattice site.

    ``pos`` is the integer position ``m`` for X sites and the doubled
    half-integer ``r2`` for Y sites.
    """

    kind: str
    row: int
    pos: int

    @classmethod
    def x(cls, a: int, m: int) -> "SiteId":
        return cls("X", a, m)

    @classmethod
    def y(cls, a: int, r2: int) -> "SiteId":
        return cls("Y", a, r2)

    def validate(self) -> "SiteId":
        if self.kind == "X":
            if (self.pos - self.row) % 2:
                raise ValueError(f"X site m={self.pos} has the wrong parity for row {self.row}")
        elif self.kind == "Y":
            if self.pos % 2 == 0:
                raise ValueError(f"Y site numerator r2={self.pos} must be odd")
        else:
            raise ValueError(f"unknown site kind {self.kind!r}")
        return self

    def to_json(self) -> dict:
        key = "m" if self.kind == "X" else "r2"
        return {"kind": self.kind, "a": self.row, key: self.pos}

    @classmethod
    def from_json(cls, rec: dict) -> "SiteId":
        if rec["kind"] == "X":
            return cls("X", int(rec["a"]), int(rec["m"])).validate()
        return cls("Y", int(rec["a"]), int(rec["r2"])).validate()


def vacuum_occupied(site: SiteId) -> bool:
    """Occupation of ``site`` in the empty-crystal vacuum.

    X row ``a`` is filled from ``m = |a| + 2`` to the right. Y row ``a >= 0``
    and its mirror row ``-a - 1`` are filled on every second site starting
    at ``r = a + 1/2`` and going left.
    """
    if site.kind == "X":
        return site.pos >= abs(site.row) + 2
    a = site.row if site.row >= 0 else -site.row - 1
    top = 2 * a + 1
    return site.pos <= top and (top - site.pos) % 4 == 0


def hexagon_sites(a: int, m: int) -> tuple[SiteId, ...]:
    """The six sites of the hexagon anchored at X row ``a``, position ``m``.

    Order: lower Y pair (row ``a - 1``), X pair (``m``, ``m + 2``), upper Y
    pair (row ``a``); each Y pair sits at ``r = m + 1/2`` and ``m + 3/2``.
    """
    r2 = 2 * m + 1
    return (
        SiteId("Y", a - 1, r2),
        SiteId("Y", a - 1, r2 + 2),
        SiteId("X", a, m),
        SiteId("X", a, m + 2),
        SiteId("Y", a, r2),
        SiteId("Y", a, r2 + 2),
    )


@dataclass(frozen=True)
class HexagonConfig:
    """Occupation bits of one hexagon, positions 1..6 as in :func:`hexagon_sites`."""

    bits: tuple[bool, bool, bool, bool, bool, bool]

    def __post_init__(self):
        bits = tuple(bool(b) for b in self.bits)
        if len(bits) != 6:
            raise ValueError("a hexagon has exactly six sites")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_positions(cls, positions: Iterable[int]) -> "HexagonConfig":
        occ = set(positions)
        return cls(tuple(p in occ for p in range(1, 7)))

    @property
    def positions(self) -> frozenset[int]:
        """Occupied positions, numbered 1..6."""
        return frozenset(p for p, b in zip(range(1, 7), self.bits) if b)

    def __getitem__(self, pos: int) -> bool:
        return self.bits[pos - 1]


@dataclass(frozen=True)
class Window:
    """Rectangle of hexagon anchors ``a_min <= a <= a_max``, ``m_min <= m <= m_max``."""

    a_min: int
    a_max: int
    m_min: int
    m_max: int

    @classmethod
    def for_boxes(cls, n: int) -> "Window":
        """A window large enough for every state with at most ``n`` boxes."""
        return cls(-n - 2, n + 2, -2 * n - 4, 2 * n + 4)

    def anchors(self) -> Iterator[tuple[int, int]]:
        """Hexagon anchors in the window, row by row."""
        for a in range(self.a_min, self.a_max + 1):
            start = self.m_min + ((self.m_min - a) % 2)
            for m in range(start, self.m_max + 1, 2):
                yield a, m

    def has_anchor(self, a: int, m: int) -> bool:
        return self.a_min <= a <= self.a_max and self.m_min <= m <= self.m_max

    def is_interior(self, a: int, m: int) -> bool:
        """True when ``(a, m)`` is at least one hexagon away from the boundary."""
        return self.a_min < a < self.a_max and self.m_min + 1 < m < self.m_max - 1

    def sites(self) -> list[SiteId]:
        """All sites touched by the window's hexagons, in mode order."""
        out = set()
        for a, m in self.anchors():
            out.update(hexagon_sites(a, m))
        return sorted(out)

    def contains_site(self, site: SiteId) -> bool:
        if site.kind == "X":
            return self.a_min <= site.row <= self.a_max and self.m_min <= site.pos <= self.m_max + 2
        return (self.a_min - 1 <= site.row <= self.a_max
                and 2 * self.m_min + 1 <= site.pos <= 2 * self.m_max + 3)

    def to_json(self) -> dict:
        return {"a_min": self.a_min, "a_max": self.a_max, "m_min": self.m_min, "m_max": self.m_max}

    @classmethod
    def from_json(cls, rec: dict) -> "Window":
        return cls(int(rec["a_min"]), int(rec["a_max"]), int(rec["m_min"]), int(rec["m_max"]))


@dataclass(frozen=True)
class LatticeState:
    """Occupation pattern stored as flips relative to the vacuum."""

    window: Window
    flips: frozenset

    def __post_init__(self):
        flips = frozenset(SiteId(*s) for s in self.flips)
        object.__setattr__(self, "flips", flips)

    def toggled(self, sites: Iterable[SiteId]) -> "LatticeState":
        return LatticeState(self.window, self.flips.symmetric_difference(sites))

    def to_json(self) -> dict:
        return {"window": self.window.to_json(),
                "flips": [s.to_json() for s in sorted(self.flips)]}

    @classmethod
    def from_json(cls, rec: dict) -> "LatticeState":
        return cls(Window.from_json(rec["window"]),
                   frozenset(SiteId.from_json(f) for f in rec["flips"]))


def vacuum_state(window: Window) -> LatticeState:
    """The empty-crystal state on ``window``.

    Raises
    ------
    WindowTooSmall
        If the window does not cover rows ``|a| <= 2`` and positions ``|m| <= 4``.
    """
    if window.a_min > -2 or window.a_max < 2 or window.m_min > -4 or window.m_max < 4:
        raise WindowTooSmall(f"window {window} must cover |a| <= 2 and |m| <= 4")
    return LatticeState(window, frozenset())


def occupied(state: LatticeState, site: SiteId) -> bool:
    return vacuum_occupied(site) != (site in state.flips)


def hexagon_at(state: LatticeState, a: int, m: int) -> HexagonConfig:
    """Read the hexagon anchored at ``(a, m)``."""
    if (m - a) % 2:
        raise ValueError(f"hexagon anchor m={m} has the wrong parity for row {a}")
    if not state.window.has_anchor(a, m):
        raise WindowTooSmall(f"hexagon ({a}, {m}) lies outside {state.window}")
    return HexagonConfig(tuple(occupied(state, s) for s in hexagon_sites(a, m)))


def flip_hexagon(state: LatticeState, a: int, m: int,
                 direction: Literal["create", "annihilate"]) -> LatticeState:
    """Create or annihilate the box sitting on hexagon ``(a, m)``.

    Raises
    ------
    IllegalFlip
        If the hexagon is not in the class the move requires.
    """
    want = {"create": CREATE_FROM, "annihilate": CREATE_TO}[direction]
    cfg = hexagon_at(state, a, m)
    if cfg.positions != want:
        raise IllegalFlip(
            f"cannot {direction} at ({a}, {m}): occupied positions {sorted(cfg.positions)}")
    return state.toggled(hexagon_sites(a, m))


def box_to_hexagon(box: BoxCoord) -> tuple[int, int]:
    """Hexagon anchor on which ``box`` is created."""
    i, j, k = box
    return i - j, i + j - 2 * k


def partition_to_state(pp: PlanePartition, window: Window | None = None,
                       order: Iterable[BoxCoord] | None = None) -> LatticeState:
    """Lattice state of ``pp``, built by one hexagon flip per box.

    Parameters
    ----------
    pp : PlanePartition
    window : Window, optional
        Defaults to ``Window.for_boxes(len(pp))``.
    order : iterable of BoxCoord, optional
        Growth order; must list every box of ``pp`` with each box after its
        predecessors. Defaults to lexicographic order.
    """
    if window is None:
        window = Window.for_boxes(len(pp))
    state = vacuum_state(window)
    boxes = pp.sorted_boxes() if order is None else list(order)
    if set(boxes) != pp.boxes or len(boxes) != len(pp):
        raise ValueError("order must list each box of the partition exactly once")
    for b in boxes:
        a, m = box_to_hexagon(b)
        if not window.is_interior(a, m):
            raise WindowTooSmall(f"box {tuple(b)} maps to hexagon ({a}, {m}) outside the interior of {window}")
        state = flip_hexagon(state, a, m, "create")
    return state


def hexagons_in_class(state: LatticeState, positions: frozenset) -> list[tuple[int, int]]:
    """Anchors of all hexagons in the window whose occupied positions equal ``positions``."""
    return [(a, m) for a, m in state.window.anchors()
            if hexagon_at(state, a, m).positions == positions]


def state_to_partition(state: LatticeState) -> PlanePartition:
    """Inverse of :func:`partition_to_state`.

    Boxes are peeled off one removable hexagon at a time; the peeled anchors
    are then replayed as growth moves to recover box heights.

    Raises
    ------
    NotAPartitionState
        If the flips cannot be undone by legal box moves.
    """
    current = state
    peeled = []
    limit = len(state.flips)
    while current.flips:
        if len(peeled) > limit:
            raise NotAPartitionState("peeling did not terminate")
        removable = hexagons_in_class(current, CREATE_TO)
        if not removable:
            raise NotAPartitionState("no removable hexagon but the state differs from the vacuum")
        a, m = removable[0]
        current = current.toggled(hexagon_sites(a, m))
        peeled.append((a, m))
    pp = PlanePartition.empty()
    for anchor in reversed(peeled):
        match = [c for c in addable_boxes(pp) if box_to_hexagon(c) == anchor]
        if len(match) != 1:
            raise NotAPartitionState(f"hexagon {anchor} does not correspond to an addable box")
        pp = pp.add(match[0])
    if partition_to_state_unchecked(pp, state.window) != state:
        raise NotAPartitionState("peeled boxes do not reproduce the state")
    return pp


def partition_to_state_unchecked(pp: PlanePartition, window: Window) -> LatticeState:
    """Flip set of ``pp`` on ``window`` without interior checks."""
    sites = set()
    for b in pp.boxes:
        sites.symmetric_difference_update(hexagon_sites(*box_to_hexagon(b)))
    return LatticeState(window, frozenset(sites))
