"""Growth operators and the crystal-melting Hamiltonian acting on lattice states.

Two independent evaluations of the Hamiltonian are provided. The fermionic
one applies creation/annihilation strings with explicit Jordan-Wigner signs.
The spin one evaluates raising/lowering and ``z``-component products on
occupation bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

from .lattice import (CREATE_FROM, CREATE_TO, LatticeState, SiteId, Window,
                      hexagon_sites, hexagons_in_class, occupied)


@dataclass(frozen=True)
class CouplingParams:
    """Hopping ``J``, potential ``V`` and weight parameter ``q > 0``."""

    J: float = 1.0
    V: float = 1.0
    q: float = 1.0

    def __post_init__(self):
        if not self.q > 0:
            raise ValueError("q must be positive")
        if not all(math.isfinite(x) for x in (self.J, self.V, self.q)):
            raise ValueError("couplings must be finite")


@dataclass
class WeightedStateSum:
    """Linear combination of states; zero amplitudes are dropped."""

    terms: dict = field(default_factory=dict)

    def add(self, key, amplitude) -> None:
        value = self.terms.get(key, 0) + amplitude
        if value == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = value

    def scaled(self, c) -> "WeightedStateSum":
        out = WeightedStateSum()
        for k, v in self.terms.items():
            out.add(k, c * v)
        return out

    def __iadd__(self, other: "WeightedStateSum") -> "WeightedStateSum":
        for k, v in other.terms.items():
            self.add(k, v)
        return self

    def items(self):
        return self.terms.items()

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator:
        return iter(self.terms)

    def __getitem__(self, key):
        return self.terms[key]


# -- fermionic evaluation -----------------------------------------------------

@lru_cache(maxsize=16)
def _mode_order(window: Window) -> tuple[tuple[SiteId, ...], dict]:
    sites = tuple(window.sites())
    return sites, {s: i for i, s in enumerate(sites)}


def apply_fermion_string(state: LatticeState, ops: Iterable[tuple[SiteId, bool]]):
    """Apply a product of fermion operators, rightmost first.

    Parameters
    ----------
    ops : sequence of (site, is_creator)
        Operators in written order.

    Returns
    -------
    (sign, LatticeState) or None
        ``None`` when the string annihilates the state.

    Notes
    -----
    Modes are ordered by ``(kind, row, position)``. The sign of each operator
    is the parity of occupied window modes preceding it. Every Hamiltonian
    term moves particles within one chain, so sites outside the window
    contribute an even number of transpositions and are ignored.
    """
    sites, index = _mode_order(state.window)
    occ = [occupied(state, s) for s in sites]
    flips = set(state.flips)
    sign = 1
    for site, creator in reversed(list(ops)):
        i = index[site]
        if occ[i] == creator:
            return None
        if sum(occ[:i]) % 2:
            sign = -sign
        occ[i] = creator
        flips.symmetric_difference_update({site})
    return sign, LatticeState(state.window, frozenset(flips))


def _hop_string(a: int, m: int, create: bool) -> list[tuple[SiteId, bool]]:
    """Operator string moving the hexagon ``(a, m)`` between its two box classes."""
    y_lo, y_lo2, x0, x2, y_hi, y_hi2 = hexagon_sites(a, m)
    if create:
        # particles move r -> r+1 on both Y rows and m+2 -> m on the X row
        return [(y_hi2, True), (y_hi, False), (y_lo2, True), (y_lo, False), (x0, True), (x2, False)]
    return [(y_hi, True), (y_hi2, False), (y_lo, True), (y_lo2, False), (x2, True), (x0, False)]


def count_addable(state: LatticeState) -> int:
    """Number of hexagons on which a box can be created."""
    return len(hexagons_in_class(state, CREATE_FROM))


def count_removable(state: LatticeState) -> int:
    """Number of hexagons from which a box can be removed."""
    return len(hexagons_in_class(state, CREATE_TO))


def _apply_hops(state: LatticeState, create: bool) -> WeightedStateSum:
    out = WeightedStateSum()
    for a, m in hexagons_in_class(state, CREATE_FROM if create else CREATE_TO):
        res = apply_fermion_string(state, _hop_string(a, m, create))
        if res is not None:
            out.add(res[1], res[0])
    return out


def apply_create(state: LatticeState) -> WeightedStateSum:
    """Sum of all single-box creations, each with its fermionic sign."""
    return _apply_hops(state, create=True)


def apply_annihilate(state: LatticeState) -> WeightedStateSum:
    """Sum of all single-box removals, each with its fermionic sign."""
    return _apply_hops(state, create=False)


def hamiltonian_action(state: LatticeState, params: CouplingParams) -> WeightedStateSum:
    """Apply ``H = -J (create + annihilate) + V sqrt(q) N_add + V/sqrt(q) N_rem``."""
    out = WeightedStateSum()
    if params.J != 0:
        out += apply_create(state).scaled(-params.J)
        out += apply_annihilate(state).scaled(-params.J)
    sq = math.sqrt(params.q)
    diag = params.V * sq * count_addable(state) + params.V / sq * count_removable(state)
    out.add(state, diag)
    return out


# -- spin evaluation ----------------------------------------------------------

def _sz(state: LatticeState, site: SiteId) -> float:
    return 0.5 if occupied(state, site) else -0.5


def _pair_projector(z_first: float, z_second: float) -> float:
    # equals 1 iff first is up and second down
    return 0.5 * (z_first - z_second) - z_first * z_second + 0.25


def _raise_lower(state: LatticeState, raised: Iterable[SiteId], lowered: Iterable[SiteId]):
    raised, lowered = list(raised), list(lowered)
    if any(occupied(state, s) for s in raised) or not all(occupied(state, s) for s in lowered):
        return None
    return state.toggled(raised + lowered)


def jw_hamiltonian_action(state: LatticeState, params: CouplingParams) -> WeightedStateSum:
    """Same operator as :func:`hamiltonian_action`, built from spin-1/2 generators.

    Each hexagon contributes two kinetic products of raising and lowering
    operators and two diagonal products of pair projectors written through
    ``z`` components.
    """
    out = WeightedStateSum()
    sq = math.sqrt(params.q)
    diag = 0.0
    for a, m in state.window.anchors():
        y_lo, y_lo2, x0, x2, y_hi, y_hi2 = hexagon_sites(a, m)
        z = {s: _sz(state, s) for s in (y_lo, y_lo2, x0, x2, y_hi, y_hi2)}
        addable = (_pair_projector(z[y_hi], z[y_hi2]) * _pair_projector(z[y_lo], z[y_lo2])
                   * _pair_projector(z[x2], z[x0]))
        removable = (_pair_projector(z[y_hi2], z[y_hi]) * _pair_projector(z[y_lo2], z[y_lo])
                     * _pair_projector(z[x0], z[x2]))
        diag += params.V * sq * addable + params.V / sq * removable
        if params.J == 0:
            continue
        for raised, lowered in (((y_hi, y_lo, x2), (y_hi2, y_lo2, x0)),
                                ((y_hi2, y_lo2, x0), (y_hi, y_lo, x2))):
            new = _raise_lower(state, raised, lowered)
            if new is not None:
                out.add(new, -params.J)
    out.add(state, diag)
    return out
