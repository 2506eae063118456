"""Named simplicial-set models used by the CLI and the test corpus."""

from __future__ import annotations

import re

from .complexes import from_facets
from .ssets import FiniteSSet, SSetError, from_ordered_complex, interval_sset, point_sset, product, sphere_sset, wedge

# the standard 6-vertex triangulation of the real projective plane
RP2_FACETS = [
    (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
    (2, 3, 5), (2, 4, 5), (2, 4, 6), (3, 4, 6), (3, 5, 6),
]


def rp2() -> FiniteSSet:
    return from_ordered_complex(from_facets(6, RP2_FACETS))


def circle_polygon(n: int = 3) -> FiniteSSet:
    """Boundary of an n-gon as an ordered simplicial complex."""
    return from_ordered_complex(from_facets(n, [{i, i % n + 1} for i in range(1, n + 1)]))


def space(name: str) -> FiniteSSet:
    """Parse a space selector: ``sN``, ``pt``, ``interval``, ``rp2``, ``torus``, ``wedge:A,B``."""
    name = name.strip().lower()
    if m := re.fullmatch(r"s(\d+)", name):
        return sphere_sset(int(m.group(1)))
    if name in ("pt", "point"):
        return point_sset()
    if name == "interval":
        return interval_sset()
    if name == "rp2":
        return rp2()
    if name == "torus":
        S1 = sphere_sset(1)
        return product(S1, S1)
    if m := re.fullmatch(r"polygon(\d+)", name):
        return circle_polygon(int(m.group(1)))
    if name.startswith("wedge:"):
        parts = [space(p) for p in name[len("wedge:"):].split(",")]
        out = parts[0]
        for X in parts[1:]:
            out = wedge(out, X)
        return out
    raise SSetError(f"unknown space {name!r}")
