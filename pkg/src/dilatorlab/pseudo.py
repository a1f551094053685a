"""Climax probing over grids of sample ordinals.

"Ill-founded at alpha" is operationalized as "a descent of length ``depth``
was found", either constructed structurally or found among the first
``width`` enumerated elements.  Reports carry the bounds they were made at.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .cnf import OMEGA, Ordinal
from .combinators import c_integral
from .dilator import Semidilator
from .errors import ClimaxUnresolved, GridNotChain
from .linorder import Applied, Cnf, DescentWitness, Finite, Omega, Order, describe, lo_descend_probe


def point_of_type(o: Ordinal) -> Order:
    return Finite(o.to_int()) if o.is_finite else Cnf(o)


def default_grid() -> list[Order]:
    w = OMEGA
    return [Finite(i) for i in range(9)] + [
        Omega(),
        Cnf(w + 1),
        Cnf(w + w),
        Cnf(Ordinal.omega_pow(2)),
    ]


def check_grid(grid: Sequence[Order]) -> list[Ordinal]:
    """Order types along the grid; raises GridNotChain unless they are known and non-decreasing."""
    types = []
    for p in grid:
        t = p.order_type()
        if t is None or p.is_wellfounded() is not True:
            raise GridNotChain(f"{describe(p)} is not a structurally known ordinal")
        if types and t < types[-1]:
            raise GridNotChain(f"{describe(p)} comes after a longer grid point")
        types.append(t)
    return types


@dataclass
class PointVerdict:
    point: Order
    witness: Optional[DescentWitness]
    basis: str  # certificate, structural or window

    @property
    def descends(self) -> bool:
        return self.witness is not None

    def to_json(self):
        return {
            "point": self.point.to_json(),
            "verdict": "witness" if self.witness is not None else "none",
            "basis": self.basis,
            "witness": self.witness.to_json() if self.witness is not None else [],
        }


@dataclass
class ClimaxReport:
    dilator: Semidilator
    grid: list
    verdicts: list
    depth: int
    width: int
    inferred_climax: Optional[Order] = None
    exact: bool = False
    monotone: bool = True

    @property
    def climax_type(self) -> Optional[Ordinal]:
        return None if self.inferred_climax is None else self.inferred_climax.order_type()

    def to_json(self):
        return {
            "dilator": getattr(self.dilator, "name", str(self.dilator)),
            "bounds": {"depth": self.depth, "width": self.width},
            "points": [v.to_json() for v in self.verdicts],
            "inferred_climax": None if self.inferred_climax is None else self.inferred_climax.to_json(),
            "exact": self.exact,
            "monotone": self.monotone,
        }


def probe_point(D: Semidilator, point: Order, depth: int, width: int) -> PointVerdict:
    w, basis = lo_descend_probe(Applied(D, point), depth, width)
    return PointVerdict(point, w, basis)


def climax_probe(D: Semidilator, grid: Optional[Sequence[Order]] = None, depth: int = 12, width: int = 200) -> ClimaxReport:
    """Per-point verdicts plus the least witnessed grid point.

    The climax is marked exact only when every earlier grid point was certified
    well-founded (not merely searched) and the grid holds every finite ordinal
    below a finite climax.
    """
    grid = list(default_grid() if grid is None else grid)
    types = check_grid(grid)
    verdicts = [probe_point(D, p, depth, width) for p in grid]
    rep = ClimaxReport(D, grid, verdicts, depth, width)
    first = next((i for i, v in enumerate(verdicts) if v.descends), None)
    if first is not None:
        rep.inferred_climax = grid[first]
        rep.monotone = all(v.descends for v in verdicts[first:])
        earlier_ok = all(v.basis == "certificate" for v in verdicts[:first])
        c = types[first]
        covered = not c.is_finite or {Ordinal.of(i) for i in range(c.to_int())} <= set(types[:first])
        rep.exact = earlier_ok and covered
    return rep


@dataclass
class GrowReport:
    points: list = field(default_factory=list)  # (point, descends0, descends1)
    counterexample: Optional[Order] = None
    depth: int = 12
    width: int = 200

    @property
    def consistent(self) -> bool:
        return self.counterexample is None

    def to_json(self):
        return {
            "bounds": {"depth": self.depth, "width": self.width},
            "verdict": "consistent" if self.consistent else "counterexample",
            "counterexample": None if self.counterexample is None else self.counterexample.to_json(),
            "points": [{"point": p.to_json(), "d0": a, "d1": b, "ok": (a or not b)} for p, a, b in self.points],
        }


def grow_check(D0: Semidilator, D1: Semidilator, grid=None, depth: int = 12, width: int = 200) -> GrowReport:
    """At every grid point: no descent in ``D0`` implies no descent in ``D1``."""
    grid = list(default_grid() if grid is None else grid)
    check_grid(grid)
    rep = GrowReport(depth=depth, width=width)
    for p in grid:
        a = probe_point(D0, p, depth, width).descends
        b = probe_point(D1, p, depth, width).descends
        rep.points.append((p, a, b))
        if rep.counterexample is None and not a and b:
            rep.counterexample = p
    return rep


@dataclass
class SuccessorReport:
    base: ClimaxReport
    shifted: ClimaxReport
    expected: Ordinal

    @property
    def ok(self) -> bool:
        return self.shifted.climax_type == self.expected

    def to_json(self):
        return {
            "verdict": "pass" if self.ok else "fail",
            "expected": self.expected.to_json(),
            "base": self.base.to_json(),
            "integral": self.shifted.to_json(),
        }


def climax_successor_check(D: Semidilator, grid=None, depth: int = 12, width: int = 200) -> SuccessorReport:
    """Check that the integral of ``D`` has climax one above the climax of ``D``."""
    grid = list(default_grid() if grid is None else grid)
    base = climax_probe(D, grid, depth, width)
    if base.inferred_climax is None:
        raise ClimaxUnresolved(f"no descent found for {D.name} anywhere on the grid")
    c = base.climax_type + 1
    types = check_grid(grid)
    if c not in types:
        grid = sorted(grid + [point_of_type(c)], key=lambda p: p.order_type())
    shifted = climax_probe(c_integral(D), grid, depth, width)
    return SuccessorReport(base, shifted, c)
