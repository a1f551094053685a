"""Toy theories given by explicit certificate lists.

A theory lists pseudodilator certificates (tagged by a proof number) and
well-order certificates.  Its pseudodilator is the big join of the tagged
certificates and its norm is the ordered sum of the certified orders.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .combinators import BigJoinDilator, TaggedDilator, c_bigjoin, c_integral
from .dilator import DilEmbedding, Semidilator
from .errors import EmptyTheory
from .linorder import Order, lo_sum
from .pseudo import ClimaxReport, check_grid, climax_probe, default_grid


@dataclass
class ToyTheory:
    name: str
    sigma12: list = field(default_factory=list)  # (pi, D) pairs
    pi11: list = field(default_factory=list)  # orders

    def __post_init__(self):
        tags = [pi for pi, _ in self.sigma12]
        if len(set(tags)) != len(tags):
            raise ValueError(f"theory {self.name}: proof tags must be distinct")

    def to_json(self):
        return {
            "name": self.name,
            "sigma12": [{"pi": pi, "dilator": D.to_json()} for pi, D in self.sigma12],
            "pi11": [a.to_json() for a in self.pi11],
        }

    def with_certificates(self, extra) -> "ToyTheory":
        return ToyTheory(self.name, list(self.sigma12) + list(extra), list(self.pi11))


def tag_terms(D: Semidilator, pi: int) -> TaggedDilator:
    return TaggedDilator(D, pi)


def tag_embeddings(D: Semidilator, pi: int) -> tuple[DilEmbedding, DilEmbedding]:
    """The relabeling and its inverse."""
    T = tag_terms(D, pi)
    return DilEmbedding(D, T, lambda t: (pi, t)), DilEmbedding(T, D, lambda t: t[1])


def ptp_sigma12(T: ToyTheory) -> BigJoinDilator:
    if not T.sigma12:
        raise EmptyTheory(f"theory {T.name} has no pseudodilator certificates")
    return c_bigjoin([tag_terms(D, pi) for pi, D in T.sigma12])


def norm_pi11(T: ToyTheory) -> Order:
    return lo_sum(list(T.pi11))


@dataclass
class S12Report:
    theory: ToyTheory
    joint: ClimaxReport
    certificates: list  # ClimaxReport per certificate

    @property
    def marker(self) -> Optional[Order]:
        return self.joint.inferred_climax

    @property
    def certificate_max(self):
        types = [r.climax_type for r in self.certificates]
        if any(t is None for t in types):
            return None
        return max(types)

    @property
    def agrees(self) -> bool:
        """The joint climax equals the largest certificate climax."""
        return self.joint.climax_type == self.certificate_max

    def to_json(self):
        return {
            "theory": self.theory.name,
            "marker": None if self.marker is None else self.marker.to_json(),
            "certificate_max": None if self.certificate_max is None else self.certificate_max.to_json(),
            "agrees": self.agrees,
            "joint": self.joint.to_json(),
            "certificates": [r.to_json() for r in self.certificates],
        }


def s12_probe(T: ToyTheory, grid=None, depth: int = 12, width: int = 200) -> S12Report:
    grid = list(default_grid() if grid is None else grid)
    check_grid(grid)
    joint = climax_probe(ptp_sigma12(T), grid, depth, width)
    certs = [climax_probe(D, grid, depth, width) for _, D in T.sigma12]
    return S12Report(T, joint, certs)


def with_integrals(T: ToyTheory) -> ToyTheory:
    """Add the integral of every certificate under fresh proof tags."""
    if not T.sigma12:
        raise EmptyTheory(f"theory {T.name} has no pseudodilator certificates")
    top = max(pi for pi, _ in T.sigma12)
    extra = [(top + 1 + i, c_integral(D)) for i, (_, D) in enumerate(T.sigma12)]
    return T.with_certificates(extra)


@dataclass
class StrictnessReport:
    before: S12Report
    after: S12Report

    @property
    def strictly_larger(self) -> bool:
        a, b = self.before.joint.climax_type, self.after.joint.climax_type
        return a is not None and b is not None and a < b

    def to_json(self):
        return {
            "strictly_larger": self.strictly_larger,
            "before": self.before.to_json(),
            "after": self.after.to_json(),
        }


def s12_strictness(T: ToyTheory, grid=None, depth: int = 12, width: int = 200) -> StrictnessReport:
    return StrictnessReport(s12_probe(T, grid, depth, width), s12_probe(with_integrals(T), grid, depth, width))
