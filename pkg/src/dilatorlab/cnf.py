"""Ordinals below epsilon_0 in Cantor normal form."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, total_ordering
from typing import Iterator


class CnfError(ValueError):
    pass


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    """``omega^e_1*c_1 + ... + omega^e_k*c_k`` with ``e_1 > ... > e_k`` and ``c_i >= 1``."""

    terms: tuple[tuple["Ordinal", int], ...] = ()

    def __post_init__(self):
        prev = None
        for exp, coeff in self.terms:
            if not isinstance(exp, Ordinal):
                raise CnfError(f"exponent {exp!r} is not an Ordinal")
            if not isinstance(coeff, int) or isinstance(coeff, bool) or coeff < 1:
                raise CnfError(f"coefficient {coeff!r} must be a positive integer")
            if prev is not None and not exp < prev:
                raise CnfError("exponents must be strictly decreasing")
            prev = exp

    # ---- constructors -------------------------------------------------
    @classmethod
    def of(cls, n: int) -> "Ordinal":
        if n < 0:
            raise CnfError("negative ordinal")
        return cls(((ZERO, n),)) if n else ZERO

    @classmethod
    def omega_pow(cls, exp: "Ordinal | int", coeff: int = 1) -> "Ordinal":
        if isinstance(exp, int):
            exp = cls.of(exp)
        return cls(((exp, coeff),))

    # ---- comparison ---------------------------------------------------
    def _cmp(self, other: "Ordinal") -> int:
        for (e1, c1), (e2, c2) in zip(self.terms, other.terms):
            if e1 != e2:
                return -1 if e1 < e2 else 1
            if c1 != c2:
                return -1 if c1 < c2 else 1
        return (len(self.terms) > len(other.terms)) - (len(self.terms) < len(other.terms))

    def __lt__(self, other):
        if isinstance(other, int):
            other = Ordinal.of(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self._cmp(other) < 0

    def __hash__(self):
        return hash(self.terms)

    # ---- arithmetic ---------------------------------------------------
    def __add__(self, other: "Ordinal | int") -> "Ordinal":
        if isinstance(other, int):
            other = Ordinal.of(other)
        if not other.terms:
            return self
        lead = other.terms[0][0]
        kept = [t for t in self.terms if not t[0] < lead]
        if kept and kept[-1][0] == lead:
            e, c = kept.pop()
            return Ordinal(tuple(kept) + ((e, c + other.terms[0][1]),) + other.terms[1:])
        return Ordinal(tuple(kept) + other.terms)

    def successor(self) -> "Ordinal":
        return self + 1

    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not self.terms[0][0].terms)

    def to_int(self) -> int:
        if not self.is_finite:
            raise CnfError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    @property
    def size(self) -> int:
        return sum(c + e.size for e, c in self.terms)

    # ---- serialization ------------------------------------------------
    def to_json(self):
        """Finite ordinals become ints, others ``[[exp, coeff], ...]``."""
        if self.is_finite:
            return self.to_int()
        return [[e.to_json(), c] for e, c in self.terms]

    @classmethod
    def from_json(cls, obj, path: str = "$") -> "Ordinal":
        if isinstance(obj, bool):
            raise CnfError(f"{path}: booleans are not ordinals")
        if isinstance(obj, int):
            if obj < 0:
                raise CnfError(f"{path}: negative ordinal {obj}")
            return cls.of(obj)
        if not isinstance(obj, list):
            raise CnfError(f"{path}: expected int or list of [exp, coeff] pairs")
        terms = []
        for i, pair in enumerate(obj):
            p = f"{path}[{i}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise CnfError(f"{p}: expected [exp, coeff]")
            exp = cls.from_json(pair[0], p + "[0]")
            coeff = pair[1]
            if not isinstance(coeff, int) or isinstance(coeff, bool) or coeff < 1:
                raise CnfError(f"{p}[1]: coefficient must be a positive integer")
            terms.append((exp, coeff))
        try:
            return cls(tuple(terms))
        except CnfError as exc:
            raise CnfError(f"{path}: {exc}") from None

    def code(self) -> tuple[int, ...]:
        out = [len(self.terms)]
        for e, c in self.terms:
            ec = e.code()
            out.extend((len(ec), *ec, c))
        return tuple(out)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if not e.terms:
                parts.append(str(c))
                continue
            base = "w" if e == ONE else f"w^({e})" if len(e.terms) > 1 or not e.is_finite else f"w^{e}"
            parts.append(base if c == 1 else f"{base}*{c}")
        return "+".join(parts)

    __repr__ = __str__


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


@lru_cache(maxsize=None)
def _of_size(s: int, below: Ordinal | None) -> tuple[Ordinal, ...]:
    """All ordinals of the given syntactic size whose exponents are all ``< below``."""
    if s == 0:
        return (ZERO,)
    found = []
    for es in range(0, s):
        for exp in _of_size(es, None) if below is None else _below_of_size(es, below):
            for coeff in range(1, s - es + 1):
                for rest in _of_size(s - es - coeff, exp):
                    found.append(Ordinal(((exp, coeff),) + rest.terms))
    return tuple(sorted(found))


@lru_cache(maxsize=None)
def _below_of_size(s: int, bound: Ordinal) -> tuple[Ordinal, ...]:
    """All ordinals of syntactic size ``s`` strictly below ``bound``, sorted."""
    if not bound.terms:
        return ()
    if s == 0:
        return (ZERO,)
    e, c = bound.terms[0]
    tail = Ordinal(bound.terms[1:])
    found = []
    # smaller leading exponent: anything goes after it
    for es in range(s):
        for exp in _below_of_size(es, e):
            for coeff in range(1, s - es + 1):
                for rest in _of_size(s - es - coeff, exp):
                    found.append(Ordinal(((exp, coeff),) + rest.terms))
    # same leading exponent
    for coeff in range(1, min(c, s - e.size) + 1):
        left = s - e.size - coeff
        rests = _of_size(left, e) if coeff < c else _below_of_size(left, tail)
        for rest in rests:
            found.append(Ordinal(((e, coeff),) + rest.terms))
    return tuple(sorted(found))


def ordinals_below(bound: Ordinal) -> Iterator[Ordinal]:
    """Enumerate ``{x : x < bound}`` by syntactic size, increasing within each size."""
    if bound.is_finite:
        yield from (Ordinal.of(i) for i in range(bound.to_int()))
        return
    s = 0
    while True:
        yield from _below_of_size(s, bound)
        s += 1
