"""JSON formats for orders, dilator expressions and theories."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from .combinators import (
    ArrowDilator,
    BigJoinDilator,
    IntegralDilator,
    JoinDilator,
    SumDilator,
    TaggedDilator,
    reverse_pseudo,
    reverse_pseudo_b,
)
from .diagram import diag_from_json
from .dilator import (
    ConstDilator,
    FiniteSemidilator,
    IdDilator,
    Semidilator,
    colex_pair,
    lex_pair,
    reverse_dilator,
    violator,
)
from .errors import BadSpec, DilatorLabError, DuplicateName, IoError
from .linorder import Order, order_from_json, term_from_json
from .theorylab import ToyTheory

FIXTURES: dict[str, Callable[[], Semidilator]] = {
    "id": IdDilator,
    "reverse": reverse_dilator,
    "colexpair": colex_pair,
    "lexpair": lex_pair,
    "violator1": lambda: violator(1),
    "violator2": lambda: violator(2),
    "violator3": lambda: violator(3),
    "revpseudo": reverse_pseudo,
    "revpseudo_b": reverse_pseudo_b,
}


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise DuplicateName(f"duplicate key {k!r}")
        out[k] = v
    return out


def parse_json(text: str, what: str = "input") -> Any:
    try:
        return json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise BadSpec(f"malformed JSON in {what}: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None


@dataclass
class Registry:
    orders: dict = field(default_factory=dict)
    dilators: dict = field(default_factory=dict)
    theories: dict = field(default_factory=dict)

    def names(self) -> set:
        return set(self.orders) | set(self.dilators) | set(self.theories)

    def _claim(self, name, path):
        if not isinstance(name, str) or not name:
            raise BadSpec("names must be non-empty strings", path)
        if name in self.names() or name in FIXTURES:
            raise DuplicateName(f"{path}: name {name!r} is already taken")

    # -- parsing -------------------------------------------------------------
    def order(self, obj, path: str = "$") -> Order:
        if isinstance(obj, str):
            if obj in self.orders:
                return self.orders[obj]
            raise BadSpec(f"unknown order {obj!r}", path)
        try:
            return order_from_json(obj, path, self.dilator)
        except BadSpec:
            raise
        except DilatorLabError as exc:
            raise BadSpec(str(exc), path) from None

    def dilator(self, obj, path: str = "$") -> Semidilator:
        if isinstance(obj, str):
            if obj in self.dilators:
                return self.dilators[obj]
            if obj in FIXTURES:
                return FIXTURES[obj]()
            raise BadSpec(f"unknown dilator {obj!r}", path)
        if not isinstance(obj, dict) or "op" not in obj:
            raise BadSpec("expected a dilator name or an object with an 'op' field", path)
        op = obj["op"]
        args = obj.get("args", [])
        if not isinstance(args, list):
            raise BadSpec("'args' must be a list", path + ".args")

        def need(n):
            if len(args) != n:
                raise BadSpec(f"'{op}' takes {n} argument(s), got {len(args)}", path + ".args")

        sub = lambda i: self.dilator(args[i], f"{path}.args[{i}]")
        ordr = lambda i: self.order(args[i], f"{path}.args[{i}]")
        if op == "id":
            need(0)
            return IdDilator()
        if op == "fixture":
            name = obj.get("name")
            if name not in FIXTURES:
                raise BadSpec(f"unknown fixture {name!r}", path + ".name")
            return FIXTURES[name]()
        if op == "const":
            need(1)
            return ConstDilator(ordr(0))
        if op == "sum":
            need(2)
            return SumDilator(sub(0), sub(1))
        if op == "arrow":
            need(2)
            return ArrowDilator(ordr(0), ordr(1))
        if op == "join":
            need(2)
            return JoinDilator(sub(0), sub(1))
        if op == "bigjoin":
            if not args:
                raise BadSpec("'bigjoin' needs at least one argument", path + ".args")
            return BigJoinDilator([sub(i) for i in range(len(args))])
        if op == "integral":
            need(1)
            return IntegralDilator(sub(0))
        if op == "tag":
            need(1)
            pi = obj.get("pi")
            if not isinstance(pi, int) or isinstance(pi, bool):
                raise BadSpec("'pi' must be an integer", path + ".pi")
            return TaggedDilator(sub(0), pi)
        if op == "finite":
            return self._finite(obj, path)
        raise BadSpec(f"unknown op {op!r}", path + ".op")

    def _finite(self, obj, path) -> FiniteSemidilator:
        name = obj.get("name", "finite")
        terms = obj.get("terms")
        if not isinstance(terms, list):
            raise BadSpec("'terms' must be a list of [term, arity]", path + ".terms")
        arities = {}
        for i, entry in enumerate(terms):
            p = f"{path}.terms[{i}]"
            if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[1], int) and entry[1] >= 0):
                raise BadSpec("expected [term, arity]", p)
            t = term_from_json(entry[0])
            if t in arities:
                raise DuplicateName(f"{p}: term {entry[0]!r} declared twice")
            arities[t] = entry[1]
        table = []
        for i, entry in enumerate(obj.get("less", [])):
            p = f"{path}.less[{i}]"
            if not (isinstance(entry, list) and len(entry) == 4):
                raise BadSpec("expected [t0, t1, e0, e1]", p)
            s, t = term_from_json(entry[0]), term_from_json(entry[1])
            for u in (s, t):
                if u not in arities:
                    raise BadSpec(f"unknown term {u!r}", p)
            try:
                d = diag_from_json({"e0": entry[2], "e1": entry[3]})
            except DilatorLabError as exc:
                raise BadSpec(str(exc), p) from None
            except (TypeError, KeyError):
                raise BadSpec("bad diagram", p) from None
            if d.n0 != arities[s] or d.n1 != arities[t]:
                raise BadSpec("diagram arities do not match the terms", p)
            table.append((s, t, d.e0, d.e1))
        return FiniteSemidilator(name, arities, table)

    def theory(self, obj, path: str = "$") -> ToyTheory:
        if isinstance(obj, str):
            if obj in self.theories:
                return self.theories[obj]
            raise BadSpec(f"unknown theory {obj!r}", path)
        if not isinstance(obj, dict):
            raise BadSpec("expected a theory object", path)
        name = obj.get("name", "T")
        certs = []
        for i, c in enumerate(obj.get("sigma12", [])):
            p = f"{path}.sigma12[{i}]"
            if not isinstance(c, dict) or "pi" not in c or "dilator" not in c:
                raise BadSpec("expected {'pi': n, 'dilator': expr}", p)
            if not isinstance(c["pi"], int) or isinstance(c["pi"], bool):
                raise BadSpec("'pi' must be an integer", p + ".pi")
            certs.append((c["pi"], self.dilator(c["dilator"], p + ".dilator")))
        orders = [self.order(o, f"{path}.pi11[{i}]") for i, o in enumerate(obj.get("pi11", []))]
        try:
            return ToyTheory(name, certs, orders)
        except ValueError as exc:
            raise BadSpec(str(exc), path + ".sigma12") from None

    # -- files -----------------------------------------------------------------
    def load(self, obj, path: str = "$") -> "Registry":
        if not isinstance(obj, dict):
            raise BadSpec("a spec file holds a JSON object", path)
        unknown = set(obj) - {"orders", "dilators", "theories"}
        if unknown:
            raise BadSpec(f"unknown sections {sorted(unknown)}", path)
        for sec, parse, store in (
            ("orders", self.order, self.orders),
            ("dilators", self.dilator, self.dilators),
        ):
            items = obj.get(sec, {})
            if not isinstance(items, dict):
                raise BadSpec(f"'{sec}' must map names to definitions", f"{path}.{sec}")
            for name, body in items.items():
                p = f"{path}.{sec}.{name}"
                self._claim(name, p)
                store[name] = parse(body, p)
        theories = obj.get("theories", [])
        if isinstance(theories, dict):
            theories = [dict(v, name=k) if isinstance(v, dict) else v for k, v in theories.items()]
        if not isinstance(theories, list):
            raise BadSpec("'theories' must be a list or an object", f"{path}.theories")
        for i, body in enumerate(theories):
            p = f"{path}.theories[{i}]"
            T = self.theory(body, p)
            self._claim(T.name, p + ".name")
            self.theories[T.name] = T
        return self

    def to_json(self):
        return {
            "orders": {k: v.to_json() for k, v in self.orders.items()},
            "dilators": {k: v.to_json() for k, v in self.dilators.items()},
            "theories": [T.to_json() for T in self.theories.values()],
        }


def load_spec(path: str) -> Registry:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror}") from None
    return Registry().load(parse_json(text, path))


def loads_spec(text: str) -> Registry:
    return Registry().load(parse_json(text))
