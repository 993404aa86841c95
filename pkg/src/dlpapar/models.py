"""System states <Rd, Wr, V> and the split / merge relations between them."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from . import kernels


class InvalidModel(ValueError):
    pass


class UniverseTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class Model:
    rd: frozenset
    wr: frozenset
    v: frozenset

    def __post_init__(self):
        if not self.wr <= self.rd:
            raise InvalidModel(
                f"writable variables {sorted(self.wr - self.rd)} are not readable")

    def support(self) -> frozenset:
        return self.rd | self.v

    def __str__(self):
        return format_model(self)


def make_model(rd: Iterable[str] = (), wr: Iterable[str] = (),
               v: Iterable[str] = ()) -> Model:
    return Model(frozenset(rd), frozenset(wr), frozenset(v))


EMPTY = make_model()


@dataclass(frozen=True)
class Universe:
    """Finite carrier of variable names, kept in lexicographic order."""

    vars: tuple

    def __init__(self, names: Iterable[str] = ()):
        object.__setattr__(self, "vars", tuple(sorted(set(names))))

    @property
    def index(self) -> dict:
        idx = self.__dict__.get("_index")
        if idx is None:
            idx = {name: i for i, name in enumerate(self.vars)}
            object.__setattr__(self, "_index", idx)
        return idx

    def __len__(self):
        return len(self.vars)

    def __iter__(self):
        return iter(self.vars)

    def __contains__(self, name):
        return name in self.index

    def __or__(self, other):
        return Universe(set(self.vars) | set(other))

    def mask(self, names: Iterable[str]) -> int:
        idx = self.index
        out = 0
        for n in names:
            try:
                out |= 1 << idx[n]
            except KeyError:
                raise UniverseTooSmall(f"variable {n!r} is not in the universe") from None
        return out

    def names(self, mask: int) -> frozenset:
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(self.vars[i])
            mask >>= 1
            i += 1
        return frozenset(out)

    def encode(self, m: Model) -> tuple:
        return (self.mask(m.rd), self.mask(m.wr), self.mask(m.v))

    def decode(self, state: tuple) -> Model:
        rd, wr, v = state
        return Model(self.names(rd), self.names(wr), self.names(v))

    def __str__(self):
        return "{" + ",".join(self.vars) + "}"


def rw_disjoint(m1: Model, m2: Model) -> bool:
    return not (m1.wr & m2.rd) and not (m2.wr & m1.rd)


def _local(*models: Model) -> Universe:
    names: set = set()
    for m in models:
        names |= m.rd | m.v
    return Universe(names)


def splits(m: Model) -> list:
    """All ordered pairs (m1, m2) with m split into m1 and m2."""
    u = _local(m)
    rd, wr, v = u.encode(m)
    out = []
    for rd1, wr1, rd2, wr2 in kernels.split_masks(rd, wr):
        out.append((u.decode((rd1, wr1, v)), u.decode((rd2, wr2, v))))
    return out


def is_split(m: Model, m1: Model, m2: Model) -> bool:
    return (rw_disjoint(m1, m2) and m.rd == m1.rd | m2.rd
            and m.wr == m1.wr | m2.wr and m.v == m1.v == m2.v)


def merge(m1: Model, m2: Model):
    """The unique merge of m1 and m2, or None when they cannot be merged."""
    u = _local(m1, m2)
    out = kernels.merge_masks(*u.encode(m1), *u.encode(m2))
    return None if out is None else u.decode(out)


def indistinguishable(m1: Model, m2: Model) -> bool:
    return m1.rd == m2.rd and m1.wr == m2.wr and m1.v & m1.rd == m2.v & m2.rd


def restrict(m: Model, names: Iterable[str]) -> Model:
    p = frozenset(names)
    return Model(m.rd & p, m.wr & p, m.v & p)


# per-variable configurations in enumeration order: (readable, writable, true)
_CONFIGS = ((0, 0, 0), (0, 0, 1), (1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1))


def enumerate_states(u: Universe) -> Iterator[tuple]:
    """Bitmask triples for every model over ``u``, in a fixed order."""
    n = len(u)
    for combo in itertools.product(_CONFIGS, repeat=n):
        rd = wr = v = 0
        for i, (r, w, t) in enumerate(combo):
            bit = 1 << i
            if r:
                rd |= bit
            if w:
                wr |= bit
            if t:
                v |= bit
        yield (rd, wr, v)


def enumerate_models(u: Universe) -> Iterator[Model]:
    """Yield the 6^|u| models over ``u``."""
    for state in enumerate_states(u):
        yield u.decode(state)


# -- text notation ----------------------------------------------------------

_SET = r"\{\s*([^{}]*?)\s*\}"
_MODEL_RE = re.compile(rf"\s*R\s*{_SET}\s*W\s*{_SET}\s*V\s*{_SET}\s*\Z")


def _names(text: str, allow_reserved: bool) -> frozenset:
    from .syntax import check_name
    if not text.strip():
        return frozenset()
    try:
        return frozenset(check_name(part.strip(), allow_reserved) for part in text.split(","))
    except ValueError as exc:
        raise InvalidModel(str(exc)) from None


def parse_model(text: str, allow_reserved: bool = False) -> Model:
    """Parse ``R{p,q} W{p} V{q}``."""
    m = _MODEL_RE.match(text)
    if m is None:
        raise InvalidModel(f"malformed model text {text!r}; expected 'R{{..}} W{{..}} V{{..}}'")
    rd, wr, v = (_names(g, allow_reserved) for g in m.groups())
    return Model(rd, wr, v)


def format_model(m: Model) -> str:
    return "R{%s} W{%s} V{%s}" % (",".join(sorted(m.rd)), ",".join(sorted(m.wr)),
                                  ",".join(sorted(m.v)))
