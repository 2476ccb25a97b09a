"""Seifert fibered spaces with three exceptional fibers and the spherical family."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


@dataclass(frozen=True)
class SeifertData:
    """Surgery data M(0; (p1,q1), (p2,q2), (p3,q3)) with the framing b folded in."""

    fibers: tuple[tuple[int, int], ...]

    def __post_init__(self):
        fibers = tuple((int(p), int(q)) for p, q in self.fibers)
        if len(fibers) != 3:
            raise DomainError("exactly three exceptional fibers are supported")
        for p, q in fibers:
            if p < 2 or q == 0:
                raise DomainError(f"invalid fiber ({p},{q}): need p >= 2, q != 0")
            if gcd(p, q) != 1:
                raise DomainError(f"fiber ({p},{q}) is not coprime")
        object.__setattr__(self, "fibers", fibers)

    @classmethod
    def from_invariants(cls, b: int, fibers) -> "SeifertData":
        """Fold the central framing b into the first fiber: (p1, q1) -> (p1, q1 + b p1)."""
        fibers = [tuple(f) for f in fibers]
        p1, q1 = fibers[0]
        fibers[0] = (p1, q1 + b * p1)
        return cls(tuple(fibers))

    @property
    def p(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.fibers)

    @property
    def q(self) -> tuple[int, ...]:
        return tuple(q for _, q in self.fibers)

    def euler(self) -> Fraction:
        """e(M) = sum q_j / p_j."""
        return sum((Fraction(q, p) for p, q in self.fibers), Fraction(0))

    def permuted(self, order) -> "SeifertData":
        return SeifertData(tuple(self.fibers[i] for i in order))

    def flipped(self) -> "SeifertData":
        """Orientation reversal q_j -> -q_j."""
        return SeifertData(tuple((p, -q) for p, q in self.fibers))


_LABEL_RE = re.compile(r"^(E6|E7|E8|D(\d+))$")


@dataclass(frozen=True)
class ManifoldLabel:
    """One of E6 = M(2,3,3), E7 = M(2,3,4), E8 = M(2,3,5) or D_K = M(2,2,K)."""

    family: str
    K: int | None = None

    def __post_init__(self):
        if self.family in ("E6", "E7", "E8"):
            if self.K is not None:
                raise DomainError(f"{self.family} takes no K")
        elif self.family == "D":
            if self.K is None or int(self.K) < 2:
                raise DomainError("D_K requires K >= 2")
            object.__setattr__(self, "K", int(self.K))
        else:
            raise DomainError(f"unknown manifold family {self.family!r}")

    @classmethod
    def parse(cls, text: str, K: int | None = None) -> "ManifoldLabel":
        """Accepts 'E6', 'E7', 'E8', 'D5', or 'DK'/'D' together with K."""
        t = text.strip().upper()
        if t in ("DK", "D"):
            return cls("D", K)
        m = _LABEL_RE.match(t)
        if not m:
            raise DomainError(f"unknown manifold {text!r}")
        if m.group(2):
            return cls("D", int(m.group(2)))
        return cls(t)

    @property
    def name(self) -> str:
        return f"D{self.K}" if self.family == "D" else self.family

    def __str__(self):
        return self.name

    @property
    def triple(self) -> tuple[int, int, int]:
        return {"E6": (2, 3, 3), "E7": (2, 3, 4), "E8": (2, 3, 5)}.get(self.family, (2, 2, self.K))

    def seifert(self) -> SeifertData:
        """Canonical data: Seifert invariant (-1; (2,1), (p2,1), (p3,1)) with b folded in."""
        p1, p2, p3 = self.triple
        return SeifertData.from_invariants(-1, ((p1, 1), (p2, 1), (p3, 1)))


E6 = ManifoldLabel("E6")
E7 = ManifoldLabel("E7")
E8 = ManifoldLabel("E8")


def D(K: int) -> ManifoldLabel:
    return ManifoldLabel("D", K)
