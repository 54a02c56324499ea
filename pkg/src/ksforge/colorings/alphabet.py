"""Finite value sets for outcome assignments."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

Assignment = dict  # label -> Fraction


class AlphabetError(ValueError):
    pass


def parse_rational(text: str | int | Fraction) -> Fraction:
    if isinstance(text, Fraction):
        return text
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise AlphabetError(f"not a rational: {text!r}") from exc


def fmt_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


@dataclass(frozen=True)
class Alphabet:
    values: tuple[Fraction, ...]
    p: Fraction | None = None

    def __post_init__(self):
        vals = tuple(sorted(set(Fraction(v) for v in self.values)))
        if not vals or vals[0] != 0:
            raise AlphabetError("alphabet must contain 0")
        if vals[-1] > 1 or vals[0] < 0:
            raise AlphabetError("alphabet values must lie in [0, 1]")
        object.__setattr__(self, "values", vals)

    @classmethod
    def O(cls, p, d: int = 3, *, include_one: bool = True) -> "Alphabet":
        """{0, p, 1-p, 1} for 0 <= p <= 1/2 with p != 1/d."""
        p = parse_rational(p)
        if not 0 <= p <= Fraction(1, 2):
            raise AlphabetError(f"p = {p} outside [0, 1/2]")
        if p == Fraction(1, d):
            raise AlphabetError(f"p = 1/{d} is excluded in dimension {d}")
        vals = [0, p, 1 - p] + ([1] if include_one else [])
        return cls(tuple(vals), p)

    @classmethod
    def parse(cls, text: str, d: int = 3) -> "Alphabet":
        """Comma list of rationals.  Lists shaped like {0, p, 1-p, 1} (or without 1)
        are routed through :meth:`O` so the excluded value 1/d is rejected."""
        vals = sorted(set(parse_rational(t) for t in text.split(",") if t.strip()))
        a = cls(tuple(vals))
        inner = [v for v in vals if 0 < v < 1]
        if len(inner) in (1, 2) and (len(inner) == 1 or inner[0] + inner[1] == 1):
            p = min(inner)
            if p <= Fraction(1, 2):
                o = cls.O(p, d, include_one=1 in vals)
                if len(inner) == 2 or p == Fraction(1, 2):
                    return o
            else:
                # only 1-p present: still an O-type value set, guard on 1-p
                cls.O(1 - p, d)
        return a

    @property
    def denominator(self) -> int:
        return math.lcm(*(v.denominator for v in self.values))

    def scaled(self) -> tuple[list[int], int]:
        """Integer weights and target: value k maps to weights[k] / D."""
        D = self.denominator
        return [int(v * D) for v in self.values], D

    def __contains__(self, x) -> bool:
        return Fraction(x) in self.values

    def __len__(self):
        return len(self.values)

    def labels(self) -> list[str]:
        return [fmt_rational(v) for v in self.values]

    def __str__(self):
        return "{" + ",".join(self.labels()) + "}"


ZERO_ONE = Alphabet((Fraction(0), Fraction(1)))
HALF = Alphabet((Fraction(0), Fraction(1, 2), Fraction(1)), Fraction(1, 2))


def as_assignment(items: Iterable[tuple[str, object]]) -> Assignment:
    return {k: parse_rational(v) for k, v in items}
