"""Seeded reproducible sampling of small rationals and polynomials."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .algebra import MultiPoly

MAX_RETRIES = 100


class SamplingExhausted(RuntimeError):
    """No admissible point found within the retry budget."""


class RationalSampler:
    """Draws rationals n/d with n in -9..9 and d in 1..9 from a seeded stream."""

    def __init__(self, seed: int):
        self.seed = seed
        self._rng = random.Random(seed)

    def rational(self, nonzero: bool = False) -> Fraction:
        while True:
            value = Fraction(self._rng.randint(-9, 9), self._rng.randint(1, 9))
            if value or not nonzero:
                return value

    def integer(self, lo: int, hi: int) -> int:
        return self._rng.randint(lo, hi)

    def choice(self, items: Sequence):
        return self._rng.choice(items)

    def point(self, names: Iterable[str], admissible: Callable[[dict], bool] | None = None) -> dict[str, Fraction]:
        """A point whose guard holds; ZeroDivisionError inside the guard counts as rejection."""
        names = tuple(names)
        for _ in range(MAX_RETRIES):
            candidate = {n: self.rational() for n in names}
            if admissible is None:
                return candidate
            try:
                if admissible(candidate):
                    return candidate
            except ZeroDivisionError:
                pass
        raise SamplingExhausted(f"no admissible point after {MAX_RETRIES} draws (seed {self.seed})")

    def points(self, names: Iterable[str], count: int, admissible=None) -> list[dict[str, Fraction]]:
        names = tuple(names)
        return [self.point(names, admissible) for _ in range(count)]

    def multipoly(self, variables: Sequence[str], max_degree: int = 2, max_terms: int = 4) -> MultiPoly:
        variables = tuple(variables)
        terms = {}
        for _ in range(self._rng.randint(1, max_terms)):
            exps = [0] * len(variables)
            for _ in range(self._rng.randint(0, max_degree)):
                exps[self._rng.randrange(len(variables))] += 1
            terms[tuple(exps)] = self.rational()
        return MultiPoly.from_terms(variables, terms)


def denominators_nonzero(*functions) -> Callable[[dict], bool]:
    """Guard: every denominator has absolute value at least 1 at the point.

    Denominators are made integral first by clearing the point's rational
    denominators, which is what keeps sampled points away from poles.
    """

    def guard(point: dict) -> bool:
        for f in functions:
            den = f.den if hasattr(f, "den") else None
            if den is None or den.is_constant():
                continue
            value = den.evaluate(point)
            if value == 0:
                return False
            scale = 1
            for name in den.occurring():
                scale *= point[name].denominator ** den.degree(name)
            if abs(value * scale) < 1:
                return False
        return True

    return guard
