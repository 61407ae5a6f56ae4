"""Compensated floating-point accumulation.

Prefix sums of logarithms (ψ, ln k!, Σ ln k!) run over up to ~10⁸ terms, and the
remainder terms downstream are differences of nearly equal large numbers, so
every running sum in the package goes through the Neumaier variant of Kahan
summation.
"""

import sys
from typing import Iterable, List

EPS = sys.float_info.epsilon


class CompensatedSum:
    """Running Neumaier sum; ``value`` is the compensated total so far"""

    __slots__ = ("_total", "_comp")

    def __init__(self, start: float = 0.0) -> None:
        self._total = float(start)
        self._comp = 0.0

    def add(self, x: float) -> float:
        t = self._total + x
        if abs(self._total) >= abs(x):
            self._comp += (self._total - t) + x
        else:
            self._comp += (x - t) + self._total
        self._total = t
        return self._total + self._comp

    @property
    def value(self) -> float:
        return self._total + self._comp


def compensated_prefix_sums(terms: Iterable[float]) -> List[float]:
    acc = CompensatedSum()
    return [acc.add(x) for x in terms]


def accumulation_bound(n_terms: int, magnitude: float) -> float:
    """Error envelope 4·ulp·(number of terms)·(largest partial sum magnitude)"""
    return 4.0 * EPS * max(n_terms, 1) * abs(magnitude)
