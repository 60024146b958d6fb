"""Compensated (Neumaier-style) summation.

Used for the big accumulations in the direct tube evaluation and the
residue partial sums, so results are reproducible and cancellation-safe.
"""

from __future__ import annotations


class CompensatedSum:
    """Neumaier variant of Kahan summation for real floats."""

    __slots__ = ("_sum", "_comp")

    def __init__(self, initial: float = 0.0):
        self._sum = float(initial)
        self._comp = 0.0

    def add(self, x: float) -> None:
        t = self._sum + x
        if abs(self._sum) >= abs(x):
            self._comp += (self._sum - t) + x
        else:
            self._comp += (x - t) + self._sum
        self._sum = t

    @property
    def value(self) -> float:
        return self._sum + self._comp


def compensated_total(values) -> float:
    acc = CompensatedSum()
    for v in values:
        acc.add(v)
    return acc.value


class ComplexCompensatedSum:
    """Componentwise compensated accumulation of complex values."""

    __slots__ = ("_re", "_im")

    def __init__(self):
        self._re = CompensatedSum()
        self._im = CompensatedSum()

    def add(self, z: complex) -> None:
        self._re.add(z.real)
        self._im.add(z.imag)

    @property
    def value(self) -> complex:
        return complex(self._re.value, self._im.value)
