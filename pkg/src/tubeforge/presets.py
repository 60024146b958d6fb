"""Built-in reference sprays used by the selftest and the test suite."""

from .model import MonophaseGenerator, RatioList, SprayModel


def cantor_spray() -> SprayModel:
    """Two ratios 1/3; generator is an interval of length 1/3."""
    return SprayModel(
        RatioList([1.0 / 3.0, 1.0 / 3.0]),
        MonophaseGenerator(1, [2.0], 1.0 / 6.0, 1.0 / 3.0),
    )


def square_spray() -> SprayModel:
    """Nonlattice ratios {1/2, 1/3, 1/4}; generator is the unit square."""
    return SprayModel(
        RatioList([0.5, 1.0 / 3.0, 0.25]),
        MonophaseGenerator(2, [-4.0, 4.0], 0.5, 1.0),
    )
