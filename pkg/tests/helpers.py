"""Small systems with closed forms, shared by several test modules."""

import math

import numpy as np

from beurling.measures import (
    GeneralizedNumberSystem,
    HalfLineMeasure,
    TailModel,
    binned_density_measure,
)


def linear_system(a=1.0, U=12.0, bins=4096):
    """dN = delta_1 + a dx on [1, e^U]; beyond it N(x) - a x = 1 - a exactly."""
    dN = binned_density_measure(lambda u: a * np.exp(u), U, bins, atoms=[(1.0, 1.0)])
    dPi = HalfLineMeasure(x_max=math.exp(U))
    tail = TailModel(C=0.0, gamma=0.0, power=0.0, density=a, offset=1.0 - a, note="exact")
    return GeneralizedNumberSystem(dN, dPi, None, density_a=a, label=f"delta1+{a:g}dx", n_tail=tail)
