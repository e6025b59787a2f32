"""Exact integer combinatorics: factorials and multinomial coefficients.

Everything runs on Python's arbitrary-precision integers; no value is ever
rounded or truncated.
"""

import math
from typing import Iterable

from .errors import PartsMismatch


def factorial(m: int) -> int:
    """Return m! exactly."""
    if m < 0:
        raise ValueError(f"factorial of negative number {m}")
    return math.factorial(m)


def multinomial(top: int, parts: Iterable[int]) -> int:
    """Return the multinomial coefficient top! / prod(part!).

    Computed as a running product of binomial coefficients so intermediate
    values stay small.  The parts must be non-negative and sum to ``top``;
    otherwise PartsMismatch is raised.
    """
    parts = list(parts)
    if top < 0 or any(p < 0 for p in parts):
        raise ValueError("multinomial arguments must be non-negative")
    if sum(parts) != top:
        raise PartsMismatch(f"parts sum to {sum(parts)}, expected {top}")
    out = 1
    remaining = top
    for p in parts:
        out *= math.comb(remaining, p)
        remaining -= p
    return out
