"""Exact counting of coloured m-ary partitions, with and without gaps.

A partition of n here is a multiset of pairs (part, colour) where every
part is a power m^j and part m^j may take any of k_j colours.  The
unrestricted count is written b(n); the gap-free count c(n) keeps only
partitions whose set of used part sizes is {m^0, ..., m^i} for some i,
so a larger power never appears without every smaller one.

Two deliberately independent oracles live here.  The series oracle builds
exact generating functions out of (1 - q^{m^j})^{-k_j} factors; the
enumeration oracle recurses over powers and counts colour multisets
directly.  They share no code beyond binomials, so one can check the
other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from math import comb

from .series import ExactSeries

__all__ = [
    "ENUMERATION_CAP",
    "ColourSpec",
    "EnumerationCapError",
    "PartitionProblem",
    "count_b_enum",
    "count_b_series",
    "count_c_enum",
    "count_c_series",
]

# Direct enumeration is exponential-ish in the digit length of n; above
# this bound the series oracle is the supported route.
ENUMERATION_CAP = 300


class EnumerationCapError(ValueError):
    """The requested n is too large for the enumeration oracle."""


@dataclass(frozen=True)
class ColourSpec:
    """Colour counts per part size: explicit k_0..k_r, then a constant tail.

    count(j) is the number of colours available for part m^j.  Indices past
    the explicit prefix all use the tail value, so a spec describes every
    power at once.
    """

    explicit: tuple[int, ...]
    tail: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "explicit", tuple(self.explicit))
        if not self.explicit:
            raise ValueError("colour spec needs at least one explicit entry")
        for k in self.explicit:
            if k < 1:
                raise ValueError(f"colour counts must be positive, got {k}")
        if self.tail < 1:
            raise ValueError(f"tail colour count must be positive, got {self.tail}")

    def count(self, index: int) -> int:
        """Number of colours for part m^index."""
        if index < 0:
            raise ValueError("part index must be nonnegative")
        if index < len(self.explicit):
            return self.explicit[index]
        return self.tail

    def normalized(self) -> ColourSpec:
        """Equivalent spec with trailing explicit entries equal to the tail dropped."""
        entries = list(self.explicit)
        while len(entries) > 1 and entries[-1] == self.tail:
            entries.pop()
        return ColourSpec(tuple(entries), self.tail)

    @classmethod
    def parse(cls, text: str) -> ColourSpec:
        """Parse the literal 'k0,k1,...;tail'.

        The ';tail' part is optional and defaults to the last explicit
        entry, so '2,1' means colours 2, 1, 1, 1, ...
        """
        body, sep, tail_text = text.partition(";")
        try:
            entries = tuple(int(piece) for piece in body.split(","))
            tail = int(tail_text) if sep else entries[-1]
        except (ValueError, IndexError):
            raise ValueError(
                f"colour spec must look like 'k0,k1,...;tail', got {text!r}"
            ) from None
        return cls(entries, tail)

    def __str__(self) -> str:
        return ",".join(str(k) for k in self.explicit) + f";{self.tail}"


@dataclass(frozen=True)
class PartitionProblem:
    """A base m >= 2 together with the colour counts for its powers."""

    m: int
    colours: ColourSpec

    def __post_init__(self) -> None:
        if self.m < 2:
            raise ValueError(f"base must be at least 2, got {self.m}")


def count_b_series(prob: PartitionProblem, truncation: int) -> ExactSeries:
    """Exact generating series of the unrestricted counts b(0..truncation).

    Equals the product over all j with m^j <= truncation of the factors
    (1 - q^{m^j})^{-k_j}; factors for larger j only touch exponents above
    the truncation.  Each factor is folded in as k_j cumulative passes,
    one per application of (1 - q^{m^j})^{-1}.
    """
    coeffs = _series_start(truncation)
    power, index = 1, 0
    while power <= truncation:
        _fold_in_inverse_factor(coeffs, power, prob.colours.count(index))
        power *= prob.m
        index += 1
    return ExactSeries(truncation, coeffs)


def count_c_series(prob: PartitionProblem, truncation: int) -> ExactSeries:
    """Exact generating series of the gap-free counts c(0..truncation).

    Sum over i >= 0 of the products prod_{j=0..i} ((1 - q^{m^j})^{-k_j} - 1),
    where term i collects the partitions whose used part sizes are exactly
    {m^0, ..., m^i}.  Term i starts at exponent 1 + m + ... + m^i, so the
    sum stops once that minimal exponent clears the truncation.  The
    constant term is zero: the empty partition is not counted, c(0) = 0.
    """
    total = [0] * (truncation + 1)
    partial = _series_start(truncation)
    power, index, minimal_exponent = 1, 0, 0
    while True:
        minimal_exponent += power
        if minimal_exponent > truncation:
            break
        # partial *= ((1 - q^power)^{-k} - 1), via partial * factor - partial
        grown = partial.copy()
        _fold_in_inverse_factor(grown, power, prob.colours.count(index))
        partial = [g - p for g, p in zip(grown, partial)]
        for e, c in enumerate(partial):
            total[e] += c
        power *= prob.m
        index += 1
    return ExactSeries(truncation, total)


def count_b_enum(prob: PartitionProblem, n: int, cap: int = ENUMERATION_CAP) -> int:
    """Unrestricted count b(n) by direct recursion over powers.

    Walks the powers of m from the largest one at most n downward; at each
    power it chooses how many parts of that size appear and multiplies by
    C(parts + k - 1, k - 1), the number of colour multisets of that size.
    Refuses n above the cap, where the series oracle should be used.
    """
    _check_enum_args(n, cap)
    if n == 0:
        return 1
    powers = _powers_up_to(prob.m, n)

    @cache
    def ways(remaining: int, index: int) -> int:
        k = prob.colours.count(index)
        if index == 0:
            return comb(remaining + k - 1, k - 1)
        p = powers[index]
        return sum(
            comb(parts + k - 1, k - 1) * ways(remaining - parts * p, index - 1)
            for parts in range(remaining // p + 1)
        )

    return ways(n, len(powers) - 1)


def count_c_enum(prob: PartitionProblem, n: int, cap: int = ENUMERATION_CAP) -> int:
    """Gap-free count c(n) by direct recursion over powers.

    For each candidate top power m^i affordable within n (the used sizes
    must be exactly m^0..m^i, costing at least 1 + m + ... + m^i), counts
    the partitions in which every one of those sizes appears at least
    once.  Colour multisets per size are counted as in count_b_enum.
    """
    if n < 1:
        raise ValueError(f"gap-free counts are defined for n >= 1, got {n}")
    _check_enum_args(n, cap)
    powers = _powers_up_to(prob.m, n)

    @cache
    def ways_all_used(remaining: int, index: int) -> int:
        k = prob.colours.count(index)
        if index == 0:
            return comb(remaining + k - 1, k - 1) if remaining >= 1 else 0
        p = powers[index]
        return sum(
            comb(parts + k - 1, k - 1) * ways_all_used(remaining - parts * p, index - 1)
            for parts in range(1, remaining // p + 1)
        )

    total = 0
    minimal_cost = 0
    for i, p in enumerate(powers):
        minimal_cost += p
        if minimal_cost > n:
            break
        total += ways_all_used(n, i)
    return total


def _series_start(truncation: int) -> list[int]:
    if truncation < 0:
        raise ValueError("truncation must be nonnegative")
    coeffs = [0] * (truncation + 1)
    coeffs[0] = 1
    return coeffs


def _fold_in_inverse_factor(coeffs: list[int], period: int, count: int) -> None:
    """Multiply the coefficient list in place by (1 - q^period)^(-count).

    Each ascending pass applies one inverse factor: after it,
    new[i] = old[i] + new[i - period], which is exactly division by
    (1 - q^period).
    """
    for _ in range(count):
        for i in range(period, len(coeffs)):
            coeffs[i] += coeffs[i - period]


def _powers_up_to(m: int, n: int) -> list[int]:
    powers = [1]
    while powers[-1] * m <= n:
        powers.append(powers[-1] * m)
    return powers


def _check_enum_args(n: int, cap: int) -> None:
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n > cap:
        raise EnumerationCapError(
            f"n = {n} exceeds the enumeration cap {cap}; "
            f"use the series oracle (count_b_series / count_c_series) instead"
        )
