"""Truncated formal power series in two coefficient domains.

Exact integer series carry the counting oracles; series over Z_m (m >= 2,
composite m allowed) carry the congruence checks.  A series is an immutable
value: its truncation degree is fixed at construction, and combining series
with different degrees or moduli is a structural error, never a silent
re-truncation.  Coefficients of a ModSeries are always canonical residues
in [0, m - 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

__all__ = [
    "CoprimalityError",
    "ExactSeries",
    "ModSeries",
    "SeriesMismatchError",
    "coprimality_witness",
    "geometric_inverse_mod",
    "mul",
    "neg_pow_series_exact",
    "neg_pow_series_mod",
    "reduce",
    "smallest_prime_factor",
]


class SeriesMismatchError(ValueError):
    """Operands disagree on truncation degree, modulus, or coefficient domain."""


class CoprimalityError(ValueError):
    """A required gcd(modulus, j!) = 1 condition fails.

    Carries the smallest offending prime so callers can report exactly why
    the modulus is inadmissible.
    """

    def __init__(self, message: str, *, prime: int, modulus: int, index: int | None = None):
        super().__init__(message)
        self.prime = prime
        self.modulus = modulus
        self.index = index


def smallest_prime_factor(n: int) -> int:
    """Smallest prime dividing n, for n >= 2, by trial division."""
    if n < 2:
        raise ValueError("smallest_prime_factor needs n >= 2")
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n


def coprimality_witness(modulus: int, bound: int) -> int | None:
    """Smallest prime dividing both modulus and bound!, or None if coprime.

    gcd(modulus, bound!) > 1 exactly when some prime factor of the modulus
    is at most bound, and the smallest prime factor is then the smallest
    witness.
    """
    p = smallest_prime_factor(modulus)
    return p if p <= bound else None


@dataclass(frozen=True)
class ExactSeries:
    """Integer power series truncated at a fixed degree.

    coeffs[i] is the coefficient of q^i; the tuple has exactly
    truncation_degree + 1 entries.  Coefficients are arbitrary-precision
    Python integers, so counting values never wrap.
    """

    truncation_degree: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if self.truncation_degree < 0:
            raise ValueError("truncation degree must be nonnegative")
        if len(self.coeffs) != self.truncation_degree + 1:
            raise ValueError(
                f"expected {self.truncation_degree + 1} coefficients, "
                f"got {len(self.coeffs)}"
            )

    @classmethod
    def one(cls, truncation_degree: int) -> ExactSeries:
        """The constant series 1 at the given truncation degree."""
        return cls(truncation_degree, (1,) + (0,) * truncation_degree)

    def __mul__(self, other: ExactSeries) -> ExactSeries:
        return mul(self, other)


@dataclass(frozen=True)
class ModSeries:
    """Power series over Z_modulus truncated at a fixed degree.

    Every coefficient must already be a canonical residue; the constructor
    rejects anything outside [0, modulus - 1] so that harness bugs surface
    as loud structural errors.
    """

    modulus: int
    truncation_degree: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        if self.truncation_degree < 0:
            raise ValueError("truncation degree must be nonnegative")
        if len(self.coeffs) != self.truncation_degree + 1:
            raise ValueError(
                f"expected {self.truncation_degree + 1} coefficients, "
                f"got {len(self.coeffs)}"
            )
        for c in self.coeffs:
            if not 0 <= c < self.modulus:
                raise ValueError(
                    f"coefficient {c} is not a canonical residue mod {self.modulus}"
                )

    @classmethod
    def one(cls, modulus: int, truncation_degree: int) -> ModSeries:
        """The constant series 1 at the given modulus and truncation degree."""
        return cls(modulus, truncation_degree, (1,) + (0,) * truncation_degree)

    def __mul__(self, other: ModSeries) -> ModSeries:
        return mul(self, other)


def mul(a: ExactSeries | ModSeries, b: ExactSeries | ModSeries):
    """Cauchy product truncated at the shared degree.

    Zero coefficients are skipped and the sparser operand drives the outer
    loop, so products against digit polynomials and geometric factors stay
    cheap even at large truncation degrees.  Mixing coefficient domains,
    truncation degrees, or moduli raises SeriesMismatchError.
    """
    if isinstance(a, ExactSeries) and isinstance(b, ExactSeries):
        modulus = None
    elif isinstance(a, ModSeries) and isinstance(b, ModSeries):
        if a.modulus != b.modulus:
            raise SeriesMismatchError(
                f"cannot multiply series with moduli {a.modulus} and {b.modulus}"
            )
        modulus = a.modulus
    else:
        raise SeriesMismatchError("cannot multiply exact and modular series")
    if a.truncation_degree != b.truncation_degree:
        raise SeriesMismatchError(
            f"cannot multiply series with truncation degrees "
            f"{a.truncation_degree} and {b.truncation_degree}"
        )

    degree = a.truncation_degree
    terms_a = [(e, c) for e, c in enumerate(a.coeffs) if c]
    terms_b = [(e, c) for e, c in enumerate(b.coeffs) if c]
    if len(terms_a) > len(terms_b):
        terms_a, terms_b = terms_b, terms_a
    out = [0] * (degree + 1)
    for ea, ca in terms_a:
        limit = degree - ea
        for eb, cb in terms_b:
            if eb > limit:
                break
            out[ea + eb] += ca * cb
    if modulus is None:
        return ExactSeries(degree, out)
    return ModSeries(modulus, degree, [c % modulus for c in out])


def neg_pow_series_exact(period: int, count: int, truncation: int) -> ExactSeries:
    """Truncation of (1 - q^period)^(-count) with exact coefficients.

    The coefficient of q^(period * l) is C(count - 1 + l, count - 1), the
    number of colour multisets of size l drawn from count colours; every
    exponent off the period lattice has coefficient zero.
    """
    _require_positive("period", period)
    _require_positive("count", count)
    if truncation < 0:
        raise ValueError("truncation must be nonnegative")
    coeffs = [0] * (truncation + 1)
    for l in range(truncation // period + 1):
        coeffs[period * l] = comb(count - 1 + l, count - 1)
    return ExactSeries(truncation, coeffs)


def neg_pow_series_mod(period: int, count: int, modulus: int, truncation: int) -> ModSeries:
    """Reduction of (1 - q^period)^(-count) to Z_modulus, in factored form.

    Requires gcd(modulus, (count - 1)!) = 1.  Built literally as the product
    of the geometric series in q^(period * modulus) with the degree-bounded
    digit polynomial whose coefficient at q^(period * l) is
    C(count - 1 + l, count - 1) for 0 <= l < modulus.  Under the coprimality
    condition this equals reduce(neg_pow_series_exact(...), modulus).
    """
    _require_positive("period", period)
    _require_positive("count", count)
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    if truncation < 0:
        raise ValueError("truncation must be nonnegative")
    witness = coprimality_witness(modulus, count - 1)
    if witness is not None:
        raise CoprimalityError(
            f"prime {witness} divides both the modulus {modulus} and ({count} - 1)!",
            prime=witness,
            modulus=modulus,
        )
    coeffs = [0] * (truncation + 1)
    for l in range(modulus):
        exponent = period * l
        if exponent > truncation:
            break
        coeffs[exponent] = comb(count - 1 + l, count - 1) % modulus
    digit_poly = ModSeries(modulus, truncation, coeffs)
    return mul(geometric_inverse_mod(period * modulus, modulus, truncation), digit_poly)


def geometric_inverse_mod(period: int, modulus: int, truncation: int) -> ModSeries:
    """Truncation of (1 - q^period)^(-1) over Z_modulus.

    Coefficient 1 at every multiple of period, 0 elsewhere.
    """
    _require_positive("period", period)
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    if truncation < 0:
        raise ValueError("truncation must be nonnegative")
    coeffs = [0] * (truncation + 1)
    for e in range(0, truncation + 1, period):
        coeffs[e] = 1
    return ModSeries(modulus, truncation, coeffs)


def reduce(series: ExactSeries, modulus: int) -> ModSeries:
    """Coefficientwise reduction of an exact series to canonical residues."""
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    return ModSeries(
        modulus,
        series.truncation_degree,
        [c % modulus for c in series.coeffs],
    )


def _require_positive(name: str, value: int) -> None:
    if value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value}")
