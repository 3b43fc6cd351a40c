"""Digit-driven residues modulo m and the expansion identities behind them.

Both counting families admit closed forms modulo m that read nothing but
the base-m digits of n, provided every prime factor of m exceeds the
relevant colour counts (k_0 - 1 for the unit parts, k_j for the rest).
This module evaluates those closed forms, and also expands both sides of
the series identities they come from, so each identity instance can be
checked coefficient by coefficient against the exact counting oracles.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from . import series
from .counting import PartitionProblem, count_b_series, count_c_series
from .series import CoprimalityError, ModSeries, coprimality_witness

__all__ = [
    "Digits",
    "GapFreeDecomposition",
    "HypothesisCheck",
    "Residue",
    "binom_lift",
    "check_hypothesis",
    "decompose_gapfree",
    "expand_b_product",
    "expand_b_theorem",
    "expand_c_product",
    "expand_c_theorem",
    "residue_b",
    "residue_c",
    "to_digits",
]


@dataclass(frozen=True)
class Digits:
    """Base-m digits of a nonnegative integer, least significant first.

    The digit tuple never has a trailing zero except for the single digit
    of zero itself, so top_index is well defined.
    """

    base: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "digits", tuple(self.digits))
        if self.base < 2:
            raise ValueError("base must be at least 2")
        if not self.digits:
            raise ValueError("digit tuple must be nonempty")
        for d in self.digits:
            if not 0 <= d < self.base:
                raise ValueError(f"digit {d} out of range for base {self.base}")
        if len(self.digits) > 1 and self.digits[-1] == 0:
            raise ValueError("trailing zero digit")

    @property
    def top_index(self) -> int:
        return len(self.digits) - 1

    @property
    def value(self) -> int:
        total = 0
        for d in reversed(self.digits):
            total = total * self.base + d
        return total


@dataclass(frozen=True)
class Residue:
    """A canonical residue value in [0, modulus - 1]."""

    value: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"{self.value} is not canonical mod {self.modulus}")


@dataclass(frozen=True)
class HypothesisCheck:
    """Outcome of a coprimality check, with a witness on failure.

    prime is the smallest prime factor of m at fault and index the first
    digit position where it offends; both are None when the check passes.
    """

    ok: bool
    prime: int | None = None
    index: int | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class GapFreeDecomposition:
    """Presentation of a query n' as n - d0 with base | n and 0 <= d0 < base.

    n is the least multiple of the base at or above n'; s and t index the
    lowest and highest nonzero base digits of n, and digits holds d_s..d_t.
    Since n is a positive multiple of the base, s >= 1 and d_s >= 1 always.
    """

    n_prime: int
    d0: int
    n: int
    base: int
    s: int
    t: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "digits", tuple(self.digits))
        if self.base < 2:
            raise ValueError("base must be at least 2")
        if self.n_prime < 1:
            raise ValueError("n_prime must be positive")
        if not 0 <= self.d0 < self.base:
            raise ValueError("d0 out of range")
        if self.n != self.n_prime + self.d0 or self.n % self.base != 0:
            raise ValueError("n must be n_prime + d0 and divisible by the base")
        if not 1 <= self.s <= self.t:
            raise ValueError("need 1 <= s <= t")
        if len(self.digits) != self.t - self.s + 1:
            raise ValueError("digit window must cover s..t")
        if not 1 <= self.digits[0] < self.base:
            raise ValueError("lowest nonzero digit must be in [1, base - 1]")


def to_digits(n: int, base: int) -> Digits:
    """Base digits of n, least significant first; zero has the single digit 0."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if base < 2:
        raise ValueError("base must be at least 2")
    if n == 0:
        return Digits(base, (0,))
    digits = []
    while n:
        n, d = divmod(n, base)
        digits.append(d)
    return Digits(base, tuple(digits))


def check_hypothesis(prob: PartitionProblem, max_index: int) -> HypothesisCheck:
    """Check gcd(m, (k_0 - 1)!) = 1 and gcd(m, k_j!) = 1 for 1 <= j <= max_index.

    Equivalently, every prime factor of m must exceed k_0 - 1 and each k_j
    through max_index.  Indices beyond the explicit prefix all share the
    tail colour count, so only the first tail position needs a look.
    """
    if max_index < 0:
        raise ValueError("max_index must be nonnegative")
    last_distinct = min(max_index, len(prob.colours.explicit))
    for index in range(last_distinct + 1):
        k = prob.colours.count(index)
        bound = k - 1 if index == 0 else k
        witness = coprimality_witness(prob.m, bound)
        if witness is not None:
            return HypothesisCheck(False, witness, index)
    return HypothesisCheck(True)


def binom_lift(top: int, bottom: int, modulus: int) -> Residue:
    """C(top, bottom) mod modulus, lifting small tops by modulus steps.

    Requires gcd(modulus, bottom!) = 1.  When top < bottom (negative tops
    included), top is raised by the least number of modulus steps that
    reaches bottom; under the gcd condition the residue is the same for
    every admissible number of steps, so the convention is canonical.
    """
    if bottom < 0:
        raise ValueError("bottom must be nonnegative")
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    witness = coprimality_witness(modulus, bottom)
    if witness is not None:
        raise CoprimalityError(
            f"prime {witness} divides both the modulus {modulus} and {bottom}!",
            prime=witness,
            modulus=modulus,
        )
    return Residue(_lifted_binom(top, bottom, modulus), modulus)


def residue_b(n: int, prob: PartitionProblem, *, enforce_hypothesis: bool = True) -> Residue:
    """Digit formula for the unrestricted count modulo m.

    With d_0..d_t the base-m digits of n, returns

        C(k_0 - 1 + d_0, k_0 - 1) * prod_{j=1..t} C(k_j + d_j, k_j)  (mod m),

    which equals b(n) mod m whenever the coprimality hypothesis holds
    through index t.  Passing enforce_hypothesis=False evaluates the same
    product without that guarantee, for diagnostic probes only.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    digits = to_digits(n, prob.m)
    if enforce_hypothesis:
        _require_hypothesis(prob, digits.top_index)
    k0 = prob.colours.count(0)
    value = comb(k0 - 1 + digits.digits[0], k0 - 1) % prob.m
    for j in range(1, len(digits.digits)):
        kj = prob.colours.count(j)
        value = value * comb(kj + digits.digits[j], kj) % prob.m
    return Residue(value, prob.m)


def decompose_gapfree(n_prime: int, base: int) -> GapFreeDecomposition:
    """Write a positive query as n - d0 with base | n and 0 <= d0 < base.

    n is the least multiple of the base at or above n_prime.  The returned
    record also locates the lowest and highest nonzero digits of n, which
    is all the gap-free residue formula needs.
    """
    if n_prime < 1:
        raise ValueError(f"decomposition is defined for n >= 1, got {n_prime}")
    if base < 2:
        raise ValueError("base must be at least 2")
    d0 = (-n_prime) % base
    n = n_prime + d0
    digits = to_digits(n, base).digits
    s = next(j for j, d in enumerate(digits) if d)
    t = len(digits) - 1
    return GapFreeDecomposition(
        n_prime=n_prime,
        d0=d0,
        n=n,
        base=base,
        s=s,
        t=t,
        digits=digits[s:],
    )


def residue_c(n_prime: int, prob: PartitionProblem, *, enforce_hypothesis: bool = True) -> Residue:
    """Digit formula for the gap-free count modulo m.

    Decomposes the query as n - d_0 with m | n, locates the lowest and
    highest nonzero digits d_s and d_t of n, and evaluates

        C(k_0 - 1 - d_0, k_0 - 1)
          * (eps_s + (-1)^(s-1) * (C(k_s + d_s - 1, k_s) - 1)
                   * sum_{i=s..t} prod_{j=s+1..i} (C(k_j + d_j, k_j) - 1))

    in Z_m, where eps_s is 1 for odd s and 0 for even s.  The leading
    binomial has its top below its bottom, so it is evaluated through the
    modulus lift; the inner sum's i = s term is the empty product 1.  The
    result equals c(n') mod m under the coprimality hypothesis through
    index t.
    """
    if n_prime < 1:
        raise ValueError(f"the gap-free residue formula covers n >= 1, got {n_prime}")
    m = prob.m
    dec = decompose_gapfree(n_prime, m)
    if enforce_hypothesis:
        _require_hypothesis(prob, dec.t)
    k0 = prob.colours.count(0)
    lead = _lifted_binom(k0 - 1 - dec.d0, k0 - 1, m)
    k_s = prob.colours.count(dec.s)
    d_s = dec.digits[0]
    bracket = (comb(k_s + d_s - 1, k_s) - 1) % m
    tail_sum = 0
    running = 1
    for i in range(dec.s, dec.t + 1):
        if i > dec.s:
            k_i = prob.colours.count(i)
            d_i = dec.digits[i - dec.s]
            running = running * (comb(k_i + d_i, k_i) - 1) % m
        tail_sum = (tail_sum + running) % m
    eps = dec.s % 2
    sign = 1 if eps else -1
    value = lead * (eps + sign * bracket * tail_sum) % m
    return Residue(value, m)


def expand_b_product(prob: PartitionProblem, truncation: int) -> ModSeries:
    """Reduction mod m of the exact unrestricted counting series."""
    return series.reduce(count_b_series(prob, truncation), prob.m)


def expand_b_theorem(
    prob: PartitionProblem, truncation: int, *, enforce_hypothesis: bool = True
) -> ModSeries:
    """Digit-polynomial expansion of the unrestricted series over Z_m.

    Product of one polynomial per digit position: position 0 contributes
    sum_{l=0..m-1} C(k_0 - 1 + l, k_0 - 1) q^l and position j >= 1
    contributes sum_{l=0..m-1} C(k_j + l, k_j) q^(l m^j).  A position is
    included exactly while its minimal nonzero exponent m^j fits under the
    truncation.  Coefficientwise equal to expand_b_product under the
    coprimality hypothesis.
    """
    m = prob.m
    if truncation < 0:
        raise ValueError("truncation must be nonnegative")
    top = _max_power_index(m, truncation)
    if enforce_hypothesis:
        _require_hypothesis(prob, top)
    k0 = prob.colours.count(0)
    acc = _mod_poly(m, truncation, ((l, comb(k0 - 1 + l, k0 - 1)) for l in range(m)))
    power = m
    for index in range(1, top + 1):
        k = prob.colours.count(index)
        factor = _mod_poly(
            m, truncation, ((l * power, comb(k + l, k)) for l in range(m))
        )
        acc = series.mul(acc, factor)
        power *= m
    return acc


def expand_c_product(prob: PartitionProblem, truncation: int) -> ModSeries:
    """Reduction mod m of the gap-free counting series, normalized to lead with 1.

    The exact series has constant term zero (c(0) = 0); the identity being
    verified is stated for the series 1 + sum_{n>=1} c(n) q^n, so the
    constant is set to 1 here.
    """
    reduced = series.reduce(count_c_series(prob, truncation), prob.m)
    return ModSeries(prob.m, truncation, (1,) + reduced.coeffs[1:])


def expand_c_theorem(
    prob: PartitionProblem, truncation: int, *, enforce_hypothesis: bool = True
) -> ModSeries:
    """Digit-polynomial expansion of the gap-free series over Z_m.

    Computes 1 + L(q) * sum_{i>=0} G_{i+1}(q) * prod_{j=1..i} D_j(q), where
    L runs over l = 1..m with coefficients C(k_0 - 1 + l, k_0 - 1) at q^l
    (note the shifted range, ending at l = m rather than m - 1),
    G_{i+1} is the geometric series in q^(m^(i+1)), and D_j has coefficient
    C(k_j + l, k_j) - 1 at q^(l m^j) for l = 0..m-1, hence no constant
    term.  Terms with i past the largest power index under the truncation
    vanish identically, so the i-sum stops there; the i = 0 term carries
    the empty product 1.  Coefficientwise equal to expand_c_product under
    the coprimality hypothesis.
    """
    m = prob.m
    if truncation < 0:
        raise ValueError("truncation must be nonnegative")
    top = _max_power_index(m, truncation)
    if enforce_hypothesis:
        _require_hypothesis(prob, top + 1)
    k0 = prob.colours.count(0)
    lead = _mod_poly(
        m, truncation, ((l, comb(k0 - 1 + l, k0 - 1)) for l in range(1, m + 1))
    )
    total = [0] * (truncation + 1)
    partial = ModSeries.one(m, truncation)
    power = 1
    for index in range(top + 1):
        if index >= 1:
            k = prob.colours.count(index)
            partial = series.mul(
                partial,
                _mod_poly(
                    m, truncation, ((l * power, comb(k + l, k) - 1) for l in range(m))
                ),
            )
        term = series.mul(
            series.geometric_inverse_mod(power * m, m, truncation), partial
        )
        for e, c in enumerate(term.coeffs):
            total[e] += c
        power *= m
    body = series.mul(lead, ModSeries(m, truncation, [c % m for c in total]))
    coeffs = list(body.coeffs)
    coeffs[0] = (coeffs[0] + 1) % m
    return ModSeries(m, truncation, coeffs)


def _require_hypothesis(prob: PartitionProblem, max_index: int) -> None:
    result = check_hypothesis(prob, max_index)
    if not result:
        raise CoprimalityError(
            f"coprimality hypothesis fails for modulus {prob.m}: "
            f"prime {result.prime} offends at digit index {result.index}",
            prime=result.prime,
            modulus=prob.m,
            index=result.index,
        )


def _lifted_binom(top: int, bottom: int, modulus: int) -> int:
    if top < bottom:
        steps = (bottom - top + modulus - 1) // modulus
        top += steps * modulus
    return comb(top, bottom) % modulus


def _mod_poly(modulus: int, truncation: int, terms) -> ModSeries:
    coeffs = [0] * (truncation + 1)
    for exponent, value in terms:
        if exponent <= truncation:
            coeffs[exponent] = value % modulus
    return ModSeries(modulus, truncation, coeffs)


def _max_power_index(m: int, limit: int) -> int:
    """Largest j with m**j <= limit, or 0 when even m itself exceeds limit."""
    index, power = 0, m
    while power <= limit:
        index += 1
        power *= m
    return index
