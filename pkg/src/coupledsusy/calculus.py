"""Exact calculus on Gaussian-weighted Laurent polynomials.

Everything in this package acts on wavefunctions of the form

    q(x) * exp(-x^(2n) / (2n)),

where q is a sparse Laurent polynomial with rational coefficients and n is
the family index of the x^n coupled SUSY system.  The four first-order
generators a, a+, b, b+ map each monomial x^k to a short rational
combination of shifted monomials, times a global 1/sqrt(2).  Those sqrt(2)
factors are tracked separately as an integer "half power" so that all
coefficient arithmetic stays in Q: a state represents

    2^(-w/2) * sum_k c_k x^k * exp(-x^(2n)/(2n)),

with w canonicalised into {0, 1} (even parts are folded into the c_k).

Inner products over the real line reduce, via

    int_0^inf x^j exp(-b x^(2n)) dx = Gamma((j+1)/(2n)) / (2n b^((j+1)/(2n)))

and the Gamma recurrence, to exact rational combinations of the base
symbols G_r = Gamma(r/(2n)) * n^(r/(2n)) with odd r in 1..2n-1.  A
GammaVector stores such a combination exactly; numeric values come out of
an arbitrary-precision evaluator with a certified error bound.

Negative exponents are legal in intermediate states (some generators leave
the polynomial towers); integrability is only enforced when an inner
product is requested.
"""

from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, TYPE_CHECKING

from mpmath import mp

if TYPE_CHECKING:  # pragma: no cover
    from .systems import CoupledSusySystem

Rational = Fraction


class FamilyMismatchError(ValueError):
    """Two objects built for different family indices n were combined."""


class DivergenceError(ValueError):
    """An inner product integrand contains a non-integrable power x^j, j <= -1."""


class Generator(Enum):
    """The four first-order generators of a coupled SUSY system."""

    A = "a"
    ADAG = "a+"
    B = "b"
    BDAG = "b+"


#: Composition words are tuples of generators applied right-to-left,
#: matching operator products: (ADAG, B) means "apply b, then a+".
RAISING_WORD = (Generator.ADAG, Generator.B)
LOWERING_WORD = (Generator.BDAG, Generator.A)


def _canonical_terms(terms: Mapping[int, object], half_power: int):
    """Fold even half powers of 2 into the coefficients; drop zeros."""
    fold = half_power >> 1  # floor division, works for negatives
    residue = half_power - 2 * fold
    factor = Fraction(1, 2) ** fold
    out = {}
    for k, c in terms.items():
        c = Fraction(c)
        if c == 0:
            continue
        out[int(k)] = c * factor
    return out, residue


class GaussPolyState:
    """A sparse exact state q(x) * exp(-x^(2n)/(2n)) with a sqrt(2) half power.

    Immutable.  Two states are equal iff they have the same family index and
    identical canonical (half_power, term map).
    """

    __slots__ = ("n", "half_power", "terms")

    def __init__(self, n: int, terms: Mapping[int, object], half_power: int = 0):
        if n < 1:
            raise ValueError("family index n must be a positive integer")
        canon, residue = _canonical_terms(terms, half_power)
        if not canon:
            residue = 0  # the zero state has one canonical form
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "terms", canon)
        object.__setattr__(self, "half_power", residue)

    def __setattr__(self, *_):
        raise AttributeError("GaussPolyState is immutable")

    # -- basic queries ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, k: int) -> Fraction:
        return self.terms.get(k, Fraction(0))

    def exponents(self):
        return sorted(self.terms)

    def min_exponent(self):
        return min(self.terms) if self.terms else None

    def max_exponent(self):
        return max(self.terms) if self.terms else None

    def residues(self) -> set:
        """Residue classes mod 2n occupied by the exponents."""
        mod = 2 * self.n
        return {k % mod for k in self.terms}

    # -- algebra -----------------------------------------------------------

    def scale(self, r) -> "GaussPolyState":
        r = Fraction(r)
        if r == 0:
            return GaussPolyState(self.n, {}, 0)
        return GaussPolyState(
            self.n, {k: c * r for k, c in self.terms.items()}, self.half_power
        )

    def scale_sqrt2(self, j: int) -> "GaussPolyState":
        """Multiply the state by 2^(j/2) exactly."""
        return GaussPolyState(self.n, self.terms, self.half_power - j)

    def __add__(self, other: "GaussPolyState") -> "GaussPolyState":
        if self.n != other.n:
            raise FamilyMismatchError("cannot add states with different n")
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.half_power != other.half_power:
            raise ValueError(
                "cannot add states of mismatched sqrt(2) parity exactly; "
                "rescale one side with scale_sqrt2 first"
            )
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return GaussPolyState(self.n, out, self.half_power)

    def __neg__(self) -> "GaussPolyState":
        return self.scale(-1)

    def __sub__(self, other: "GaussPolyState") -> "GaussPolyState":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GaussPolyState):
            return NotImplemented
        return (
            self.n == other.n
            and self.half_power == other.half_power
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, self.half_power, frozenset(self.terms.items())))

    def __repr__(self):
        return f"GaussPolyState({self.serialize()!r})"

    # -- numerics ----------------------------------------------------------

    def evaluate(self, x):
        """Evaluate the state at points x (scalar or numpy array), in floats."""
        import numpy as np

        x = np.asarray(x, dtype=float)
        if self.terms and min(self.terms) < 0 and np.any(x == 0.0):
            raise ZeroDivisionError("state has negative exponents; x=0 is singular")
        acc = np.zeros_like(x)
        for k, c in self.terms.items():
            acc = acc + float(c) * x ** k
        weight = np.exp(-(x ** (2 * self.n)) / (2 * self.n))
        return 2.0 ** (-self.half_power / 2.0) * acc * weight

    # -- canonical text form ------------------------------------------------

    def serialize(self) -> str:
        body = ", ".join(
            f"{k}:{c.numerator}/{c.denominator}" for k, c in sorted(self.terms.items())
        )
        return f"{self.n}; {self.half_power}; {body}"

    @classmethod
    def parse(cls, text: str) -> "GaussPolyState":
        head, w, body = (part.strip() for part in text.split(";", 2))
        terms = {}
        if body:
            for chunk in body.split(","):
                k, c = chunk.split(":")
                terms[int(k)] = Fraction(c.strip())
        return cls(int(head), terms, int(w))


def monomial_state(n: int, k: int, coeff=1) -> GaussPolyState:
    """The state coeff * x^k * exp(-x^(2n)/(2n))."""
    return GaussPolyState(n, {k: Fraction(coeff)})


def zero_state(n: int) -> GaussPolyState:
    return GaussPolyState(n, {})


def apply_generator(system: "CoupledSusySystem", gen: Generator, state: GaussPolyState) -> GaussPolyState:
    """Apply one generator to a state via the system's per-monomial rules.

    Each rule term sends x^k to (alpha + beta*k) x^(k+shift); the implicit
    1/sqrt(2) becomes one extra half power on the result.
    """
    if state.n != system.n:
        raise FamilyMismatchError(
            f"state has n={state.n} but system has n={system.n}"
        )
    out: dict = {}
    for term in system.rule_terms(gen):
        for k, c in state.terms.items():
            coeff = c * (term.alpha + term.beta * k)
            if coeff == 0:
                continue
            kk = k + term.shift
            out[kk] = out.get(kk, Fraction(0)) + coeff
    return GaussPolyState(system.n, out, state.half_power + 1)


def apply_word(system: "CoupledSusySystem", word: Iterable[Generator], state: GaussPolyState) -> GaussPolyState:
    """Apply a composition word right-to-left: (ADAG, B) acts as a+ after b."""
    for gen in reversed(tuple(word)):
        state = apply_generator(system, gen, state)
    return state


def proportionality_ratio(f: GaussPolyState, g: GaussPolyState):
    """Exact scalar between two states, if one exists.

    Returns (q, j) with f == q * 2^(j/2) * g for a rational q, or None when
    the states are not exactly proportional.  Leading terms are compared at
    the largest exponent.
    """
    if f.n != g.n:
        raise FamilyMismatchError("states belong to different families")
    if g.is_zero:
        return (Fraction(0), 0) if f.is_zero else None
    if f.is_zero:
        return (Fraction(0), 0)
    if set(f.terms) != set(g.terms):
        return None
    lead = max(g.terms)
    q = f.terms[lead] / g.terms[lead]
    for k, c in g.terms.items():
        if f.terms[k] != q * c:
            return None
    return q, g.half_power - f.half_power


# ---------------------------------------------------------------------------
# Exact inner products over the Gamma symbols G_r = Gamma(r/(2n)) n^(r/(2n))
# ---------------------------------------------------------------------------


class GammaVector:
    """Exact value sum_r coeffs[r] * Gamma(r/(2n)) * n^(r/(2n)), odd r in 1..2n-1."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Mapping[int, object]):
        if n < 1:
            raise ValueError("family index n must be a positive integer")
        canon = {}
        for r, c in coeffs.items():
            r = int(r)
            if r % 2 == 0 or not (1 <= r <= 2 * n - 1):
                raise ValueError(f"residue {r} is not an odd integer in 1..{2*n-1}")
            c = Fraction(c)
            if c != 0:
                canon[r] = c
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "coeffs", canon)

    def __setattr__(self, *_):
        raise AttributeError("GammaVector is immutable")

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def scale(self, r) -> "GammaVector":
        r = Fraction(r)
        return GammaVector(self.n, {k: c * r for k, c in self.coeffs.items()})

    def __add__(self, other: "GammaVector") -> "GammaVector":
        if self.n != other.n:
            raise FamilyMismatchError("cannot add GammaVectors with different n")
        out = dict(self.coeffs)
        for r, c in other.coeffs.items():
            out[r] = out.get(r, Fraction(0)) + c
        return GammaVector(self.n, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GammaVector):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))

    def __repr__(self):
        return f"GammaVector({self.serialize()!r})"

    def rational_ratio(self, other: "GammaVector"):
        """Rational q with self == q * other, or None if no exact ratio exists."""
        if self.n != other.n:
            raise FamilyMismatchError("GammaVectors belong to different families")
        if other.is_zero:
            return Fraction(0) if self.is_zero else None
        r = max(other.coeffs)
        q = self.coeffs.get(r, Fraction(0)) / other.coeffs[r]
        return q if self == other.scale(q) else None

    def serialize(self) -> str:
        body = ", ".join(
            f"{r}:{c.numerator}/{c.denominator}" for r, c in sorted(self.coeffs.items())
        )
        return f"{self.n}; {body}"

    @classmethod
    def parse(cls, text: str) -> "GammaVector":
        head, body = (part.strip() for part in text.split(";", 1))
        coeffs = {}
        if body:
            for chunk in body.split(","):
                r, c = chunk.split(":")
                coeffs[int(r)] = Fraction(c.strip())
        return cls(int(head), coeffs)


def zero_gamma_vector(n: int) -> GammaVector:
    return GammaVector(n, {})


def _monomial_integral(n: int, j: int) -> dict:
    """Exact value of int_R x^j exp(-x^(2n)/n) dx as {residue: rational}.

    Odd j >= 1 vanishes by symmetry.  Even j reduces with s = j+1 = r + 2nt:
    Gamma(s/(2n)) = Gamma(r/(2n)) * prod_{i<t} (r + 2ni)/(2n) and
    n^(s/(2n)) = n^t * n^(r/(2n)).
    """
    if j <= -1:
        raise DivergenceError(f"integrand term x^{j} is not integrable")
    if j % 2 == 1:
        return {}
    s = j + 1
    r = s % (2 * n)
    t = s // (2 * n)
    c = Fraction(1, n) * Fraction(n) ** t
    for i in range(t):
        c *= Fraction(r + 2 * n * i, 2 * n)
    return {r: c}


def inner_product(f: GaussPolyState, g: GaussPolyState) -> GammaVector:
    """Exact <f, g> = int f g dx as a GammaVector.

    The combined sqrt(2) half power of the two states must be even (every
    pairing arising from the operator algebra is); an odd total would leave
    an irrational sqrt(2) that the Gamma symbols cannot absorb.
    """
    if f.n != g.n:
        raise FamilyMismatchError("states belong to different families")
    if f.is_zero or g.is_zero:
        return GammaVector(f.n, {})
    total_half = f.half_power + g.half_power
    if total_half % 2 != 0:
        raise ValueError(
            "inner product of states with odd combined sqrt(2) parity is "
            "irrational; rescale one argument with scale_sqrt2 first"
        )
    scale = Fraction(1, 2) ** (total_half // 2)
    collected: dict = {}
    for k, c in f.terms.items():
        for l, d in g.terms.items():
            j = k + l
            collected[j] = collected.get(j, Fraction(0)) + c * d
    coeffs: dict = {}
    for j, d in sorted(collected.items()):
        if d == 0:
            continue
        for r, c in _monomial_integral(f.n, j).items():
            coeffs[r] = coeffs.get(r, Fraction(0)) + d * c * scale
    return GammaVector(f.n, coeffs)


# ---------------------------------------------------------------------------
# Numeric evaluation of Gamma symbols
# ---------------------------------------------------------------------------


def evaluate_gamma_vector_mp(v: GammaVector, prec_bits: int = 113):
    """Evaluate at the given binary precision; returns (value, error_bound) as mpf.

    The bound covers the rounding of each Gamma/power/multiply/add at working
    precision; it is a small multiple of one ulp of the absolute-value sum.
    """
    with mp.workprec(prec_bits):
        total = mp.mpf(0)
        absum = mp.mpf(0)
        two_n = 2 * v.n
        for r, c in sorted(v.coeffs.items()):
            term = (
                mp.mpf(c.numerator)
                / c.denominator
                * mp.gamma(mp.mpf(r) / two_n)
                * mp.power(v.n, mp.mpf(r) / two_n)
            )
            total += term
            absum += abs(term)
        bound = absum * (len(v.coeffs) + 4) * mp.mpf(2) ** (2 - prec_bits)
        return total, bound


def evaluate_gamma_vector(v: GammaVector, precision: float = 1e-14, max_bits: int = 4096) -> float:
    """Numeric value of a GammaVector with relative error at most `precision`.

    The working precision escalates until the certified rounding bound meets
    the target.  A structurally zero vector evaluates to exactly 0.0; a
    nonzero map that keeps cancelling below the bound at max_bits is returned
    as is (callers that must distinguish use definitely_nonzero).
    """
    if v.is_zero:
        return 0.0
    if not precision > 0:
        raise ValueError("precision must be positive")
    bits = max(64, int(math.ceil(-math.log2(precision))) + 16)
    while True:
        value, bound = evaluate_gamma_vector_mp(v, bits)
        if bound <= precision * abs(value) or bits >= max_bits:
            return float(value)
        bits *= 2


def definitely_nonzero(v: GammaVector, max_bits: int = 4096) -> bool:
    """Confirm a GammaVector is numerically nonzero with a wide safety margin.

    True only when |value| exceeds 1000x the evaluation error bound at some
    working precision.  Structural zeros are False.  A False answer for a
    nonzero map means "not confirmed": rational relations among the base
    symbols are not assumed.
    """
    if v.is_zero:
        return False
    bits = 64
    while bits <= max_bits:
        value, bound = evaluate_gamma_vector_mp(v, bits)
        if abs(value) > 1000 * bound:
            return True
        bits *= 2
    return False
