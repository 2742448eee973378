"""Sparse polynomials in formal moment variables, and the linear functional
that collapses them to moments.

An :class:`Umbra` is a formal variable with a prescribed moment sequence.
Distinct umbrae are uncorrelated: evaluation factors across them, so a product
of powers of distinct umbrae evaluates to a product of single moment lookups,
while repeated factors of the *same* umbra accumulate exponent first and only
then hit the moment sequence.  :class:`Indeterminate`s are ordinary commuting
variables that evaluation passes through untouched.

The performance lever of the whole package sits here: umbra kinds with a
finite nonzero-moment range (``max_power``) let multiplication drop doomed
monomials eagerly, because exponents only ever grow under products.
"""

from __future__ import annotations

import itertools
import math
import numbers
import threading
from fractions import Fraction
from typing import Callable, Sequence, Union

from .combinatorics import falling_factorial

__all__ = [
    "Umbra",
    "Indeterminate",
    "UmbralPolynomial",
    "indeterminates",
    "singletons",
    "deltas",
    "unities",
    "gaussian",
    "falling",
    "custom_umbra",
    "evaluate",
    "evaluate_scalar",
    "gf_coefficients",
    "similar",
]

Scalar = Union[int, Fraction, float]

_IDS = itertools.count(1)
_UMBRAE: dict[int, "Umbra"] = {}
_INDETS: dict[int, "Indeterminate"] = {}
_MISSING = object()


class _Operand:
    """Arithmetic mix-in lifting symbols into polynomials."""

    __slots__ = ()

    def _lift(self) -> "UmbralPolynomial":
        return UmbralPolynomial.coerce(self)

    def __add__(self, other):
        return self._lift() + other

    __radd__ = __add__

    def __sub__(self, other):
        return self._lift() - other

    def __rsub__(self, other):
        return (-self._lift()) + other

    def __mul__(self, other):
        return self._lift() * other

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return self._lift() ** k

    def __neg__(self):
        return -self._lift()


class Umbra(_Operand):
    """A formal variable whose powers evaluate to a prescribed moment sequence.

    ``moment_fn(k, prev)`` receives the exponent and the list of moments
    ``0..k-1`` already computed, which keeps recursive sequences (normal
    moments) cheap.  ``max_power`` is the largest exponent that can carry a
    nonzero moment; ``None`` means unbounded.  Moment memoization is guarded
    by a lock so umbrae can be shared across threads.
    """

    __slots__ = ("ident", "name", "kind", "max_power", "_moment_fn", "_cache", "_lock")

    def __init__(
        self,
        moment_fn: Callable[[int, list], Scalar],
        *,
        name: str | None = None,
        kind: str = "custom",
        max_power: int | None = None,
    ) -> None:
        self.ident = next(_IDS)
        self.name = name or f"a{self.ident}"
        self.kind = kind
        self.max_power = max_power
        self._moment_fn = moment_fn
        self._cache: list = [1]
        self._lock = threading.Lock()
        _UMBRAE[self.ident] = self

    def moment(self, k: int) -> Scalar:
        if k < 0:
            raise ValueError("moment order must be nonnegative")
        if self.max_power is not None and k > self.max_power:
            return 0
        with self._lock:
            while len(self._cache) <= k:
                j = len(self._cache)
                self._cache.append(self._moment_fn(j, self._cache))
            return self._cache[k]

    def __repr__(self) -> str:
        return f"Umbra({self.name})"


class Indeterminate(_Operand):
    """An ordinary commuting formal variable; distinct instances are distinct."""

    __slots__ = ("ident", "name")

    def __init__(self, name: str) -> None:
        self.ident = next(_IDS)
        self.name = name
        _INDETS[self.ident] = self

    def __repr__(self) -> str:
        return f"Indeterminate({self.name})"


def indeterminates(prefix: str, count: int) -> list[Indeterminate]:
    return [Indeterminate(f"{prefix}{i + 1}") for i in range(count)]


def singletons(count: int = 1, prefix: str = "chi") -> list[Umbra]:
    """Fresh mutually uncorrelated umbrae with moments 1, 1, 0, 0, ..."""
    return [
        Umbra(lambda k, prev: 1 if k == 1 else 0, name=f"{prefix}{i + 1}", kind="singleton", max_power=1)
        for i in range(count)
    ]


def deltas(count: int = 1, prefix: str = "dlt") -> list[Umbra]:
    """Fresh umbrae with moments 1, 0, 1, 0, 0, ... (only orders 0 and 2 live)."""
    return [
        Umbra(lambda k, prev: 1 if k == 2 else 0, name=f"{prefix}{i + 1}", kind="delta", max_power=2)
        for i in range(count)
    ]


def unities(count: int = 1, prefix: str = "u") -> list[Umbra]:
    """Fresh umbrae with every moment equal to 1."""
    return [Umbra(lambda k, prev: 1, name=f"{prefix}{i + 1}", kind="unity") for i in range(count)]


def gaussian(
    mean: Scalar = 0,
    std: Scalar | None = None,
    *,
    variance: Scalar | None = None,
    name: str | None = None,
) -> Umbra:
    """Umbra carrying the raw moments of a normal distribution.

    Pass ``variance`` directly to stay exact when the standard deviation is
    irrational but the variance is rational.
    """
    if variance is None:
        variance = 0 if std is None else std * std

    def mom(k: int, prev: list) -> Scalar:
        if k == 1:
            return mean
        return mean * prev[k - 1] + (k - 1) * variance * prev[k - 2]

    return Umbra(mom, name=name or "g", kind="gaussian")


def falling(n: int, name: str | None = None) -> Umbra:
    """Umbra whose k-th moment is the falling factorial ``n (n-1) ... (n-k+1)``,
    hard zero beyond ``n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return Umbra(
        lambda k, prev: falling_factorial(n, k),
        name=name or f"fall{n}",
        kind="falling",
        max_power=n,
    )


def custom_umbra(
    moments: Sequence[Scalar] | Callable[[int], Scalar],
    *,
    name: str | None = None,
    max_power: int | None = None,
) -> Umbra:
    """Umbra from an explicit moment sequence or a plain ``k -> a_k`` callable.

    A finite sequence is zero beyond its last entry.
    """
    if callable(moments):
        fn = moments
        return Umbra(lambda k, prev: fn(k), name=name, kind="custom", max_power=max_power)
    seq = list(moments)
    if not seq or seq[0] != 1:
        raise ValueError("moment sequence must start with a_0 = 1")
    bound = len(seq) - 1 if max_power is None else max_power
    return Umbra(lambda k, prev: seq[k], name=name, kind="custom", max_power=bound)


def _merge_powers(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    out = []
    ia = ib = 0
    la, lb = len(a), len(b)
    while ia < la and ib < lb:
        ka, ea = a[ia]
        kb, eb = b[ib]
        if ka == kb:
            out.append((ka, ea + eb))
            ia += 1
            ib += 1
        elif ka < kb:
            out.append(a[ia])
            ia += 1
        else:
            out.append(b[ib])
            ib += 1
    out.extend(a[ia:])
    out.extend(b[ib:])
    return tuple(out)


class UmbralPolynomial:
    """Canonical sparse linear combination of monomials in umbrae and
    indeterminates.

    Terms map ``(umbra_powers, indet_powers)`` — both id-sorted tuples of
    ``(ident, exponent)`` with no zero exponents — to nonzero coefficients.
    Equality of polynomials is equality of these maps.  Instances are treated
    as immutable values.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: dict) -> None:
        self._terms = terms

    # -- construction -----------------------------------------------------

    @staticmethod
    def zero() -> "UmbralPolynomial":
        return UmbralPolynomial({})

    @staticmethod
    def one() -> "UmbralPolynomial":
        return UmbralPolynomial({((), ()): 1})

    @staticmethod
    def constant(c: Scalar) -> "UmbralPolynomial":
        if c == 0:
            return UmbralPolynomial({})
        return UmbralPolynomial({((), ()): c})

    @staticmethod
    def coerce(x) -> "UmbralPolynomial":
        if isinstance(x, UmbralPolynomial):
            return x
        if isinstance(x, Umbra):
            return UmbralPolynomial({(((x.ident, 1),), ()): 1})
        if isinstance(x, Indeterminate):
            return UmbralPolynomial({((), ((x.ident, 1),)): 1})
        if isinstance(x, (int, Fraction)):
            return UmbralPolynomial.constant(x)
        if isinstance(x, numbers.Real):
            return UmbralPolynomial.constant(float(x))
        raise TypeError(f"cannot interpret {x!r} as a polynomial")

    # -- inspection --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def umbra_free(self) -> bool:
        return all(not ub for ub, _ in self._terms)

    def terms(self):
        """Read-only view of the canonical term map."""
        return self._terms.items()

    def as_scalar(self) -> Scalar:
        if not self._terms:
            return 0
        if len(self._terms) == 1:
            ((ub, ind), c), = ((k, v) for k, v in self._terms.items())
            if not ub and not ind:
                return c
        raise ValueError("polynomial is not a constant")

    def indet_degree(self, idents: set[int] | None = None) -> int:
        """Max total degree over the given indeterminate ids (all if None)."""
        best = 0
        for _, ind in self._terms:
            deg = sum(e for vid, e in ind if idents is None or vid in idents)
            best = max(best, deg)
        return best

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = UmbralPolynomial.coerce(other)
        if not self._terms:
            return other
        if not other._terms:
            return self
        merged = dict(self._terms)
        for key, c in other._terms.items():
            prev = merged.get(key)
            if prev is None:
                merged[key] = c
            else:
                s = prev + c
                if s == 0:
                    del merged[key]
                else:
                    merged[key] = s
        return UmbralPolynomial(merged)

    __radd__ = __add__

    def __neg__(self):
        return UmbralPolynomial({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-UmbralPolynomial.coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "UmbralPolynomial":
        if c == 0:
            return UmbralPolynomial.zero()
        if c == 1:
            return self
        return UmbralPolynomial({k: v * c for k, v in self._terms.items()})

    def mul(self, other, prune: bool = True) -> "UmbralPolynomial":
        """Product over the commutative ring.

        With ``prune`` set, any monomial in which some umbra exceeds its
        largest possibly-nonzero moment order is dropped immediately; such
        monomials evaluate to zero in every context since exponents never
        decrease.
        """
        other = UmbralPolynomial.coerce(other)
        if not self._terms or not other._terms:
            return UmbralPolynomial.zero()
        caps: dict[int, int | None] = {}

        def alive(powers: tuple) -> bool:
            for uid, e in powers:
                cap = caps.get(uid, _MISSING)
                if cap is _MISSING:
                    cap = _UMBRAE[uid].max_power
                    caps[uid] = cap
                if cap is not None and e > cap:
                    return False
            return True

        out: dict = {}
        for (ua, ia), ca in self._terms.items():
            for (ub, ib), cb in other._terms.items():
                u = _merge_powers(ua, ub)
                if prune and not alive(u):
                    continue
                key = (u, _merge_powers(ia, ib))
                c = ca * cb
                prev = out.get(key)
                if prev is None:
                    out[key] = c
                else:
                    s = prev + c
                    if s == 0:
                        del out[key]
                    else:
                        out[key] = s
        return UmbralPolynomial(out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, float)):
            return self.scale(other)
        return self.mul(other)

    __rmul__ = __mul__

    def pow(self, k: int, prune: bool = True) -> "UmbralPolynomial":
        if k < 0:
            raise ValueError("exponent must be nonnegative")
        if k == 0:
            return UmbralPolynomial.one()
        result = self
        for _ in range(k - 1):
            result = result.mul(self, prune=prune)
        return result

    def __pow__(self, k: int):
        return self.pow(k)

    # -- substitution and evaluation ----------------------------------------

    def substitute(self, indet: Indeterminate, replacement) -> "UmbralPolynomial":
        """Ring-homomorphic substitution of ``replacement`` for ``indet``.

        The replacement may be a scalar, another indeterminate, an umbra, or
        a polynomial; umbra powers introduced this way accumulate under later
        multiplication like any other.  Internal products are unpruned so the
        operation is an exact homomorphism on formal polynomials.
        """
        repl = UmbralPolynomial.coerce(replacement)
        target = indet.ident
        out = UmbralPolynomial.zero()
        for (ub, ind), c in self._terms.items():
            exp = 0
            rest = []
            for vid, ve in ind:
                if vid == target:
                    exp = ve
                else:
                    rest.append((vid, ve))
            base = UmbralPolynomial({(ub, tuple(rest)): c})
            out = out + (base.mul(repl.pow(exp, prune=False), prune=False) if exp else base)
        return out

    def evaluate(self) -> "UmbralPolynomial":
        return evaluate(self)

    # -- equality and display ------------------------------------------------

    def __eq__(self, other) -> bool:
        try:
            other = UmbralPolynomial.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        bits = []
        for key in sorted(self._terms):
            ub, ind = key
            c = self._terms[key]
            factors = [
                f"{_UMBRAE[uid].name}^{e}" if e > 1 else _UMBRAE[uid].name for uid, e in ub
            ]
            factors += [
                f"{_INDETS[vid].name}^{e}" if e > 1 else _INDETS[vid].name for vid, e in ind
            ]
            if not factors:
                bits.append(str(c))
            elif c == 1:
                bits.append("*".join(factors))
            elif c == -1:
                bits.append("-" + "*".join(factors))
            else:
                bits.append("*".join([str(c)] + factors))
        return " + ".join(bits).replace("+ -", "- ")

    __repr__ = __str__


def evaluate(x) -> UmbralPolynomial:
    """Apply the evaluation functional: umbra powers become moments, distinct
    umbrae factor, indeterminates pass through.  The result carries no umbrae.

    Monomials containing an umbra power with zero moment (odd or over-range
    powers of the 1,0,1,0,... kind, repeated singleton factors, ...) are
    skipped without computing the rest of the factorization.
    """
    p = UmbralPolynomial.coerce(x)
    out: dict = {}
    for (ub, ind), c in p._terms.items():
        value = c
        dead = False
        for uid, e in ub:
            mom = _UMBRAE[uid].moment(e)
            if mom == 0:
                dead = True
                break
            if mom != 1:
                value = value * mom
        if dead:
            continue
        key = ((), ind)
        prev = out.get(key)
        if prev is None:
            out[key] = value
        else:
            s = prev + value
            if s == 0:
                del out[key]
            else:
                out[key] = s
    return UmbralPolynomial(out)


def evaluate_scalar(x) -> Scalar:
    """Evaluate and demand a constant result."""
    return evaluate(x).as_scalar()


def _divide_exact(value, divisor: int):
    if isinstance(value, (int, Fraction)):
        return Fraction(value, divisor) if divisor != 1 else value
    return value / divisor


def gf_coefficients(source, order: int) -> list:
    """Truncated exponential generating sequence ``[m_0/0!, ..., m_K/K!]`` of
    an umbra or polynomial, where ``m_k`` is the evaluation of the k-th power.

    Purely formal: no convergence is implied.  Entries are scalars when the
    source has no indeterminates, otherwise umbra-free polynomials.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    p = UmbralPolynomial.coerce(source)
    out: list = []
    power = UmbralPolynomial.one()
    for k in range(order + 1):
        if k:
            power = power.mul(p)
        val = evaluate(power)
        fact = math.factorial(k)
        try:
            out.append(_divide_exact(val.as_scalar(), fact))
        except ValueError:
            out.append(val.scale(Fraction(1, fact)))
    return out


def similar(a, b, order: int) -> bool:
    """Moment-wise similarity up to the given truncation order: the k-th
    powers of both sides evaluate identically for every ``k <= order``."""
    if order < 1:
        raise ValueError("order must be at least 1")
    pa = UmbralPolynomial.coerce(a)
    pb = UmbralPolynomial.coerce(b)
    power_a = UmbralPolynomial.one()
    power_b = UmbralPolynomial.one()
    for _ in range(order):
        power_a = power_a.mul(pa)
        power_b = power_b.mul(pb)
        if evaluate(power_a) != evaluate(power_b):
            return False
    return True
