"""Noncentral Wishart parameters, squared-trace cumulants, and the two routes
to the expected elementary symmetric functions of the latent roots.

The symbolic route builds the cumulant sequence of the weighted squared trace
``tr[(D_y X D_x)(D_y X D_x)^T]``, assembles its moments through complete Bell
polynomials, plugs 1,0,1,0,... umbrae into the weights, and lets the
evaluation functional delete every monomial that does not contribute to an
elementary symmetric function.  The closed-form route sums falling-factorial
weighted principal minors.  The two agree exactly in rational regimes and to
float precision where an SVD is unavoidable.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import linalg
from .combinatorics import (
    complete_bell,
    elementary_symmetric,
    elementary_symmetric_from_power_sums,
    falling_factorial,
)
from .matrix import UmbralMatrix
from .umbra import (
    Indeterminate,
    UmbralPolynomial,
    deltas,
    evaluate,
    indeterminates,
    singletons,
)

__all__ = [
    "WishartParams",
    "central_cumulant",
    "mean_cumulant",
    "trace_cumulant",
    "trace_moment",
    "expected_esf_umbral",
    "expected_esf_closed_form",
    "closed_form_general",
    "noncentral_chisq_cumulant",
    "singleton_cross_term_identity",
]

SYMMETRY_TOL = 1e-12


class WishartParams:
    """Degrees of freedom, dimension, row covariance and mean of ``W = X X^T``.

    ``sigma`` must be symmetric positive definite with ``n >= p``; ``m`` is a
    ``p x n`` mean matrix or ``None`` for the central case.  Entries decide
    the arithmetic mode: all int/Fraction means exact rational, any float
    means floating point.  ``symbolic()`` builds a validation-free variant
    whose diagonal covariance entries and mean entries are indeterminates,
    for inspecting cumulants as printable polynomials.
    """

    def __init__(self, n: int, p: int, sigma, m=None, *, validate: bool = True) -> None:
        self.n = int(n)
        self.p = int(p)
        self.sigma = linalg.freeze(sigma)
        self.m = linalg.freeze(m) if m is not None else None
        self.symbolic_mode = any(
            isinstance(x, UmbralPolynomial) for row in self.sigma for x in row
        )
        if validate and not self.symbolic_mode:
            self._validate()

    @classmethod
    def symbolic(cls, n: int, p: int) -> "WishartParams":
        theta = indeterminates("th", p)
        sigma = [
            [theta[r]._lift() if r == c else UmbralPolynomial.zero() for c in range(p)]
            for r in range(p)
        ]
        m = [
            [Indeterminate(f"m{r + 1}{c + 1}")._lift() for c in range(n)] for r in range(p)
        ]
        params = cls(n, p, sigma, m, validate=False)
        params._theta_syms = theta
        return params

    def _validate(self) -> None:
        if self.p < 1 or self.n < self.p:
            raise ValueError("need n >= p >= 1")
        if linalg.shape(self.sigma) != (self.p, self.p):
            raise ValueError("covariance must be p x p")
        tol = 0.0 if self.mode == "rational" else SYMMETRY_TOL
        if not linalg.is_symmetric(self.sigma, tol):
            raise ValueError("covariance must be symmetric")
        if any(minor <= 0 for minor in linalg.leading_principal_minors(self.sigma)):
            raise ValueError("covariance must be positive definite")
        if self.m is not None and linalg.shape(self.m) != (self.p, self.n):
            raise ValueError("mean must be p x n")

    # -- structure ------------------------------------------------------------

    @cached_property
    def mode(self) -> str:
        if self.symbolic_mode:
            return "symbolic"
        entries = [x for row in self.sigma for x in row]
        if self.m is not None:
            entries += [x for row in self.m for x in row]
        return "rational" if all(isinstance(x, (int, Fraction)) for x in entries) else "float"

    @property
    def mean_is_zero(self) -> bool:
        return self.m is None or all(x == 0 for row in self.m for x in row)

    @property
    def sigma_is_diagonal(self) -> bool:
        return linalg.is_diagonal(self.sigma)

    @property
    def sigma_scalar(self):
        """sigma^2 if the covariance is a scalar multiple of the identity."""
        return linalg.scalar_identity_value(self.sigma)

    @property
    def mean_is_rect_diagonal(self) -> bool:
        if self.m is None:
            return False
        return all(
            self.m[r][c] == 0 for r in range(self.p) for c in range(self.n) if r != c
        )

    @cached_property
    def y_vars(self) -> list[Indeterminate]:
        return indeterminates("y", self.p)

    @cached_property
    def x_vars(self) -> list[Indeterminate]:
        return indeterminates("x", self.n)

    @cached_property
    def theta_syms(self) -> list[Indeterminate]:
        if hasattr(self, "_theta_syms"):
            return self._theta_syms
        return indeterminates("th", self.p)

    def resolve_theta(self) -> tuple[list, bool]:
        """Latent-root weights for the central cumulant: exact numbers when
        the covariance is diagonal or splits rationally, floats otherwise for
        float inputs, and symbolic indeterminates as the exact fallback.

        Returns ``(values, symbolic_flag)``.
        """
        if self.symbolic_mode:
            return [s._lift() for s in self.theta_syms], False
        if self.sigma_is_diagonal:
            return [self.sigma[i][i] for i in range(self.p)], False
        if self.mode == "rational":
            eigs = linalg.rational_eigenvalues(self.sigma)
            if eigs is not None:
                return list(eigs), False
            return [s._lift() for s in self.theta_syms], True
        import numpy as np

        w = np.linalg.eigvalsh(np.array(linalg.to_float(self.sigma), dtype=float))
        return [float(x) for x in w], False

    def omega(self) -> tuple:
        """Noncentrality matrix ``sigma^{-1} M M^T``."""
        if self.m is None:
            raise ValueError("central model has no noncentrality matrix")
        mmt = linalg.mat_mul(self.m, linalg.transpose(self.m))
        return linalg.mat_mul(linalg.inverse(self.sigma), mmt)

    def __repr__(self) -> str:
        return f"WishartParams(n={self.n}, p={self.p}, mode={self.mode})"


# -- cumulants of the weighted squared trace ---------------------------------


def _lift_all(values: Sequence) -> list[UmbralPolynomial]:
    return [UmbralPolynomial.coerce(v) for v in values]


def _power(value, k: int, prune: bool):
    if isinstance(value, UmbralPolynomial):
        return value.pow(k, prune=prune)
    return value**k


def _central_terms(k: int, yv: Sequence, xv: Sequence, theta: Sequence, prune: bool = True) -> UmbralPolynomial:
    # (k-1)! 2^(k-1) * (sum_j x_j^(2k)) * (sum_l y_l^(2k) theta_l^k)
    xs = UmbralPolynomial.zero()
    for x in xv:
        xs = xs + _power(x, 2 * k, prune)
    ys = UmbralPolynomial.zero()
    for y, th in zip(yv, theta):
        ys = ys + _power(y, 2 * k, prune) * _power(th, k, prune)
    factor = math.factorial(k - 1) * 2 ** (k - 1)
    return xs.mul(ys, prune=prune).scale(factor)


def _mean_terms(
    k: int,
    yv: Sequence,
    xv: Sequence,
    m: Sequence[Sequence] | None,
    sigma: Sequence[Sequence],
    prune: bool = True,
) -> UmbralPolynomial:
    if m is None or all(
        not isinstance(x, UmbralPolynomial) and x == 0 for row in m for x in row
    ):
        return UmbralPolynomial.zero()
    p, n = len(m), len(m[0])
    if k == 1:
        total = UmbralPolynomial.zero()
        for l in range(p):
            for j in range(n):
                mlj = m[l][j]
                if not isinstance(mlj, UmbralPolynomial) and mlj == 0:
                    continue
                term = _power(yv[l], 2, prune).mul(_power(xv[j], 2, prune), prune=prune)
                term = term.mul(_power(mlj, 2, prune), prune=prune)
                total = total + term
        return total
    # k > 1: block-diagonal structure of the Kronecker factor reduces the
    # quadratic form to one p x p polynomial matrix power per column.
    st_entries = []
    for a in range(p):
        row = []
        for b in range(p):
            sab = sigma[a][b]
            if not isinstance(sab, UmbralPolynomial) and sab == 0:
                row.append(UmbralPolynomial.zero())
            else:
                row.append(
                    UmbralPolynomial.coerce(yv[a]).mul(
                        UmbralPolynomial.coerce(yv[b]), prune=prune
                    )
                    * sab
                )
        st_entries.append(row)
    st = UmbralMatrix.from_rows(st_entries)
    st_k = st.matpow(k - 1, prune=prune)
    total = UmbralPolynomial.zero()
    for j in range(n):
        col = []
        for l in range(p):
            mlj = m[l][j]
            if not isinstance(mlj, UmbralPolynomial) and mlj == 0:
                col.append(UmbralPolynomial.zero())
            else:
                col.append(
                    UmbralPolynomial.coerce(yv[l]).mul(
                        UmbralPolynomial.coerce(xv[j]), prune=prune
                    )
                    * mlj
                )
        quad = UmbralPolynomial.zero()
        for a in range(p):
            if col[a].is_zero:
                continue
            for b in range(p):
                if col[b].is_zero:
                    continue
                quad = quad + col[a].mul(st_k.get(a, b), prune=prune).mul(col[b], prune=prune)
        if quad.is_zero:
            continue
        total = total + _power(xv[j], 2 * (k - 1), prune).mul(quad, prune=prune)
    factor = math.factorial(k) * 2 ** (k - 1)
    return total.scale(factor)


def central_cumulant(params: WishartParams, k: int) -> UmbralPolynomial:
    """k-th cumulant of the weighted squared trace for the central part: a
    polynomial in the weight indeterminates ``y``, ``x`` with latent-root
    coefficients."""
    if k < 1:
        raise ValueError("cumulant order must be positive")
    theta, symbolic = params.resolve_theta()
    yv = _lift_all(params.y_vars)
    xv = _lift_all(params.x_vars)
    return _central_terms(k, yv, xv, theta)


def mean_cumulant(params: WishartParams, k: int) -> UmbralPolynomial:
    """Mean contribution to the k-th cumulant; identically zero when the mean
    matrix vanishes."""
    if k < 1:
        raise ValueError("cumulant order must be positive")
    yv = _lift_all(params.y_vars)
    xv = _lift_all(params.x_vars)
    return _mean_terms(k, yv, xv, params.m, params.sigma)


def trace_cumulant(params: WishartParams, k: int) -> UmbralPolynomial:
    return central_cumulant(params, k) + mean_cumulant(params, k)


def trace_moment(params: WishartParams, i: int) -> UmbralPolynomial:
    """i-th raw moment of the weighted squared trace: the complete Bell
    polynomial in the first ``i`` cumulants, computed over the polynomial
    ring."""
    if i < 1:
        raise ValueError("moment order must be positive")
    cumulants = [trace_cumulant(params, k) for k in range(1, i + 1)]
    return complete_bell(cumulants)


# -- the symbolic route to expected elementary symmetric functions -----------


def _delta_core(
    n: int,
    p: int,
    theta: Sequence,
    m: Sequence[Sequence] | None,
    sigma: Sequence[Sequence],
    i: int,
):
    """Evaluation of the Bell combination with fresh 1,0,1,0,... umbrae plugged
    into both weight families, divided by i!.  Returns a scalar, or a
    polynomial in whatever symbolic latent-root weights were passed in."""
    dp = deltas(p, prefix="dy")
    dn = deltas(n, prefix="dx")
    yv = _lift_all(dp)
    xv = _lift_all(dn)
    cumulants = [
        _central_terms(k, yv, xv, theta) + _mean_terms(k, yv, xv, m, sigma)
        for k in range(1, i + 1)
    ]
    value = evaluate(complete_bell(cumulants))
    return value


def _div_factorial(value, i: int):
    fact = math.factorial(i)
    if isinstance(value, (int, Fraction)):
        return Fraction(value, fact)
    return value / fact


def _extract_esf_multiple(value: UmbralPolynomial, theta_ids: list[int], p: int, i: int):
    """Verify that an evaluated kernel result is a constant multiple of the
    i-th elementary symmetric polynomial in the given symbols and return that
    constant.  Anything else is a kernel defect and raises."""
    expected_subsets = {
        tuple(sorted(c)) for c in itertools.combinations(theta_ids, i)
    }
    seen: dict[tuple, object] = {}
    for (ub, ind), c in value.terms():
        if ub:
            raise ArithmeticError("kernel result still contains formal variables")
        ids = tuple(sorted(vid for vid, e in ind))
        if len(ids) != i or any(e != 1 for _, e in ind) or not set(ids) <= set(theta_ids):
            raise ArithmeticError("kernel result is not an elementary symmetric multiple")
        seen[ids] = c
    if set(seen) != expected_subsets:
        raise ArithmeticError("kernel result misses elementary symmetric monomials")
    coeffs = set(seen.values())
    if len(coeffs) != 1:
        raise ArithmeticError("kernel result has uneven coefficients")
    return coeffs.pop()


def _umbral_central(params: WishartParams, i: int):
    theta, symbolic = params.resolve_theta()
    value = _delta_core(params.n, params.p, theta, None, params.sigma, i)
    if symbolic:
        ids = [s.ident for s in params.theta_syms]
        coeff = _extract_esf_multiple(value, ids, params.p, i)
        sums = linalg.power_sums(params.sigma, i)
        esf_value = elementary_symmetric_from_power_sums(sums, i)
        return _div_factorial(coeff * esf_value, i)
    return _div_factorial(value.as_scalar(), i)


def _scaled_identity_core(n: int, p: int, s2, mvals: Sequence, i: int):
    sigma = tuple(tuple(s2 if r == c else 0 for c in range(p)) for r in range(p))
    m = tuple(
        tuple(mvals[r] if (r == c and r < len(mvals)) else 0 for c in range(n))
        for r in range(p)
    )
    value = _delta_core(n, p, [s2] * p, m, sigma, i)
    return _div_factorial(value.as_scalar(), i)


def _umbral_scaled_identity(params: WishartParams, i: int, s2):
    if params.mean_is_rect_diagonal:
        mvals = [params.m[l][l] for l in range(params.p)]
        return _scaled_identity_core(params.n, params.p, s2, mvals, i)
    mvals = linalg.singular_values(params.m)
    return _scaled_identity_core(params.n, params.p, float(s2), mvals, i)


def _umbral_determinant_route(n: int, sigma, m, i: int):
    """Full-order case: rotate to identity covariance, weight by det(sigma)."""
    root_inv = linalg.sym_inv_sqrt(sigma)
    rotated = linalg.mat_mul(root_inv, linalg.to_float(m))
    mvals = linalg.singular_values(rotated)
    core = _scaled_identity_core(n, i, 1.0, mvals, i)
    return float(linalg.det(sigma)) * core


def _umbral_minor_sum(params: WishartParams, i: int):
    total = 0.0
    for subset in itertools.combinations(range(params.p), i):
        sub_sigma = linalg.submatrix(params.sigma, subset, subset)
        sub_m = tuple(params.m[r] for r in subset)
        total += _umbral_determinant_route(params.n, sub_sigma, sub_m, i)
    return total


def expected_esf_umbral(params: WishartParams, i: int):
    """Expected i-th elementary symmetric function of the latent roots of
    ``W = X X^T``, via the symbolic kernel.

    Exact (``Fraction``) whenever the inputs are rational and no singular
    value decomposition is needed: central models with any rational
    covariance, and scalar-identity covariance with a rectangular-diagonal
    mean.  Other regimes rotate through float SVDs.
    """
    if params.symbolic_mode:
        raise ValueError("symbolic parameter sets cannot be evaluated numerically")
    if i < 0:
        raise ValueError("order must be nonnegative")
    rational = params.mode == "rational"
    if i == 0:
        return Fraction(1) if rational else 1.0
    if i > params.p:
        return Fraction(0) if rational else 0.0
    if params.mean_is_zero:
        return _umbral_central(params, i)
    s2 = params.sigma_scalar
    if s2 is not None:
        return _umbral_scaled_identity(params, i, s2)
    if i == params.p:
        return _umbral_determinant_route(params.n, params.sigma, params.m, i)
    return _umbral_minor_sum(params, i)


# -- closed forms -------------------------------------------------------------


def closed_form_general(params: WishartParams, i: int):
    """Principal-submatrix closed form, valid for any admissible parameters.

    The inner elementary symmetric order is bound to the outer
    falling-factorial index; the pairing is pinned down by the exact
    pairing-expansion oracle in the test suite.
    """
    n, p = params.n, params.p
    total = falling_factorial(n, i) * linalg.principal_minor_sum(params.sigma, i)
    if params.mean_is_zero:
        return total
    mmt = linalg.mat_mul(params.m, linalg.transpose(params.m))
    for k in range(1, i + 1):
        weight = falling_factorial(n - k, i - k)
        if weight == 0:
            continue
        inner = 0
        for subset in itertools.combinations(range(p), i):
            sub_sigma = linalg.submatrix(params.sigma, subset, subset)
            sub_mmt = linalg.submatrix(mmt, subset, subset)
            ratio = linalg.mat_mul(linalg.inverse(sub_sigma), sub_mmt)
            inner = inner + linalg.det(sub_sigma) * linalg.principal_minor_sum(ratio, k)
        total = total + weight * inner
    return total


def expected_esf_closed_form(params: WishartParams, i: int):
    """Expected i-th elementary symmetric function of the latent roots via
    closed forms: dedicated formulas for zero mean, scalar-identity
    covariance, and full order, with the general principal-submatrix sum
    otherwise.  Exact in rational mode."""
    if params.symbolic_mode:
        raise ValueError("symbolic parameter sets cannot be evaluated numerically")
    if i < 0:
        raise ValueError("order must be nonnegative")
    rational = params.mode == "rational"
    if i == 0:
        return Fraction(1) if rational else 1.0
    if i > params.p:
        return Fraction(0) if rational else 0.0
    n, p = params.n, params.p
    if params.mean_is_zero:
        return falling_factorial(n, i) * linalg.principal_minor_sum(params.sigma, i)
    s2 = params.sigma_scalar
    if s2 is not None:
        mmt = linalg.mat_mul(params.m, linalg.transpose(params.m))
        total = 0
        for j in range(i + 1):
            term = (
                falling_factorial(n - j, i - j)
                * math.comb(p - j, i - j)
                * s2 ** (i - j)
                * linalg.principal_minor_sum(mmt, j)
            )
            total = total + term
        return total
    if i == p:
        omega = params.omega()
        total = 0
        for j in range(p + 1):
            total = total + falling_factorial(n - j, p - j) * linalg.principal_minor_sum(omega, j)
        return linalg.det(params.sigma) * total
    return closed_form_general(params, i)


# -- scalar quadratic form cumulants ------------------------------------------


def noncentral_chisq_cumulant(sigma, m: Sequence, k: int):
    """k-th cumulant of ``|X|^2`` for ``X ~ N(m, sigma)``:
    ``(k-1)! 2^{k-1} [tr(sigma^k) + k m^T sigma^{k-1} m]``."""
    if k < 1:
        raise ValueError("cumulant order must be positive")
    sigma = linalg.freeze(sigma)
    power_k = linalg.mat_pow(sigma, k)
    power_km1 = linalg.mat_pow(sigma, k - 1)
    quad = linalg.quadratic_form(m, power_km1, m)
    return math.factorial(k - 1) * 2 ** (k - 1) * (linalg.trace(power_k) + k * quad)


# -- the cross-term identity behind the scalar-covariance expansion ----------


def singleton_cross_term_identity(p: int, n: int, i: int, j: int, m: Sequence):
    """Kernel evaluation of the double singleton cross-term sum against its
    counting formula ``C(n-j, i-j) C(p-j, i-j) e_j(m^2)``.

    Returns the pair ``(kernel value, counting value)``; the two must agree.
    """
    if not (0 <= j <= i <= min(p, n)):
        raise ValueError("need 0 <= j <= i <= min(p, n)")
    if len(m) != p:
        raise ValueError("m must have length p")
    chi = singletons(p, prefix="cy")
    chit = singletons(n, prefix="cx")
    total = UmbralPolynomial.zero()
    for fixed in itertools.combinations(range(p), j):
        anchor = UmbralPolynomial.one()
        skip = False
        for kk in fixed:
            weight = m[kk] * m[kk]
            if weight == 0:
                skip = True
                break
            anchor = anchor.mul(chi[kk]._lift()).mul(chit[kk]._lift()).scale(weight)
        if skip:
            continue
        rest_rows = [t for t in range(p) if t not in fixed]
        rest_cols = [s for s in range(n) if s not in fixed]
        sum_rows = UmbralPolynomial.zero()
        for combo in itertools.combinations(rest_rows, i - j):
            term = UmbralPolynomial.one()
            for t in combo:
                term = term.mul(chi[t]._lift())
            sum_rows = sum_rows + term
        sum_cols = UmbralPolynomial.zero()
        for combo in itertools.combinations(rest_cols, i - j):
            term = UmbralPolynomial.one()
            for s in combo:
                term = term.mul(chit[s]._lift())
            sum_cols = sum_cols + term
        total = total + anchor.mul(sum_rows).mul(sum_cols)
    kernel_value = evaluate(total).as_scalar()
    counting_value = (
        math.comb(n - j, i - j)
        * math.comb(p - j, i - j)
        * elementary_symmetric([v * v for v in m], j)
    )
    return kernel_value, counting_value
