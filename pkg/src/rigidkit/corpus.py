"""Seeded random inputs for the verification suites.

Decorated complexes are produced as filtered conjugations of staircase
differentials, so d^2 = 0, the parity shift and the strict filter decrease
hold by construction; genericity is verified exactly and regenerated on
the rare failures.  Path corpora are plain Gaussian symmetric generators.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from . import linalg
from .complexes import (
    ChainElement,
    ComplexError,
    DecoratedComplex,
    HomologyClass,
    filter_value,
    in_general_position,
    is_generic,
    spectral_basis,
)
from .novikov import F2, QMODEL, NovikovScalar, PeriodGroup
from .spindex import MatrixPath


def _random_scalar(rng: random.Random, field, gamma: PeriodGroup, spread=3):
    theta = gamma.generator * rng.randrange(-spread, spread + 1)
    if field == F2:
        coeff = 1
    else:
        coeff = Fraction(rng.randrange(1, 6), rng.randrange(1, 4))
        if rng.random() < 0.5:
            coeff = -coeff
    sc = NovikovScalar.monomial(field, coeff, theta)
    if rng.random() < 0.3:
        theta2 = theta - gamma.generator * rng.randrange(1, spread + 1)
        sc = sc + NovikovScalar.monomial(field, 1, theta2)
    return sc


def random_decorated_complex(rng: random.Random, field=QMODEL, dim=None,
                             gamma_denominator=None, max_dim=8, conjugate=True):
    """Generic decorated complex with a staircase differential.

    Filters are rationals with large prime denominators, so genericity
    (no filter difference in the period group) holds with overwhelming
    probability and is then checked exactly.
    """
    n = dim if dim is not None else rng.randrange(2, max_dim + 1)
    d = gamma_denominator if gamma_denominator is not None else rng.randrange(1, 13)
    gamma = PeriodGroup(Fraction(1, d))
    for _ in range(64):
        filters = [Fraction(rng.randrange(-40, 40), 97)
                   + Fraction(rng.randrange(0, 11), 101 * d)
                   for _ in range(n)]
        parities = [rng.randrange(2) for _ in range(n)]
        order = list(range(n))
        rng.shuffle(order)
        cols = [dict() for _ in range(n)]
        used = set()
        for _ in range(rng.randrange(0, n // 2 + 1)):
            cand = [i for i in order if i not in used]
            if len(cand) < 2:
                break
            i = cand[0]
            j = next((j for j in cand[1:] if parities[j] != parities[i]), None)
            if j is None:
                j = cand[1]
                parities[j] = 1 - parities[i]
            used.update((i, j))
            gap = filters[i] - filters[j]
            g = Fraction(1, d)
            k = (gap / g).__floor__() - rng.randrange(1, 4)
            coeff = 1 if field == F2 else Fraction(rng.randrange(1, 5))
            cols[i][j] = NovikovScalar.monomial(field, coeff, g * k)
        try:
            v = DecoratedComplex(field, gamma, [f"x{t}" for t in range(n)],
                                 parities, filters, cols)
        except ComplexError:
            continue
        if conjugate:
            v = _conjugate_filtered(rng, v)
            if v is None:
                continue
        if is_generic(v):
            return v
    raise RuntimeError("failed to generate a generic complex")


def _conjugate_filtered(rng, v: DecoratedComplex):
    """Conjugate the differential by I + N with N strictly filter-decreasing,
    parity-preserving and sparse; exactness and the filter condition survive."""
    n = v.dim
    field = v.field
    zero = NovikovScalar.zero(field)
    nmat = [[zero] * n for _ in range(n)]
    entries = rng.randrange(0, max(1, n // 2))
    for _ in range(entries):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j or v.parities[i] != v.parities[j]:
            continue
        gap = v.filters[j] - v.filters[i]
        g = v.gamma.generator
        k = (gap / g).__floor__() - rng.randrange(1, 3)
        coeff = 1 if field == F2 else Fraction(rng.randrange(1, 4))
        nmat[i][j] = NovikovScalar.monomial(field, coeff, g * k)
    t = [[nmat[i][j] if i != j else nmat[i][j] + NovikovScalar.one(field)
          for j in range(n)] for i in range(n)]
    tinv = linalg.inverse(t)
    if tinv is None:
        return None
    d = v.diff_matrix()
    new_d = linalg.mat_mul(linalg.mat_mul(t, d), tinv)
    cols = [{i: new_d[i][j] for i in range(n) if not new_d[i][j].is_zero()}
            for j in range(n)]
    try:
        return DecoratedComplex(field, v.gamma, v.labels, v.parities,
                                v.filters, cols)
    except ComplexError:
        return None


def random_general_position_pair(rng, field=QMODEL, max_dim=8, max_denom=12):
    """Two generic complexes whose tensor product is also generic."""
    for _ in range(64):
        d1 = rng.randrange(1, max_denom + 1)
        d2 = rng.randrange(1, max_denom + 1)
        n1 = rng.randrange(2, max_dim + 1)
        n2 = rng.randrange(2, max_dim + 1)
        v1 = random_decorated_complex(rng, field, n1, d1)
        v2 = random_decorated_complex(rng, field, n2, d2)
        if in_general_position(v1, v2):
            return v1, v2
    raise RuntimeError("failed to generate a general-position pair")


def random_homology_class(rng, v: DecoratedComplex, sb=None):
    """Nonzero class with sparse random coefficients, or None if acyclic."""
    sb = sb or spectral_basis(v)
    if sb.p == 0:
        return None, sb
    coeffs = [NovikovScalar.zero(v.field) for _ in range(sb.p)]
    support = rng.sample(range(sb.p), rng.randrange(1, sb.p + 1))
    for i in support:
        coeffs[i] = _random_scalar(rng, v.field, v.gamma)
    if all(c.is_zero() for c in coeffs):
        coeffs[support[0]] = NovikovScalar.one(v.field)
    return HomologyClass(tuple(coeffs)), sb


def random_cycle_representative(rng, v, sb, a):
    """A cycle representing the class: canonical form plus a boundary."""
    from .complexes import canonical_representative
    rep = canonical_representative(v, sb, a)
    for g in sb.g_part:
        if rng.random() < 0.5:
            rep = rep + g.scale(_random_scalar(rng, v.field, v.gamma))
    return rep


def random_symmetric(rng: np.random.Generator, k, scale=1.2):
    a = rng.normal(size=(2 * k, 2 * k)) * scale
    return 0.5 * (a + a.T)


def random_matrix_path(rng: np.random.Generator, k, segments=2, scale=1.2) -> MatrixPath:
    return MatrixPath(k, [(random_symmetric(rng, k, scale),
                           float(rng.uniform(0.5, 1.5)))
                          for _ in range(segments)])


def random_symplectic(rng: np.random.Generator, k, scale=1.0):
    return MatrixPath(k, [(random_symmetric(rng, k, scale), 1.0)]).end()
