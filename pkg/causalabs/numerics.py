#!/usr/bin/env python3
"""
Dense matrix and information-theoretic primitives.

Stochastic matrices are column-stochastic: entry (r, c) is the probability of
row outcome r given column condition c. Every array handed out by this module
is read-only, so values behave as immutable once constructed.
"""

import numpy as np
from scipy.special import rel_entr

from .errors import (
    DimensionMismatchError,
    EmptyPreimageError,
    InfiniteDivergenceError,
    StochasticityError,
)

TOLERANCE = 1e-9

# Distributions closer than this elementwise are treated as equal by
# jsd_distance; below it the square root only amplifies rounding noise.
EQUALITY_ATOL = 1e-12

JSD_UPPER_BOUND = float(np.sqrt(np.log(2.0)))


def frozen(values, dtype=float):
    """Return a read-only copy of ``values`` as a numpy array."""
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


def stochastic_violations(matrix, name='matrix'):
    """List the ways ``matrix`` fails to be column-stochastic.

    Columns are numbered from 1 in the messages.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] < 1 or matrix.shape[1] < 1:
        return [f'{name} must be a non-empty 2-D matrix, got shape {matrix.shape}']
    violations = []
    if not np.all(np.isfinite(matrix)):
        return [f'{name} has non-finite entries']
    bad = np.argwhere((matrix < -TOLERANCE) | (matrix > 1.0 + TOLERANCE))
    for row, col in bad:
        violations.append(
            f'{name} entry ({row + 1}, {col + 1}) = {matrix[row, col]:.12g} outside [0, 1]')
    sums = matrix.sum(axis=0)
    for col in np.flatnonzero(np.abs(sums - 1.0) > TOLERANCE):
        violations.append(f'{name} column {col + 1} sums to {sums[col]:.12g}, not 1 (column sum ≠ 1)')
    return violations


def as_stochastic_matrix(matrix, name='matrix'):
    """Validate and freeze a column-stochastic matrix.

    Raises:
        StochasticityError: listing every violation
    """
    violations = stochastic_violations(matrix, name)
    if violations:
        raise StochasticityError(violations)
    return frozen(matrix)


def binary_violations(matrix, name='map', surjective=True):
    """List the ways ``matrix`` fails to be a binary (surjective) stochastic map."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.size == 0:
        return [f'{name} must be a non-empty 2-D matrix, got shape {matrix.shape}']
    if not np.all((matrix == 0.0) | (matrix == 1.0)):
        return [f'{name} is not binary']
    violations = []
    for col in np.flatnonzero(matrix.sum(axis=0) != 1.0):
        violations.append(f'{name} column {col + 1} does not contain exactly one 1')
    if surjective and np.any(matrix.sum(axis=1) < 1.0):
        violations.append(f'{name} not surjective')
    return violations


def is_binary_stochastic(matrix, surjective=False):
    return not binary_violations(matrix, surjective=surjective)


def as_distribution(values, name='distribution'):
    """Validate and freeze a probability vector."""
    vector = np.asarray(values, dtype=float)
    if vector.ndim != 1 or vector.size == 0:
        raise StochasticityError(f'{name} must be a non-empty vector, got shape {vector.shape}')
    violations = stochastic_violations(vector.reshape(-1, 1), name)
    if violations:
        raise StochasticityError(violations)
    return frozen(vector)


def _pair(p, q):
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.ndim != 1 or p.shape != q.shape:
        raise DimensionMismatchError(
            f'distributions must be vectors of equal length, got {p.shape} and {q.shape}')
    return p, q


def kl_divergence(p, q):
    """Kullback-Leibler divergence sum(p * ln(p / q)) in nats.

    Terms with p(x) = 0 contribute nothing.

    Raises:
        DimensionMismatchError: if the lengths differ
        InfiniteDivergenceError: if q(x) = 0 where p(x) > 0
    """
    p, q = _pair(p, q)
    terms = rel_entr(p, q)
    if np.any(np.isinf(terms)):
        support = np.flatnonzero(np.isinf(terms))
        raise InfiniteDivergenceError(
            f'infinite divergence: q is zero where p is positive (index {int(support[0])})')
    return float(terms.sum())


def jsd_distance(p, q):
    """Jensen-Shannon distance: sqrt(KL(p||m)/2 + KL(q||m)/2), m = (p + q)/2.

    Natural logarithm, so the result lies in [0, sqrt(ln 2)].
    """
    p, q = _pair(p, q)
    if np.allclose(p, q, rtol=0.0, atol=EQUALITY_ATOL):
        return 0.0
    m = 0.5 * (p + q)
    divergence = 0.5 * rel_entr(p, m).sum() + 0.5 * rel_entr(q, m).sum()
    return float(np.sqrt(max(divergence, 0.0)))


def kronecker(a, b):
    return frozen(np.kron(np.asarray(a, dtype=float), np.asarray(b, dtype=float)))


def l1_normalize_columns(matrix):
    """Divide every column by its sum.

    Raises:
        EmptyPreimageError: if some column sums to zero
    """
    matrix = np.asarray(matrix, dtype=float)
    sums = matrix.sum(axis=0)
    empty = np.flatnonzero(sums <= 0.0)
    if empty.size:
        raise EmptyPreimageError(
            f'non-surjective map has empty preimage (column {int(empty[0]) + 1})')
    return frozen(matrix / sums)


def apply(matrix, p):
    """Push the distribution ``p`` through the stochastic ``matrix``."""
    matrix = np.asarray(matrix, dtype=float)
    p = np.asarray(p, dtype=float)
    if matrix.ndim != 2 or p.ndim != 1 or matrix.shape[1] != p.shape[0]:
        raise DimensionMismatchError(
            f'cannot apply a {matrix.shape} matrix to a vector of shape {p.shape}')
    return frozen(matrix @ p)
