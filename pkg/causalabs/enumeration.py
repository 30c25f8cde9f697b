#!/usr/bin/env python3
"""
Deterministic enumerators for the discrete parts of an abstraction.
"""

import itertools
from math import comb

import networkx as nx
import numpy as np

from .errors import NoSurjectionError
from .numerics import frozen


def surjection_count(n, m):
    """Number of surjections from an n-set onto an m-set (m! * S(n, m))."""
    return sum((-1) ** k * comb(m, k) * (m - k) ** n for k in range(m + 1))


def assignment_to_matrix(assignment, m):
    """Binary m x n matrix sending column c to row ``assignment[c]``."""
    matrix = np.zeros((m, len(assignment)))
    matrix[list(assignment), list(range(len(assignment)))] = 1.0
    return frozen(matrix)


def matrix_to_assignment(matrix):
    return tuple(int(row) for row in np.argmax(np.asarray(matrix), axis=0))


def surjective_assignments(n, m):
    """Every surjective map [n] -> [m] as a tuple, in lexicographic order."""
    if m < 1 or n < m:
        raise NoSurjectionError(f'no surjective map exists from {n} onto {m} outcomes')
    for assignment in itertools.product(range(m), repeat=n):
        if len(set(assignment)) == m:
            yield assignment


def enumerate_outcome_maps(n, m):
    """Every binary surjective m x n stochastic matrix, exactly once.

    Ordered lexicographically by the column -> row assignment, so for n = m
    the identity comes first.
    """
    for assignment in surjective_assignments(n, m):
        yield assignment_to_matrix(assignment, m)


def enumerate_varmaps(base_names, high_count, relevant=None):
    """Pairs (R, a) with R a non-empty subset of ``base_names`` and a: R -> high indices onto.

    Subsets are visited by increasing bitmask over the declaration order
    (the first name is the lowest bit); ``a`` is a tuple aligned with R. Pass
    ``relevant`` to fix R.
    """
    base_names = tuple(base_names)
    if high_count < 1 or high_count > len(base_names):
        raise NoSurjectionError(
            f'no surjective map exists from {len(base_names)} base variables onto {high_count}')
    if relevant is not None:
        subsets = [tuple(name for name in base_names if name in set(relevant))]
    else:
        subsets = [
            tuple(name for bit, name in enumerate(base_names) if mask >> bit & 1)
            for mask in range(1, 2 ** len(base_names))
        ]
    feasible = False
    for subset in subsets:
        if len(subset) < high_count:
            continue
        for assignment in surjective_assignments(len(subset), high_count):
            feasible = True
            yield subset, assignment
    if not feasible:
        raise NoSurjectionError(f'no relevant set can be mapped onto {high_count} high variables')


def enumerate_dags(names):
    """Every DAG over ``names`` exactly once, as a tuple of (parent, child) edges.

    Each unordered pair is absent, forward or backward; cyclic orientations
    are discarded. The edgeless graph comes first.
    """
    names = tuple(names)
    pairs = list(itertools.combinations(range(len(names)), 2))
    for choice in itertools.product((0, 1, 2), repeat=len(pairs)):
        edges = []
        for (i, j), orientation in zip(pairs, choice):
            if orientation == 1:
                edges.append((names[i], names[j]))
            elif orientation == 2:
                edges.append((names[j], names[i]))
        graph = nx.DiGraph(edges)
        graph.add_nodes_from(names)
        if nx.is_directed_acyclic_graph(graph):
            yield tuple(edges)
