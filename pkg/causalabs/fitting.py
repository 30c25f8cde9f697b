#!/usr/bin/env python3
"""
Fitting high-level mechanisms to a fixed abstraction.

Each high mechanism column is the uniform average, over the low-level
interventions that abstract to it, of the abstracted base interventional
distribution. Roots get the pushforward of the base marginal of their
preimage.
"""

import logging
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .abstraction import component_inverse
from .errors import ProblemError
from .scm import Mechanism, Scm, marginal, virtual_mechanism

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Skeleton:
    """High variables plus a DAG over them, without mechanisms."""

    variables: tuple
    edges: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'variables', tuple(self.variables))
        object.__setattr__(self, 'edges', tuple(tuple(edge) for edge in self.edges))

    @property
    def names(self):
        return tuple(variable.name for variable in self.variables)

    def parents(self, name):
        """Parents of ``name`` in declaration order."""
        parents = {parent for parent, child in self.edges if child == name}
        return tuple(n for n in self.names if n in parents)

    def check(self):
        graph = nx.DiGraph(self.edges)
        graph.add_nodes_from(self.names)
        unknown = set(graph.nodes) - set(self.names)
        if unknown:
            raise ProblemError(f'skeleton edges mention unknown variables {sorted(unknown)}')
        if not nx.is_directed_acyclic_graph(graph):
            raise ProblemError('skeleton graph is not acyclic')
        return self

    def placeholder(self):
        """A valid Scm on this graph with uniform mechanisms."""
        cards = {v.name: v.cardinality for v in self.variables}
        mechanisms = []
        for variable in self.variables:
            cols = int(np.prod([cards[p] for p in self.parents(variable.name)], dtype=np.int64))
            matrix = np.full((variable.cardinality, cols), 1.0 / variable.cardinality)
            mechanisms.append(Mechanism(variable.name, self.parents(variable.name), matrix))
        return Scm(self.variables, tuple(mechanisms))


def fit_mechanisms(base, skeleton, abstraction):
    """Build the high model on ``skeleton`` implied by ``abstraction`` over ``base``.

    Only the relevant set, varmap and outcome maps of ``abstraction`` are used;
    its high model may be :meth:`Skeleton.placeholder`.
    """
    skeleton.check()
    mechanisms = []
    for variable in skeleton.variables:
        target_map = abstraction.outcome_maps[variable.name]
        preimage = abstraction.preimage(variable.name)
        parents = skeleton.parents(variable.name)
        if not parents:
            matrix = (target_map @ marginal(base, preimage)).reshape(-1, 1)
        else:
            low_sources = abstraction.low_sources(parents)
            upper = target_map @ virtual_mechanism(base, low_sources, preimage)
            matrix = upper @ component_inverse(abstraction.composite_map(parents))
        mechanisms.append(Mechanism(variable.name, parents, matrix))
        logger.debug('fitted φ_%s over (%s)', variable.name, ','.join(parents))
    return Scm(skeleton.variables, tuple(mechanisms))
