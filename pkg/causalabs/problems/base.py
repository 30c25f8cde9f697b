#!/usr/bin/env python3
"""
Problem class base.

A problem class decides which parts of an abstraction are given and which
are searched. Subclasses implement :meth:`ProblemClass.candidates`, a
deterministic stream of candidate abstractions; the solver scores and ranks
whatever they yield.
"""

import abc
import dataclasses
import itertools
import logging

import numpy as np

from ..abstraction import Abstraction
from ..enumeration import enumerate_dags, enumerate_outcome_maps, enumerate_varmaps
from ..errors import ProblemError
from ..fitting import Skeleton, fit_mechanisms
from ..numerics import binary_violations
from ..scm import VariableSpec

logger = logging.getLogger(__name__)


class ProblemClass(abc.ABC):
    """Base class for every row of the abstraction-learning hierarchy.

    Args:
        problem: The LearningProblem to enumerate candidates for
    """

    # Attributes of the LearningProblem that must be given for this class
    required = ()

    def __init__(self, problem):
        self.problem = problem
        self.name = getattr(self, 'problem_name', self.__class__.__name__)
        logger.debug('created problem class %s (caps: %s)', self.name, problem.caps)

    def validate(self):
        """Check that the givens this class needs are present and consistent.

        Raises:
            ProblemError: describing the first inconsistency found
        """
        missing = [part for part in self.required if getattr(self.problem, part) in (None, ())]
        if missing:
            raise ProblemError(f'{self.name} problem needs given {", ".join(missing)}')
        self.check_givens()

    def check_givens(self):
        pass

    @abc.abstractmethod
    def candidates(self):
        """Yield candidate Abstraction objects in a deterministic order."""

    # Shared helpers

    def _check_high_names(self, names):
        names = list(names)
        if len(set(names)) != len(names):
            raise ProblemError('high variable names must be unique')
        if len(names) > len(self.problem.base.variables):
            raise ProblemError('more high variables than base variables')

    def _check_outcome_maps(self, high, relevant, varmap, outcome_maps):
        base = self.problem.base
        for name, matrix in outcome_maps.items():
            if name not in high.variable_names:
                raise ProblemError(f'outcome map given for unknown high variable {name}')
            preimage = [v for v in relevant if varmap[v] == name]
            cols = int(np.prod(base.cardinalities(preimage), dtype=np.int64))
            expected = (high.cardinality(name), cols)
            if np.shape(matrix) != expected:
                raise ProblemError(
                    f'α_{{{name}}} has shape {np.shape(matrix)}, expected {expected}')
            violations = binary_violations(matrix, f'α_{{{name}}}')
            if violations:
                raise ProblemError('; '.join(violations))

    def _check_varmap(self, high, relevant, varmap):
        base = self.problem.base
        for name in relevant:
            if name not in base.variable_names:
                raise ProblemError(f'relevant variable {name} is not a base variable')
        if set(varmap) != set(relevant):
            raise ProblemError('varmap must map exactly the relevant variables')
        unknown = set(varmap.values()) - set(high.variable_names)
        if unknown:
            raise ProblemError(f'varmap targets unknown high variables {sorted(unknown)}')
        if set(varmap.values()) != set(high.variable_names):
            raise ProblemError('varmap is not surjective onto the high variables')

    def completions(self, high, relevant, varmap, fixed_maps=None):
        """Every abstraction that agrees with the given parts, free maps enumerated."""
        base = self.problem.base
        fixed_maps = fixed_maps or {}
        options = []
        for variable in high.variables:
            if variable.name in fixed_maps:
                options.append([fixed_maps[variable.name]])
                continue
            preimage = [v for v in relevant if varmap[v] == variable.name]
            size = int(np.prod(base.cardinalities(preimage), dtype=np.int64))
            if size < variable.cardinality:
                return
            options.append(list(enumerate_outcome_maps(size, variable.cardinality)))
        for maps in itertools.product(*options):
            yield Abstraction(
                base=base,
                high=high,
                relevant=relevant,
                varmap=varmap,
                outcome_maps=dict(zip(high.variable_names, maps)),
            )

    def designs(self, names, cardinalities=None, labels=None, edges=None):
        """Abstractions with fitted high mechanisms over every (R, a, cards, alpha, DAG).

        Args:
            names: High variable names, in declaration order
            cardinalities: Fixed outcome counts per name, or None to search
                1..max_cardinality
            labels: Fixed outcome labels per name (implies ``cardinalities``)
            edges: Fixed high DAG, or None to enumerate every DAG
        """
        base = self.problem.base
        caps = self.problem.caps
        dags = [tuple(edges)] if edges is not None else list(enumerate_dags(names))
        for relevant, assignment in enumerate_varmaps(base.variable_names, len(names), self.problem.relevant):
            varmap = {v: names[k] for v, k in zip(relevant, assignment)}
            sizes = [
                int(np.prod(base.cardinalities([v for v in relevant if varmap[v] == name]), dtype=np.int64))
                for name in names
            ]
            if cardinalities is not None:
                card_options = [[c] for c in cardinalities]
            else:
                card_options = [range(1, min(caps.max_cardinality, size) + 1) for size in sizes]
            for cards in itertools.product(*card_options):
                if any(card > size for card, size in zip(cards, sizes)):
                    continue
                variables = tuple(
                    VariableSpec(name, labels[k] if labels else tuple(str(o) for o in range(card)))
                    for k, (name, card) in enumerate(zip(names, cards)))
                map_options = [list(enumerate_outcome_maps(size, card)) for size, card in zip(sizes, cards)]
                for maps in itertools.product(*map_options):
                    for dag in dags:
                        skeleton = Skeleton(variables, dag)
                        provisional = Abstraction(
                            base=base,
                            high=skeleton.placeholder(),
                            relevant=relevant,
                            varmap=varmap,
                            outcome_maps=dict(zip(names, maps)),
                        )
                        yield dataclasses.replace(provisional, high=fit_mechanisms(base, skeleton, provisional))
