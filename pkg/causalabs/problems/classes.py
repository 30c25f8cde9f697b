#!/usr/bin/env python3
"""
The abstraction-learning hierarchy, from fully specified to fully learned.

Each class widens the search of the previous one:

    assessment          everything given, one candidate
    completion          high model, R and a given; missing outcome maps searched
    abstraction_design  high model given; R, a and outcome maps searched
    mechanism_design    high variables and outcomes given; mechanisms fitted, DAG searched
    granularity_design  high variable names given; outcome counts searched
    model_design        nothing given; variable count searched
"""

import logging

from ..abstraction import Abstraction
from ..enumeration import enumerate_varmaps
from ..errors import ProblemError
from .base import ProblemClass
from .registry import register_problem_class

logger = logging.getLogger(__name__)


@register_problem_class(name='assessment')
class Assessment(ProblemClass):
    required = ('high', 'relevant', 'varmap', 'outcome_maps')

    def check_givens(self):
        p = self.problem
        self._check_varmap(p.high, p.relevant, p.varmap)
        self._check_outcome_maps(p.high, p.relevant, p.varmap, p.outcome_maps)
        missing = set(p.high.variable_names) - set(p.outcome_maps)
        if missing:
            raise ProblemError(f'assessment needs every outcome map; missing {sorted(missing)}')

    def candidates(self):
        p = self.problem
        yield Abstraction(p.base, p.high, p.relevant, p.varmap, p.outcome_maps)


@register_problem_class(name='completion')
class Completion(ProblemClass):
    required = ('high', 'relevant', 'varmap')

    def check_givens(self):
        p = self.problem
        self._check_varmap(p.high, p.relevant, p.varmap)
        self._check_outcome_maps(p.high, p.relevant, p.varmap, p.outcome_maps or {})

    def candidates(self):
        p = self.problem
        logger.info('completing %d of %d outcome maps',
                    len(p.high.variables) - len(p.outcome_maps or {}), len(p.high.variables))
        yield from self.completions(p.high, p.relevant, p.varmap, p.outcome_maps)


@register_problem_class(name='abstraction_design')
class AbstractionDesign(ProblemClass):
    required = ('high',)

    def check_givens(self):
        if len(self.problem.high.variables) > len(self.problem.base.variables):
            raise ProblemError('the high model has more variables than the base model')

    def candidates(self):
        p = self.problem
        names = p.high.variable_names
        for relevant, assignment in enumerate_varmaps(p.base.variable_names, len(names), p.relevant):
            varmap = {v: names[k] for v, k in zip(relevant, assignment)}
            yield from self.completions(p.high, relevant, varmap)


@register_problem_class(name='mechanism_design')
class MechanismDesign(ProblemClass):
    required = ('high_variables',)

    def check_givens(self):
        p = self.problem
        names = [v.name for v in p.high_variables]
        self._check_high_names(names)
        if p.high_edges is not None:
            unknown = {n for edge in p.high_edges for n in edge} - set(names)
            if unknown:
                raise ProblemError(f'high edges mention unknown variables {sorted(unknown)}')

    def candidates(self):
        p = self.problem
        names = tuple(v.name for v in p.high_variables)
        yield from self.designs(
            names,
            cardinalities=[v.cardinality for v in p.high_variables],
            labels=[v.outcomes for v in p.high_variables],
            edges=p.high_edges,
        )


@register_problem_class(name='granularity_design')
class GranularityDesign(ProblemClass):
    required = ('high_variable_names',)

    def check_givens(self):
        self._check_high_names(self.problem.high_variable_names)

    def candidates(self):
        yield from self.designs(tuple(self.problem.high_variable_names))


@register_problem_class(name='model_design')
class ModelDesign(ProblemClass):
    def candidates(self):
        p = self.problem
        for count in range(1, min(p.caps.max_variables, len(p.base.variables)) + 1):
            names = tuple(f'H{k}' for k in range(1, count + 1))
            logger.info('model design with %d high variable(s)', count)
            yield from self.designs(names)
