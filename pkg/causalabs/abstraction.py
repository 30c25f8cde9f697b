#!/usr/bin/env python3
"""
Abstractions between two finite SCMs.

An abstraction maps a relevant subset R of the base variables onto the high
variables (the surjective varmap ``a``) and, for every high variable, maps
the joint outcomes of its preimage onto its own outcomes with a binary
surjective matrix. The quality of an abstraction is measured by its
abstraction error (worst interventional inconsistency over all admissible
diagrams) and its information loss (distance between the base joint and the
joint reconstructed from the high model).
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property, reduce

import networkx as nx
import numpy as np

from .errors import (
    AbstractionValidationError,
    InvalidDiagramError,
    InvalidLambdaError,
    NoSurjectionError,
    UnknownVariableError,
)
from .numerics import (
    apply,
    binary_violations,
    frozen,
    jsd_distance,
    l1_normalize_columns,
)
from .scm import decode_configuration, ensure_valid, joint_distribution, marginal, virtual_mechanism

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Abstraction:
    """The tuple (R, a, alpha) together with the two models it relates.

    Attributes:
        base: The low-level model
        high: The abstracted model
        relevant: Relevant base variables, in base declaration order
        varmap: Mapping from each relevant base variable to a high variable
        outcome_maps: Mapping from each high variable to its binary outcome map
    """

    base: object
    high: object
    relevant: tuple
    varmap: dict
    outcome_maps: dict
    _memo: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        relevant = tuple(self.relevant)
        if all(name in self.base.variable_names for name in relevant):
            relevant = self.base.order(relevant)
        object.__setattr__(self, 'relevant', relevant)
        object.__setattr__(self, 'varmap', dict(self.varmap))
        object.__setattr__(self, 'outcome_maps',
                           {name: frozen(matrix) for name, matrix in self.outcome_maps.items()})

    def __eq__(self, other):
        if not isinstance(other, Abstraction):
            return NotImplemented
        return (self.base == other.base and self.high == other.high
                and self.relevant == other.relevant and self.varmap == other.varmap
                and self.outcome_maps.keys() == other.outcome_maps.keys()
                and all(np.array_equal(matrix, other.outcome_maps[name])
                        for name, matrix in self.outcome_maps.items()))

    __hash__ = None

    @cached_property
    def violations(self):
        return _collect_violations(self)

    def preimage(self, high_name):
        """Base variables mapped onto ``high_name``, in base declaration order."""
        return tuple(name for name in self.relevant if self.varmap.get(name) == high_name)

    def low_sources(self, high_names):
        """Concatenated preimages of ``high_names`` (taken in high declaration order)."""
        return tuple(itertools.chain.from_iterable(
            self.preimage(name) for name in self.high.order(high_names)))

    def composite_map(self, high_names):
        """Kronecker product of the outcome maps of ``high_names`` in high declaration order.

        The columns follow the canonical layout over :meth:`low_sources`.
        """
        ordered = self.high.order(high_names)
        return frozen(reduce(np.kron, (self.outcome_maps[name] for name in ordered), np.ones((1, 1))))


def _collect_violations(abstraction):
    base, high = abstraction.base, abstraction.high
    violations = []
    if base.violations:
        violations.append('base model is invalid: ' + '; '.join(base.violations))
    if high.violations:
        violations.append('high model is invalid: ' + '; '.join(high.violations))
    if violations:
        return violations

    relevant = abstraction.relevant
    if not relevant:
        violations.append('relevant set R is empty')
    if len(set(relevant)) != len(relevant):
        violations.append('relevant set R lists a variable twice')
    for name in relevant:
        if name not in base.variable_names:
            violations.append(f'relevant variable {name} is not a base variable')
    for name in abstraction.varmap:
        if name not in relevant:
            violations.append(f'a maps {name}, which is not in R')
    for name in relevant:
        if name not in abstraction.varmap:
            violations.append(f'a does not map relevant variable {name}')
        elif abstraction.varmap[name] not in high.variable_names:
            violations.append(f'a maps {name} to unknown high variable {abstraction.varmap[name]}')
    image = set(abstraction.varmap.values())
    for name in high.variable_names:
        if name not in image:
            violations.append(f'a not surjective: no relevant variable maps to {name}')
    if violations:
        return violations

    for name in abstraction.outcome_maps:
        if name not in high.variable_names:
            violations.append(f'α_{{{name}}} given for unknown high variable')
    for variable in high.variables:
        label = f'α_{{{variable.name}}}'
        matrix = abstraction.outcome_maps.get(variable.name)
        if matrix is None:
            violations.append(f'{label} is missing')
            continue
        cols = int(np.prod(base.cardinalities(abstraction.preimage(variable.name)), dtype=np.int64))
        if matrix.shape != (variable.cardinality, cols):
            violations.append(
                f'{label} has shape {matrix.shape}, expected ({variable.cardinality}, {cols})')
            continue
        violations.extend(binary_violations(matrix, label))
    return violations


def validate_abstraction(abstraction):
    """Return the list of violated invariants (empty when valid)."""
    return list(abstraction.violations)


def ensure_valid_abstraction(abstraction):
    if abstraction.violations:
        raise AbstractionValidationError(abstraction.violations)
    return abstraction


@dataclass(frozen=True)
class DiagramError:
    sources: tuple
    targets: tuple
    value: float
    worst_intervention: dict

    def describe(self):
        assignment = ','.join(f'{k}={v}' for k, v in self.worst_intervention.items())
        return f"{{{','.join(self.sources)}}} -> {{{','.join(self.targets)}}}", f'do({assignment})'


@dataclass(frozen=True)
class EvaluationReport:
    e: float
    i: float
    lam: float
    objective: float
    per_diagram: tuple

    def as_dict(self):
        return {
            'e': self.e,
            'i': self.i,
            'lambda': self.lam,
            'objective': self.objective,
            'diagrams': [
                {
                    'sources': list(d.sources),
                    'targets': list(d.targets),
                    'value': d.value,
                    'worst_intervention': dict(d.worst_intervention),
                }
                for d in self.per_diagram
            ],
        }


def _high_subset(abstraction, names, what):
    names = tuple(names)
    if not names:
        raise InvalidDiagramError(f'{what} must be a non-empty set of high variables')
    for name in names:
        if name not in abstraction.high.variable_names:
            raise UnknownVariableError(f'unknown high variable {name!r}')
    if len(set(names)) != len(names):
        raise InvalidDiagramError(f'{what} lists a variable twice')
    return abstraction.high.order(names)


def diagram_error(abstraction, sources, targets):
    """Worst-case Jensen-Shannon distance between the two paths of one diagram.

    For every total intervention x on the preimage of ``sources`` the upper
    path abstracts the base interventional distribution of the targets'
    preimage, the lower path intervenes in the high model on the abstracted
    value of x.
    """
    ensure_valid_abstraction(abstraction)
    sources = _high_subset(abstraction, sources, 'sources')
    targets = _high_subset(abstraction, targets, 'targets')
    if set(sources) & set(targets):
        raise InvalidDiagramError('sources and targets must be disjoint')

    key = ('diagram', sources, targets)
    cached = abstraction._memo.get(key)
    if cached is not None:
        return cached

    low_sources = abstraction.low_sources(sources)
    low_targets = abstraction.low_sources(targets)
    upper = abstraction.composite_map(targets) @ virtual_mechanism(abstraction.base, low_sources, low_targets)
    lower = virtual_mechanism(abstraction.high, sources, targets) @ abstraction.composite_map(sources)
    values = [jsd_distance(upper[:, k], lower[:, k]) for k in range(upper.shape[1])]
    worst = int(np.argmax(values))
    result = DiagramError(
        sources=sources,
        targets=targets,
        value=values[worst],
        worst_intervention=decode_configuration(abstraction.base, low_sources, worst),
    )
    logger.debug('E(%s, %s) = %.6f', ','.join(sources), ','.join(targets), result.value)
    abstraction._memo[key] = result
    return result


def enumerate_diagrams(abstraction_or_high):
    """Admissible (sources, targets) pairs of high variables.

    A pair is kept when some target descends from some source in the high
    graph and no source descends from a target. Order: total size, then
    source size, then canonical indices.
    """
    high = getattr(abstraction_or_high, 'high', abstraction_or_high)
    names = high.variable_names
    descendants = {name: nx.descendants(high.graph, name) for name in names}
    pairs = []
    indices = range(len(names))
    for size in range(1, len(names)):
        for source_idx in itertools.combinations(indices, size):
            rest = [k for k in indices if k not in source_idx]
            for target_size in range(1, len(rest) + 1):
                for target_idx in itertools.combinations(rest, target_size):
                    sources = [names[k] for k in source_idx]
                    targets = [names[k] for k in target_idx]
                    reaches = any(t in descendants[s] for s in sources for t in targets)
                    reaches_back = any(s in descendants[t] for s in sources for t in targets)
                    if reaches and not reaches_back:
                        pairs.append((source_idx, target_idx))
    pairs.sort(key=lambda pair: (len(pair[0]) + len(pair[1]), len(pair[0]), pair[0], pair[1]))
    return [(tuple(names[k] for k in s), tuple(names[k] for k in t)) for s, t in pairs]


def abstraction_error(abstraction):
    """Largest diagram error over all admissible diagrams; 0 when there are none."""
    errors = [diagram_error(abstraction, s, t) for s, t in enumerate_diagrams(abstraction)]
    return max((d.value for d in errors), default=0.0)


def component_inverse(outcome_map):
    """Transpose of a binary surjective map with l1-normalized columns."""
    violations = binary_violations(outcome_map, 'outcome map')
    if violations:
        raise NoSurjectionError('; '.join(violations))
    return l1_normalize_columns(np.asarray(outcome_map, dtype=float).T)


def global_inverse(abstraction):
    """Map from high joint outcomes to base joint outcomes.

    Each high outcome is spread uniformly over its preimage; non-relevant
    base variables are spread uniformly over all their outcomes.
    """
    ensure_valid_abstraction(abstraction)
    cached = abstraction._memo.get('global_inverse')
    if cached is not None:
        return cached
    base, high = abstraction.base, abstraction.high
    n_base = len(base.variables)
    operands = []
    for variable in base.variables:
        if variable.name not in abstraction.relevant:
            operands.extend([np.full(variable.cardinality, 1.0 / variable.cardinality),
                             [base.index_of(variable.name)]])
    for position, variable in enumerate(high.variables):
        preimage = abstraction.preimage(variable.name)
        inverse = component_inverse(abstraction.outcome_maps[variable.name])
        inverse = inverse.reshape(base.cardinalities(preimage) + (variable.cardinality,))
        operands.extend([inverse, [base.index_of(name) for name in preimage] + [n_base + position]])
    tensor = np.einsum(*operands, list(range(n_base + len(high.variables))))
    base_size = int(np.prod(base.cardinalities(base.variable_names), dtype=np.int64))
    result = frozen(tensor.reshape(base_size, -1))
    abstraction._memo['global_inverse'] = result
    return result


def reconstruct(abstraction):
    """Base-side distribution reconstructed from the high joint."""
    return apply(global_inverse(abstraction), joint_distribution(abstraction.high))


def pushforward(abstraction):
    """Base marginal of the relevant variables pushed through the outcome maps."""
    ensure_valid_abstraction(abstraction)
    names = abstraction.high.variable_names
    low = marginal(abstraction.base, abstraction.low_sources(names))
    return apply(abstraction.composite_map(names), low)


def information_loss(abstraction):
    ensure_valid(abstraction.base)
    return jsd_distance(joint_distribution(abstraction.base), reconstruct(abstraction))


def evaluate(abstraction, lam=1.0):
    """Score an abstraction: e + lam * i, with the per-diagram detail."""
    if lam < 0:
        raise InvalidLambdaError(f'lambda must be non-negative, got {lam}')
    ensure_valid_abstraction(abstraction)
    per_diagram = tuple(diagram_error(abstraction, s, t) for s, t in enumerate_diagrams(abstraction))
    e = max((d.value for d in per_diagram), default=0.0)
    i = information_loss(abstraction)
    return EvaluationReport(e=e, i=i, lam=float(lam), objective=e + lam * i, per_diagram=per_diagram)


def identity_abstraction(scm):
    """The abstraction of a model onto itself with identity maps."""
    return Abstraction(
        base=scm,
        high=scm,
        relevant=scm.variable_names,
        varmap={name: name for name in scm.variable_names},
        outcome_maps={v.name: np.eye(v.cardinality) for v in scm.variables},
    )
