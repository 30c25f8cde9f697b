#!/usr/bin/env python3
"""
Finite structural causal models as column-stochastic mechanisms.

Index convention used everywhere in the package: joint outcomes of an ordered
variable list are laid out row-major, the first variable varying slowest. The
same convention orders mechanism columns over parents and the rows/columns of
virtual mechanisms.
"""

import dataclasses
import logging
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx
import numpy as np

from .errors import InvalidQueryError, NullConditionError, ScmValidationError, UnknownVariableError
from .numerics import frozen, stochastic_violations

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VariableSpec:
    name: str
    outcomes: tuple

    def __post_init__(self):
        object.__setattr__(self, 'outcomes', tuple(self.outcomes))

    @property
    def cardinality(self):
        return len(self.outcomes)

    def index_of(self, label):
        try:
            return self.outcomes.index(label)
        except ValueError:
            raise UnknownVariableError(
                f'unknown outcome {label!r} for variable {self.name}') from None


@dataclass(frozen=True, eq=False)
class Mechanism:
    """Stochastic map from the parents' joint outcomes to the target's outcomes.

    A root has no parents and a single column (the domain {*}).
    """

    target: str
    parents: tuple
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'parents', tuple(self.parents))
        object.__setattr__(self, 'matrix', frozen(self.matrix))

    def __eq__(self, other):
        if not isinstance(other, Mechanism):
            return NotImplemented
        return (self.target == other.target
                and self.parents == other.parents
                and self.matrix.shape == other.matrix.shape
                and np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash((self.target, self.parents, self.matrix.shape, self.matrix.tobytes()))


@dataclass(frozen=True, eq=False)
class Scm:
    """Variables in canonical declaration order plus one mechanism per variable.

    Construction never raises on semantic problems; see :func:`validate`.
    Operations that need a valid model call :func:`ensure_valid` first.
    """

    variables: tuple
    mechanisms: tuple
    _memo: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'variables', tuple(self.variables))
        object.__setattr__(self, 'mechanisms', tuple(self.mechanisms))

    def __eq__(self, other):
        if not isinstance(other, Scm):
            return NotImplemented
        return self.variables == other.variables and self.mechanisms == other.mechanisms

    def __hash__(self):
        return hash((self.variables, self.mechanisms))

    @cached_property
    def variable_names(self):
        return tuple(variable.name for variable in self.variables)

    @cached_property
    def _positions(self):
        return {name: position for position, name in enumerate(self.variable_names)}

    @cached_property
    def _by_target(self):
        return {mechanism.target: mechanism for mechanism in self.mechanisms}

    def index_of(self, name):
        try:
            return self._positions[name]
        except KeyError:
            raise UnknownVariableError(f'unknown variable {name!r}') from None

    def variable(self, name):
        return self.variables[self.index_of(name)]

    def cardinality(self, name):
        return self.variable(name).cardinality

    def cardinalities(self, names):
        return tuple(self.cardinality(name) for name in names)

    def mechanism(self, name):
        self.index_of(name)
        try:
            return self._by_target[name]
        except KeyError:
            raise UnknownVariableError(f'variable {name!r} has no mechanism') from None

    def parents(self, name):
        return self.mechanism(name).parents

    def order(self, names):
        """Return ``names`` sorted by declaration order."""
        return tuple(sorted(names, key=self.index_of))

    @cached_property
    def graph(self):
        """Parent -> target digraph over the declared variables."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.variable_names)
        for mechanism in self.mechanisms:
            for parent in mechanism.parents:
                if parent in self._positions and mechanism.target in self._positions:
                    graph.add_edge(parent, mechanism.target)
        return graph

    @cached_property
    def violations(self):
        return _collect_violations(self)

    @property
    def is_valid(self):
        return not self.violations

    @cached_property
    def _joint_tensor(self):
        operands = []
        for mechanism in self.mechanisms:
            operands.extend(_factor(self, mechanism))
        tensor = np.einsum(*operands, list(range(len(self.variables))))
        tensor.setflags(write=False)
        return tensor


def _factor(scm, mechanism):
    """Mechanism as an einsum operand: tensor over (target, parents...) axes."""
    axes = [scm.index_of(mechanism.target)] + [scm.index_of(p) for p in mechanism.parents]
    shape = scm.cardinalities((mechanism.target,) + mechanism.parents)
    return [mechanism.matrix.reshape(shape), axes]


def _collect_violations(scm):
    violations = []
    names = [variable.name for variable in scm.variables]
    seen = set()
    for name in names:
        if name in seen:
            violations.append(f'variable {name}: declared more than once')
        seen.add(name)
    for variable in scm.variables:
        if not variable.outcomes:
            violations.append(f'variable {variable.name}: outcome list is empty')
        if len(set(variable.outcomes)) != len(variable.outcomes):
            violations.append(f'variable {variable.name}: outcome labels are not unique')

    declared = set(names)
    counts = {}
    for mechanism in scm.mechanisms:
        counts[mechanism.target] = counts.get(mechanism.target, 0) + 1
        if mechanism.target not in declared:
            violations.append(f'mechanism for {mechanism.target}: target is not a declared variable')
    for name in names:
        if counts.get(name, 0) == 0:
            violations.append(f'variable {name}: no mechanism')
        elif counts[name] > 1:
            violations.append(f'variable {name}: {counts[name]} mechanisms, expected exactly one')
    if violations:
        return violations

    for mechanism in scm.mechanisms:
        label = f'φ_{mechanism.target}'
        parents = mechanism.parents
        if len(set(parents)) != len(parents):
            violations.append(f'{label}: parents are not distinct')
        if mechanism.target in parents:
            violations.append(f'{label}: variable is its own parent')
        unknown = [p for p in parents if p not in declared]
        for parent in unknown:
            violations.append(f'{label}: parent {parent} is not a declared variable')
        if unknown:
            continue
        rows = scm.cardinality(mechanism.target)
        cols = int(np.prod(scm.cardinalities(parents), dtype=np.int64))
        if mechanism.matrix.shape != (rows, cols):
            violations.append(
                f'{label}: matrix shape {mechanism.matrix.shape} does not match expected ({rows}, {cols})')
            continue
        violations.extend(stochastic_violations(mechanism.matrix, label))

    try:
        cycle = nx.find_cycle(scm.graph)
    except nx.NetworkXNoCycle:
        pass
    else:
        path = [edge[0] for edge in cycle] + [cycle[-1][1]]
        violations.append('cycle: ' + '→'.join(path))
    return violations


def validate(scm):
    """Return the list of violated invariants (empty when the model is valid)."""
    return list(scm.violations)


def ensure_valid(scm):
    if scm.violations:
        raise ScmValidationError(scm.violations)
    return scm


def _check_names(scm, names, what='variables'):
    names = tuple(names)
    for name in names:
        scm.index_of(name)
    if len(set(names)) != len(names):
        raise InvalidQueryError(f'{what} must be distinct, got {list(names)}')
    return names


def _configuration_count(scm, names):
    return int(np.prod(scm.cardinalities(names), dtype=np.int64))


def joint_index(scm, assignment):
    """Row-major index of a total assignment ``{name: label}``."""
    missing = [name for name in scm.variable_names if name not in assignment]
    extra = [name for name in assignment if name not in scm._positions]
    if extra:
        raise UnknownVariableError(f'unknown variable {extra[0]!r}')
    if missing:
        raise UnknownVariableError(f'assignment is missing variable {missing[0]!r}')
    indices = [variable.index_of(assignment[variable.name]) for variable in scm.variables]
    return int(np.ravel_multi_index(indices, scm.cardinalities(scm.variable_names)))


def decode_joint_index(scm, index):
    return decode_configuration(scm, scm.variable_names, index)


def decode_configuration(scm, names, index):
    """Inverse of the row-major layout over ``names``: ``{name: label}``."""
    cards = scm.cardinalities(names)
    total = int(np.prod(cards, dtype=np.int64))
    if not 0 <= index < total:
        raise IndexError(f'configuration index {index} out of range for {total} outcomes')
    positions = np.unravel_index(index, cards)
    return {name: scm.variable(name).outcomes[int(pos)] for name, pos in zip(names, positions)}


def configuration_labels(scm, names):
    """Labels like ``S=0,C=1`` for every configuration of ``names`` in canonical order."""
    names = tuple(names)
    if not names:
        return ('*',)
    return tuple(
        ','.join(f'{name}={label}' for name, label in decode_configuration(scm, names, k).items())
        for k in range(_configuration_count(scm, names)))


def joint_distribution(scm):
    ensure_valid(scm)
    return frozen(scm._joint_tensor.reshape(-1))


def marginal(scm, names):
    """Joint distribution of ``names`` in the requested order."""
    ensure_valid(scm)
    names = _check_names(scm, names)
    axes = [scm.index_of(name) for name in names]
    tensor = np.einsum(scm._joint_tensor, list(range(len(scm.variables))), axes)
    return frozen(np.reshape(tensor, -1))


def conditional(scm, targets, givens=()):
    """Stochastic matrix whose column g is P(targets | givens = g).

    Raises:
        NullConditionError: if some given configuration has probability zero
    """
    targets = _check_names(scm, targets, 'targets')
    givens = _check_names(scm, givens, 'givens')
    if not targets:
        raise InvalidQueryError('conditional needs at least one target')
    if set(targets) & set(givens):
        raise InvalidQueryError('targets and givens must be disjoint')
    table = marginal(scm, targets + givens).reshape(
        _configuration_count(scm, targets), _configuration_count(scm, givens))
    sums = table.sum(axis=0)
    null = np.flatnonzero(sums <= 0.0)
    if null.size:
        event = decode_configuration(scm, givens, int(null[0]))
        raise NullConditionError(f'conditioning on null event {event}')
    return frozen(table / sums)


def intervene(scm, assignment):
    """Perfect intervention do(X = x) for every ``X: x`` in ``assignment``.

    Returns a new model; intervened variables lose their parents and get a
    point-mass mechanism.
    """
    targets = {}
    for name, label in assignment.items():
        targets[name] = scm.variable(name).index_of(label)
    mechanisms = []
    for mechanism in scm.mechanisms:
        if mechanism.target in targets:
            column = np.zeros((scm.cardinality(mechanism.target), 1))
            column[targets[mechanism.target], 0] = 1.0
            mechanism = Mechanism(mechanism.target, (), column)
        mechanisms.append(mechanism)
    return dataclasses.replace(scm, mechanisms=tuple(mechanisms))


def virtual_mechanism(scm, sources, targets):
    """Matrix of interventional distributions P(targets | do(sources = x)).

    Column x follows the canonical layout over ``sources``; rows follow the
    canonical layout over ``targets``.
    """
    ensure_valid(scm)
    sources = _check_names(scm, sources, 'sources')
    targets = _check_names(scm, targets, 'targets')
    if not sources or not targets:
        raise InvalidQueryError('sources and targets must be non-empty')
    overlap = set(sources) & set(targets)
    if overlap:
        raise InvalidQueryError(f'sources and targets overlap on {sorted(overlap)}')

    key = ('virtual', sources, targets)
    cached = scm._memo.get(key)
    if cached is not None:
        return cached

    operands = []
    for mechanism in scm.mechanisms:
        if mechanism.target not in sources:
            operands.extend(_factor(scm, mechanism))
    for name in sources:
        operands.extend([np.ones(scm.cardinality(name)), [scm.index_of(name)]])
    output = [scm.index_of(name) for name in targets + sources]
    tensor = np.einsum(*operands, output)
    result = frozen(tensor.reshape(
        _configuration_count(scm, targets), _configuration_count(scm, sources)))
    scm._memo[key] = result
    return result
