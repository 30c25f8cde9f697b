#!/usr/bin/env python3
"""
Abstraction learning by exhaustive enumeration.

The solver asks the registered problem class for its candidate stream,
scores every candidate by e + lambda * i, and keeps a deterministic top-k
ranking and the Pareto front over (e, i). Candidates may be scored in
parallel; ranking only ever uses the sort key, so the result does not depend
on scheduling.
"""

import heapq
import itertools
import logging
from dataclasses import dataclass, field

from joblib import Parallel, delayed
from tqdm import tqdm

from .abstraction import ensure_valid_abstraction, evaluate
from .enumeration import matrix_to_assignment
from .errors import NoSurjectionError, ProblemError
from .problems import create_problem_class
from .scm import ensure_valid

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 1_000_000

# Scores are compared at this many decimals before falling back to the encoding.
SCORE_DECIMALS = 12

CHUNK_SIZE = 256


@dataclass(frozen=True)
class Caps:
    max_variables: int = 2
    max_cardinality: int = 2
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        for name in ('max_variables', 'max_cardinality', 'budget'):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ProblemError(f'cap {name} must be a positive integer, got {value!r}')


@dataclass(frozen=True, eq=False)
class LearningProblem:
    """One abstraction-learning problem: a base model plus the given parts of its class.

    Attributes left as None are free (or unused by the class).
    """

    base: object
    problem_class: str
    high: object = None
    relevant: tuple = None
    varmap: dict = None
    outcome_maps: dict = None
    high_variables: tuple = None
    high_edges: tuple = None
    high_variable_names: tuple = None
    caps: Caps = field(default_factory=Caps)
    lam: float = 1.0
    top_k: int = 10

    def __post_init__(self):
        if self.lam < 0:
            raise ProblemError(f'lambda must be non-negative, got {self.lam}')
        if not isinstance(self.top_k, int) or self.top_k < 1:
            raise ProblemError(f'top_k must be a positive integer, got {self.top_k!r}')
        for name in ('relevant', 'high_variables', 'high_variable_names'):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, tuple(value))
        if self.high_edges is not None:
            object.__setattr__(self, 'high_edges', tuple(tuple(edge) for edge in self.high_edges))


def encode(abstraction):
    """Canonical text encoding: R bitmask, varmap, outcome-map assignments, mechanisms."""
    base, high = abstraction.base, abstraction.high
    mask = ''.join('1' if name in abstraction.relevant else '0' for name in base.variable_names)
    varmap = ','.join(f'{name}>{abstraction.varmap[name]}' for name in abstraction.relevant)
    maps = ';'.join(
        f'{name}:' + ','.join(str(row) for row in matrix_to_assignment(abstraction.outcome_maps[name]))
        for name in high.variable_names)
    mechanisms = ';'.join(
        f'{m.target}|{",".join(m.parents)}:' + ','.join(f'{x:.12g}' for x in m.matrix.ravel())
        for m in high.mechanisms)
    return f'R={mask} a={varmap} alpha={maps} mech={mechanisms}'


@dataclass(frozen=True, eq=False)
class Candidate:
    abstraction: object
    report: object
    encoding: str

    @property
    def high(self):
        return self.abstraction.high


def sort_key(candidate):
    report = candidate.report
    return (round(report.objective, SCORE_DECIMALS), round(report.e, SCORE_DECIMALS),
            round(report.i, SCORE_DECIMALS), candidate.encoding)


@dataclass(frozen=True)
class SolverResult:
    problem_class: str
    lam: float
    best: Candidate
    ranked: tuple
    candidates_evaluated: int
    exhaustive: bool
    front: tuple = ()


def _score(abstraction, lam):
    ensure_valid_abstraction(abstraction)
    report = evaluate(abstraction, lam)
    return Candidate(abstraction, report, encode(abstraction))


def _score_chunk(chunk, lam, workers):
    if workers == 1 or len(chunk) == 1:
        return [_score(abstraction, lam) for abstraction in chunk]
    n_jobs = workers if workers > 0 else -1
    return Parallel(n_jobs=n_jobs)(delayed(_score)(abstraction, lam) for abstraction in chunk)


def solve(problem, workers=1, progress=False):
    """Enumerate, score and rank every candidate of ``problem`` within its budget.

    Args:
        problem: The LearningProblem
        workers: Parallel scoring processes (1 = sequential, <= 0 = all cores)
        progress: Show a progress bar on stderr

    Returns:
        SolverResult

    Raises:
        ProblemError: on inconsistent givens or when no candidate exists
    """
    ensure_valid(problem.base)
    if problem.high is not None:
        ensure_valid(problem.high)
    strategy = create_problem_class(problem.problem_class, problem)
    strategy.validate()
    budget = problem.caps.budget
    logger.info('Solving %s problem (lambda=%g, caps=%s, workers=%s)',
                strategy.name, problem.lam, problem.caps, workers)

    stream = strategy.candidates()
    ranked, front = [], []
    evaluated = 0
    exhaustive = True
    try:
        with tqdm(desc=strategy.name, unit='candidate', disable=not progress, leave=False) as bar:
            while evaluated < budget:
                chunk = list(itertools.islice(stream, min(CHUNK_SIZE, budget - evaluated)))
                if not chunk:
                    break
                scored = _score_chunk(chunk, problem.lam, workers)
                for candidate in scored:
                    logger.debug('%s -> objective %.6f', candidate.encoding, candidate.report.objective)
                evaluated += len(scored)
                bar.update(len(scored))
                ranked = heapq.nsmallest(problem.top_k, ranked + scored, key=sort_key)
                front = pareto_frontier(front + scored)
            else:
                if next(stream, None) is not None:
                    exhaustive = False
                    logger.warning('Budget of %d candidates exhausted; result is not exhaustive', budget)
    except NoSurjectionError as exc:
        raise ProblemError(str(exc)) from exc

    if not ranked:
        raise ProblemError('no candidate satisfies the constraints')
    logger.info('Evaluated %d candidates; best objective %.6f', evaluated, ranked[0].report.objective)
    return SolverResult(
        problem_class=strategy.name,
        lam=problem.lam,
        best=ranked[0],
        ranked=tuple(ranked),
        candidates_evaluated=evaluated,
        exhaustive=exhaustive,
        front=tuple(front),
    )


def _dominates(a, b):
    ae, ai = round(a.report.e, SCORE_DECIMALS), round(a.report.i, SCORE_DECIMALS)
    be, bi = round(b.report.e, SCORE_DECIMALS), round(b.report.i, SCORE_DECIMALS)
    return ae <= be and ai <= bi and (ae < be or ai < bi)


def pareto_frontier(candidates):
    """Candidates not dominated in (e, i), ordered by (e, i, encoding)."""
    unique = {}
    for candidate in candidates:
        unique.setdefault(candidate.encoding, candidate)
    pool = list(unique.values())
    front = [c for c in pool if not any(_dominates(other, c) for other in pool)]
    front.sort(key=lambda c: (round(c.report.e, SCORE_DECIMALS), round(c.report.i, SCORE_DECIMALS), c.encoding))
    return front


def pareto_front(result):
    return pareto_frontier(result.front + result.ranked)


def lambda_sweep(result, lambdas):
    """Best candidate of the Pareto front for each trade-off in ``lambdas``.

    Returns:
        List of (lambda, candidate, objective) tuples in the order given
    """
    front = pareto_front(result)
    sweep = []
    for lam in lambdas:
        if lam < 0:
            raise ProblemError(f'lambda must be non-negative, got {lam}')

        def key(c, lam=lam):
            return (round(c.report.e + lam * c.report.i, SCORE_DECIMALS),
                    round(c.report.e, SCORE_DECIMALS), round(c.report.i, SCORE_DECIMALS), c.encoding)

        best = min(front, key=key)
        sweep.append((lam, best, best.report.e + lam * best.report.i))
    return sweep
