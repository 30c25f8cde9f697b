#!/usr/bin/env python3
"""
Causal abstraction of finite structural causal models.

This package provides finite SCMs as column-stochastic mechanisms, the
abstraction error and information loss of an abstraction between two
models, and a solver that learns abstractions for the problem classes of
the learning hierarchy.
"""

__version__ = '1.0.0'

from .scm import (
    VariableSpec,
    Mechanism,
    Scm,
    validate,
    joint_distribution,
    marginal,
    conditional,
    intervene,
    virtual_mechanism,
)
from .abstraction import (
    Abstraction,
    EvaluationReport,
    validate_abstraction,
    diagram_error,
    enumerate_diagrams,
    abstraction_error,
    global_inverse,
    reconstruct,
    information_loss,
    evaluate,
)
from .solver import (
    Caps,
    LearningProblem,
    Candidate,
    SolverResult,
    solve,
    pareto_front,
    lambda_sweep,
)
from .modelio import (
    load_model,
    load_model_file,
    dump_model,
    load_abstraction,
    load_abstraction_file,
    dump_abstraction,
    load_problem,
    load_problem_file,
)

# Define exports
__all__ = [
    '__version__',
    'VariableSpec',
    'Mechanism',
    'Scm',
    'validate',
    'joint_distribution',
    'marginal',
    'conditional',
    'intervene',
    'virtual_mechanism',
    'Abstraction',
    'EvaluationReport',
    'validate_abstraction',
    'diagram_error',
    'enumerate_diagrams',
    'abstraction_error',
    'global_inverse',
    'reconstruct',
    'information_loss',
    'evaluate',
    'Caps',
    'LearningProblem',
    'Candidate',
    'SolverResult',
    'solve',
    'pareto_front',
    'lambda_sweep',
    'load_model',
    'load_model_file',
    'dump_model',
    'load_abstraction',
    'load_abstraction_file',
    'dump_abstraction',
    'load_problem',
    'load_problem_file',
]
