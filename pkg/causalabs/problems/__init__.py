#!/usr/bin/env python3
"""
Problem classes for abstraction learning.

Importing this package registers every class of the hierarchy.
"""

from .base import ProblemClass
from .registry import (
    register_problem_class,
    get_problem_class,
    get_problem_class_names,
    create_problem_class,
)
from . import classes  # noqa: F401  (registers the built-in classes)

__all__ = [
    'ProblemClass',
    'register_problem_class',
    'get_problem_class',
    'get_problem_class_names',
    'create_problem_class',
]
