#!/usr/bin/env python3
"""
Problem-class registry.

Each row of the abstraction-learning hierarchy is a ProblemClass subclass
registered under the name used in problem documents ("assessment",
"completion", ...). This module provides functions for registering and
creating them.
"""

import logging

from ..errors import ProblemError

logger = logging.getLogger(__name__)

# Dictionary to store all registered problem classes
_PROBLEM_CLASSES = {}


def register_problem_class(name):
    """Class decorator registering a ProblemClass subclass under ``name``.

    Args:
        name: The ``problem_class`` value that selects the class in problem documents

    Returns:
        The decorator, which returns the class unchanged apart from ``problem_name``
    """
    def _register(cls):
        cls.problem_name = name
        _PROBLEM_CLASSES[name] = cls
        logger.debug('registered problem class %s', name)
        return cls

    return _register


def get_problem_class(name):
    """Get a problem class by name, or None if not registered."""
    return _PROBLEM_CLASSES.get(name)


def get_problem_class_names():
    """Sorted names of all registered problem classes."""
    return sorted(_PROBLEM_CLASSES.keys())


def create_problem_class(name, problem):
    """Create the strategy object that enumerates candidates for ``problem``.

    Raises:
        ProblemError: if ``name`` is not registered
    """
    cls = get_problem_class(name)
    if cls is None:
        raise ProblemError(
            f'unknown problem class {name!r}; expected one of {", ".join(get_problem_class_names())}')
    return cls(problem)
