#!/usr/bin/env python3
"""
Reproduction of the worked example's reference values.

The manifest (fixtures/golden.json) lists every check: which fixtures it
reads, which quantity it computes and the expected value with its tolerance.
Objective checks are recomputed for the requested lambda.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .abstraction import (
    abstraction_error,
    component_inverse,
    diagram_error,
    evaluate,
    global_inverse,
    information_loss,
    reconstruct,
)
from .config import DEFAULT_CONFIG
from .errors import CausalAbstractionError, ConfigError, ModelFormatError
from .modelio import FIXTURE_DIR, load_abstraction_file, load_model_file
from .scm import conditional, joint_distribution, marginal, virtual_mechanism

logger = logging.getLogger(__name__)

MANIFEST = FIXTURE_DIR / 'golden.json'


@dataclass(frozen=True)
class GoldenCheck:
    id: str
    quantity: str
    spec: dict
    expected: object
    tolerance: float
    note: str = ''

    def expected_for(self, lam):
        if self.quantity == 'objective':
            return self.expected['e'] + lam * self.expected['i']
        return self.expected

    def tolerance_for(self, lam):
        if self.quantity == 'objective':
            return self.tolerance * (1.0 + lam)
        return self.tolerance


@dataclass(frozen=True)
class CheckResult:
    check: GoldenCheck
    expected: object
    computed: object
    tolerance: float
    passed: bool
    error: str = ''


def _tolerance(value, config):
    if isinstance(value, str):
        key = f'{value}_tolerance'
        if key not in config:
            raise ConfigError(f'unknown tolerance name {value!r}')
        return float(config[key])
    return float(value)


def load_manifest(path=MANIFEST, config=None):
    """Read the golden checks.

    A tolerance may be a number or the name of a configured tolerance
    (``"exact"`` or ``"golden"``); a missing tolerance means ``"golden"``.
    """
    config = config or DEFAULT_CONFIG
    with open(path, 'r', encoding='utf-8') as f:
        document = json.load(f)
    checks = []
    for entry in document['checks']:
        entry = dict(entry)
        checks.append(GoldenCheck(
            id=entry.pop('id'),
            quantity=entry.pop('quantity'),
            expected=entry.pop('expected'),
            tolerance=_tolerance(entry.pop('tolerance', 'golden'), config),
            note=entry.pop('note', ''),
            spec=entry,
        ))
    return checks


def _compute(check, fixture_dir, lam, cache):
    spec = check.spec

    def model():
        key = ('model', spec['model'])
        if key not in cache:
            cache[key] = load_model_file(fixture_dir / spec['model'])
        return cache[key]

    def abstraction():
        key = ('abstraction', spec['abstraction'])
        if key not in cache:
            cache[key] = load_abstraction_file(fixture_dir / spec['abstraction'])
        return cache[key]

    quantity = check.quantity
    if quantity == 'joint':
        return joint_distribution(model())
    if quantity == 'marginal':
        return marginal(model(), spec['vars'])
    if quantity == 'conditional':
        return conditional(model(), spec['targets'], spec['givens'])
    if quantity == 'virtual':
        return virtual_mechanism(model(), spec['sources'], spec['targets'])
    if quantity == 'diagram_error':
        return diagram_error(abstraction(), spec['sources'], spec['targets']).value
    if quantity == 'abstraction_error':
        return abstraction_error(abstraction())
    if quantity == 'information_loss':
        return information_loss(abstraction())
    if quantity == 'reconstruction':
        return reconstruct(abstraction())
    if quantity == 'global_inverse':
        return global_inverse(abstraction())
    if quantity == 'component_inverse':
        return component_inverse(abstraction().outcome_maps[spec['target']])
    if quantity == 'objective':
        return evaluate(abstraction(), lam).objective
    raise ModelFormatError(f'unknown golden quantity {quantity!r}')


def run_checks(fixture_dir=FIXTURE_DIR, lam=1.0, manifest=None, config=None):
    """Compute every golden check against the fixtures in ``fixture_dir``.

    The manifest is read from ``fixture_dir`` when it has one, otherwise the
    bundled manifest is used. A check whose computation raises a package
    error fails instead of aborting the run.
    """
    fixture_dir = Path(fixture_dir)
    if manifest is None:
        path = fixture_dir / MANIFEST.name
        manifest = load_manifest(path if path.exists() else MANIFEST, config)
    cache = {}
    results = []
    for check in manifest:
        expected = check.expected_for(lam)
        tolerance = check.tolerance_for(lam)
        try:
            computed = _compute(check, fixture_dir, lam, cache)
        except (CausalAbstractionError, OSError) as e:
            logger.warning('%s: %s', check.id, e)
            results.append(CheckResult(check, expected, None, tolerance, False, str(e)))
            continue
        computed_array = np.asarray(computed, dtype=float)
        expected_array = np.asarray(expected, dtype=float)
        passed = (computed_array.shape == expected_array.shape
                  and float(np.max(np.abs(computed_array - expected_array), initial=0.0)) <= tolerance)
        logger.debug('%s: computed %s, expected %s', check.id, computed, expected)
        results.append(CheckResult(check, expected, computed, tolerance, passed))
    return results
