#!/usr/bin/env python3
"""
JSON documents for models, abstractions and learning problems.

Every document is checked against the schema shipped in ``causalabs/schema``
before it is interpreted. Matrices are row lists. Numbers are written with 12 significant digits
when that is exact and in full otherwise, so loading a dumped document gives
back the same values. See docs/file-format.md for the grammar.
"""

import json
import logging
import re
from functools import lru_cache
from pathlib import Path

import numpy as np
from jsonschema import Draft7Validator

from .abstraction import Abstraction, ensure_valid_abstraction
from .errors import ModelFormatError
from .scm import Mechanism, Scm, VariableSpec, ensure_valid
from .solver import Caps, LearningProblem

logger = logging.getLogger(__name__)

FORMAT_VERSION = '1.0'
SCHEMA_DIR = Path(__file__).parent / 'schema'
FIXTURE_DIR = Path(__file__).parent / 'fixtures'

_FLAT_ARRAY = re.compile(r'\[([^\[\]{}"]*)\]')


def fixture_path(name):
    """Path of a bundled fixture document."""
    return FIXTURE_DIR / name


@lru_cache(maxsize=None)
def _validator(kind):
    with open(SCHEMA_DIR / f'{kind}.schema.json', 'r', encoding='utf-8') as f:
        return Draft7Validator(json.load(f))


def _parse(text, kind):
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f'invalid JSON in {kind} document: {e.msg}', e.lineno, e.colno) from None
    errors = sorted(_validator(kind).iter_errors(document),
                    key=lambda error: [str(part) for part in error.absolute_path])
    if errors:
        messages = []
        for error in errors:
            where = '/'.join(str(part) for part in error.absolute_path) or '<document>'
            messages.append(f'{kind} document at {where}: {error.message}')
        raise ModelFormatError('; '.join(messages))
    return document


def json_number(value):
    """The value at 12 significant digits, or in full when 12 digits would change it."""
    value = float(value)
    short = float(f'{value:.12g}')
    return short if short == value else value


def _render(document):
    text = json.dumps(document, indent=2, ensure_ascii=False)
    # Keep innermost number lists on one line.
    text = _FLAT_ARRAY.sub(lambda m: '[' + ', '.join(m.group(1).split()).replace(',,', ',') + ']', text)
    return text + '\n'


def _matrix(rows, label):
    widths = {len(row) for row in rows}
    if len(widths) != 1:
        raise ModelFormatError(f'{label}: matrix rows have different lengths {sorted(widths)}')
    return np.array(rows, dtype=float)


# Models

def scm_from_document(document):
    """Build an Scm from an already schema-checked document (no semantic validation)."""
    variables = tuple(VariableSpec(v['name'], tuple(v['outcomes'])) for v in document['variables'])
    mechanisms = tuple(
        Mechanism(m['target'], tuple(m['parents']), _matrix(m['matrix'], f'φ_{m["target"]}'))
        for m in document['mechanisms'])
    return Scm(variables, mechanisms)


def parse_model(text):
    """Parse a model document without checking the model's invariants."""
    return scm_from_document(_parse(text, 'model'))


def load_model(text):
    """Parse and validate a model document.

    Raises:
        ModelFormatError: on JSON or schema errors
        ScmValidationError: if the model violates an invariant
    """
    return ensure_valid(parse_model(text))


def load_model_file(path):
    path = Path(path)
    logger.debug('Loading model from %s', path)
    return load_model(path.read_text(encoding='utf-8'))


def model_to_document(scm, name=None):
    document = {'format_version': FORMAT_VERSION}
    if name:
        document['name'] = name
    document['variables'] = [{'name': v.name, 'outcomes': list(v.outcomes)} for v in scm.variables]
    document['mechanisms'] = [
        {
            'target': m.target,
            'parents': list(m.parents),
            'matrix': [[json_number(x) for x in row] for row in m.matrix.tolist()],
        }
        for m in scm.mechanisms
    ]
    return document


def dump_model(scm, name=None):
    return _render(model_to_document(scm, name))


# Abstractions

def _resolve_model(ref, directory):
    if isinstance(ref, dict):
        document = _parse(json.dumps(ref), 'model')
        return ensure_valid(scm_from_document(document))
    return load_model_file(Path(directory) / ref)


def _varmap(entries, label):
    varmap = {}
    for entry in entries:
        if entry['from'] in varmap:
            raise ModelFormatError(f'{label}: varmap maps {entry["from"]} twice')
        varmap[entry['from']] = entry['to']
    return varmap


def _outcome_maps(entries, label):
    maps = {}
    for entry in entries:
        if entry['target'] in maps:
            raise ModelFormatError(f'{label}: two outcome maps for {entry["target"]}')
        maps[entry['target']] = _matrix(entry['matrix'], f'α_{{{entry["target"]}}}')
    return maps


def abstraction_from_document(document, base, high):
    abstraction = Abstraction(
        base=base,
        high=high,
        relevant=tuple(document['relevant']),
        varmap=_varmap(document['varmap'], 'abstraction'),
        outcome_maps=_outcome_maps(document['outcome_maps'], 'abstraction'),
    )
    return ensure_valid_abstraction(abstraction)


def load_abstraction(text, base, high):
    """Parse an abstraction document against the given models.

    Raises:
        ModelFormatError: on JSON or schema errors
        AbstractionValidationError: if names or dimensions do not fit the models
    """
    return abstraction_from_document(_parse(text, 'abstraction'), base, high)


def load_abstraction_file(path, base=None, high=None):
    """Load an abstraction, resolving ``base_ref``/``high_ref`` when models are not given."""
    path = Path(path)
    document = _parse(path.read_text(encoding='utf-8'), 'abstraction')
    if base is None:
        if 'base_ref' not in document:
            raise ModelFormatError(f'{path}: no base model given and no base_ref')
        base = _resolve_model(document['base_ref'], path.parent)
    if high is None:
        if 'high_ref' not in document:
            raise ModelFormatError(f'{path}: no high model given and no high_ref')
        high = _resolve_model(document['high_ref'], path.parent)
    return abstraction_from_document(document, base, high)


def abstraction_to_document(abstraction, base_ref=None, high_ref=None):
    document = {'format_version': FORMAT_VERSION}
    document['base_ref'] = base_ref if base_ref is not None else model_to_document(abstraction.base)
    document['high_ref'] = high_ref if high_ref is not None else model_to_document(abstraction.high)
    document['relevant'] = list(abstraction.relevant)
    document['varmap'] = [{'from': name, 'to': abstraction.varmap[name]} for name in abstraction.relevant]
    document['outcome_maps'] = [
        {'target': name, 'matrix': abstraction.outcome_maps[name].astype(int).tolist()}
        for name in abstraction.high.variable_names
    ]
    return document


def dump_abstraction(abstraction, base_ref=None, high_ref=None):
    """Serialize an abstraction; models are inlined unless refs are given."""
    return _render(abstraction_to_document(abstraction, base_ref, high_ref))


def dump_candidate(candidate, rank=None):
    """Abstraction document with inline models plus the candidate's scores."""
    document = abstraction_to_document(candidate.abstraction)
    report = candidate.report.as_dict()
    report['encoding'] = candidate.encoding
    if rank is not None:
        report['rank'] = rank
    document['report'] = report
    return document


# Problems

def load_problem(text, base_dir='.', defaults=None):
    """Build a LearningProblem from a problem document.

    Args:
        text: Document text
        base_dir: Directory that relative model refs are resolved against
        defaults: Configuration dictionary supplying lambda, budget, top_k and
            caps the document leaves out
    """
    from .config import DEFAULT_CONFIG

    defaults = defaults or DEFAULT_CONFIG
    document = _parse(text, 'problem')
    base = _resolve_model(document['base_ref'], base_dir)
    givens = document.get('givens', {})
    high = _resolve_model(givens['high_ref'], base_dir) if 'high_ref' in givens else None
    caps = document.get('caps', {})
    return LearningProblem(
        base=base,
        problem_class=document['problem_class'],
        high=high,
        relevant=givens.get('relevant'),
        varmap=_varmap(givens['varmap'], 'problem') if 'varmap' in givens else None,
        outcome_maps=_outcome_maps(givens.get('outcome_maps', []), 'problem'),
        high_variables=[VariableSpec(v['name'], tuple(v['outcomes'])) for v in givens['high_variables']]
        if 'high_variables' in givens else None,
        high_edges=givens.get('high_edges'),
        high_variable_names=givens.get('high_variable_names'),
        caps=Caps(
            max_variables=caps.get('max_variables', defaults['max_variables']),
            max_cardinality=caps.get('max_cardinality', defaults['max_cardinality']),
            budget=document.get('budget', defaults['budget']),
        ),
        lam=document.get('lambda', defaults['lambda']),
        top_k=document.get('top_k', defaults['top_k']),
    )


def load_problem_file(path, defaults=None):
    path = Path(path)
    return load_problem(path.read_text(encoding='utf-8'), path.parent, defaults)
