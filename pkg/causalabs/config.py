#!/usr/bin/env python3
"""
Configuration defaults and JSON config loading.
"""

import json
import logging
import os

from .errors import ConfigError

logger = logging.getLogger(__name__)

WORKERS_ENV = 'CAUSALABS_WORKERS'

DEFAULT_CONFIG = {
    'lambda': 1.0,
    'budget': 1_000_000,
    'top_k': 10,
    'precision': 6,
    'workers': 1,
    'max_variables': 2,
    'max_cardinality': 2,
    'golden_tolerance': 5e-3,
    'exact_tolerance': 1e-9,
}

_TYPES = {
    'lambda': (int, float),
    'budget': int,
    'top_k': int,
    'precision': int,
    'workers': int,
    'max_variables': int,
    'max_cardinality': int,
    'golden_tolerance': (int, float),
    'exact_tolerance': (int, float),
}


def load_config(config_file=None, environ=None):
    """Load the configuration.

    The built-in defaults are updated with the JSON file (if any), then the
    worker count is taken from the environment when set.

    Args:
        config_file: Optional path to a JSON configuration file
        environ: Mapping used instead of ``os.environ`` (for tests)

    Returns:
        Configuration dictionary

    Raises:
        ConfigError: if a value has the wrong type
    """
    config = dict(DEFAULT_CONFIG)
    environ = os.environ if environ is None else environ

    if config_file:
        logger.info('Loading config from: %s', config_file)
        try:
            with open(config_file, 'r', encoding='utf-8') as f:
                user_config = json.load(f)
        except (IOError, json.JSONDecodeError) as e:
            logger.error('Error loading config file: %s', e)
        else:
            if not isinstance(user_config, dict):
                logger.error('Config file %s does not hold a JSON object; using defaults', config_file)
                user_config = {}
            for key in sorted(set(user_config) - set(DEFAULT_CONFIG)):
                logger.warning('Ignoring unknown config key %r', key)
                user_config.pop(key)
            config.update(user_config)
            logger.info('Config loaded successfully')
    else:
        logger.info('No config file specified, using defaults')

    if environ.get(WORKERS_ENV):
        try:
            config['workers'] = int(environ[WORKERS_ENV])
        except ValueError:
            raise ConfigError(f'{WORKERS_ENV} must be an integer, got {environ[WORKERS_ENV]!r}') from None

    for key, expected in _TYPES.items():
        value = config[key]
        if isinstance(value, bool) or not isinstance(value, expected):
            raise ConfigError(f'config value {key!r} has the wrong type: {value!r}')
    logger.debug('Config: %s', config)
    return config
