#!/usr/bin/env python3
"""
Abstraction Learner.

This script runs the causalabs command line: model queries, abstraction
assessment, abstraction learning and the reference value report.

Usage:
    ./abstraction-learner.py joint causalabs/fixtures/model_M.json
    ./abstraction-learner.py assess causalabs/fixtures/model_M.json causalabs/fixtures/model_Mprime.json causalabs/fixtures/abs_beta.json --lambda 1
    ./abstraction-learner.py learn causalabs/fixtures/problem_completion.json --pareto
    ./abstraction-learner.py report-paper --debug 1
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from causalabs.cli import main

if __name__ == "__main__":
    sys.exit(main())
