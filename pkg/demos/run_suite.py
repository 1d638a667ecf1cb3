"""Run a built-in experiment through the command line layer and summarize it.

Equivalent to ``lorentzcomp --experiment space-form-equalities --format tabular``.

    python demos/run_suite.py [experiment-id]
"""

import sys

from lorentzcomp.cli import main

exp = sys.argv[1] if len(sys.argv) > 1 else "space-form-equalities"
sys.exit(main(["--experiment", exp, "--format", "tabular"]))
