#!/usr/bin/env python3
"""
Equilevel Verification Runner
-----------------------------
Runs the verification commands on the shipped CD1, CD2 and CD3 complexes
or on any .chc file.

Usage:
    python equilevel_cli.py betti builtin:CD3
    python equilevel_cli.py verify builtin:CD3:formulas
    python equilevel_cli.py reconcile builtin:CD3:formulas builtin:CD3:matrices
"""

import sys

from equilevel.cli import main

if __name__ == "__main__":
    sys.exit(main())
