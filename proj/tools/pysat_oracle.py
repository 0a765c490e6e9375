#!/usr/bin/env python3
"""Reads a DIMACS CNF file and prints a SAT-competition verdict using CaDiCaL via python-sat."""

import sys

from pysat.formula import CNF
from pysat.solvers import Cadical153


def main() -> int:
    if len(sys.argv) != 2:
        print("usage: pysat_oracle.py FILE.cnf", file=sys.stderr)
        return 2
    cnf = CNF(from_file=sys.argv[1])
    with Cadical153(bootstrap_with=cnf.clauses) as solver:
        if not solver.solve():
            print("s UNSATISFIABLE")
            return 20
        model = solver.get_model() or []
    print("s SATISFIABLE")
    print("v " + " ".join(str(lit) for lit in model) + " 0")
    return 10


if __name__ == "__main__":
    sys.exit(main())
