#!/usr/bin/env python3
"""Ground-state energy of an FCIDUMP file with PySCF's FCI solver.

usage: fcidump_fci.py FCIDUMP
"""
import sys

from pyscf import fci
from pyscf.tools import fcidump


def main():
    if len(sys.argv) != 2:
        sys.exit(__doc__.strip())
    d = fcidump.read(sys.argv[1])
    nelec = d["NELEC"]
    ms = d.get("MS2", 0)
    ne = ((nelec + ms) // 2, (nelec - ms) // 2)
    e, _ = fci.direct_spin1.kernel(d["H1"], d["H2"], d["NORB"], ne, ecore=d["ECORE"], conv_tol=1e-14)
    print("%.12f" % e)


if __name__ == "__main__":
    main()
