"""
Empirical check tests.

- test_enumeration.py: boxes, minima, slope fits
- test_dani.py: frames, lattice reduction, systole traces
- test_heisenberg.py: group law and word minima
- test_remez.py: quadratic level sets
"""
