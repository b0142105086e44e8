"""
Exact algebra tests.

- test_qlinalg.py: rational matrices, subspaces and flags
- test_freelie.py: Lyndon basis, brackets, BCH
- test_liealg.py: structure constants, lower central series, laws, metrics
"""
