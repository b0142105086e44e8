"""
Exponent tests.

- test_repthy.py: number theory, Young diagrams, closed-form exponents
- test_pencil.py: volume functions, pencils, the ratio maximizer
"""
