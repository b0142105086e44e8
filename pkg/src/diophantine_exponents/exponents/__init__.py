"""Quasi-norm volume functions, pencils, the ratio maximizer and closed-form exponents."""
