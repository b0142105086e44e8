"""Floating-point checks of the exact exponents: enumeration, Dani traces, Heisenberg words, level sets."""
