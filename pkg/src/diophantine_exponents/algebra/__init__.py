"""Exact rational linear algebra, free Lie algebras and structure-constant Lie algebras."""
