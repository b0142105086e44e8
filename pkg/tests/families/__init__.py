"""
Manifold family tests.

- test_factory.py: registry and construction
- test_lie.py: relatively free evaluation maps
- test_families.py: Veronese, wedge and explicit JSON families
"""
