"""
Ambient stack tests.

- test_utils.py: rational codec, sampler, thread helpers, errors
- test_config.py: environment-backed configuration
"""
