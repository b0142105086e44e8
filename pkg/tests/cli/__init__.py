"""
Command-line and self-test tests.

- test_cli.py: subcommands, reports and exit codes
- test_selftest.py: acceptance criteria and their failure reporting
"""
