"""Shared test configuration: a reproducible hypothesis profile."""

from hypothesis import settings

# derandomize makes every run explore the same cases, so the suite result
# is a function of the code alone; deadlines are disabled because numeric
# cases have legitimate millisecond-scale spread under load
settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")
