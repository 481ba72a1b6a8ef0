# flake8: noqa
from .invariant import Invariant
from .population import Population, random_state
from .suites import available_invariants, build_invariants, raise_on_failure, run_suites
