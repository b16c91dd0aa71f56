"""Program and input generation plus the executable property suites."""

from .config import DEFAULT_WEIGHTS, GenConfig
from .corpus import Seed, corpus
from .gen import CGGen, FGGen, Uninhabitable, gen_typed
from .inputs import InputPair, Inputs, gen_inputs, gen_leq_chain, gen_leq_inputs
from .report import (
    FAIL, INCONCLUSIVE, PASS, VACUOUS_ABORT, VACUOUS_TIMEOUT, VERDICTS, SuiteReport, TrialReport,
)
from .runner import SUITES, run_suite
from .suites import MUTANTS, check_confinement, check_pc_raise, check_tini, check_valid_invariant
