"""rankkit: rank and compression functions over step-budgeted computation."""

from .compute import BudgetedFn, DIVERGE, Outcome, REJECT, dovetail, native, run
from .checkers import (
    OneTTReduction,
    RankOracle,
    VerifyReport,
    check_1tt,
    check_compression,
    check_ranking,
    oracle_ranker,
    true_rank,
)
from .machines import enumerate_machines, halting_probe, machine_at
from .sets import (
    CoReSet,
    Enumerator,
    FiniteTable,
    NO,
    SetSpec,
    UNKNOWN,
    YES,
    coK_cylinder_set,
    complement,
    cylinderize,
    interleave4,
    join_hat,
    member,
)
from .strings import lex_rank, lex_unrank, pair, successor, unpair

__version__ = "0.1.0"
