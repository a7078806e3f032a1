"""Convergent alphabetic rewriting over free partially commutative semigroups.

Normal forms of a convergent alphabetic system are universal invariants, and
the Tutte-Grothendieck group is the free partially commutative group on the
irreducible letters. Built-in systems: deletion-contraction on multigraphs
(Tutte polynomial), Weyl normal ordering, PBW re-ordering, prefabs.
"""
from .convergence import (
    ConvergenceReport,
    Peak,
    certify_convergence,
    check_local_confluence,
    replay_counterexample,
    verify_weight_certificate,
)
from .errors import (
    DomainError,
    InputError,
    PreconditionError,
    ResourceError,
    TGRWError,
    UnsupportedOperation,
)
from .poly import BivarPoly
from .rewriting import Budgets, ReductionReport, Reducts, RewriteSystem, finite_system
from .tg import (
    GroupCallbacks,
    Presentation,
    TGElement,
    evaluate_trace,
    extend_exponents,
    extend_homomorphism,
    group_presentation,
    tg_inv,
    tg_mul,
    universal_invariant,
)
from .trace import CommutationAlphabet, Trace, canonicalize, concat, letter_count, supported_on

__version__ = "0.1.0"
