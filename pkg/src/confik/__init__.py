"""Interactive feature-model configuration with safe auto-completion.

The package splits into a propositional core (``logic``), the feature-model
front end (``model``), minimal-model reasoning (``reasoning``), the
interactive session engine (``engine``), a finite-domain generalization under
preference orders (``osd``), an experiment harness (``simulate``), and the
CLI / HTTP surfaces (``cli``, ``service``).
"""

from .engine import (
    Decision,
    Session,
    apply_decision,
    complete_blind,
    export_script,
    is_complete,
    new_session,
    replay_script,
    retract,
    shopping_principle,
)
from .errors import (
    AlreadyAssigned,
    ConfikError,
    InconsistentDecision,
    ModelSemanticError,
    ModelSyntaxError,
    NoSolutions,
    NotAUserDecision,
    PreferenceError,
    TooLarge,
    UnsatContext,
    UnsatInput,
    UnsatModel,
)
from .logic import (
    Assignment,
    ClauseSet,
    Expr,
    Lit,
    VarTable,
    all_models,
    count_models,
    entails,
    from_dimacs,
    solve,
    to_cnf,
    to_dimacs,
)
from .model import FeatureModel, parse_model, print_model, synthesize_model, translate
from .osd import (
    OsdProblem,
    ValueClassification,
    as_boolean_osd,
    classify_values,
    optimal_solutions,
    parse_osd,
    solutions,
)
from .reasoning import (
    DispensabilityReport,
    MinimalModelSet,
    dispensable_brute,
    dispensable_vars,
    enumerate_minimal_models,
    free_of_negation,
    is_deselectable,
    maximal_deselectable_sets,
    settled_status,
)
from .simulate import SimulationStats, simulate_manual

__version__ = "0.1.0"
