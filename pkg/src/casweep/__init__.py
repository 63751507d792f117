"""Exact analysis of one-dimensional cellular automata as in-place sweeps."""

from .blockrule import (
    BlockRule,
    builtin_block_rule,
    count_representations,
    identity_block,
    representation_eval,
    reverse_block,
    sweep_range,
)
from .ca import (
    LocalRule,
    apply_ep,
    builtin_rule,
    compose,
    minimize_neighborhood,
    mirror,
    shift_compose,
    shift_rule,
)
from .closing import ClosingVerdict, left_closing_decide, right_closing_decide
from .core import (
    EpConfig,
    IntegrityError,
    ResourceCapError,
    ep_equal,
    ep_from_json,
    ep_to_json,
    ep_unzip,
    ep_zip,
    random_ep_config,
)
from .hierarchy import (
    Decomposition,
    DirectedSlider,
    Direction,
    NotBiClosingError,
    decompose_biclosing,
    shift_offset,
    verify_decomposition,
)
from .mealy import (
    MealyAutomaton,
    SweepOutcome,
    good_states,
    mealy_from_block,
    slider_sweeper_agree,
    sweeper_eval,
)
from .stairs import (
    NotLeftClosingError,
    SliderVerdict,
    enumerate_stairs,
    lambda_value,
    slider_exists,
)
from .synthesis import (
    NotSliderError,
    VerifyResult,
    stair_index,
    synthesize,
    verify_slider,
)
from .zautomata import (
    ZAutomaton,
    graph_mismatch_automaton,
    intersect,
    is_empty,
    is_function,
    is_slider_rule_for,
    member,
    nonempty_witness,
    project,
    slider_relation_automaton,
    sweeper_defines_function,
    sweeper_relation_automaton,
    trim,
)

__version__ = "0.1.0"

__all__ = [
    "BlockRule",
    "ClosingVerdict",
    "Decomposition",
    "DirectedSlider",
    "Direction",
    "EpConfig",
    "IntegrityError",
    "LocalRule",
    "MealyAutomaton",
    "NotBiClosingError",
    "NotLeftClosingError",
    "NotSliderError",
    "ResourceCapError",
    "SliderVerdict",
    "SweepOutcome",
    "VerifyResult",
    "ZAutomaton",
    "apply_ep",
    "builtin_block_rule",
    "builtin_rule",
    "compose",
    "count_representations",
    "decompose_biclosing",
    "enumerate_stairs",
    "ep_equal",
    "ep_from_json",
    "ep_to_json",
    "ep_unzip",
    "ep_zip",
    "good_states",
    "graph_mismatch_automaton",
    "identity_block",
    "intersect",
    "is_empty",
    "is_function",
    "is_slider_rule_for",
    "lambda_value",
    "left_closing_decide",
    "mealy_from_block",
    "member",
    "minimize_neighborhood",
    "mirror",
    "nonempty_witness",
    "project",
    "random_ep_config",
    "representation_eval",
    "reverse_block",
    "right_closing_decide",
    "shift_compose",
    "shift_offset",
    "shift_rule",
    "slider_exists",
    "slider_relation_automaton",
    "slider_sweeper_agree",
    "stair_index",
    "sweep_range",
    "sweeper_defines_function",
    "sweeper_eval",
    "sweeper_relation_automaton",
    "synthesize",
    "trim",
    "verify_decomposition",
    "verify_slider",
]
