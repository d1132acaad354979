"""Differential-testing workbench for tri-state validation rule engines."""

from ._core import (
    __version__,
    build_prompt,
    categorize_rule,
    completion_rate,
    evaluate_rule,
    kruskal_wallis,
    mutate_all_rules,
    mutate_rule,
    mutation_sites,
    oracle_tests,
    parse_llm_response,
    parse_rule,
    ref_validate,
    robustness_index,
    success_index,
    typecheck_rule,
    vda,
)

__all__ = [
    "__version__",
    "build_prompt",
    "categorize_rule",
    "completion_rate",
    "evaluate_rule",
    "kruskal_wallis",
    "mutate_all_rules",
    "mutate_rule",
    "mutation_sites",
    "oracle_tests",
    "parse_llm_response",
    "parse_rule",
    "ref_validate",
    "robustness_index",
    "success_index",
    "typecheck_rule",
    "vda",
]
