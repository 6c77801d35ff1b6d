"""Expert rules: evaluators, texts, Likert scale, strategy vectors."""
from .evaluators import (
    RuleContext,
    evaluate_rules,
    evaluate_rules_arrays,
    rule_catalog,
)
from .likert import (
    LIKERT_BOUNDARIES,
    LIKERT_KEYS,
    likert_key,
    parse_likert_key,
    quantize_likert,
)
from .strategy import (
    STRATEGIES,
    W_DEFENSIVE,
    W_OFFENSIVE,
    split_value_difficulty,
    strategy_value,
    strategy_vectors,
)
from .texts import (
    DIFFICULTY_IDS,
    N_RULES,
    RULE_SHORT_NAMES,
    RULE_TEXTS,
    VALUE_IDS,
    rule_category,
)

__all__ = [
    "RuleContext", "evaluate_rules", "evaluate_rules_arrays", "rule_catalog",
    "LIKERT_BOUNDARIES", "LIKERT_KEYS", "likert_key", "parse_likert_key",
    "quantize_likert", "STRATEGIES", "W_DEFENSIVE", "W_OFFENSIVE",
    "split_value_difficulty", "strategy_value", "strategy_vectors",
    "DIFFICULTY_IDS", "N_RULES", "RULE_SHORT_NAMES", "RULE_TEXTS",
    "VALUE_IDS", "rule_category",
]
