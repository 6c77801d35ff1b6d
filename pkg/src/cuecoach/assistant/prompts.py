"""Prompt construction for the LM-backed recommender, explainer, and rule-relevance probes.

Every prompt is a (system, user) pair built from the same structured
chain-of-thought template: the system text declares the input/output fields
and embeds a fixed task description; the user text carries the field values.
Fields are framed by ``[[ ## <name> ## ]]`` markers and the model is asked to
finish with ``[[ ## completed ## ]]``.

The task description texts are load-bearing: tests pin them byte-for-byte
against golden files, so edit them only together with the goldens.
"""

from __future__ import annotations

from typing import Sequence, Tuple

__all__ = [
    "COMPLETED_MARKER",
    "EXPLAINER_INPUT_FIELDS",
    "EXPLAINER_OUTPUT_FIELDS",
    "EXPLAINER_SYSTEM",
    "EXPLAINER_TASK",
    "REASONING_FIELD",
    "RECOMMENDER_INPUT_FIELDS",
    "RECOMMENDER_OUTPUT_FIELDS",
    "RECOMMENDER_SYSTEM",
    "RECOMMENDER_TASK",
    "RELEVANCE_INPUT_FIELDS",
    "RELEVANCE_OUTPUT_FIELDS",
    "RELEVANCE_WITHOUT_R_SYSTEM",
    "RELEVANCE_WITHOUT_R_TASK",
    "RELEVANCE_WITH_R_SYSTEM",
    "RELEVANCE_WITH_R_TASK",
    "field_marker",
    "render_system",
    "render_user",
]

REASONING_FIELD = "reasoning"
COMPLETED_MARKER = "[[ ## completed ## ]]"

# ---------------------------------------------------------------------------
# task descriptions (golden: tests/golden/*.txt)
# ---------------------------------------------------------------------------

RECOMMENDER_TASK = 'You are tasked with suggesting shots to make in a game of pool/billiards. Based on the message you recieve and the current state of the pool table, you must suggest shots to make that satisfy the users goal. \n\nThe IDs of the pockets are: left top (lt) at (0,2), right top (rt) at (1,2), left center (lc) at (0,1), right center (rc) at (1,1), left bottom (lb) at (0,0), right bottom (rb) at (1,0).\n\nThe description of a shot is created using the events that you wish to occur, using the notation: "BALL-BALL-X-Y" for a collision between two balls X and Y, "BALL-POCKET-X-Z" for a ball X falling into pocket Z, and "BALL-CUSHION-X" for a ball X colliding with a cushion (note there is no second argument needed). Output the events of each shot as a comma separated list, with each shot on a new numbered line, for example:\n1. BALL-BALL-cue-blue, BALL-CUSHION-blue,BALL-POCKET-blue-lb\n2. BALL-BALL-cue-red, BALL-BALL-red-blue, BALL-POCKET-red-rc \n3. ... \nN. BALL-CUSHION-cue, BALL-CUSHION-cue, BALL-BALL-cue-yellow, BALL-POCKET-yellow-lt\n\nAn example of the reasoning to perform:\n```\nThe blue ball is near the rc pocket, so we should aim for the rc pocket. But it looks like the red ball is between the cue ball and blue ball based on the following coordinates ... We\'ll need to bounce the cue ball off of a cushion ...\n```\n\nand an example response:\n```\nSTRATEGY: offensive\nDIFFICULTY: easy\nSHOTS:\n1. BALL-BALL-cue-blue, BALL-CUSHION-blue, BALL-POCKET-blue-rc\n2. BALL-CUSHION-cue, BALL-BALL-cue-red, BALL-POCKET-red-rt\n3. BALL-CUSHION-cue, BALL-CUSHION-cue, BALL-BALL-cue-red, BALL-POCKET-red-rt\n```\nor \n```\nSTRATEGY: none\nDIFFICULTY: medium\nSHOTS:\n1. BALL-BALL-cue-red, BALL-CUSHION-red, BALL-BALL-red-blue, BALL-POCKET-red-rt\n2. BALL-BALL-cue-blue, BALL-CUSHION-blue, BALL-POCKET-blue-rb\n3. BALL-CUSHION-cue, BALL-BALL-cue-yellow, BALL-POCKET-yellow-lt\n```\n\nThese are the rules that you MUST follow:\n    - Be creative in your choice of events\n    - Do not repeat shots\n    - DO NOT suggest a shot that fouls by\n        1) potting a ball that is not a target ball, \n        2) hitting a non-target ball first, \n        3) or by potting the cue ball.\n\nUse the Reasoning field to briefly think of what makes a good pool shot, and why you are choosing the shot you choose.'

EXPLAINER_TASK = "You are tasked with explaining the pros and cons of a particular shot in a game of pool using the following information:\n    - The target balls, i.e. the balls that should be potted, are 'blue', 'red', and 'yellow', and not 'green', 'black', or 'pink'\n    - The shot parameters are provided, and are defined as:\n        - V0: the initial velocity of the cue ball\n        - theta: The angle of inclination of the cue stick\n        - phi: The angle of rotation of the cue stick\n        - a: The x offset of the cue stick\n        - b: The y offset of the cue stick\n    - The exact (x,y) coordinates of each ball and pocket on the table\n    - The events that occurred in the shot, and their positions\n    - The value rules and weights\n    - The difficulty rules and weights\n\nYou must return an explanation of the pros and cons of the shot, that takes into account both the value and difficulty of the shot, with regard to the rules provided. You are also given how each rule applies to the current state and shot, as a statement:\n    - None\n    - Low \n    - Medium\n    - High\n    - Extremely high\nImagine you are explaining to a curious student who wants to learn more about the game of pool. Make it seem natural and conversational, while also thorough and full of detail, and be sure to not refer to numbers of the rules and weights, you must rewrite them into something more natural. Also, be sure to explain any pool specific words used. Above all, keep the explanation short and concise, no more than 10 lines."

RELEVANCE_WITH_R_TASK = "You are tasked with providing estimations of the applicability of some value and difficulty rules to a particular shot in a game of pool, using the following information:\n    - The target balls, i.e. the balls that should be potted, are 'blue', 'red', and 'yellow'\n    - The shot parameters are provided, and are defined as:\n        - V0: the initial velocity of the cue ball\n        - theta: The angle of inclination of the cue stick\n        - phi: The angle of rotation of the cue stick\n        - a: The x offset of the cue stick\n        - b: The y offset of the cue stick\n    - The exact (x,y) coordinates of each ball and pocket on the table\n    - The events that occurred in the shot, and their positions\n    - The value rules and weights\n    - The difficulty rules and weights\n\nYou must return an estimate of the applicability of each of the value and difficulty rules.\nThe value and difficulty rules' weights are percentages that represent the extent to which a given rule applies to the current state and shot.\nTo convert a given rule's percentage weight X into a valid estimation of the applicability of the given rule to the current state and shot, proceed as follows:\n    - if 0 <= X < 12.5, then the given rule's applicability is very low ;\n    - if 12.5 <= X < 25, then the given rule's applicability is low ;\n    - if 25 <= X < 37.5, then the given rule's applicability is moderately low ;\n    - if 37.5 <= X < 62.5, then the given rule's applicability is moderate ;\n    - if 62.5 <= X < 75, then the given rule's applicability is moderately high ;\n    - if 75 <= X < 87.5, then the given rule's applicability is high ;\n    - if 87.5 <= X <= 100, then the given rule's applicability is very high."

RELEVANCE_WITHOUT_R_TASK = "You are tasked with providing estimations of the applicability of some value and difficulty rules to a particular shot in a game of pool, using the following information:\n    - The target balls, i.e. the balls that should be potted, are 'blue', 'red', and 'yellow'\n    - The shot parameters are provided, and are defined as:\n        - V0: the initial velocity of the cue ball\n        - theta: The angle of inclination of the cue stick\n        - phi: The angle of rotation of the cue stick\n        - a: The x offset of the cue stick\n        - b: The y offset of the cue stick\n    - The exact (x,y) coordinates of each ball and pocket on the table\n    - The events that occurred in the shot, and their positions\n    - The value rules\n    - The difficulty rules\n\nYou must return an estimate of the applicability of each of the value and difficulty rules."

# ---------------------------------------------------------------------------
# field declarations
# ---------------------------------------------------------------------------

# (name, description) pairs; order is the order they appear in the prompt
RECOMMENDER_INPUT_FIELDS: Tuple[Tuple[str, str], ...] = (
    ("balls", "the IDs and exact (x, y) coordinates of each ball currently on the table"),
    ("targets", "the IDs of the balls that must be pocketed to win, and of the ones that must be avoided"),
    ("message", "a message from a user to inform the decision-making process on what shots to suggest"),
    ("n_shots", "the number of shots to return"),
)
RECOMMENDER_OUTPUT_FIELDS: Tuple[Tuple[str, str], ...] = (
    ("response", "the strategy, the difficulty, and the train of events for each suggested shot"),
)

EXPLAINER_INPUT_FIELDS: Tuple[Tuple[str, str], ...] = (
    ("shot_params", "the shot parameters (V0, theta, phi, a, b)"),
    ("board_coordinates", "the exact (x, y) coordinates of each ball and pocket on the table"),
    ("events", "the events that occurred in the shot, and their positions"),
    ("value_rules", "the value rules and weights"),
    ("difficulty_rules", "the difficulty rules and weights"),
)
EXPLAINER_OUTPUT_FIELDS: Tuple[Tuple[str, str], ...] = (
    ("explanation", "the explanation of the pros and cons of the shot"),
)

RELEVANCE_INPUT_FIELDS: Tuple[Tuple[str, str], ...] = EXPLAINER_INPUT_FIELDS
RELEVANCE_OUTPUT_FIELDS: Tuple[Tuple[str, str], ...] = (
    ("estimations", "one line per rule, '<rule name>: <likert key>'"),
)


def field_marker(name: str) -> str:
    return "[[ ## " + name + " ## ]]"


def _numbered(fields: Sequence[Tuple[str, str]]) -> str:
    return "\n".join(
        "%d. `%s` (str): %s" % (i, name, desc)
        for i, (name, desc) in enumerate(fields, 1)
    )


def render_system(
    input_fields: Sequence[Tuple[str, str]],
    output_fields: Sequence[Tuple[str, str]],
    task_description: str,
) -> str:
    """Render the system prompt: field declarations, interaction structure, objective."""
    reasoning = (REASONING_FIELD, "the chain of thought behind the response")
    out_fields = (reasoning,) + tuple(output_fields)
    structure = []
    for name, _ in tuple(input_fields) + out_fields:
        structure.append(field_marker(name) + "\n{" + name + "}")
    structure.append(COMPLETED_MARKER)
    return (
        "Your input fields are:\n"
        + _numbered(input_fields)
        + "\n\nYour output fields are:\n"
        + _numbered(out_fields)
        + "\n\nAll interactions will be structured in the following way, with the appropriate values filled in.\n\n"
        + "\n\n".join(structure)
        + "\n\nIn adhering to this structure, your objective is: \n"
        + task_description
    )


def render_user(
    values: Sequence[Tuple[str, str]],
    output_fields: Sequence[Tuple[str, str]],
) -> str:
    """Render the user prompt: one block per input value, then the response instructions."""
    blocks = [field_marker(name) + "\n" + value for name, value in values]
    chain = ["`" + field_marker(REASONING_FIELD) + "`"]
    chain += ["`" + field_marker(name) + "`" for name, _ in output_fields]
    return (
        "\n\n".join(blocks)
        + "\n\nRespond with the corresponding output fields, starting with the field "
        + ", then ".join(chain)
        + ", and then ending with the marker for `"
        + COMPLETED_MARKER
        + "`."
    )


RECOMMENDER_SYSTEM = render_system(
    RECOMMENDER_INPUT_FIELDS, RECOMMENDER_OUTPUT_FIELDS, RECOMMENDER_TASK
)
EXPLAINER_SYSTEM = render_system(
    EXPLAINER_INPUT_FIELDS, EXPLAINER_OUTPUT_FIELDS, EXPLAINER_TASK
)
RELEVANCE_WITH_R_SYSTEM = render_system(
    RELEVANCE_INPUT_FIELDS, RELEVANCE_OUTPUT_FIELDS, RELEVANCE_WITH_R_TASK
)
RELEVANCE_WITHOUT_R_SYSTEM = render_system(
    RELEVANCE_INPUT_FIELDS, RELEVANCE_OUTPUT_FIELDS, RELEVANCE_WITHOUT_R_TASK
)
