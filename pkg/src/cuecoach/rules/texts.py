"""The 29 expert rules: verbatim descriptions, short names, categories."""

RULE_TEXTS = {
    1: "Ball Groupings: Identify sets of two or more balls of the same type in close proximity that can be easily pocketed in sequence. These groupings increase the value of the table state as they allow for multiple shots without significant cue ball movement.",
    2: "Makable Regions: Assess areas on the table where balls can be pocketed without using kick or bank shots. Pay special attention to overlapping makable regions for multiple balls, as these areas offer the most versatility and shot options.",
    3: "Insurance Balls: Locate balls that can be easily pocketed from almost anywhere on the table. These serve as valuable backup options when positioning goes awry or when faced with a difficult layout.",
    4: "Break-up Opportunities: Evaluate clusters of balls that need separation. Shots that can break up these clusters while pocketing a ball or achieving good position are particularly valuable.",
    5: "Safety Opportunities: Identify chances to play defensive shots that leave the opponent in a difficult position. Good safety opportunities can be as valuable as offensive shots in many situations.",
    6: "Two-way Shot Possibilities: Look for shots that offer both offensive and defensive potential. These shots allow for pocketing a ball while also setting up a good defensive position if missed, providing strategic flexibility.",
    7: "Table Layout for Safeties: Assess the overall layout for defensive play. A valuable table state often includes options for effective safety plays if offensive shots become too risky.",
    8: "Multiple-ball Positions: Consider the arrangement of multiple balls that need to be pocketed in sequence. A valuable layout allows for natural progression from one ball to the next without difficult positional play.",
    9: "Avoidance Shots: Recognize balls that should be avoided to maintain a favourable layout or to leave the opponent in a difficult position. The ability to navigate around these balls adds value to the current state.",
    10: "Combination and Bank Shot Opportunities: While often more difficult, the presence of viable combination or bank shots can add value to a table state by providing additional options.",
    11: "Rail Proximity: Consider the position of balls near rails. While sometimes challenging, balls near rails can offer unique offensive or defensive opportunities.",
    12: "Scratch Potential: Evaluate the layout for potential scratches. A valuable table state minimizes the risk of scratch shots while maximizing scoring opportunities.",
    13: "Above all, prioritise shots that pot the most target balls.",
    14: "Distance: Shot difficulty increases with greater distances between the cue ball, object ball, and pocket. Longer shots require more precise aim and speed control.",
    15: "Cut Angle: Larger cut angles are more challenging than straight or small angle shots. The margin for error decreases as the cut angle increases.",
    16: "Obstacle Balls: The presence of other balls obstructing the path of the cue ball or object ball significantly increases shot difficulty. This may require more precise positioning or the use of advanced techniques.",
    17: "Rail Contact: Shots requiring the cue ball to hit a rail first (like rail cut shots) are more complex due to the need to account for rail dynamics and potential throw effects.",
    18: "English Requirements: Shots needing side spin (English) are more difficult to control and execute. The use of English introduces additional variables that affect both aim and cue ball behaviour after contact.",
    19: "Speed Control: Shots requiring precise speed control, whether very fast or very slow, are more challenging. Speed affects pocket geometry, throw, and positioning for the next shot.",
    20: "Follow/Draw Needs: Shots requiring significant follow or draw are more difficult than natural roll shots. These shots demand precise vertical axis control of the cue ball.",
    21: "Rail Proximity: Balls very close to rails can be more difficult to hit cleanly and may require specialized techniques like rail cut shots or spin.",
    22: "Scratch Potential: Positions with a high risk of scratching are more difficult to play safely and effectively.",
    23: "Spin Shots: Difficulty increases with the amount of curve required. These shots demand precise control of both vertical and horizontal spin.",
    24: "Frozen Ball Situations: Balls touching each other or touching a rail create unique challenges, often requiring precise speed and spin control.",
    25: "Multiple Effects: Shots involving a combination of factors (e.g., cut angle, speed, and English) are particularly challenging due to the need to account for multiple variables simultaneously.",
    26: "Throw Effects: Accounting for throw (both cut-induced and English-induced) adds complexity, especially on longer shots or those with significant cut angles.",
    27: "Deflection and Cue Ball Curve: When using English, especially at higher speeds or with an elevated cue, accounting for cue ball deflection and curve increases shot difficulty.",
    28: "Multi-ball Collision: It is exponentially difficult to pot a ball by colliding it with multiple balls.",
    29: "Multi-cushion Collision: It is exponentially difficult to pot a ball by having it bounce off multiple cushions.",
}

RULE_SHORT_NAMES = {
    1: "Ball Groupings",
    2: "Makable Regions",
    3: "Insurance Balls",
    4: "Break-up Opportunities",
    5: "Safety Opportunities",
    6: "Two-way Shot Possibilities",
    7: "Table Layout for Safeties",
    8: "Multiple-ball Positions",
    9: "Avoidance Shots",
    10: "Combination and Bank Shot Opportunities",
    11: "Rail Proximity",
    12: "Scratch Potential",
    13: "Potting Priority",
    14: "Distance",
    15: "Cut Angle",
    16: "Obstacle Balls",
    17: "Rail Contact",
    18: "English Requirements",
    19: "Speed Control",
    20: "Follow/Draw Needs",
    21: "Rail Proximity",
    22: "Scratch Potential",
    23: "Spin Shots",
    24: "Frozen Ball Situations",
    25: "Multiple Effects",
    26: "Throw Effects",
    27: "Deflection and Cue Ball Curve",
    28: "Multi-ball Collision",
    29: "Multi-cushion Collision",
}

N_RULES = 29
VALUE_IDS = tuple(range(1, 14))
DIFFICULTY_IDS = tuple(range(14, 30))


def rule_category(rule_id: int) -> str:
    return "value" if rule_id <= 13 else "difficulty"
