"""Synthetic language worlds shared by the demo scripts.

Both worlds are small Markov generators with a few deliberately ambiguous
word forms, so every model combination has something to disambiguate.
"""

from relaxtag.synth import BOS, SyntheticSpec


def determiner_noun_world() -> SyntheticSpec:
    """First-order world: 'dn' is determiner or noun, 'nv' noun or verb,
    and the left neighbour decides."""
    return SyntheticSpec(
        tags=("D", "N", "P", "V"),
        transitions={
            (BOS,): {"D": 0.7, "N": 0.3},
            ("D",): {"N": 1.0},
            ("N",): {"V": 0.65, "P": 0.35},
            ("V",): {"D": 0.65, "P": 0.35},
            ("P",): {"D": 0.6, "N": 0.4},
        },
        emissions={
            "D": {"the": 0.5, "a": 0.25, "dn": 0.25},
            "N": {"dog": 0.35, "cat": 0.25, "sun": 0.16, "dn": 0.06, "nv": 0.18},
            "V": {"runs": 0.4, "sleeps": 0.35, "nv": 0.25},
            "P": {"of": 0.7, "with": 0.3},
        },
        lengths={3: 0.2, 4: 0.25, 5: 0.25, 6: 0.2, 7: 0.1},
    )


def second_order_world() -> SyntheticSpec:
    """Second-order world: sentences follow the pattern T M W M T M W ...,
    where the W slot is ambiguous between U and V and the trigger TWO
    positions back decides.  Bigrams cannot see the signal (the -1
    neighbour is always M); context trees can."""
    w_words = {f"w{k}": 0.25 for k in range(1, 5)}
    trigger = {"A": 0.55, "B": 0.45}
    return SyntheticSpec(
        tags=("A", "B", "M", "U", "V"),
        transitions={
            (BOS, BOS): dict(trigger),
            (BOS, "A"): {"M": 1.0},
            (BOS, "B"): {"M": 1.0},
            ("M", "A"): {"M": 1.0},
            ("M", "B"): {"M": 1.0},
            ("A", "M"): {"U": 0.9, "V": 0.1},
            ("B", "M"): {"V": 0.9, "U": 0.1},
            ("M", "U"): {"M": 1.0},
            ("M", "V"): {"M": 1.0},
            ("U", "M"): dict(trigger),
            ("V", "M"): dict(trigger),
        },
        emissions={
            "A": {"ta": 1.0},
            "B": {"tb": 1.0},
            "M": {"m": 1.0},
            "U": dict(w_words),
            "V": dict(w_words),
        },
        lengths={7: 0.5, 11: 0.5},
        order=2,
    )
