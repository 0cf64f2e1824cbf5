from ._core import (
    StratError,
    binom_mod_p,
    direct_sum,
    dual,
    exponent_digits,
    family_profile,
    invert_coordinate,
    log_pole_order,
    make_family,
    p_adic_digits,
    restrict_fiber,
    tensor,
    trivialize,
    verify_relations,
)

__all__ = [
    "StratError",
    "binom_mod_p",
    "direct_sum",
    "dual",
    "exponent_digits",
    "family_profile",
    "invert_coordinate",
    "log_pole_order",
    "make_family",
    "p_adic_digits",
    "restrict_fiber",
    "tensor",
    "trivialize",
    "verify_relations",
]
