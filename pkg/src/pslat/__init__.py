"""Exact lattice of partial-separability cones for three-qubit GHZ-diagonal states."""

from .classify import PSProfile, XState, p_from_spectrum, ps_profile, spectrum_from_x
from .cone import (
    Certificate,
    Cone,
    Inside,
    Outside,
    cone_equal,
    cone_from_generators,
    cone_from_inequalities,
    dd_convert,
    dual,
    join,
    meet,
    member,
    subset,
)
from .dd import ResourceExceeded
from .exact import normalize_ray, pairing, vec8
from .lattice import BaseCones, Evaluator, base_cones, evaluate, f_apply, parse
from .paper import replay_state_induction, replay_witness_induction, rho, verify_chain_small, witness

__version__ = "0.1.0"
