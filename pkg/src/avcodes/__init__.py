"""Affine variety codes over product point sets, multiplicity zero bounds, and list decoding."""
from .avcode import (
    Code,
    MonomialFamily,
    PointEnsemble,
    code_from_json,
    code_new,
    dmin_bound,
    encode,
    family_build,
    min_weight_witness,
    parse_family_spec,
    weight,
)
from .errors import *  # noqa: F401,F403
from .gf import Field, FieldElem, arith, field_new, parse_field
from .listdec import (
    DecodeOutput,
    DecoderPlan,
    b_set,
    decode,
    interpolate,
    max_radius,
    n_constraints,
    plan,
    radius_profile,
    z_roots,
)
from .mpoly import INFINITY, MPoly, ZPoly, format_poly, parse_poly
from .zbounds import (
    BoundMethod,
    DMemo,
    GridShape,
    closed_form_c,
    d_recursive,
    delta_set,
    dzero,
    footprint_bound,
    improvement_stats,
    sz_mult_bound,
    truncate,
)

__version__ = "0.1.0"
