"""Exact traces of Hecke operators composed with Atkin-Lehner involutions
on spaces of cusp forms, with newspace decompositions, sign-split
dimensions, and a bulk scan pipeline.

All arithmetic is exact (integers and rationals); floating point never
enters a trace computation.
"""

from .arith import (
    HurwitzTable,
    as_int,
    divisors,
    euler_phi,
    factorize,
    hurwitz,
    is_prime,
    mobius,
    pk,
    psi_index,
)
from .errors import DomainError, IntegrityError
from .localcounts import B, C_closed, C_direct, count_S, count_S_fast, phi_NQ
from .newspace import (
    TraceContext,
    dims_signed,
    sz_combination,
    trace_new,
    trace_new_AL,
    trace_new_TpWN,
    trace_new_signed,
)
from .oracles import dim_cusp, dim_new_oracle, hurwitz_enumerate, run_selftest
from .traces import trace_AL, trace_AL_simplified, trace_full, trace_level1

__all__ = [
    "HurwitzTable",
    "as_int",
    "divisors",
    "euler_phi",
    "factorize",
    "hurwitz",
    "is_prime",
    "mobius",
    "pk",
    "psi_index",
    "DomainError",
    "IntegrityError",
    "B",
    "C_closed",
    "C_direct",
    "count_S",
    "count_S_fast",
    "phi_NQ",
    "TraceContext",
    "dims_signed",
    "sz_combination",
    "trace_new",
    "trace_new_AL",
    "trace_new_TpWN",
    "trace_new_signed",
    "dim_cusp",
    "dim_new_oracle",
    "hurwitz_enumerate",
    "run_selftest",
    "trace_AL",
    "trace_AL_simplified",
    "trace_full",
    "trace_level1",
]

__version__ = "0.1.0"
