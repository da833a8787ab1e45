"""Exact computations for omega-derivation Lie algebras, invariant CE complexes and
stable characteristic classes."""

from ._core import (  # noqa: F401
    DivergenceError,
    UnstableRangeError,
    ValidationError,
    __version__,
    bernoulli,
    free_lie_dim,
    free_lie_dim_oracle,
    gram_rank,
    invariant_ce,
    kappa_borel_relation,
    kappa_generators,
    lie_character,
    ltilde_coeffs,
    ltilde_lambda,
    matchings_count,
    newton_class,
    omega_derivation_dim,
    run,
    schur_dim,
    stability_bound,
    stable_genus,
    tensor_invariants,
)
