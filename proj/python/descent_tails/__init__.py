"""Exact, approximate and bounded tail probabilities for the number of descents
in a uniform random permutation."""

from ._core import (
    BoundReport,
    LaplaceEstimate,
    LeftTailReport,
    NonConvergence,
    PmfInversion,
    RatePoint,
    SimulationSummary,
    TailInversion,
    bound_report,
    cgf,
    cgf_prime,
    cgf_second,
    complex_L_realpart_bound,
    endpoint_histogram,
    eulerian_weights,
    exact_log_laplace,
    exact_pmf,
    exact_tail,
    fourier_pmf,
    irwin_hall_interval,
    laplace_estimate,
    left_tail_transfer,
    log_azuma_bound,
    log_chernoff_bound,
    log_cid_bound,
    log_leading_term,
    log_qn_bound,
    log_sharp_tail_approx,
    parseval_tail,
    rate_function,
    run_summary,
    sample_path,
    solve_saddlepoint,
)

__all__ = [name for name in dir() if not name.startswith("_")]
