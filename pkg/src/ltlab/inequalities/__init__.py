"""Numerical checks of spectral inequalities, each returning an
:class:`InequalityReport`."""
from .bks import (
    BKSTrial,
    bks_fuzz,
    check_bks_schroedinger_chain,
    evaluate_trial,
    fuzz_summary,
    minimize_counterexample,
    psd_power,
)
from .checks import (
    check_duality_sandwich,
    check_massive,
    check_relativistic_lt,
    check_sharp_shifted,
    check_surface_lt,
    check_waveguide,
    default_box_grid,
    default_halfspace_grid,
    lower_bound_certificate,
    sobolev_quotient,
)
from .report import (
    REPORT_COLUMNS,
    VERDICTS,
    InequalityReport,
    combine_verdicts,
    decide,
    reports_to_json,
    write_reports_csv,
)

#: checker name -> callable, as used on the command line
CHECKERS = {
    "surface-lt": check_surface_lt,
    "sharp-shifted": check_sharp_shifted,
    "relativistic-lt": check_relativistic_lt,
    "duality-sandwich": check_duality_sandwich,
    "massive": check_massive,
    "bks-schroedinger-chain": check_bks_schroedinger_chain,
    "waveguide": check_waveguide,
    "lower-bound-certificate": lower_bound_certificate,
}

__all__ = [
    "BKSTrial",
    "CHECKERS",
    "InequalityReport",
    "VERDICTS",
    "bks_fuzz",
    "check_bks_schroedinger_chain",
    "check_duality_sandwich",
    "check_massive",
    "check_relativistic_lt",
    "check_sharp_shifted",
    "check_surface_lt",
    "check_waveguide",
    "combine_verdicts",
    "decide",
    "default_box_grid",
    "default_halfspace_grid",
    "evaluate_trial",
    "fuzz_summary",
    "lower_bound_certificate",
    "minimize_counterexample",
    "psd_power",
    "REPORT_COLUMNS",
    "reports_to_json",
    "sobolev_quotient",
    "write_reports_csv",
]
