"""Statistical arbitrage lattice models, GBM simulation and backtests."""

from ._gstatarb import (
    AllRunsSkipped,
    Error,
    InvalidInterval,
    InvalidModel,
    NoSaExists,
    ParseError,
    __version__,
    backtest,
    builtin_model_names,
    check_builtin,
    check_model,
    embedded_phi,
    embedded_q,
    exit_prob_lower,
    exit_prob_upper,
    load_csv,
    mle_estimate,
    simulate,
    sweep,
    synthetic_series,
)

__all__ = [
    "AllRunsSkipped",
    "Error",
    "InvalidInterval",
    "InvalidModel",
    "NoSaExists",
    "ParseError",
    "__version__",
    "backtest",
    "builtin_model_names",
    "check_builtin",
    "check_model",
    "embedded_phi",
    "embedded_q",
    "exit_prob_lower",
    "exit_prob_upper",
    "load_csv",
    "mle_estimate",
    "simulate",
    "sweep",
    "synthetic_series",
]
