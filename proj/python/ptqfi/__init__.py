"""Gaussian-state quantum Fisher information with a PT-symmetric Swanson probe."""

import json as _json

from ._core import (
    DomainError,
    NumericalError,
    effective_frequency,
    fidelity,
    gain_ratio,
    purity,
    qfi_bures_fd,
    qfi_closed_forms,
)
from ._core import fock_verify as _fock_verify
from ._core import simulate as _simulate


def fock_verify(**kwargs):
    """Fock-lab outcome as a dict (keys: report, asserted, passed, ...)."""
    return _json.loads(_fock_verify(**kwargs))


def simulate(**kwargs):
    """EstimationRun as a dict."""
    return _json.loads(_simulate(**kwargs))


__all__ = [
    "DomainError",
    "NumericalError",
    "effective_frequency",
    "fidelity",
    "fock_verify",
    "gain_ratio",
    "purity",
    "qfi_bures_fd",
    "qfi_closed_forms",
    "simulate",
]
