"""Buffered two-regime conditional-heteroscedastic AR toolkit.

Thin convenience wrappers over the compiled extension: structured values
cross the boundary as JSON text; this layer turns them into dicts.
"""

import json as _json

from . import _core

__all__ = [
    "simulate",
    "check_stationarity",
    "fit",
    "select_order",
    "neg2_loglik",
    "acf",
    "ljung_box",
    "mcleod_li",
    "run_mc",
]


def _dumps(obj):
    if isinstance(obj, str):
        return obj
    return _json.dumps(obj)


def simulate(params, n, seed, innovation=None, burn_in=500, pre_sample=-1):
    """Draw a sample path. Returns (values, pre_sample_len)."""
    innovation = innovation or {"kind": "standard_normal"}
    return _core.simulate(_dumps(params), n, seed, _dumps(innovation), burn_in, pre_sample)


def check_stationarity(params, innovation=None):
    innovation = innovation or {"kind": "standard_normal"}
    return _json.loads(_core.check_stationarity(_dumps(params), _dumps(innovation)))


def fit(values, pre_sample, p, config=None, with_inference=True):
    return _json.loads(
        _core.fit(list(values), pre_sample, p, _dumps(config or {}), with_inference)
    )


def select_order(values, pre_sample, p_max, config=None, include_p0=False):
    return _json.loads(
        _core.select_order(list(values), pre_sample, p_max, _dumps(config or {}), include_p0)
    )


def neg2_loglik(params, values, pre_sample):
    """Returns (total, n1, n2, degenerate_regime)."""
    return _core.neg2_loglik(_dumps(params), list(values), pre_sample)


def acf(values, max_lag):
    return _core.acf(list(values), max_lag)


def ljung_box(values, m):
    return _core.ljung_box(list(values), m)


def mcleod_li(values, m):
    return _core.mcleod_li(list(values), m)


def run_mc(design, n_threads=0):
    return _json.loads(_core.run_mc(_dumps(design), n_threads))
