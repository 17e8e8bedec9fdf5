"""Kernel backend selection.

The compiled extension is preferred; the numpy implementation is the
fallback.  Set TAILDEP_BACKEND=python to force the fallback (used by the
benchmark and the backend-equivalence tests).
"""

import os

if os.environ.get("TAILDEP_BACKEND", "").lower() == "python":
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND_NAME = _impl.BACKEND_NAME

al_cdf = _impl.al_cdf
al_pdf = _impl.al_pdf
al_quantile = _impl.al_quantile
margin_coefficients = _impl.margin_coefficients
margin_cdf = _impl.margin_cdf
margin_pdf = _impl.margin_pdf
margin_quantile = _impl.margin_quantile
bvn_cdf = _impl.bvn_cdf
model_joint = _impl.model_joint

MODE_CDF = 0
MODE_PDF = 1
MODE_PARTIAL1 = 2
