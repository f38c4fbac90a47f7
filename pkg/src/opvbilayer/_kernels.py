"""Select the compiled kernels when available, else the Python fallback.

Set ``OPVBILAYER_BACKEND=python`` to force the fallback, or ``compiled`` to
require the extension.
"""

from __future__ import annotations

import os

from . import _pykernels

_choice = os.environ.get("OPVBILAYER_BACKEND", "auto").strip().lower()

if _choice == "python":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "compiled"
    except ImportError:
        if _choice == "compiled":
            raise
        _impl = _pykernels
        BACKEND = "python"

bernoulli = _impl.bernoulli
sg_coefficients = _impl.sg_coefficients
thomas = _impl.thomas

__all__ = ["BACKEND", "bernoulli", "sg_coefficients", "thomas"]
