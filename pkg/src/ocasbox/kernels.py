"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when importable; otherwise
(or when ``OCASBOX_PURE_PYTHON`` is set to a non-empty value other than
``0``) the numpy implementations in ``_pykernels`` are used. Both expose
``fwht``, ``mobius`` and ``scan_block`` with identical semantics.
"""

import os

from . import _pykernels

_force_py = os.environ.get("OCASBOX_PURE_PYTHON", "") not in ("", "0")

backend = _pykernels
if not _force_py:
    try:
        from . import _ckernels as backend  # noqa: F811
    except ImportError:
        backend = _pykernels

BACKEND = backend.NAME
fwht = backend.fwht
mobius = backend.mobius
scan_block = backend.scan_block
