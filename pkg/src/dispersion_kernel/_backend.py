"""Select the quadrature core at import time.

The compiled extension is used when it is importable, unless the
environment variable ``DISPERSION_KERNEL_PURE`` is set to a non-empty value
other than ``0``.
"""

import os

from . import _gkpy

python_core = _gkpy

try:
    from . import _gkcore as compiled_core
except ImportError:  # pragma: no cover - depends on the build
    compiled_core = None

if compiled_core is not None and os.environ.get("DISPERSION_KERNEL_PURE", "") in ("", "0"):
    core = compiled_core
else:
    core = python_core

NAME = core.NAME
