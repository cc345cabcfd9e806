"""Kernel backend selection.

The compiled Cython kernel is preferred when built; STARZX_BACKEND=py|cy
forces a choice (cy raises if the extension is missing).
"""

from __future__ import annotations

import os

_choice = os.environ.get("STARZX_BACKEND", "").lower()

if _choice == "py":
    from . import _kernel_py as kernel
elif _choice == "cy":
    from . import _kernel as kernel  # type: ignore[no-redef]
else:
    try:
        from . import _kernel as kernel  # type: ignore[no-redef]
    except ImportError:
        from . import _kernel_py as kernel

SimpGraph = kernel.SimpGraph
EndgameTooBig = kernel.EndgameTooBig
KernelError = kernel.KernelError
KERNEL_NAME = kernel.KERNEL_NAME


def available_backends():
    names = ["python"]
    try:
        from . import _kernel  # noqa: F401

        names.append("cython")
    except ImportError:
        pass
    return names
