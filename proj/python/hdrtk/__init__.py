"""HDR reconstruction toolkit.

Images are numpy arrays of shape (H, W, 3): float64 for linear radiance and
linearized LDR, uint8 for 8-bit codes. Masks are (H, W) float64.
"""

from ._core import *  # noqa: F401,F403
from ._core import HdrtkError, __version__  # noqa: F401
