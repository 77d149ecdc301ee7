"""Variable-exponent Lebesgue toolkit.

Thin re-export of the native module: Luxemburg norms, fractional maximal
operators, weight-class tests, Calderon-Zygmund/sparse decompositions and
Hormander-condition kernel probes on one-dimensional grids.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__doc__ = _core_doc if _core_doc else __doc__
