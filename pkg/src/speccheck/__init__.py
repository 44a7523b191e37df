"""Interactive specification refinement workbench.

Parse annotated programs, judge pre/postconditions and implementations
against labeled behaviors, recommend corrections, and measure specification
accuracy over bounded domains.
"""

__version__ = "0.1.0"

from .errors import SpecCheckError  # noqa: F401
from .parser import parse  # noqa: F401
from .session import Session, Settings  # noqa: F401
