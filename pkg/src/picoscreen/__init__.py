"""PICO mining toolkit: sentence classification, span extraction,
threshold-based highlighting and the corpus plumbing around them.
"""

__version__ = "0.1.0"

from .labels import CLASS_ORDER, PIO, ClassLabel, SubClass

__all__ = ["CLASS_ORDER", "PIO", "ClassLabel", "SubClass", "__version__"]
