"""glsmx: exact-arithmetic toolkit for sector combinatorics, decorated
localization graphs, equivariant series, and mirror-transform checks."""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import GlsmxError

__all__ = ["GlsmxError", "__version__"]
