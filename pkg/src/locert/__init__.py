"""Local certification laboratory.

Certification schemes for k-colorability, distance-t domination and perfect
matching, the gadget graphs used to bound them, exact oracles, and an
adversary engine that searches certificate assignments and replays
view-preserving transfer attacks.
"""

from locert.errors import CapacityError, PreconditionError
from locert.graph import (
    CertificateAssignment,
    Graph,
    IdentifierAssignment,
    View,
    ball,
    distance,
    extract_view,
    layer,
)
from locert.views import canonical_form, views_equal

__all__ = [
    "CapacityError",
    "PreconditionError",
    "CertificateAssignment",
    "Graph",
    "IdentifierAssignment",
    "View",
    "ball",
    "distance",
    "extract_view",
    "layer",
    "canonical_form",
    "views_equal",
]

__version__ = "0.1.0"
