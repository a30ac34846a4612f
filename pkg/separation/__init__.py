"""Conjugacy separation in free hosts."""

from __future__ import annotations

from .certificates import ConjugacyWitness, SeparationCertificate
from .conjugacy import (
    SeparatedPair,
    construct_separated_free,
    find_separated_cyclic,
    is_cyclic_conjugate_into,
    subgroups_conjugacy_separated,
)

__all__ = [
    "ConjugacyWitness",
    "SeparatedPair",
    "SeparationCertificate",
    "construct_separated_free",
    "find_separated_cyclic",
    "is_cyclic_conjugate_into",
    "subgroups_conjugacy_separated",
]
