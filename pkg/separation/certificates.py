"""Certificates for conjugacy separation in free hosts."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional

from groups.words import Word, free_reduce
from schreier.core import CoreGraph, membership


@dataclass(frozen=True)
class ConjugacyWitness:
    """``target = g⁻¹ · source · g`` with ``target ≠ 1`` lying in the other subgroup."""

    conjugator: Word
    source: Word
    target: Word
    power: Optional[int] = None

    def to_dict(self) -> dict:
        out = {
            "g": str(self.conjugator),
            "source": str(self.source),
            "conjugate": str(self.target),
        }
        if self.power is not None:
            out["n"] = self.power
        return out


@dataclass(frozen=True)
class SeparationCertificate:
    """Outcome of a separation test.

    ``witness`` is None exactly when the pair is separated. ``source_core`` is set when the
    witness source must itself lie in a subgroup (the pair test); ``target_core`` is the subgroup
    the conjugate lands in.
    """

    method: str
    subject: Dict[str, object]
    witness: Optional[ConjugacyWitness] = None
    details: Dict[str, object] = field(default_factory=dict)
    target_core: Optional[CoreGraph] = field(default=None, repr=False, compare=False)
    source_core: Optional[CoreGraph] = field(default=None, repr=False, compare=False)

    @property
    def separated(self) -> bool:
        return self.witness is None

    @property
    def verdict(self) -> str:
        return "separated" if self.separated else "witness"

    def verify(self) -> bool:
        """Re-check a witness by free reduction and membership. Separated verdicts pass."""
        w = self.witness
        if w is None:
            return True
        conjugate = free_reduce(w.conjugator.inverse() * w.source * w.conjugator)
        if not w.target or conjugate.letters != w.target.letters:
            return False
        if self.target_core is not None and not membership(self.target_core, w.target):
            return False
        if self.source_core is not None and not membership(self.source_core, w.source):
            return False
        return True

    def to_dict(self) -> dict:
        out = {
            "method": self.method,
            "subject": dict(self.subject),
            "verdict": self.verdict,
            "details": dict(self.details),
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        return out
