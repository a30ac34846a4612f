"""Instance configuration for one diagnostics run.

A config is a frozen dataclass loadable from a JSON file. CLI flags override file values and the
environment supplies budget defaults::

    {
      "name": "free-cyclic",
      "alphabet": ["a", "b"],
      "relators": [],
      "subgroup": ["a"],
      "radius": 12,
      "n_max": 24
    }

``subgroup_family: "kernel"`` replaces ``subgroup`` with the truncated kernel of ``a ↦ 1``,
``b ↦ 0``: generators ``aⁱ·b·a⁻ⁱ`` for ``|i| <= radius + 2``. Its Schreier ball agrees with the
kernel's own ball at that radius.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from groups.balls import default_vertex_budget
from groups.exceptions import MalformedInputError
from groups.presentations import Presentation
from groups.words import MarkedAlphabet, Word, parse_word
from schreier.cosets import default_coset_budget
from utils.env import int_env

KERNEL_FAMILY = "kernel"
KERNEL_MARGIN = 2


def default_seed() -> int:
    return int_env("ATLAS_SEED", 0)


@dataclass(frozen=True)
class Thresholds:
    """Verdict cut-offs; both ends of the ρ̂ band are inclusive."""

    rho_nonamenable_max: float = 0.97
    rho_amenable_min: float = 0.98
    folner_amenable_max: float = 0.1

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class InstanceConfig:
    name: str = "instance"
    alphabet: Tuple[str, ...] = ("a", "b")
    relators: Tuple[str, ...] = ()
    subgroup: Tuple[str, ...] = ()
    subgroup_family: Optional[str] = None
    radius: int = 12
    n_max: int = 24
    seed: int = field(default_factory=default_seed)
    vertex_budget: int = field(default_factory=default_vertex_budget)
    coset_budget: int = field(default_factory=default_coset_budget)
    max_subset_size: int = 6
    folner_size: int = 20
    doubling_k: int = 2
    doubling_q: int = 2
    interval_k_max: int = 10
    mode: str = "exhaustive"
    geometry_radius: int = 4
    delta_mode: str = "exhaustive"
    delta_samples: int = 2000
    walks: int = 0
    workers: int = 4
    separation: bool = True
    separation_length: int = 8
    separation_budget: int = 6
    thresholds: Thresholds = field(default_factory=Thresholds)

    def __post_init__(self):
        if self.radius < 0:
            raise MalformedInputError(f"radius must be nonnegative, got {self.radius}")
        if self.n_max < 0:
            raise MalformedInputError(f"n_max must be nonnegative, got {self.n_max}")
        if self.mode not in ("exhaustive", "greedy"):
            raise MalformedInputError(f"unknown mode {self.mode!r}")
        if self.delta_mode not in ("exhaustive", "sampled"):
            raise MalformedInputError(f"unknown delta mode {self.delta_mode!r}")
        if self.subgroup_family not in (None, KERNEL_FAMILY):
            raise MalformedInputError(f"unknown subgroup family {self.subgroup_family!r}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "InstanceConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise MalformedInputError(f"unknown config keys: {', '.join(unknown)}")
        values = dict(data)
        for key in ("alphabet", "relators", "subgroup"):
            if key in values:
                values[key] = tuple(values[key])
        if "thresholds" in values:
            values["thresholds"] = Thresholds(**values["thresholds"])
        return cls(**values)

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "InstanceConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise MalformedInputError(exc.msg, line=exc.lineno, column=exc.colno) from None
        if not isinstance(data, dict):
            raise MalformedInputError("a config file holds one JSON object")
        return cls.from_dict(data).with_overrides(**overrides)

    def with_overrides(self, **overrides) -> "InstanceConfig":
        """Replace the fields given with a non-None value."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        return dataclasses.replace(self, **changes) if changes else self

    @property
    def marked_alphabet(self) -> MarkedAlphabet:
        return MarkedAlphabet(self.alphabet)

    def presentation(self) -> Presentation:
        alphabet = self.marked_alphabet
        return Presentation.create(alphabet, [parse_word(alphabet, r) for r in self.relators])

    def generators(self) -> List[Word]:
        alphabet = self.marked_alphabet
        if self.subgroup_family == KERNEL_FAMILY:
            return kernel_generators(alphabet, self.radius + KERNEL_MARGIN)
        return [parse_word(alphabet, g, line=i) for i, g in enumerate(self.subgroup, start=1)]

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["alphabet"] = list(self.alphabet)
        out["relators"] = list(self.relators)
        out["subgroup"] = list(self.subgroup)
        return out


def kernel_generators(alphabet: MarkedAlphabet, t: int) -> List[Word]:
    """``aⁱ·b·a⁻ⁱ`` for ``|i| <= t``, in order ``i = 0, 1, -1, 2, -2, ...``."""
    if alphabet.rank != 2:
        raise MalformedInputError("the kernel family needs a two-letter alphabet")
    a, b = alphabet.letters[0], alphabet.letters[1]
    out = []
    for i in [0] + [s * j for j in range(1, t + 1) for s in (1, -1)]:
        x = a if i >= 0 else a ^ 1
        conj = (x,) * abs(i)
        out.append(Word(alphabet, conj + (b,) + tuple(y ^ 1 for y in reversed(conj)), True))
    return out
