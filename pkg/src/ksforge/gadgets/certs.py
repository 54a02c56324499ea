"""Records of what each gadget was shown to do, and how."""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field

PROPERTIES = ("FORBID11", "IMPLIES_INTERIOR", "ONE_EXCLUDED", "ZERO_TRIPLE_FORCED",
              "ZERO_TRIPLE_CONTRADICTION")
METHODS = ("LP case analysis", "exhaustive", "backtracking")


class CertificationFailed(RuntimeError):
    pass


class GadgetUnavailable(RuntimeError):
    pass


@dataclass
class GadgetCertificate:
    gadget: str
    property: str
    method: str
    inputs_hash: str
    verdict: str
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.property not in PROPERTIES:
            raise ValueError(self.property)
        if self.method not in METHODS:
            raise ValueError(self.method)

    def to_dict(self) -> dict:
        return asdict(self)


def inputs_hash(*payload) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True, default=str).encode()).hexdigest()[:16]
