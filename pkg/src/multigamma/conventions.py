"""Resolved sign/shift conventions for the multiplication formula machinery.

The multiplication-formula constant term and the bridge between G_r and the
Barnes-zeta gamma admit three orientation ambiguities that cannot all be fixed
a priori:

* ``s_phi``   -- overall sign of the phi polynomial bracket,
* ``sigma_phi`` -- inner argument shift of the bracket (-1 or -2),
* ``s_R``     -- sign of the exponent in the R_r connection factor.

They are pinned once by numeric calibration against the classical gamma
multiplication formula and the Hurwitz-zeta route (see
``multigamma.evaluate.calibrate_conventions``) and carried around immutably.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


class ConventionError(RuntimeError):
    """An operation needed resolved conventions but got an unresolved set."""


@dataclass(frozen=True)
class ConventionSet:
    s_phi: int = 0
    sigma_phi: Fraction | None = None
    s_R: int = 0
    status: str = "unresolved"
    evidence: tuple[dict[str, Any], ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if self.status not in ("resolved", "unresolved"):
            raise ValueError(f"invalid status {self.status!r}")
        if self.status == "resolved":
            if self.s_phi not in (1, -1) or self.s_R not in (1, -1):
                raise ValueError("resolved conventions need s_phi, s_R in {+1, -1}")
            if self.sigma_phi is None:
                raise ValueError("resolved conventions need sigma_phi")

    @property
    def resolved(self) -> bool:
        return self.status == "resolved"

    def require_resolved(self, what: str = "this operation") -> "ConventionSet":
        if not self.resolved:
            raise ConventionError(
                f"{what} needs resolved conventions; run calibrate_conventions "
                "first or supply an explicit ConventionSet"
            )
        return self

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "s_phi": self.s_phi,
            "sigma_phi": str(self.sigma_phi) if self.sigma_phi is not None else None,
            "s_R": self.s_R,
            "status": self.status,
            "evidence": list(self.evidence),
        }

    @classmethod
    def from_json_obj(cls, obj: dict[str, Any]) -> "ConventionSet":
        sigma = obj.get("sigma_phi")
        return cls(
            s_phi=int(obj["s_phi"]),
            sigma_phi=Fraction(sigma) if sigma is not None else None,
            s_R=int(obj["s_R"]),
            status=obj.get("status", "resolved"),
            evidence=tuple(obj.get("evidence", ())),
        )

    def dump(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_obj(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "ConventionSet":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json_obj(json.load(fh))


UNRESOLVED = ConventionSet()
