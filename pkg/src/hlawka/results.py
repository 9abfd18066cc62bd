"""Result container attaching truncation metadata and an error bound."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class EvalResult:
    """A computed complex value plus the truncation used to obtain it.

    ``error_estimate`` is an upper bound on the magnitude of the neglected
    tail under the tail model documented by the producing operation (integral
    comparison for direct sums, Gaussian cutoff for continuations, coefficient
    decay for reconstructions).
    """

    value: complex
    error_estimate: float
    truncation: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "value": {"re": self.value.real, "im": self.value.imag},
            "error_estimate": self.error_estimate,
            "truncation": dict(self.truncation),
        }
