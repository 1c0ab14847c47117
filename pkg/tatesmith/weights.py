"""Torus-weight shadow of Frobenius contraction."""

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .errors import PairingNotDivisible

Entry = Tuple[int, int, int]


@dataclass
class WeightsReport:
    p: int
    kept: List[Entry] = field(default_factory=list)
    dropped: List[Entry] = field(default_factory=list)

    def as_dict(self) -> Dict[str, object]:
        return {
            "p": self.p,
            "kept": [list(e) for e in self.kept],
            "dropped": [list(e) for e in self.dropped],
        }


def demo_gr_weights(p: int, entries: Sequence[Entry]) -> WeightsReport:
    """(weight, multiplicity, pairing) -> (weight/p, multiplicity, pairing/p) when p | weight.

    The pairing with 2 rho is supplied by the caller.
    """
    report = WeightsReport(p)
    for weight, mult, pairing in entries:
        if weight % p:
            report.dropped.append((weight, mult, pairing))
            continue
        if pairing % p:
            raise PairingNotDivisible(f"weight {weight} is divisible by {p} but its pairing {pairing} is not")
        report.kept.append((weight // p, mult, pairing // p))
    return report
