from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Check:
    """A verdict that is truthy when it holds and carries a witness when it fails.

    Soft checks also fill ``exceptions`` whatever the outcome.
    """

    ok: bool
    witness: Any = None
    exceptions: frozenset = field(default_factory=frozenset)

    def __bool__(self):
        return self.ok


PASS = Check(True)
