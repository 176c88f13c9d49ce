"""Heuristic check for whether raw bytes hold Solidity code."""

from __future__ import annotations

import re

_CONTRACT_WITH_NAME = re.compile(r"\bcontract\s+[A-Za-z_$][A-Za-z0-9_$]*")


def detect_solidity(data: bytes) -> bool:
    """True iff the bytes look like Solidity source.

    Requires at least two of the markers {"pragma solidity", "contract",
    "function"}, where the "contract" marker only counts when followed by
    an identifier. Undecodable bytes are never Solidity.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        return False
    hits = 0
    if "pragma solidity" in text:
        hits += 1
    if _CONTRACT_WITH_NAME.search(text):
        hits += 1
    if re.search(r"\bfunction\b", text):
        hits += 1
    return hits >= 2
