"""Edit-distance metrics over Unicode scalar values."""

from __future__ import annotations


def levenshtein(a: str, b: str) -> int:
    """Minimal unit-cost insert/delete/substitute count between two strings."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        current = [i]
        append = current.append
        prev_left = i
        for j, cb in enumerate(b):
            cost = min(
                previous[j + 1] + 1,
                prev_left + 1,
                previous[j] + (ca != cb),
            )
            append(cost)
            prev_left = cost
        previous = current
    return previous[-1]


def normalized_ed(gt: str, pred: str) -> float:
    """levenshtein / max length, in [0,1]; two empty strings score 0."""
    longest = max(len(gt), len(pred))
    if longest == 0:
        return 0.0
    return levenshtein(gt, pred) / longest
