"""Greedy autoregressive decoding over a pluggable next-token scorer."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

MAX_TOKENS = 1024
_SUM_TOL = 1e-9


class ScorerError(ValueError):
    pass


def greedy_decode(scorer, vocab, max_len: int = MAX_TOKENS, context=None) -> list[int]:
    """Decode from <BOS>, taking the argmax each step (ties: lowest id).

    ``scorer(prefix_ids, n_visual_tokens, context)`` must return a probability
    vector of length len(vocab). Stops after <EOS> or at ``max_len`` tokens;
    the returned sequence includes both delimiters when present.
    """
    n_visual = getattr(context, "n_tokens", None) if context is not None else None
    ids = [vocab.bos_id]
    while len(ids) < max_len:
        probs = list(scorer(ids, n_visual, context))
        if len(probs) != len(vocab):
            raise ScorerError(
                f"step {len(ids)}: scorer returned {len(probs)} probabilities, "
                f"expected {len(vocab)}"
            )
        total = sum(probs)
        if abs(total - 1.0) > _SUM_TOL:
            raise ScorerError(
                f"step {len(ids)}: scorer output sums to {total!r}, not 1"
            )
        best = max(range(len(probs)), key=lambda i: (probs[i], -i))
        ids.append(best)
        if best == vocab.eos_id:
            break
    return ids


def sequence_loss(probabilities, targets) -> float:
    """Cross-entropy -sum(log p_t[y_t]); any zero-probability target -> inf."""
    if len(probabilities) != len(targets):
        raise ValueError("one probability vector required per target position")
    loss = 0.0
    for probs, target in zip(probabilities, targets):
        p = probs[target]
        if p <= 0.0:
            return math.inf
        loss -= math.log(p)
    return loss


@dataclass
class NgramScorer:
    """Deterministic 3-gram mock scorer for exercising the decode protocol.

    Trained from token id sequences; unseen contexts back off to the most
    frequent bigram continuation, then to <EOS>.
    """

    vocab_size: int
    eos_id: int
    trigram: dict = field(default_factory=dict)
    bigram: dict = field(default_factory=dict)

    @classmethod
    def train(cls, sequences, vocab_size: int, eos_id: int) -> "NgramScorer":
        tri: dict[tuple[int, int], dict[int, int]] = {}
        bi: dict[int, dict[int, int]] = {}
        for seq in sequences:
            for i in range(len(seq) - 1):
                nxt = seq[i + 1]
                bi.setdefault(seq[i], {}).setdefault(nxt, 0)
                bi[seq[i]][nxt] += 1
                if i >= 1:
                    key = (seq[i - 1], seq[i])
                    tri.setdefault(key, {}).setdefault(nxt, 0)
                    tri[key][nxt] += 1
        pick = lambda counts: min(counts, key=lambda t: (-counts[t], t))
        return cls(
            vocab_size=vocab_size,
            eos_id=eos_id,
            trigram={k: pick(v) for k, v in tri.items()},
            bigram={k: pick(v) for k, v in bi.items()},
        )

    def next_id(self, prefix: list[int]) -> int:
        if len(prefix) >= 2 and (prefix[-2], prefix[-1]) in self.trigram:
            return self.trigram[(prefix[-2], prefix[-1])]
        return self.bigram.get(prefix[-1], self.eos_id)

    def __call__(self, prefix, n_visual=None, context=None) -> list[float]:
        probs = [0.0] * self.vocab_size
        probs[self.next_id(list(prefix))] = 1.0
        return probs

    def to_dict(self) -> dict:
        return {
            "vocab_size": self.vocab_size,
            "eos_id": self.eos_id,
            "trigram": [[a, b, c] for (a, b), c in self.trigram.items()],
            "bigram": [[a, b] for a, b in self.bigram.items()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NgramScorer":
        return cls(
            vocab_size=data["vocab_size"],
            eos_id=data["eos_id"],
            trigram={(a, b): c for a, b, c in data["trigram"]},
            bigram={a: b for a, b in data["bigram"]},
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f)

    @classmethod
    def load(cls, path) -> "NgramScorer":
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(json.load(f))
