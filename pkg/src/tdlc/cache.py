"""Advisory on-disk cache of canonical balls.

Entries are keyed by (family, parameters, radius) and carry a SHA-256 of their
payload.  A missing, unreadable or mismatching entry is rebuilt and rewritten;
the cache never changes a result, only how long it takes.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

from .graphs import BallGraph, graph_from_json, graph_to_json
from .models import GroupModel

ENV_VAR = "TDLC_CACHE"
log = logging.getLogger(__name__)


def cache_dir(explicit: str | os.PathLike | None = None) -> Path | None:
    """The explicit directory wins, then ``$TDLC_CACHE``; None disables caching."""
    d = explicit if explicit is not None else os.environ.get(ENV_VAR)
    return Path(d) if d else None


def _key(m: GroupModel, r: int) -> str:
    text = json.dumps({"spec": m.to_spec(), "radius": r}, sort_keys=True, default=str)
    return hashlib.sha256(text.encode()).hexdigest()[:32]


class BallCache:
    def __init__(self, directory: str | os.PathLike):
        self.dir = Path(directory)
        self.hits = self.misses = self.rebuilt = 0

    def path(self, m: GroupModel, r: int) -> Path:
        return self.dir / f"ball-{m.family}-r{r}-{_key(m, r)}.json"

    def _load(self, p: Path) -> BallGraph | None:
        try:
            doc = json.loads(p.read_text())
            payload = doc["payload"]
            if hashlib.sha256(payload.encode()).hexdigest() != doc["sha256"]:
                raise ValueError("hash mismatch")
            ball = graph_from_json(payload)
            if not isinstance(ball, BallGraph):
                raise ValueError("entry is not a ball")
            return ball
        except Exception as exc:          # advisory: any defect means rebuild
            log.warning("discarding cache entry %s: %s", p.name, exc)
            self.rebuilt += 1
            return None

    def _store(self, p: Path, ball: BallGraph):
        payload = graph_to_json(ball)
        doc = {"sha256": hashlib.sha256(payload.encode()).hexdigest(), "payload": payload}
        try:
            self.dir.mkdir(parents=True, exist_ok=True)
            tmp = p.with_suffix(".tmp")
            tmp.write_text(json.dumps(doc))
            tmp.replace(p)
        except OSError as exc:
            log.warning("cache write failed for %s: %s", p.name, exc)

    def ball(self, m: GroupModel, r: int) -> BallGraph:
        """The model's ball, from disk when a valid entry exists; installs it in the model."""
        if r in m._balls:
            return m._balls[r]
        p = self.path(m, r)
        ball = self._load(p) if p.exists() else None
        if ball is not None and ball.radius == r:
            self.hits += 1
            m._balls[r] = ball
            return ball
        self.misses += 1
        ball = m.canonical_cayley_abels(r)
        self._store(p, ball)
        return ball
