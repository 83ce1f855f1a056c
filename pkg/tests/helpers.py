"""Shared test helpers: brute-force oracles and a call-recording backend.

The oracles intentionally re-derive results through squared distances and
explicit scans so they share no code path with the library implementation.
Oracle comparisons should use integer-valued colours: squared distances are
then exact integers and agree with the library's sqrt-based ordering.
"""
from __future__ import annotations

import random

from colourgame.conceptual import ColourCategory
from colourgame.embodiment import SimulatedBackend, register_backend
from colourgame.world import Colour, Percept, WorldModel


def squared_distance(a: Colour, b: Colour) -> float:
    total = 0.0
    for x, y in ((a.r, b.r), (a.g, b.g), (a.b, b.b)):
        total += (x - y) * (x - y)
    return total


def oracle_closest(
    categories: list[ColourCategory], observation: Colour
) -> ColourCategory | None:
    if not categories:
        return None
    ranked = sorted(
        categories,
        key=lambda c: (squared_distance(c.prototype, observation), c.category_id),
    )
    return ranked[0]


def oracle_conceptualise(
    categories: list[ColourCategory], topic: Percept, model: WorldModel
) -> int | None:
    best = oracle_closest(categories, topic.observed_colour)
    if best is None:
        return None
    topic_d = squared_distance(best.prototype, topic.observed_colour)
    for percept in model.percepts:
        if percept.object_id == topic.object_id:
            continue
        if squared_distance(best.prototype, percept.observed_colour) <= topic_d:
            return None
    return best.category_id


def oracle_interpret(
    categories: list[ColourCategory], category_id: int, model: WorldModel
) -> str | None:
    prototype = next(
        c.prototype for c in categories if c.category_id == category_id
    )
    distances = [
        (squared_distance(prototype, p.observed_colour), p.object_id)
        for p in model.percepts
    ]
    if not distances:
        return None
    smallest = min(d for d, _ in distances)
    winners = [oid for d, oid in distances if d == smallest]
    if len(winners) != 1:
        return None
    return winners[0]


def random_int_colour(rng: random.Random) -> Colour:
    return Colour(rng.randint(0, 255), rng.randint(0, 255), rng.randint(0, 255))


class RecordingBackend:
    """Wraps the simulated backend and logs every capability call."""

    kind = "recording"

    def __init__(self, identity: str, inner: SimulatedBackend, trace: list) -> None:
        self.identity = identity
        self.inner = inner
        self.trace = trace

    def _log(self, capability: str) -> None:
        self.trace.append((capability, self.identity))

    def embody(self, agent_id):
        self._log("embody")
        return self.inner.embody(agent_id)

    def observe_world(self, world, scene, rng):
        self._log("observe_world")
        return self.inner.observe_world(world, scene, rng)

    def speak(self, channel, utterance):
        self._log("speak")
        return self.inner.speak(channel, utterance)

    def hear(self, channel):
        self._log("hear")
        return self.inner.hear(channel)

    def point(self, object_id):
        self._log("point")
        return self.inner.point(object_id)

    def nod(self):
        self._log("nod")
        return self.inner.nod()

    def shake_head(self):
        self._log("shake_head")
        return self.inner.shake_head()

    def look_direction(self, direction, angle):
        self._log("look_direction")
        return self.inner.look_direction(direction, angle)


def register_recording_backend(trace: list) -> None:
    """Install a 'recording' backend kind writing into `trace`."""

    def factory(identity: str, noise_std: float = 3.0) -> RecordingBackend:
        return RecordingBackend(
            identity, SimulatedBackend(identity, noise_std=noise_std), trace
        )

    register_backend("recording", factory)


def split_into_games(trace: list) -> list[list[str]]:
    """Split a capability trace into per-game call lists.

    Every game starts with a pair of adjacent embody calls, so a new game
    begins at each embody that does not directly follow another embody.
    """
    games: list[list[str]] = []
    previous = None
    for call, _identity in trace:
        if call == "embody" and previous != "embody":
            games.append([])
        games[-1].append(call)
        previous = call
    return games
