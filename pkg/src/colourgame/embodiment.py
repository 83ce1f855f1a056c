"""Hardware-independent body capabilities, backed here by a simulator.

The game engine never talks to a body implementation directly: it creates an
EmbodimentHandle via make_body() and issues capability calls (observe, speak,
hear, point, nod, ...) that are dispatched to whichever backend the handle was
created with. New backends register a factory under a new kind and callers
stay unchanged.

Only the "simulated" backend ships with the package. A live backend would
drive a remote body over HTTP; the wire contract reserved for it is a POST to
the endpoint `/speech/say` with body `{"speech": "<utterance>"}`, answered by
a JSON object containing a key `success` with a boolean value. Utterance
transmission in the simulated backend is noiseless and pointing transfers the
object id unambiguously.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Protocol

from .errors import ConfigurationError, ProtocolError
from .world import Scene, World, WorldModel, perceive

SIMULATED = "simulated"


@dataclass
class UtteranceChannel:
    """Carries at most one pending utterance from a speak to the matching hear."""

    pending: str | None = None

    def put(self, utterance: str) -> None:
        if not isinstance(utterance, str) or not utterance:
            raise ValueError(f"invalid word form: {utterance!r}")
        if self.pending is not None:
            raise ProtocolError(
                f"channel already holds {self.pending!r}; hear it before "
                "speaking again"
            )
        self.pending = utterance

    def take(self) -> str:
        if self.pending is None:
            raise ProtocolError("nothing was spoken on this channel")
        utterance, self.pending = self.pending, None
        return utterance


class Backend(Protocol):
    """The capability set every body backend implements."""

    kind: str

    def embody(self, agent_id: object) -> bool: ...

    def observe_world(
        self, world: World, scene: Scene, rng: random.Random
    ) -> WorldModel: ...

    def speak(self, channel: UtteranceChannel, utterance: str) -> bool: ...

    def hear(self, channel: UtteranceChannel) -> str: ...

    def point(self, object_id: str) -> str: ...

    def nod(self) -> bool: ...

    def shake_head(self) -> bool: ...

    def look_direction(self, direction: str, angle: float) -> bool: ...


class SimulatedBackend:
    """In-process body: perception comes from the simulated world."""

    kind = SIMULATED

    def __init__(self, identity: str = "", noise_std: float = 3.0) -> None:
        if noise_std < 0:
            raise ConfigurationError(f"noise_std must be >= 0, got {noise_std}")
        self.identity = identity
        self.noise_std = noise_std
        self._scene: Scene | None = None

    def embody(self, agent_id: object) -> bool:
        return True

    def observe_world(
        self, world: World, scene: Scene, rng: random.Random
    ) -> WorldModel:
        # Each call consumes fresh noise, so two bodies observing the same
        # scene build different models whenever noise_std > 0.
        self._scene = scene
        return perceive(world, scene, self.noise_std, rng)

    def speak(self, channel: UtteranceChannel, utterance: str) -> bool:
        channel.put(utterance)
        return True

    def hear(self, channel: UtteranceChannel) -> str:
        return channel.take()

    def point(self, object_id: str) -> str:
        if self._scene is None or object_id not in self._scene:
            raise ProtocolError(
                f"cannot point at {object_id!r}: not in the current scene"
            )
        return object_id

    def nod(self) -> bool:
        return True

    # Present for interface completeness; the colour game script never uses
    # them. look_direction's direction/angle units are left uninterpreted.
    def shake_head(self) -> bool:
        return True

    def look_direction(self, direction: str, angle: float) -> bool:
        return True


@dataclass(frozen=True)
class EmbodimentHandle:
    """A connection to one body; all capability calls route through it."""

    backend_kind: str
    identity: str
    backend: Backend


BackendFactory = Callable[..., Backend]

_BACKENDS: dict[str, BackendFactory] = {SIMULATED: SimulatedBackend}


def register_backend(kind: str, factory: BackendFactory) -> None:
    """Make a backend kind available to make_body; re-registering replaces."""
    _BACKENDS[kind] = factory


def supported_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def make_body(kind: str, identity: str, **options: object) -> EmbodimentHandle:
    """Create a handle for one body of the given backend kind.

    The factory registered for `kind` receives the identity plus any
    backend-specific options (the simulated backend takes `noise_std`).
    """
    try:
        factory = _BACKENDS[kind]
    except KeyError:
        raise ConfigurationError(
            f"unsupported backend kind {kind!r}; supported kinds: "
            f"{', '.join(supported_backends())}"
        ) from None
    return EmbodimentHandle(
        backend_kind=kind, identity=identity, backend=factory(identity, **options)
    )


def embody(handle: EmbodimentHandle, agent_id: object) -> bool:
    """Associate an agent with this body for the duration of one game."""
    return handle.backend.embody(agent_id)


def observe_world(
    handle: EmbodimentHandle, world: World, scene: Scene, rng: random.Random
) -> WorldModel:
    """Scan the scene through this body's sensors into a private world model."""
    return handle.backend.observe_world(world, scene, rng)


def speak(handle: EmbodimentHandle, channel: UtteranceChannel, utterance: str) -> bool:
    """Say the utterance onto the channel; fails if one is already pending."""
    return handle.backend.speak(channel, utterance)


def hear(handle: EmbodimentHandle, channel: UtteranceChannel) -> str:
    """Pick up the pending utterance, emptying the channel."""
    return handle.backend.hear(channel)


def point(handle: EmbodimentHandle, object_id: str) -> str:
    """Point at a scene object; the returned id is what the observer sees."""
    return handle.backend.point(object_id)


def nod(handle: EmbodimentHandle) -> bool:
    """Signal success to the other agent."""
    return handle.backend.nod()


def shake_head(handle: EmbodimentHandle) -> bool:
    return handle.backend.shake_head()


def look_direction(handle: EmbodimentHandle, direction: str, angle: float) -> bool:
    return handle.backend.look_direction(direction, angle)
