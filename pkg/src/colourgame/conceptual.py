"""Agent-internal colour categories and the single-primitive semantics.

Each agent holds a private ontology of prototype points. Conceptualisation
finds a category that uniquely discriminates a topic within the agent's world
model; interpretation runs the resulting one-node semantic network against a
world model to retrieve a referent. Both directions use plain Euclidean
distance on the raw channel values.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalConsistencyError
from .world import Colour, Percept, WorldModel

FILTER_BY_CLOSEST_COLOUR = "filter-by-closest-colour"


@dataclass
class ColourCategory:
    """A prototype point with an id unique within its owning agent."""

    category_id: int
    prototype: Colour


@dataclass(frozen=True)
class SemanticNetwork:
    """A one-node network: filter the scene by closeness to one category.

    This experiment never composes larger networks, so the structure is a
    single primitive bound to a single category id.
    """

    category_id: int
    primitive: str = FILTER_BY_CLOSEST_COLOUR


class Ontology:
    """An agent's private, append-only set of colour categories.

    Category ids are never reused, and categories are never deleted; only
    their prototypes move.
    """

    def __init__(self) -> None:
        self.categories: list[ColourCategory] = []
        self._next_id = 1

    def __len__(self) -> int:
        return len(self.categories)

    def get(self, category_id: int) -> ColourCategory:
        for category in self.categories:
            if category.category_id == category_id:
                return category
        raise InternalConsistencyError(f"unknown category id {category_id}")

    def closest_category(
        self, observation: Colour
    ) -> tuple[ColourCategory, float] | None:
        """The category nearest to `observation`, with its distance.

        Returns None on an empty ontology. Exact distance ties go to the
        smallest category id, which is the earliest-created category.
        """
        best: ColourCategory | None = None
        best_distance = 0.0
        for category in self.categories:
            d = category.prototype.distance(observation)
            if best is None or d < best_distance:
                best, best_distance = category, d
        if best is None:
            return None
        return best, best_distance

    def invent_category(self, observed: Colour) -> ColourCategory:
        """Create a category whose first prototype is the observed value."""
        category = ColourCategory(category_id=self._next_id, prototype=observed)
        self._next_id += 1
        self.categories.append(category)
        return category

    def conceptualise(
        self, topic: Percept, model: WorldModel
    ) -> SemanticNetwork | None:
        """Find a network that uniquely discriminates `topic` in `model`.

        The candidate is always the category closest to the topic's observed
        colour; it qualifies only if every other percept in the model is
        strictly farther from its prototype. Returns None when the ontology is
        empty or the closest category fails to discriminate.
        """
        if all(p.object_id != topic.object_id for p in model.percepts):
            raise InternalConsistencyError(
                f"topic {topic.object_id!r} is not part of the world model"
            )
        found = self.closest_category(topic.observed_colour)
        if found is None:
            return None
        category, topic_distance = found
        for percept in model.percepts:
            if percept.object_id == topic.object_id:
                continue
            if category.prototype.distance(percept.observed_colour) <= topic_distance:
                return None
        return SemanticNetwork(category_id=category.category_id)

    def interpret(
        self, network: SemanticNetwork, model: WorldModel
    ) -> Percept | None:
        """Execute `network` against `model`: pick the closest percept.

        A tie for the minimum means the network fails to single out a
        referent, so the result is None.
        """
        prototype = self.get(network.category_id).prototype
        best: Percept | None = None
        best_distance = 0.0
        tied = False
        for percept in model.percepts:
            d = prototype.distance(percept.observed_colour)
            if best is None or d < best_distance:
                best, best_distance, tied = percept, d, False
            elif d == best_distance:
                tied = True
        if best is None or tied:
            return None
        return best

    def shift_prototype(
        self, category_id: int, observation: Colour, rate: float
    ) -> Colour:
        """Move a prototype a fraction `rate` of the way to `observation`."""
        if not 0.0 <= rate <= 1.0:
            raise ValueError(f"shift rate {rate!r} outside [0, 1]")
        category = self.get(category_id)
        category.prototype = category.prototype.shifted_towards(observation, rate)
        return category.prototype

    def to_json_entries(self) -> list[dict]:
        """Snapshot-friendly form: one dict per category."""
        return [
            {
                "category_id": c.category_id,
                "prototype": [c.prototype.r, c.prototype.g, c.prototype.b],
            }
            for c in self.categories
        ]
