import random
import re
from collections import Counter
from dataclasses import asdict

import pytest

from colourgame.engine import (
    FAILURE_DEGENERATE,
    FAILURE_NONE,
    FAILURE_UNKNOWN_WORD,
    FAILURE_WRONG_REFERENT,
    Agent,
    ExperimentParams,
    InteractionRecord,
    align,
    choose_topic,
    make_population,
    run_experiment,
    run_interaction,
    select_pair,
)
from colourgame.embodiment import make_body
from colourgame.errors import ConfigurationError, InternalConsistencyError
from colourgame.lexicon import HEARER, SPEAKER
from colourgame.world import (
    DEFAULT_PALETTE,
    Colour,
    Percept,
    WorldModel,
    make_world,
    perceive,
    sample_scene,
)

from helpers import register_recording_backend, split_into_games

GAME_SHAPE = re.compile(
    r"^embody,embody,observe_world,observe_world,speak,hear,(point,)?(nod|point)$"
)


def simulated_bodies(noise_std: float):
    return (
        make_body("simulated", "body-a", noise_std=noise_std),
        make_body("simulated", "body-b", noise_std=noise_std),
    )


def test_select_pair_uniform_over_ordered_pairs():
    population = make_population(5)
    rng = random.Random(6)
    counts = Counter()
    draws = 100_000
    for _ in range(draws):
        speaker, hearer = select_pair(population, rng)
        counts[(speaker.agent_id, hearer.agent_id)] += 1
    assert len(counts) == 20
    for pair_count in counts.values():
        assert abs(pair_count / draws - 1 / 20) <= 0.01


def test_select_pair_two_agents_alternate_roles():
    population = make_population(2)
    rng = random.Random(3)
    draws = 20_000
    first_speaks = sum(
        select_pair(population, rng)[0].agent_id == 0 for _ in range(draws)
    )
    assert abs(first_speaks / draws - 0.5) <= 0.02


def test_select_pair_requires_two_agents():
    with pytest.raises(ConfigurationError):
        select_pair(make_population(1), random.Random(0))


def test_choose_topic_uniform():
    world = make_world(DEFAULT_PALETTE, objects_per_scene=3)
    scene = sample_scene(world, random.Random(1))
    model = perceive(world, scene, 0.0, random.Random(0))
    rng = random.Random(10)
    counts = Counter(
        choose_topic(model, rng).object_id for _ in range(30_000)
    )
    for object_id in scene.object_ids:
        assert abs(counts[object_id] / 30_000 - 1 / 3) <= 0.02


def test_choose_topic_forced_and_replayable():
    model = WorldModel(percepts=(Percept("only", Colour(1, 2, 3)),))
    assert choose_topic(model, random.Random(0)).object_id == "only"
    world = make_world(DEFAULT_PALETTE, objects_per_scene=3)
    scene = sample_scene(world, random.Random(2))
    big = perceive(world, scene, 0.0, random.Random(0))
    seq_a = [choose_topic(big, random.Random(5)) for _ in range(1)]
    rng_a, rng_b = random.Random(8), random.Random(8)
    for _ in range(30):
        assert choose_topic(big, rng_a) == choose_topic(big, rng_b)
    assert seq_a


def test_choose_topic_empty_model_is_an_error():
    with pytest.raises(InternalConsistencyError):
        choose_topic(WorldModel(percepts=()), random.Random(0))


def test_first_game_invention_and_adoption():
    params = ExperimentParams(
        population_size=2, inc=0.1, inh=0.1, dec=0.1, num_interactions=1
    )
    world = make_world(params.palette, params.objects_per_scene)
    population = make_population(2)
    rng = random.Random(7)
    record = run_interaction(
        population, world, simulated_bodies(params.noise_std), params, rng, 1
    )

    assert record.success is False
    assert record.failure_reason == FAILURE_UNKNOWN_WORD
    assert record.pointed_id is None
    assert record.utterance is not None

    speaker = population[record.speaker_id]
    hearer = population[record.hearer_id]
    # speaker invented a category and a word; the word was punished once
    assert len(speaker.ontology) == 1
    [spoken] = speaker.inventory.constructions
    assert spoken.form == record.utterance
    assert spoken.score == pytest.approx(params.initial_score - params.dec)
    # hearer adopted the word for a freshly invented category at 0.5
    assert len(hearer.ontology) == 1
    [adopted] = hearer.inventory.constructions
    assert adopted.form == record.utterance
    assert adopted.score == pytest.approx(params.initial_score)
    # the adopted prototype reflects the hearer's own noisy percept
    true_topic = world.object_by_id(record.topic_id).true_colour
    assert hearer.ontology.categories[0].prototype.distance(true_topic) < 25.0


def _record(**overrides) -> InteractionRecord:
    base = dict(
        interaction_number=1,
        speaker_id=0,
        hearer_id=1,
        scene_object_ids=("obj-0", "obj-1", "obj-2"),
        topic_id="obj-0",
        utterance="fusemo",
        pointed_id="obj-0",
        success=True,
        failure_reason=FAILURE_NONE,
    )
    base.update(overrides)
    return InteractionRecord(**base)


def test_align_success_rewards_inhibits_and_shifts():
    params = ExperimentParams(inc=0.1, inh=0.1, dec=0.1, shift_rate=0.05)
    agent = Agent(0)
    category = agent.ontology.invent_category(Colour(10, 0, 0))
    used = agent.inventory.add_construction("fusemo", category.category_id, 0.5)
    rival = agent.inventory.add_construction("ponuro", category.category_id, 0.4)
    agent.topic = Percept("obj-0", Colour(20, 0, 0))
    agent.used_construction = used

    align(agent, SPEAKER, _record(), params)

    assert used.score == pytest.approx(0.6)
    assert rival.score == pytest.approx(0.3)
    assert agent.ontology.get(category.category_id).prototype == Colour(10.5, 0, 0)


def test_align_hearer_success_shifts_towards_pointed_percept():
    params = ExperimentParams(inc=0.1, inh=0.1, dec=0.1, shift_rate=0.5)
    agent = Agent(1)
    category = agent.ontology.invent_category(Colour(0, 100, 0))
    used = agent.inventory.add_construction("fusemo", category.category_id, 0.5)
    agent.hypothesis = Percept("obj-0", Colour(0, 200, 0))
    agent.used_construction = used

    align(agent, HEARER, _record(), params)

    assert used.score == pytest.approx(0.6)
    assert agent.ontology.get(category.category_id).prototype == Colour(0, 150, 0)


def test_align_failure_punishes_to_removal():
    params = ExperimentParams(inc=0.1, inh=0.1, dec=0.1)
    agent = Agent(1)
    category = agent.ontology.invent_category(Colour(0, 0, 0))
    used = agent.inventory.add_construction("fusemo", category.category_id, 0.1)
    agent.used_construction = used

    record = _record(
        success=False, pointed_id="obj-2", failure_reason=FAILURE_WRONG_REFERENT
    )
    align(agent, HEARER, record, params)

    assert len(agent.inventory) == 0


def test_align_unknown_word_adoption_reuses_or_invents():
    params = ExperimentParams(inc=0.1, inh=0.1, dec=0.1)
    agent = Agent(1)
    agent.world_model = WorldModel(
        percepts=(
            Percept("obj-0", Colour(5, 243, 2)),
            Percept("obj-1", Colour(250, 5, 5)),
        )
    )
    agent.utterance = "fusemo"
    agent.feedback_pointed_id = "obj-0"

    record = _record(
        success=False, pointed_id=None, failure_reason=FAILURE_UNKNOWN_WORD
    )
    align(agent, HEARER, record, params)

    assert len(agent.ontology) == 1
    assert agent.ontology.categories[0].prototype == Colour(5, 243, 2)
    [adopted] = agent.inventory.constructions
    assert adopted.form == "fusemo" and adopted.score == 0.5

    # hearing another unknown word for the same object reuses the category
    agent.utterance = "sobele"
    align(agent, HEARER, record, params)
    assert len(agent.ontology) == 1
    assert {c.form for c in agent.inventory.constructions} == {"fusemo", "sobele"}


def test_align_degenerate_game_updates_nothing():
    params = ExperimentParams()
    agent = Agent(0)
    category = agent.ontology.invent_category(Colour(1, 1, 1))
    used = agent.inventory.add_construction("fusemo", category.category_id, 0.5)
    agent.used_construction = used
    record = _record(
        success=False,
        utterance=None,
        pointed_id=None,
        failure_reason=FAILURE_DEGENERATE,
    )
    align(agent, SPEAKER, record, params)
    assert used.score == 0.5 and len(agent.inventory) == 1


def test_record_consistency_over_many_games():
    params = ExperimentParams(num_interactions=300)
    result = run_experiment(params, seed=11)
    reasons = set()
    for record in result.records:
        reasons.add(record.failure_reason)
        assert record.success == (record.pointed_id == record.topic_id)
        if record.success:
            assert record.failure_reason == FAILURE_NONE
            assert record.utterance is not None
        if record.failure_reason == FAILURE_UNKNOWN_WORD:
            assert record.pointed_id is None
        assert set(record.scene_object_ids) >= {record.topic_id}
    assert FAILURE_NONE in reasons and FAILURE_UNKNOWN_WORD in reasons


def test_games_only_mutate_the_two_participants():
    params = ExperimentParams()
    world = make_world(params.palette, params.objects_per_scene)
    population = make_population(5)
    bodies = simulated_bodies(params.noise_std)
    rng = random.Random(13)
    for n in range(1, 60):
        before = {
            a.agent_id: (a.ontology.to_json_entries(), a.inventory.to_json_entries())
            for a in population
        }
        record = run_interaction(population, world, bodies, params, rng, n)
        for agent in population:
            if agent.agent_id in (record.speaker_id, record.hearer_id):
                continue
            assert before[agent.agent_id] == (
                agent.ontology.to_json_entries(),
                agent.inventory.to_json_entries(),
            )


def test_per_game_state_is_cleared_between_interactions():
    params = ExperimentParams()
    world = make_world(params.palette, params.objects_per_scene)
    population = make_population(3)
    rng = random.Random(17)
    run_interaction(population, world, simulated_bodies(3.0), params, rng, 1)
    for agent in population:
        assert agent.body is None
        assert agent.world_model is None
        assert agent.topic is None
        assert agent.network is None
        assert agent.utterance is None
        assert agent.used_construction is None
        assert agent.hypothesis is None
        assert agent.feedback_pointed_id is None


def test_degenerate_abort_on_identical_percepts():
    # two objects with the same colour, no noise: nothing can discriminate
    params = ExperimentParams(
        population_size=2,
        palette=(Colour(10, 10, 10), Colour(10, 10, 10)),
        objects_per_scene=2,
        noise_std=0.0,
        min_separation=0.0,
    )
    world = make_world(params.palette, 2, min_separation=0.0)
    population = make_population(2)
    rng = random.Random(0)
    record = run_interaction(
        population, world, simulated_bodies(0.0), params, rng, 1
    )
    assert record.failure_reason == FAILURE_DEGENERATE
    assert record.success is False
    assert record.utterance is None and record.pointed_id is None
    for agent in population:
        assert len(agent.inventory) == 0  # no constructions, no score changes


def test_run_experiment_zero_interactions():
    params = ExperimentParams(num_interactions=0)
    result = run_experiment(params, seed=0)
    assert result.records == [] and result.series == [] and result.snapshots == []
    assert all(len(a.ontology) == 0 for a in result.population)


def test_run_experiment_replay_is_deterministic():
    params = ExperimentParams(num_interactions=200)
    first = run_experiment(params, seed=5)
    second = run_experiment(params, seed=5)
    assert [asdict(r) for r in first.records] == [asdict(r) for r in second.records]
    assert first.series == second.series
    different = run_experiment(params, seed=6)
    assert [asdict(r) for r in first.records] != [
        asdict(r) for r in different.records
    ]


def test_run_experiment_converges_with_defaults():
    result = run_experiment(ExperimentParams(num_interactions=1000), seed=1)
    assert result.series[-1].success_window_avg >= 0.9
    assert result.series[-1].mean_ontology_size == pytest.approx(6.0)


def test_converged_population_stays_stable():
    # after convergence further games succeed without inventing anything new
    result = run_experiment(ExperimentParams(num_interactions=1200), seed=1)
    by_n = {p.interaction: p for p in result.series}
    assert by_n[1200].mean_ontology_size == by_n[1000].mean_ontology_size
    assert by_n[1200].distinct_forms_population <= by_n[1000].distinct_forms_population
    tail = [r.success for r in result.records if r.interaction_number > 1000]
    assert sum(tail) / len(tail) >= 0.9


def test_run_experiment_snapshot_selection():
    params = ExperimentParams(
        num_interactions=30, snapshot_points=(10, 20), snapshot_agent=2
    )
    result = run_experiment(params, seed=2)
    assert [s.interaction_number for s in result.snapshots] == [10, 20]
    assert all(s.agent_id == 2 for s in result.snapshots)

    params_all = ExperimentParams(num_interactions=30, snapshot_points=(10,))
    result_all = run_experiment(params_all, seed=2)
    assert sorted(s.agent_id for s in result_all.snapshots) == [0, 1, 2, 3, 4]


def test_params_validation_rejects_out_of_range_values():
    bad = [
        ExperimentParams(population_size=1),
        ExperimentParams(objects_per_scene=0),
        ExperimentParams(objects_per_scene=7),
        ExperimentParams(num_interactions=-1),
        ExperimentParams(noise_std=-0.1),
        ExperimentParams(initial_score=0.0),
        ExperimentParams(inc=-0.1),
        ExperimentParams(shift_rate=1.5),
        ExperimentParams(window=0),
        ExperimentParams(series_interval=0),
        ExperimentParams(snapshot_points=(0,)),
        ExperimentParams(snapshot_agent=9),
        ExperimentParams(snapshot_agent=-1),
    ]
    for params in bad:
        with pytest.raises(ConfigurationError):
            params.validate()


def test_capability_trace_follows_the_script_order():
    trace: list = []
    register_recording_backend(trace)
    params = ExperimentParams(num_interactions=50, backend_kind="recording")
    run_experiment(params, seed=4)
    games = split_into_games(trace)
    assert len(games) == 50
    for game in games:
        assert GAME_SHAPE.match(",".join(game))
