import numpy as np
import pytest
from cgaopt import exceptions
from cgaopt.ga import crossover
from cgaopt.space import (
    Individual,
    ParameterSpace,
    ParameterSpec,
    best_individual,
    mutate_one,
    quantize,
    random_individual,
    random_value,
)


def on_grid(value, spec):
    ratio = (value - spec.min) / spec.step
    return spec.min <= value <= spec.max and abs(ratio - round(ratio)) < 1e-9


@pytest.fixture(scope="module")
def r1():
    return ParameterSpec(name="R1", min=3000, max=6000, step=1, initial=5000, unit="ohm")


@pytest.fixture(scope="module")
def c1():
    return ParameterSpec(name="C1", min=1.5, max=3, step=0.01, initial=2, unit="pF")


@pytest.mark.parametrize(
    "value, expected",
    [(5146.4, 5146.0), (7000, 6000.0), (-1, 3000.0), (5146.5, 5147.0)],
)
def test_quantize_unit_grid(r1, value, expected):
    assert quantize(value, r1) == expected


def test_quantize_fractional_step(c1):
    assert quantize(2.9173, c1) == 2.92


def test_quantize_is_idempotent(c1):
    rng = np.random.default_rng(1)
    for value in rng.uniform(0, 4, size=1000):
        q = quantize(value, c1)
        assert quantize(q, c1) == q
        assert on_grid(q, c1)


def test_quantize_off_grid_max_clamps_to_last_grid_point():
    spec = ParameterSpec(name="x", min=0, max=1.05, step=0.1, initial=0)
    assert spec.num_points == 11
    assert quantize(1.05, spec) == 1.0
    assert on_grid(quantize(1.05, spec), spec)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(min=0, max=1, step=0, initial=0),
        dict(min=0, max=1, step=-0.1, initial=0),
        dict(min=2, max=1, step=0.1, initial=1.5),
        dict(min=0, max=0.5, step=1, initial=0),
        dict(min=0, max=1, step=0.1, initial=2),
    ],
)
def test_invalid_parameter_spec(kwargs):
    with pytest.raises(exceptions.InvalidParameterSpec):
        ParameterSpec(name="x", **kwargs)


def test_invalid_spec_is_a_configuration_error():
    with pytest.raises(exceptions.ConfigurationError):
        ParameterSpec(name="x", min=0, max=1, step=0, initial=0)


def test_initial_value_is_snapped(c1):
    spec = ParameterSpec(name="C", min=1.5, max=3, step=0.01, initial=2.0049)
    assert spec.initial == 2.0


def test_random_value_degenerate_grid():
    spec = ParameterSpec(name="x", min=5, max=5, step=1, initial=5)
    assert spec.degenerate
    assert random_value(spec, np.random.default_rng(0)) == 5


def test_random_value_on_grid():
    vb = ParameterSpec(name="Vb", min=0.1, max=0.4, step=0.001, initial=0.2)
    rng = np.random.default_rng(3)
    for _ in range(2000):
        assert on_grid(random_value(vb, rng), vb)


def test_random_value_is_uniform():
    spec = ParameterSpec(name="x", min=0, max=3, step=1, initial=0)
    rng = np.random.default_rng(7)
    draws = np.array([random_value(spec, rng) for _ in range(10_000)])
    for point in range(4):
        assert 0.2 <= np.mean(draws == point) <= 0.3


def test_random_individual_single_point_space():
    space = ParameterSpace([ParameterSpec(name="x", min=2, max=2, step=1, initial=2)])
    ind = random_individual(space, np.random.default_rng(0))
    assert ind.values == (2.0,)
    assert ind.fitness is None
    assert ind.metrics is None


def test_random_individual_rx_space(rx_space):
    assert len(rx_space.specs) == 21
    assert rx_space.num_free == 19
    ind = random_individual(rx_space, np.random.default_rng(11))
    assert len(ind.values) == 19
    assert rx_space.contains(ind.values)
    values = rx_space.expand(ind.values)
    assert values["M4_width"] == values["M5_width"]
    assert values["M6_width"] == values["M7_width"]


def test_same_seed_gives_same_individual(rx_space):
    a = random_individual(rx_space, np.random.default_rng(5))
    b = random_individual(rx_space, np.random.default_rng(5))
    assert a == b


def test_mutate_one_changes_only_one_coordinate(small_space):
    rng = np.random.default_rng(0)
    ind = Individual(values=[5, 5, 5, 5, 5], id=3, fitness=1.0)
    for _ in range(1000):
        mutant = mutate_one(ind, 2, small_space, rng, id=4)
        assert mutant.values[:2] == ind.values[:2]
        assert mutant.values[3:] == ind.values[3:]
        assert mutant.parent_id == 3
        assert mutant.id == 4
        assert mutant.fitness is None
    assert ind.values == (5.0,) * 5
    assert ind.fitness == 1.0


def test_mutate_one_degenerate_coordinate(tied_space):
    ind = Individual(values=tied_space.initial_values())
    index = tied_space.free_index("d")
    mutant = mutate_one(ind, index, tied_space, np.random.default_rng(0))
    assert mutant.values == ind.values


@pytest.mark.parametrize("index", [-1, 5, 100])
def test_mutate_one_index_out_of_range(small_space, index):
    ind = Individual(values=[5, 5, 5, 5, 5])
    with pytest.raises(exceptions.UsageError):
        mutate_one(ind, index, small_space, np.random.default_rng(0))
    with pytest.raises(IndexError):
        mutate_one(ind, index, small_space, np.random.default_rng(0))


def test_tied_members_mirror_their_free_variable(tied_space):
    assert tied_space.free_names == ("a", "b", "d")
    assert tied_space.free_index("c") == tied_space.free_index("b")
    rng = np.random.default_rng(2)
    ind = random_individual(tied_space, rng)
    for _ in range(100):
        ind = mutate_one(ind, 1, tied_space, rng)
        values = tied_space.expand(ind.values)
        assert values["b"] == values["c"]


def test_duplicate_names():
    spec = ParameterSpec(name="x", min=0, max=1, step=1, initial=0)
    with pytest.raises(exceptions.DuplicateParameterError) as e:
        ParameterSpace([spec, spec])
    assert "x" in str(e.value)


@pytest.mark.parametrize(
    "ties",
    [
        [["a"]],
        [["a", "z"]],
        [["a", "b"], ["b", "c"]],
        [["a", "c"]],
    ],
)
def test_invalid_tie_groups(ties):
    specs = [
        ParameterSpec(name="a", min=0, max=4, step=1, initial=0),
        ParameterSpec(name="b", min=0, max=4, step=1, initial=0),
        ParameterSpec(name="c", min=0, max=4, step=0.5, initial=0),
    ]
    with pytest.raises(exceptions.InvalidTieGroupError):
        ParameterSpace(specs, tie_groups=ties)


def test_tie_group_leader_is_first_in_spec_order():
    specs = [
        ParameterSpec(name="a", min=0, max=4, step=1, initial=1),
        ParameterSpec(name="b", min=0, max=4, step=1, initial=1),
    ]
    space = ParameterSpace(specs, tie_groups=[["b", "a"]])
    assert space.free_names == ("a",)


def test_values_from_mapping(tied_space):
    values = tied_space.values_from_mapping({"a": 0.8, "c": 3})
    assert values == (0.75, 3.0, 3.0)


def test_values_from_mapping_keeps_initial_values(rx_space):
    values = rx_space.expand(rx_space.values_from_mapping({"R1": 5146, "C1": 2.92}))
    assert values["R1"] == 5146
    assert values["C1"] == 2.92
    assert values["R2"] == 2000
    assert values["M6_width"] == values["M7_width"] == 15


def test_values_from_mapping_conflicting_ties(tied_space):
    with pytest.raises(exceptions.InvalidConfiguration):
        tied_space.values_from_mapping({"b": 1, "c": 2})


def test_values_from_mapping_unknown_name(tied_space):
    with pytest.raises(exceptions.InvalidConfiguration):
        tied_space.values_from_mapping({"nope": 1})


def test_best_individual_breaks_ties_by_lower_id():
    inds = [Individual(values=[0], id=i, fitness=f) for i, f in [(4, 2.0), (1, 2.0), (0, 1.0)]]
    assert best_individual(inds).id == 1


def test_grid_and_range_closure(rx_space):
    rng = np.random.default_rng(2024)
    population = [random_individual(rx_space, rng, id=i) for i in range(20)]
    produced = list(population)
    while len(produced) < 10_000:
        a = population[int(rng.integers(0, len(population)))]
        b = population[int(rng.integers(0, len(population)))]
        child = crossover(a, b, "uniform", rng, id=len(produced))
        child = mutate_one(child, int(rng.integers(0, rx_space.num_free)), rx_space, rng)
        produced.append(child)
        population[int(rng.integers(0, len(population)))] = child

    for ind in produced:
        assert len(ind.values) == rx_space.num_free
        for spec, value in zip(rx_space.free_specs, ind.values):
            assert on_grid(value, spec), (spec.name, value)
