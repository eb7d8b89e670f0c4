import itertools
import json
import math

import numpy as np
import pytest
from cgaopt import exceptions
from cgaopt.evaluators import (
    Benchmark,
    EvalResult,
    Evaluator,
    EvaluatorKind,
    EvaluatorSpec,
    External,
    PhysicalLite,
    QuadraticRF,
    evaluate_batch,
    evaluate_benchmark,
    evaluate_quadratic_rf,
    get_evaluator,
)
from cgaopt.fitness import FomConfig, Metrics, lin_to_db
from cgaopt.load import default_netlist
from cgaopt.space import Individual, ParameterSpace, ParameterSpec, random_individual


def test_quadratic_rf_optimum(small_space):
    ev = QuadraticRF(small_space, params={"targets": 0.3})
    best = ev(Individual(values=[3, 3, 3, 3, 3]))
    assert best.metrics == Metrics(gain_db=18.0, power_w=0.008, nf_db=2.0)
    assert best.fitness == pytest.approx(18.0 / (2.0 * 0.008))
    worse = ev(Individual(values=[3, 3, 3, 3, 9]))
    assert worse.fitness < best.fitness


def test_quadratic_rf_distance_ignores_degenerate_variables(tied_space):
    ev = QuadraticRF(tied_space, params={"targets": [0.5, 0.5, 0.0]})
    assert ev.distance([0.5, 2, 3]) == 0.0
    assert ev.distance([1.0, 2, 3]) == pytest.approx(0.25 / 2)


def test_evaluate_quadratic_rf_function(small_space):
    result = evaluate_quadratic_rf(Individual(values=[5] * 5), small_space)
    assert isinstance(result, EvalResult)
    assert result.fitness == pytest.approx(1125.0)


@pytest.mark.parametrize("targets", [1.5, -0.1, [0.5, 0.5]])
def test_quadratic_rf_invalid_targets(small_space, targets):
    with pytest.raises(exceptions.InvalidConfiguration):
        QuadraticRF(small_space, params={"targets": targets})


def test_unknown_evaluator_parameter(small_space):
    with pytest.raises(exceptions.InvalidConfiguration):
        QuadraticRF(small_space, params={"G1": 3})


def test_physical_lite_initial_point(rx_space):
    ev = PhysicalLite(rx_space)
    ind = Individual(values=rx_space.initial_values())
    (f1, f2), (g1, g2), power = ev.stages(ind)
    result = ev.evaluate(ind)

    assert power == pytest.approx(1.2 * (5 + 2 + 2) * 1e-3)
    assert result.metrics.power_w == pytest.approx(power)
    assert result.metrics.gain_db == pytest.approx(lin_to_db(g1 * g2))
    assert result.metrics.nf_db == pytest.approx(lin_to_db(f1 + (f2 - 1) / g1))
    assert f1 > 1 and f2 > 1
    assert math.isfinite(result.fitness) and result.fitness > 0


def test_physical_lite_more_bias_current_costs_power(rx_space):
    ev = PhysicalLite(rx_space)
    low = Individual(values=rx_space.values_from_mapping({"I2": 1}))
    high = Individual(values=rx_space.values_from_mapping({"I2": 5}))
    assert ev(high).metrics.power_w > ev(low).metrics.power_w


def test_physical_lite_needs_receiver_parameters(small_space):
    with pytest.raises(exceptions.InvalidConfiguration):
        PhysicalLite(small_space)


def test_physical_lite_rejects_non_positive_values():
    names = ("R1", "R3", "Rm", "I1", "I2", "I3", "M1_width", "M6_width")
    specs = [ParameterSpec(name=n, min=1, max=2, step=1, initial=1) for n in names]
    specs[1] = ParameterSpec(name="R3", min=0, max=2, step=1, initial=0)
    space = ParameterSpace(specs)
    ev = PhysicalLite(space)
    ind = ev(Individual(values=space.initial_values()))
    assert ind.rejected
    assert ind.metrics is None
    assert "R3" in ind.error


@pytest.mark.parametrize("function", ["sphere", "rastrigin"])
def test_benchmark_optimum_at_offset(small_space, function):
    params = {"function": function}
    assert evaluate_benchmark(Individual(values=[5] * 5), small_space, params).fitness == 0
    assert evaluate_benchmark(Individual(values=[7] * 5), small_space, params).fitness < 0


def test_benchmark_rosenbrock(small_space):
    ev = Benchmark(small_space, params={"function": "rosenbrock"})
    assert ev.evaluate(Individual(values=[6] * 5)).fitness == pytest.approx(0.0, abs=1e-12)
    single = ParameterSpace([ParameterSpec(name="x", min=0, max=10, step=1, initial=0)])
    ev = Benchmark(single, params={"function": "rosenbrock"})
    # z = 10 * (0.8 - 0.5) = 3
    assert ev.evaluate(Individual(values=[8])).fitness == pytest.approx(-4.0)


def test_benchmark_sphere_value(small_space):
    ev = Benchmark(small_space, params={"function": "sphere"})
    # z = 10 * (0.7 - 0.5) = 2 in every coordinate
    assert ev.evaluate(Individual(values=[7] * 5)).fitness == pytest.approx(-20.0)


def test_unknown_benchmark(small_space):
    with pytest.raises(exceptions.UnknownBenchmarkError):
        Benchmark(small_space, params={"function": "ackley"})


class Flaky(Evaluator):
    kind = EvaluatorKind.quadratic_rf

    def evaluate(self, ind):
        if ind.id % 2:
            raise exceptions.SimulationError(command=["sim"], returncode=1, output="boom")
        return EvalResult(fitness=float(ind.id))


def test_evaluation_errors_become_rejected_individuals(small_space):
    ev = Flaky(small_space)
    inds = [Individual(values=[0] * 5, id=i) for i in range(4)]
    evaluated = evaluate_batch(inds, ev)
    assert [ind.fitness for ind in evaluated] == [0.0, -math.inf, 2.0, -math.inf]
    assert evaluated[1].rejected and "boom" in evaluated[1].error
    assert evaluated[0].error is None


def test_parallel_batch_keeps_input_order(small_space):
    ev = QuadraticRF(small_space, params={"targets": 0.3})
    inds = [Individual(values=[i % 11] * 5, id=i) for i in range(40)]
    assert evaluate_batch(inds, ev, workers=4) == evaluate_batch(inds, ev, workers=1)


def test_evaluator_spec():
    spec = EvaluatorSpec.from_dict({"kind": "benchmark", "params": {"function": "rastrigin"}})
    assert spec.kind is EvaluatorKind.benchmark
    assert spec.reentrant is True
    assert EvaluatorSpec.from_dict({"kind": "external"}).reentrant is False
    assert EvaluatorSpec.from_dict(spec.to_dict()) == spec
    with pytest.raises(exceptions.UnknownEvaluatorError):
        EvaluatorSpec.from_dict({"kind": "spectre"})
    with pytest.raises(exceptions.InvalidConfiguration):
        EvaluatorSpec.from_dict({"params": {}})


@pytest.mark.parametrize(
    "kind, cls",
    [("quadratic_rf", QuadraticRF), ("physical_lite", PhysicalLite), ("benchmark", Benchmark)],
)
def test_get_evaluator(rx_space, kind, cls):
    ev = get_evaluator(EvaluatorSpec(kind=kind), rx_space, FomConfig(rules=[]))
    assert isinstance(ev, cls)
    assert ev.reentrant
    assert ev.fom_config == FomConfig(rules=[])
    json.dumps(ev.describe())


def test_get_external_evaluator(rx_space, stub_simulator):
    command = stub_simulator("print('unused')\n")
    spec = EvaluatorSpec(
        kind="external",
        params={
            "template": str(default_netlist()),
            "command": command,
            "constants": {"VDD": 1.2, "RF_amp": 0.3, "L": 0.18},
        },
    )
    ev = get_evaluator(spec, rx_space)
    assert isinstance(ev, External)
    assert not ev.reentrant
    json.dumps(ev.describe())


def test_external_evaluator_checks_template_names(rx_space, stub_simulator):
    spec = EvaluatorSpec(
        kind="external",
        params={"template": str(default_netlist()), "command": stub_simulator("pass\n")},
    )
    with pytest.raises(exceptions.InvalidConfiguration) as e:
        get_evaluator(spec, rx_space)
    assert "VDD" in str(e.value)


def test_physical_lite_worked_example(rx_space):
    ev = PhysicalLite(rx_space)
    (f1, _), _, power = ev.stages(Individual(values=rx_space.initial_values()))
    gm1 = math.sqrt(2 * 200e-6 * (144 / 0.18) * 0.005)
    assert gm1 == pytest.approx(0.040, rel=1e-12)
    assert f1 == pytest.approx(1.665, rel=1e-9)
    assert 1.33 / ((f1 - 1) * 50) == pytest.approx(gm1, rel=1e-9)
    assert power == pytest.approx(0.0108, rel=1e-9)


def test_quadratic_rf_grid_search_finds_the_targets():
    space = ParameterSpace(
        [ParameterSpec(name=f"x{i}", min=0, max=10, step=1, initial=0) for i in range(3)]
    )
    ev = QuadraticRF(space, params={"targets": [0.3, 0.7, 0.0]})
    grid = list(itertools.product(range(11), repeat=3))
    fitness = [ev.evaluate(Individual(values=point)).fitness for point in grid]
    best = int(np.argmax(fitness))
    assert grid[best] == (3, 7, 0)
    assert fitness[best] == pytest.approx(1125.0)
    assert sorted(fitness)[-2] < fitness[best]


@pytest.mark.parametrize(
    "kind, params",
    [
        ("quadratic_rf", {}),
        ("physical_lite", {}),
        ("benchmark", {"function": "rastrigin"}),
    ],
)
def test_built_in_evaluators_are_pure(rx_space, kind, params):
    ev = get_evaluator(EvaluatorSpec(kind=kind, params=params), rx_space)
    rng = np.random.default_rng(17)
    for _ in range(1000):
        ind = random_individual(rx_space, rng)
        first, second = ev.evaluate(ind), ev.evaluate(ind)
        assert first == second
