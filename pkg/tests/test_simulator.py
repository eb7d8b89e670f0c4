import math

import pytest
from cgaopt import exceptions
from cgaopt.cga import CgaConfig, run_cga
from cgaopt.evaluators import External
from cgaopt.evaluators.base import evaluate_batch
from cgaopt.fitness import Metrics
from cgaopt.simulator import (
    NetlistTemplate,
    SimJobConfig,
    format_value,
    parse_measurements,
    render_netlist,
    run_external,
)
from cgaopt.space import Individual, ParameterSpace, ParameterSpec

TABLE2_OPTIMUM = """
from pathlib import Path
Path("metrics.txt").write_text("gain_db=13.13\\npower_w=0.011\\nnf_db=2.01\\n")
"""


@pytest.fixture(scope="module")
def rc_space():
    return ParameterSpace(
        [
            ParameterSpec(name="R1", min=3000, max=6000, step=1, initial=5000, unit="ohm"),
            ParameterSpec(name="C1", min=1.5, max=3, step=0.01, initial=2, unit="pF"),
        ]
    )


@pytest.fixture(scope="module")
def template():
    return NetlistTemplate("* rc\nR1 in out {{R1}}\nC1 out 0 {{ C1 }}p\nV1 in 0 {{VDD}}\n")


def test_render_netlist(tied_space):
    tpl = NetlistTemplate("{{a}} {{b}} {{c}} {{d}} {{K}}")
    assert tpl.required_names == {"a", "b", "c", "d", "K"}
    ind = Individual(values=[0.5, 2, 3])
    assert render_netlist(tpl, ind, tied_space, {"K": 1.5}) == "0.5 2 2 3 1.5"


def test_render_netlist_unknown_placeholder(tied_space):
    tpl = NetlistTemplate("{{a}} {{nope}}")
    with pytest.raises(exceptions.TemplateError) as e:
        render_netlist(tpl, Individual(values=[0.5, 2, 3]), tied_space)
    assert "nope" in str(e.value)


@pytest.mark.parametrize("value, text", [(5146.0, "5146"), (2.92, "2.92"), (0.001, "0.001")])
def test_format_value(value, text):
    assert format_value(value) == text


def test_parse_measurements():
    text = """
    # written by the wrapper
    GAIN_DB = 16.35
    power_w=0.01   # supply power

    nf_db = 3.56
    iip3_dbm = -12
    """
    assert parse_measurements(text) == Metrics(gain_db=16.35, power_w=0.01, nf_db=3.56)


@pytest.mark.parametrize(
    "text, line_no",
    [
        ("gain_db=1\ngain_db=2\npower_w=1\nnf_db=1\n", 2),
        ("gain_db=abc\npower_w=1\nnf_db=1\n", 1),
        ("gain_db=1\npower_w 1\nnf_db=1\n", 2),
        ("gain_db=1\nnf_db=1\n", None),
        ("", None),
    ],
)
def test_parse_measurements_errors(text, line_no):
    with pytest.raises(exceptions.MeasurementParseError) as e:
        parse_measurements(text)
    assert e.value.line_no == line_no


def test_sim_job_config_from_dict():
    job = SimJobConfig.from_dict({"command": "ngspice", "timeout_s": 5, "constants": {"VDD": 1}})
    assert job.command == ("ngspice",)
    assert job.timeout == 5.0
    assert job.fixed_constants == {"VDD": 1.0}
    with pytest.raises(exceptions.InvalidConfiguration):
        SimJobConfig.from_dict({"command": []})
    with pytest.raises(exceptions.InvalidConfiguration):
        SimJobConfig.from_dict({"command": ["sim"], "timeout_s": 0})


def test_run_external_reads_result_and_cleans_up(tmp_path, stub_simulator):
    command = stub_simulator(
        """
        import sys
        from pathlib import Path
        netlist = Path(sys.argv[1]).read_text()
        assert "R1 in out 5146" in netlist
        Path("metrics.txt").write_text("gain_db=16.35\\npower_w=0.01\\nnf_db=3.56\\n")
        """
    )
    root = tmp_path / "runs"
    job = SimJobConfig(command=command, workdir_root=root)
    metrics = run_external(job, "R1 in out 5146\n")
    assert metrics == Metrics(gain_db=16.35, power_w=0.01, nf_db=3.56)
    assert list(root.iterdir()) == []


def test_non_zero_exit_keeps_workdir(tmp_path, stub_simulator):
    command = stub_simulator("import sys\nprint('convergence failure')\nsys.exit(4)\n")
    root = tmp_path / "runs"
    job = SimJobConfig(command=command, workdir_root=root)
    with pytest.raises(exceptions.SimulationError) as e:
        run_external(job, "* netlist\n")
    assert e.value.returncode == 4
    assert "convergence failure" in e.value.output
    (kept,) = root.iterdir()
    assert (kept / "circuit.cir").read_text() == "* netlist\n"


def test_timeout(tmp_path, stub_simulator):
    command = stub_simulator("import time\ntime.sleep(30)\n")
    job = SimJobConfig(command=command, timeout=0.5, workdir_root=tmp_path, keep_workdir="never")
    with pytest.raises(exceptions.SimulationTimeout):
        run_external(job, "* netlist\n")
    assert list(tmp_path.glob("cgaopt-*")) == []


def test_missing_result_file(tmp_path, stub_simulator):
    job = SimJobConfig(command=stub_simulator("pass\n"), workdir_root=tmp_path)
    with pytest.raises(exceptions.MeasurementParseError):
        run_external(job, "* netlist\n")


def test_missing_executable(tmp_path):
    job = SimJobConfig(command=[str(tmp_path / "no-such-simulator")], workdir_root=tmp_path)
    with pytest.raises(exceptions.SimulationError):
        run_external(job, "* netlist\n")


def test_external_evaluator_reproduces_table2_optimum(rc_space, template, stub_simulator):
    command = stub_simulator(TABLE2_OPTIMUM)
    ev = External(
        rc_space, params={"template": template, "command": command, "constants": {"VDD": 1.2}}
    )
    ind = ev(Individual(values=rc_space.initial_values()))
    assert ind.metrics == Metrics(gain_db=13.13, power_w=0.011, nf_db=2.01)
    assert math.isclose(ind.fitness, 592.67, rel_tol=5e-3)


def test_failing_simulation_is_a_rejected_evaluation(rc_space, template, stub_simulator):
    ev = External(
        rc_space,
        params={
            "template": template,
            "command": stub_simulator("import sys\nsys.exit(1)\n"),
            "constants": {"VDD": 1.2},
            "keep_workdir": "never",
        },
    )
    ind = ev(Individual(values=rc_space.initial_values(), id=7))
    assert ind.rejected
    assert ind.id == 7
    assert "exited with status 1" in ind.error


def test_cga_campaign_through_external_simulator(rc_space, template, stub_simulator):
    command = stub_simulator(
        """
        import re, sys
        from pathlib import Path
        netlist = Path(sys.argv[1]).read_text()
        r1 = float(re.search(r"^R1 in out (\\S+)$", netlist, re.M).group(1))
        Path("metrics.txt").write_text(f"gain_db={r1 / 1000}\\npower_w=0.01\\nnf_db=2\\n")
        """
    )
    ev = External(
        rc_space, params={"template": template, "command": command, "constants": {"VDD": 1.2}}
    )
    log = run_cga(rc_space, CgaConfig(pop_size=4, n_gen=3, seed=5), ev)
    assert log.total_evaluations == 4 + 3 * 2
    assert len(log.evaluations) == 10
    assert all(not e.individual.rejected for e in log.evaluations)
    assert log.is_monotone()
    r1 = rc_space.expand(log.champion.values)["R1"]
    assert log.final_best == pytest.approx((r1 / 1000) / (2 * 0.01))


def test_non_utf8_result_file_is_a_parse_error(tmp_path, stub_simulator):
    command = stub_simulator(
        """
        from pathlib import Path
        Path("metrics.txt").write_bytes(b"gain_db=1\\npower_w=1\\nnf_db=1\\xff\\n")
        """
    )
    job = SimJobConfig(command=command, workdir_root=tmp_path)
    with pytest.raises(exceptions.MeasurementParseError) as e:
        run_external(job, "* netlist\n")
    assert "not UTF-8" in str(e.value)


def test_non_utf8_simulator_output_is_tolerated(tmp_path, stub_simulator):
    command = stub_simulator(
        """
        import sys
        from pathlib import Path
        sys.stdout.buffer.write(b"\\xff\\xfe log\\n")
        sys.stderr.buffer.write(b"\\x80 warning\\n")
        Path("metrics.txt").write_text("gain_db=16.35\\npower_w=0.01\\nnf_db=3.56\\n")
        """
    )
    job = SimJobConfig(command=command, workdir_root=tmp_path)
    assert run_external(job, "* netlist\n") == Metrics(gain_db=16.35, power_w=0.01, nf_db=3.56)


def test_non_utf8_output_of_a_failing_simulator(tmp_path, stub_simulator):
    command = stub_simulator("import sys\nsys.stdout.buffer.write(b'\\xff bad\\n')\nsys.exit(2)\n")
    job = SimJobConfig(command=command, workdir_root=tmp_path, keep_workdir="never")
    with pytest.raises(exceptions.SimulationError) as e:
        run_external(job, "* netlist\n")
    assert "bad" in e.value.output


def test_unusable_workdir_root_is_a_simulation_error(tmp_path, stub_simulator):
    root = tmp_path / "not-a-directory"
    root.write_text("")
    job = SimJobConfig(command=stub_simulator("pass\n"), workdir_root=root)
    with pytest.raises(exceptions.SimulationError) as e:
        run_external(job, "* netlist\n")
    assert "workdir" in str(e.value)


def test_garbled_result_does_not_abort_the_campaign(rc_space, template, tmp_path, stub_simulator):
    counter = tmp_path / "calls.txt"
    command = stub_simulator(
        f"""
        from pathlib import Path
        counter = Path({str(counter)!r})
        calls = int(counter.read_text()) + 1 if counter.exists() else 1
        counter.write_text(str(calls))
        if calls == 2:
            Path("metrics.txt").write_bytes(b"gain_db=\\xff\\n")
        else:
            Path("metrics.txt").write_text("gain_db=13.13\\npower_w=0.011\\nnf_db=2.01\\n")
        """
    )
    ev = External(
        rc_space,
        params={
            "template": template,
            "command": command,
            "constants": {"VDD": 1.2},
            "keep_workdir": "never",
        },
    )
    log = run_cga(rc_space, CgaConfig(pop_size=3, n_gen=1, seed=0), ev)
    assert log.total_evaluations == 3 + 2
    rejected = [e.individual for e in log.evaluations if e.individual.rejected]
    assert len(rejected) == 1
    assert rejected[0].fitness == -math.inf
    assert "not UTF-8" in rejected[0].error
    assert not log.champion.rejected


def test_concurrent_jobs_use_separate_workdirs(rc_space, template, tmp_path, stub_simulator):
    seen = tmp_path / "workdirs.txt"
    command = stub_simulator(
        f"""
        import os, re, sys, time
        from pathlib import Path
        netlist = Path(sys.argv[1]).read_text()
        r1 = float(re.search(r"^R1 in out (\\S+)$", netlist, re.M).group(1))
        with open({str(seen)!r}, "a") as f:
            f.write(os.getcwd() + "\\n")
        time.sleep(0.05)
        Path("metrics.txt").write_text(f"gain_db={{r1 / 1000}}\\npower_w=0.01\\nnf_db=2\\n")
        """
    )
    root = tmp_path / "runs"
    ev = External(
        rc_space,
        params={
            "template": template,
            "command": command,
            "constants": {"VDD": 1.2},
            "workdir_root": str(root),
        },
        reentrant=True,
    )
    individuals = [Individual(values=[3000 + 100 * i, 2.0], id=i) for i in range(8)]
    evaluated = evaluate_batch(individuals, ev, workers=4)

    assert [ind.id for ind in evaluated] == list(range(8))
    for ind in evaluated:
        assert ind.metrics.gain_db == pytest.approx(ind.values[0] / 1000)
    workdirs = seen.read_text().split()
    assert len(workdirs) == len(set(workdirs)) == 8
    assert list(root.iterdir()) == []
