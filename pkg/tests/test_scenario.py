"""Scenario orchestration, metrics and persistence."""
import numpy as np
import pytest

from formationsim.errors import ConfigError, InvalidInputError
from formationsim.export import export
from formationsim.formation import follower_reference
from formationsim.metrics import compute_metrics
from formationsim.scenario import (SimTrace, TRACE_COLUMNS, load_config,
                                   preset_path, run_scenario)
from formationsim.wind import WindProfile


@pytest.fixture(scope="module")
def scenario1():
    return load_config(preset_path("scenario1"))


def short(config, duration=1.0, **kw):
    return config.replace(duration=duration, **kw)


class TestConfig:
    def test_presets_load(self):
        for name in ("scenario1", "scenario2"):
            cfg = load_config(preset_path(name))
            assert len(cfg.followers) == 3
            assert cfg.controller == "rbf-bsmc"

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            preset_path("scenario9")

    def test_duplicate_offsets_rejected(self, scenario1):
        cfg = scenario1
        with pytest.raises(ConfigError):
            bad = [cfg.followers[0], cfg.followers[0]]
            cfg.replace(followers=bad)

    def test_bad_dt(self, scenario1):
        with pytest.raises(ConfigError):
            scenario1.replace(dt=0.2)

    def test_bad_controller(self, scenario1):
        with pytest.raises(ConfigError):
            scenario1.replace(controller="mpc")

    def test_yaml_errors(self, tmp_path):
        p = tmp_path / "bad.yaml"
        p.write_text("duration: [")
        with pytest.raises(ConfigError):
            load_config(p)
        with pytest.raises(ConfigError):
            load_config(tmp_path / "missing.yaml")


class TestRunScenario:
    def test_zero_duration_empty(self, scenario1):
        trace = run_scenario(short(scenario1, duration=0.0))
        assert trace.n_uavs == 3
        assert all(d.shape == (0, len(TRACE_COLUMNS)) for d in trace.uav_data)
        assert not trace.diverged

    def test_determinism(self, scenario1):
        cfg = short(scenario1, duration=1.0)
        t1 = run_scenario(cfg)
        t2 = run_scenario(cfg)
        for a, b in zip(t1.uav_data, t2.uav_data):
            np.testing.assert_array_equal(a, b)

    def test_follower_order_permutation(self, scenario1):
        cfg = short(scenario1, duration=1.0)
        swapped = cfg.replace(followers=[cfg.followers[1], cfg.followers[0],
                                         cfg.followers[2]])
        t1 = run_scenario(cfg)
        t2 = run_scenario(swapped)
        np.testing.assert_array_equal(t1.uav_data[0], t2.uav_data[1])
        np.testing.assert_array_equal(t1.uav_data[1], t2.uav_data[0])
        np.testing.assert_array_equal(t1.uav_data[2], t2.uav_data[2])

    def test_on_reference_stays_small(self, scenario1):
        cfg = short(scenario1, duration=2.0, wind=WindProfile(), controller="bsmc")
        for f in cfg.followers:
            ref = follower_reference(cfg.leader.pose(0.0), f.offset)
            f.initial_state.position = ref.position.copy()
            f.initial_state.velocity = ref.velocity.copy()
        trace = run_scenario(cfg)
        for i in range(3):
            err = np.linalg.norm(trace.columns(i, ("ex", "ey", "ez")), axis=1)
            assert err.max() < 0.05

    def test_uniform_time_grid(self, scenario1):
        trace = run_scenario(short(scenario1, duration=0.5))
        t = trace.column(0, "t")
        np.testing.assert_allclose(np.diff(t), trace.dt, atol=1e-12)
        assert np.all(np.diff(t) > 0)

    def test_trace_ground_truth_wind(self, scenario1):
        cfg = short(scenario1, duration=0.2)
        trace = run_scenario(cfg)
        # dtrue columns carry wind force / mass
        k = 10
        t = trace.column(0, "t")[k]
        expected = cfg.wind.sample(t, 0) / cfg.uav.m
        np.testing.assert_allclose(
            trace.columns(0, ("dtrue_x", "dtrue_y", "dtrue_z"))[k], expected,
            atol=1e-12)


class TestMetrics:
    def synthetic_trace(self, errors_per_uav):
        data = []
        for errs in errors_per_uav:
            n = len(errs)
            rows = np.zeros((n, len(TRACE_COLUMNS)))
            rows[:, 0] = np.arange(n) * 0.01
            rows[:, TRACE_COLUMNS.index("ex")] = errs
            data.append(rows)
        return SimTrace(dt=0.01, uav_data=data)

    def test_constant_error(self):
        report = compute_metrics(self.synthetic_trace([[2.0] * 8]))
        m = report.per_uav[0]
        assert m.mean_error == m.max_error == m.min_error == 2.0

    def test_mean_max_min(self):
        report = compute_metrics(self.synthetic_trace([[1.0, 2.0, 3.0]]))
        m = report.per_uav[0]
        assert m.mean_error == pytest.approx(2.0)
        assert m.max_error == 3.0
        assert m.min_error == 1.0

    def test_aggregate_unweighted_mean(self):
        report = compute_metrics(self.synthetic_trace([[1.0] * 4, [3.0] * 4]))
        assert report.aggregate.mean_error == pytest.approx(2.0)

    def test_final_quarter_window(self):
        errs = [0.0] * 6 + [4.0, 4.0]
        report = compute_metrics(self.synthetic_trace([errs]))
        assert report.per_uav[0].mean_error_final == pytest.approx(4.0)

    def test_empty_trace_rejected(self):
        empty = SimTrace(dt=0.01, uav_data=[np.zeros((0, len(TRACE_COLUMNS)))])
        with pytest.raises(InvalidInputError):
            compute_metrics(empty)

    def test_order_invariants(self, scenario1):
        trace = run_scenario(short(scenario1, duration=1.0))
        report = compute_metrics(trace)
        for m in report.per_uav + [report.aggregate]:
            assert m.min_error <= m.mean_error <= m.max_error
            assert m.control_effort >= 0.0 and np.isfinite(m.control_effort)


class TestExport:
    def test_files_written(self, scenario1, tmp_path):
        trace = run_scenario(short(scenario1, duration=0.3))
        report = compute_metrics(trace)
        written = export(trace, report, tmp_path)
        names = {p.name for p in written}
        assert {"uav1.csv", "uav2.csv", "uav3.csv", "metrics.txt",
                "trajectories.svg", "tracking_error.svg",
                "disturbance.svg"} <= names

    def test_csv_shape(self, scenario1, tmp_path):
        trace = run_scenario(short(scenario1, duration=0.3))
        export(trace, None, tmp_path, plots=False)
        lines = (tmp_path / "uav1.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == ",".join(TRACE_COLUMNS)
        assert len(lines) == trace.uav_data[0].shape[0] + 1
        assert len(lines[1].split(",")) == len(TRACE_COLUMNS)

    def test_empty_trace_header_only(self, scenario1, tmp_path):
        trace = run_scenario(short(scenario1, duration=0.0))
        export(trace, None, tmp_path, plots=False)
        content = (tmp_path / "uav1.csv").read_text(encoding="utf-8")
        assert content == ",".join(TRACE_COLUMNS) + "\n"

    def test_reexport_byte_identical(self, scenario1, tmp_path):
        trace = run_scenario(short(scenario1, duration=0.3))
        export(trace, None, tmp_path / "a", plots=False)
        export(trace, None, tmp_path / "b", plots=False)
        for name in ("uav1.csv", "uav2.csv", "uav3.csv"):
            assert (tmp_path / "a" / name).read_bytes() == \
                   (tmp_path / "b" / name).read_bytes()

    def test_lf_line_endings(self, scenario1, tmp_path):
        trace = run_scenario(short(scenario1, duration=0.1))
        export(trace, None, tmp_path, plots=False)
        raw = (tmp_path / "uav1.csv").read_bytes()
        assert b"\r" not in raw
