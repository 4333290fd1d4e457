"""Smoke tests for the python bindings."""

import math

import pytest

import planeval as pe


def test_version_and_constants():
    assert pe.__version__
    assert pe.STEP_SECONDS == 0.5
    assert pe.FUTURE_STEPS == 6


def test_wrap_angle_and_yaws():
    assert pe.wrap_angle(3 * math.pi) == pytest.approx(math.pi)
    yaws = pe.estimate_yaws([(2.5, 0.0), (5.0, 0.0), (7.5, 0.0)], 0.0)
    assert yaws == pytest.approx([0.0, 0.0, 0.0])
    stationary = pe.estimate_yaws([(0.0, 0.0)] * 3, 0.3)
    assert stationary == pytest.approx([0.3, 0.3, 0.3])


def test_planners():
    status = pe.EgoStatus(speed=5.0)
    traj = pe.plan_go_straight(status)
    assert traj.waypoints[-1] == pytest.approx((15.0, 0.0))

    turn = pe.plan_constant_turn(pe.EgoStatus(speed=5.0, yaw_rate=0.5))
    x, y = turn.waypoints[1]
    assert x == pytest.approx(10.0 * math.sin(0.5))
    assert y == pytest.approx(10.0 * (1.0 - math.cos(0.5)))

    slowed = pe.perturb(status, pe.Perturbation.velocity_scale(0.5))
    assert slowed.speed == pytest.approx(2.5)


def test_collision_rates():
    steps = [False, False, True, False, False, False]
    assert pe.collision_rate_legacy(steps, 3.0) == pytest.approx(1.0 / 6.0)
    assert pe.collision_rate(steps, 3.0) is True
    assert pe.collision_rate(steps, 1.0) is False


def test_geometry():
    a = pe.make_footprint((0.0, 0.0), 0.0, 4.0, 2.0)
    b = pe.make_footprint((3.0, 0.0), 0.3, 4.0, 2.0)
    far = pe.make_footprint((30.0, 0.0), 0.0, 4.0, 2.0)
    assert pe.exact_box_box_intersect(a, b) is True
    assert pe.exact_box_box_intersect(a, far) is False
    line = pe.Polyline([(-10.0, 0.0), (10.0, 0.0)])
    assert pe.exact_box_polyline_intersect(a, line) is True


def test_end_to_end_pipeline(tmp_path):
    config = pe.GeneratorConfig()
    config.num_scenes = 2
    config.straight_fraction = 1.0
    config.turn_fraction = 0.0
    scenes = pe.gen_synthetic(config, 7)

    path = tmp_path / "corpus.scenes"
    pe.save_scenes(scenes, path)
    loaded = pe.load_scenes(path)
    assert len(loaded) == 2
    assert sum(s.valid for s in loaded[0].samples) == 34

    preds = {}
    for sc in loaded:
        preds.update(pe.run_planner("go_straight", sc))

    report, verdicts = pe.evaluate(loaded, preds, pe.EvalConfig())
    assert report.evaluated_count == 68
    assert report.overall.l2.avg < 1e-9
    assert report.overall.ccr.avg == 0.0
    assert len(verdicts) == 68

    stats = pe.dataset_stats(loaded)
    assert stats.straight_fraction == pytest.approx(1.0)


def test_schema_error_surfaces(tmp_path):
    bad = tmp_path / "bad.preds"
    bad.write_text(
        '{"format_version":1,"sample_id":"x","waypoints":[[1,0],[2,0]]}\n'
    )
    with pytest.raises(pe.SchemaError):
        pe.load_predictions(bad)
