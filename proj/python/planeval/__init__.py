"""Open-loop trajectory planning evaluation toolkit."""

from planeval._core import (  # noqa: F401
    FUTURE_STEPS,
    STEP_SECONDS,
    AgentState,
    BenchmarkReport,
    Command,
    DatasetStats,
    EgoStatus,
    EmptyInputError,
    EvalConfig,
    GeneratorConfig,
    HorizonMetrics,
    MetricTable,
    MissingPredictionsError,
    OrientedBox,
    Perturbation,
    Polyline,
    Pose2D,
    SampleVerdict,
    Sample,
    Scene,
    SchemaError,
    Trajectory,
    UndefinedMetricError,
    Vec2,
    __version__,
    collision_rate,
    collision_rate_legacy,
    dataset_stats,
    derive_command,
    estimate_yaws,
    evaluate,
    exact_box_box_intersect,
    exact_box_polyline_intersect,
    gen_synthetic,
    load_predictions,
    load_scenes,
    make_footprint,
    perturb,
    plan_constant_turn,
    plan_go_straight,
    run_planner,
    save_predictions,
    save_scenes,
    to_global,
    wrap_angle,
)
