"""Tests for configuration loading and validation."""

from __future__ import annotations

from pathlib import Path

import pytest

from poissonnet.config import (
    PAPER_SCALE_TRIALS,
    ExperimentConfig,
    ReadoutConfig,
    RuntimeSettings,
    ScheduleConfig,
    SizePolicyConfig,
    StepConfig,
    load_config,
    merge_overrides,
    resolve_config,
)
from poissonnet.config.loader import load_json_file
from poissonnet.exceptions import ConfigNotFoundError, ConfigValidationError
from poissonnet.graph.schedule import GraphSchedule, ScheduleKind, write_scripted_schedule


class TestExperimentConfig:
    """Tests for ExperimentConfig model."""

    def test_default_config(self):
        """Defaults describe the 20-node fixed-graph study."""
        config = ExperimentConfig()

        assert config.N == 20
        assert config.hp.a == 10.0
        assert config.hp.b == 1.0
        assert config.schedule.kind == "unbalanced_cycle"
        assert config.estimators == ["bhom", "adhoc"]
        assert config.target == 20

    def test_default_sizes(self):
        """Half the nodes hold n_max samples, the rest one."""
        config = ExperimentConfig(N=5)
        assert config.sample_sizes == [50, 50, 50, 1, 1]

    def test_paper_scale_constant(self):
        """The full-scale trial count."""
        assert PAPER_SCALE_TRIALS == 50_000

    def test_extra_fields_forbidden(self):
        """Unknown keys are rejected."""
        with pytest.raises(ValueError, match="Extra inputs"):
            ExperimentConfig.model_validate({"bogus": 1})

    @pytest.mark.parametrize(
        "data",
        [
            {"N": 3, "excluded_node": 4},
            {"N": 3, "target_node": 5},
            {"N": 3, "pinned_rates": {"4": 1.0}},
            {"N": 3, "pinned_rates": {"2": 0.0}},
            {"N": 3, "readout": {"nodes": [0]}},
            {"N": 1, "estimators": ["adhoc"]},
            {"N": 3, "size_policy": {"kind": "explicit", "sizes": [1, 2]}},
        ],
    )
    def test_cross_field_checks(self, data):
        """Node references must exist and distributed runs need two nodes."""
        with pytest.raises(ValueError):
            ExperimentConfig.model_validate(data)

    def test_single_node_centralized(self):
        """A single node is fine for the centralized estimators."""
        config = ExperimentConfig(N=1, estimators=["bhom", "centralized_ml"])
        assert config.sample_sizes == [50]


class TestSectionModels:
    """Tests for the nested configuration sections."""

    def test_explicit_sizes(self):
        """Explicit lists are used as given."""
        policy = SizePolicyConfig(kind="explicit", sizes=[3, 1, 4])
        assert policy.sizes_for(3) == [3, 1, 4]
        assert policy.largest(3) == 4

    def test_explicit_requires_sizes(self):
        """kind='explicit' needs a list."""
        with pytest.raises(ValueError):
            SizePolicyConfig(kind="explicit")

    def test_homogeneous_sizes(self):
        """Every node holds n_per_node samples."""
        assert SizePolicyConfig(kind="homogeneous", n_per_node=4).sizes_for(3) == [4, 4, 4]

    def test_scripted_requires_path(self):
        """A scripted schedule needs a file."""
        with pytest.raises(ValueError):
            ScheduleConfig(kind="scripted")

    def test_build_schedules(self, tmp_path: Path):
        """Each kind builds the matching schedule."""
        assert ScheduleConfig().build(6, 0) == GraphSchedule.unbalanced_cycle(6)
        assert ScheduleConfig(kind="complete").build(3, 0) == GraphSchedule.complete(3)
        er = ScheduleConfig(kind="erdos_renyi", p=0.2).build(5, 9)
        assert er.seed == 9
        pinned = ScheduleConfig(kind="erdos_renyi", p=0.2, seed=4).build(5, 9)
        assert pinned.seed == 4

        path = tmp_path / "schedule.txt"
        write_scripted_schedule(path, GraphSchedule.cycle(3), 1)
        scripted = ScheduleConfig(kind="scripted", path=path).build(3, 0)
        assert scripted.kind is ScheduleKind.SCRIPTED

    def test_step_schedule(self):
        """StepConfig builds the matching StepSchedule."""
        steps = StepConfig(gamma0=0.5, exponent=0.75, max_rel_step=None).to_schedule()
        assert steps.gamma0 == 0.5
        assert steps.exponent == 0.75
        assert steps.max_rel_step is None

    def test_step_exponent_range(self):
        """Exponents must lie in (0.5, 1]."""
        with pytest.raises(ValueError):
            StepConfig(exponent=0.5)

    @pytest.mark.parametrize("bound", [0.0, 1.0])
    def test_step_bound_range(self, bound):
        """The relative step bound lies in (0, 1)."""
        with pytest.raises(ValueError):
            StepConfig(max_rel_step=bound)

    def test_sweep_defaults(self):
        """fig6 runs 1000 rounds on the complete graph unless configured."""
        sweep = ExperimentConfig().sweep
        assert sweep.rounds == 1000
        assert sweep.schedule.kind == "complete"
        assert sweep.schedule.build(8, 0).kind is ScheduleKind.FIXED

    def test_tracked_nodes(self):
        """By default two heavy and two light nodes are recorded."""
        assert ReadoutConfig().tracked_nodes(20) == (1, 2, 11, 12)
        assert ReadoutConfig().tracked_nodes(2) == (1, 2)
        assert ReadoutConfig(nodes=[3]).tracked_nodes(20) == (3,)


class TestLoadConfig:
    """Tests for load_config and load_json_file."""

    def test_no_path_gives_defaults(self):
        """Without a file the defaults are returned."""
        assert load_config() == ExperimentConfig()

    def test_load_file(self, config_file: Path):
        """Values from the file replace the defaults."""
        config = load_config(config_file)
        assert config.N == 6
        assert config.M == 30
        assert config.seed == 5
        assert config.size_policy.n_max == 10

    def test_missing_file(self, tmp_path: Path):
        """A missing file raises ConfigNotFoundError."""
        with pytest.raises(ConfigNotFoundError, match="File not found"):
            load_config(tmp_path / "missing.json")

    def test_invalid_json(self, tmp_path: Path):
        """Malformed JSON raises ConfigValidationError."""
        path = tmp_path / "broken.json"
        path.write_text("{ not json", encoding="utf-8")
        with pytest.raises(ConfigValidationError, match="Invalid JSON"):
            load_config(path)

    def test_top_level_must_be_object(self, tmp_path: Path):
        """A JSON list is not a configuration."""
        path = tmp_path / "list.json"
        path.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(ConfigValidationError, match="JSON object"):
            load_json_file(path)

    def test_validation_errors_are_listed(self, tmp_path: Path):
        """Each failing field is reported on its own line."""
        path = tmp_path / "bad.json"
        path.write_text('{"N": 0, "prior": {"a": -1}}', encoding="utf-8")
        with pytest.raises(ConfigValidationError) as exc:
            load_config(path)
        message = str(exc.value)
        assert message.startswith("Invalid configuration in bad.json:")
        assert "  - N: " in message
        assert "  - prior.a: " in message


class TestOverrides:
    """Tests for merge_overrides and resolve_config."""

    def test_dotted_keys(self):
        """Dotted keys reach nested sections."""
        config = merge_overrides(ExperimentConfig(), {"T": 7, "output.out_dir": "elsewhere"})
        assert config.T == 7
        assert config.output.out_dir == Path("elsewhere")

    def test_none_skipped(self):
        """Unset flags leave the config untouched."""
        base = ExperimentConfig(seed=12)
        assert merge_overrides(base, {"seed": None}).seed == 12

    def test_none_clears_when_requested(self):
        """With skip_none=False a None value clears an optional field."""
        base = ExperimentConfig(target_node=3)
        assert merge_overrides(base, {"target_node": None}, skip_none=False).target_node is None

    def test_invalid_override(self):
        """Overrides are revalidated."""
        with pytest.raises(ConfigValidationError, match="overrides"):
            merge_overrides(ExperimentConfig(), {"M": 0})

    def test_override_into_scalar(self):
        """A dotted key cannot descend into a scalar."""
        with pytest.raises(ConfigValidationError, match="not a section"):
            merge_overrides(ExperimentConfig(), {"N.value": 3})

    def test_precedence(self, config_file: Path, tmp_path: Path):
        """defaults < file < environment < flags."""
        settings = RuntimeSettings(out_dir=tmp_path / "from-env")
        config = resolve_config(config_file, {"seed": 99}, settings)
        assert config.N == 6
        assert config.seed == 99
        assert config.output.out_dir == tmp_path / "from-env"

        flagged = resolve_config(
            config_file, {"output.out_dir": str(tmp_path / "from-flag")}, settings
        )
        assert flagged.output.out_dir == tmp_path / "from-flag"


class TestRuntimeSettings:
    """Tests for environment-driven settings."""

    def test_defaults(self, monkeypatch: pytest.MonkeyPatch):
        """Without environment variables the settings are serial and quiet."""
        for name in ("WORKERS", "CHUNK_SIZE", "LOG_LEVEL", "OUT_DIR"):
            monkeypatch.delenv(f"POISSONNET_{name}", raising=False)
        settings = RuntimeSettings()
        assert settings.workers == 1
        assert settings.chunk_size == 250
        assert settings.log_level == "WARNING"
        assert settings.out_dir is None

    def test_environment(self, monkeypatch: pytest.MonkeyPatch):
        """POISSONNET_* variables are read."""
        monkeypatch.setenv("POISSONNET_WORKERS", "3")
        monkeypatch.setenv("POISSONNET_OUT_DIR", "/tmp/poissonnet-out")
        settings = RuntimeSettings()
        assert settings.workers == 3
        assert settings.out_dir == Path("/tmp/poissonnet-out")
