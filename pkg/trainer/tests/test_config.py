import dataclasses

import pytest

from gantrain import TrainConfig, load_config


class TestDefaults:
    def test_optimizer_and_schedule_defaults(self):
        cfg = TrainConfig()
        assert cfg.lr == 2e-4
        assert cfg.adam_betas == (0.5, 0.99)
        assert cfg.adam_eps == 1e-8
        assert cfg.batch == 2
        assert cfg.resolution == 512
        assert cfg.decay_start_epoch == 50
        assert cfg.underwater_start_epoch == 30

    def test_loss_weight_defaults(self):
        cfg = TrainConfig()
        assert cfg.w_adversarial == 1.0
        assert cfg.w_underwater == 10.0
        assert cfg.w_dark_channel == 30.0


class TestValidation:
    @pytest.mark.parametrize(
        "field,value",
        [
            ("lr", 0.0),
            ("lr", -1e-4),
            ("adam_eps", 0.0),
            ("batch", 0),
            ("epochs_total", 0),
            ("decay_start_epoch", 0),
            ("w_adversarial", -1.0),
            ("w_underwater", -0.5),
            ("w_dark_channel", -2.0),
            ("disc_in_channels", 4),
            ("disc_preset", "huge"),
        ],
    )
    def test_rejects_out_of_range_fields(self, field, value):
        with pytest.raises(ValueError):
            dataclasses.replace(TrainConfig(), **{field: value})

    @pytest.mark.parametrize("resolution", [0, 6, 30, 511])
    def test_rejects_resolutions_not_multiple_of_four(self, resolution):
        with pytest.raises(ValueError):
            dataclasses.replace(TrainConfig(), resolution=resolution)

    @pytest.mark.parametrize("beta", [-0.1, 1.0, 1.5])
    def test_rejects_betas_outside_unit_interval(self, beta):
        with pytest.raises(ValueError):
            dataclasses.replace(TrainConfig(), adam_betas=(beta, 0.99))

    def test_index_term_must_start_before_training_ends(self):
        with pytest.raises(ValueError):
            TrainConfig(epochs_total=30, underwater_start_epoch=30)
        cfg = TrainConfig(epochs_total=31, underwater_start_epoch=30)
        assert cfg.underwater_start_epoch < cfg.epochs_total

    def test_decay_past_the_end_is_allowed(self):
        # Constant learning rate throughout: never reaches the ramp.
        cfg = TrainConfig(epochs_total=20, underwater_start_epoch=10,
                          decay_start_epoch=50)
        assert cfg.decay_start_epoch == 50

    def test_zero_weights_are_allowed(self):
        cfg = TrainConfig(w_underwater=0.0, w_dark_channel=0.0)
        assert cfg.w_underwater == 0.0


class TestLoadConfig:
    def test_file_values_override_defaults(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("lr: 0.001\nepochs_total: 45\n")
        cfg = load_config(path)
        assert cfg.lr == 1e-3
        assert cfg.epochs_total == 45
        assert cfg.batch == 2

    def test_overrides_beat_file_values(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("seed: 3\nepochs_total: 45\n")
        cfg = load_config(path, seed=9)
        assert cfg.seed == 9
        assert cfg.epochs_total == 45

    def test_none_overrides_are_ignored(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("seed: 3\n")
        cfg = load_config(path, seed=None)
        assert cfg.seed == 3

    def test_no_file_gives_defaults_plus_overrides(self):
        cfg = load_config(None, epochs_total=12, underwater_start_epoch=4)
        assert cfg.epochs_total == 12
        assert cfg.resolution == 512

    def test_unknown_keys_rejected(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("learning_rate: 0.001\n")
        with pytest.raises((ValueError, KeyError)):
            load_config(path)

    def test_betas_list_becomes_tuple(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("adam_betas: [0.6, 0.9]\n")
        cfg = load_config(path)
        assert cfg.adam_betas == (0.6, 0.9)

    def test_non_mapping_root_rejected(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("- just\n- a\n- list\n")
        with pytest.raises(ValueError, match="mapping"):
            load_config(path)
