"""End-to-end checks of the built-in experiments through the runner"""

from pathlib import Path

import pandas as pd
import pytest

from config import settings
from quantum import ConfigError
from runner import get_registry, loads_config, read_table, run_experiment


@pytest.fixture(autouse=True)
def _private_cache(isolated_cache):
    yield isolated_cache


def run_table(toml: str, out_dir) -> tuple[pd.DataFrame, dict[str, float]]:
    manifest = run_experiment(loads_config(toml), out_dir=out_dir)
    table = read_table(Path(manifest.run_dir) / f"{manifest.experiment}.csv")
    return table, manifest.summary.scalars


class TestPurifySweep:
    @pytest.fixture
    def table(self, out_dir):
        table, _ = run_table('experiment = "purify-sweep"\nseed = 3\n', out_dir)
        return table.set_index("t_d_ns")

    def test_short_delay_post_fidelity(self, table):
        assert 0.92 <= table.loc[20.0, "fidelity_post"] <= 0.96

    def test_long_delay_relative_gain(self, table):
        assert table.loc[400.0, "relative_gain"] >= 0.20

    def test_success_strictly_decreasing(self, table):
        success = list(table["success"])
        assert all(b < a for a, b in zip(success, success[1:]))

    def test_purification_beats_fresh_pair(self, table):
        assert (table["fidelity_post"] > table["fidelity_pre"]).all()


class TestProtocolCompare:
    @pytest.fixture
    def table(self, out_dir):
        table, _ = run_table(
            'experiment = "protocol-compare"\nseed = 3\n[sweep]\nt_d_ns = [20, 400]\n', out_dir
        )
        return table

    def _row(self, table, t_d, decay):
        match = table[(table["t_d_ns"] == t_d) & (table["storage_decay"] == decay)]
        return match.iloc[0]

    def test_phase_purification_does_not_help(self, table):
        gain = table["phase_fidelity"] - table["fidelity_pre"]
        assert (gain <= 0.01).all()

    def test_double_matches_bit_without_storage_decay(self, table):
        row = self._row(table, 20.0, 0.0)
        assert row["double_fidelity"] == pytest.approx(row["bit_fidelity"], abs=0.02)

    def test_double_corrects_storage_dephasing(self, table):
        row = self._row(table, 20.0, 1.0)
        assert row["bit_fidelity"] - 0.01 <= row["double_fidelity"] <= row["bit_fidelity"] + 0.05

    def test_double_loses_at_long_delay(self, table):
        row = self._row(table, 400.0, 1.0)
        assert row["double_fidelity"] < row["bit_fidelity"]


class TestProtect:
    @pytest.fixture(scope="class")
    def result(self, tmp_path_factory):
        root = tmp_path_factory.mktemp("protect")
        with settings.override(CACHE_DIR=str(root / "cache")):
            return run_table('experiment = "protect"\nseed = 5\n', root / "runs")

    def test_calibrated_free_decay(self, result):
        _, scalars = result
        assert scalars["free_fidelity_at_1400ns"] == pytest.approx(0.576, abs=0.04)

    @pytest.mark.parametrize("method", ["dd", "rabi"])
    def test_protected_fidelity(self, result, method):
        _, scalars = result
        assert scalars[f"{method}_fidelity_at_1400ns"] >= 0.70

    @pytest.mark.parametrize("method", ["dd", "rabi"])
    def test_effective_t2_near_twelve_us(self, result, method):
        _, scalars = result
        assert scalars[f"{method}_t2_us"] == pytest.approx(12.0, rel=0.25)

    def test_free_t2_much_shorter(self, result):
        _, scalars = result
        assert scalars["free_t2_us"] < scalars["dd_t2_us"] / 2

    @pytest.mark.parametrize("method", ["free", "dd"])
    def test_reference_bounds_noisy_series(self, result, method):
        table, _ = result
        rows = table[table["method"] == method]
        assert rows["reference"].iloc[0] == pytest.approx(1.0)
        assert (rows["reference"] >= rows["fidelity"] - 1e-9).all()

    def test_dd_buffer_must_divide_total(self):
        config = loads_config('experiment = "protect"\nseed = 1\n[sweep]\ndd_buffer_ns = [15]\n')
        with pytest.raises(ConfigError, match="dd_buffer_ns=15"):
            get_registry().resolve(config)

    def test_total_must_fit_sample_grid(self):
        config = loads_config('experiment = "protect"\nseed = 1\n[params]\ntotal_ns = 1000\n')
        with pytest.raises(ConfigError, match="total_ns=1000"):
            get_registry().resolve(config)

    def test_dividing_buffer_accepted(self):
        config = loads_config('experiment = "protect"\nseed = 1\n[sweep]\ndd_buffer_ns = [20]\n')
        assert get_registry().resolve(config).axes["dd_buffer_ns"] == (20.0,)


class TestParameterChecks:
    @pytest.mark.parametrize(
        "toml",
        [
            'experiment = "purify-sweep"\nseed = 1\n[params]\nselection = "xx"\n',
            'experiment = "purify-sweep"\nseed = 1\n[params]\nefficiency = 1.5\n',
            'experiment = "protocol-compare"\nseed = 1\n[sweep]\nt_d_ns = [-10]\n',
            'experiment = "tomo-demo"\nseed = 1\n[params]\nprocess_damping = 2.0\n',
            'experiment = "purify-sweep"\nseed = 1\n[params]\nstorage_decay = "yes"\n',
        ],
    )
    def test_rejected_at_resolution(self, toml):
        with pytest.raises(ConfigError):
            get_registry().resolve(loads_config(toml))
