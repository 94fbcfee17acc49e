import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from scbitgen.cost import (
    Method,
    SynthesisRecord,
    accuracy_bound,
    builtin_table,
    compare_with_accuracy_bound,
    derive_efficiency,
    derive_energy,
    latency_model,
    matches_printed,
    mse_by_config,
    read_table_csv,
    record_spec,
    round_like,
    table_csv,
)
from scbitgen.generators import LdPair, LfsrPair, ParallelThermometerPair


def by_label(label):
    return next(r for r in builtin_table() if r.component_label == label)


def test_builtin_table_contents():
    table = builtin_table()
    # 3 LFSR + 4 LD + 3 sequential thermometer + 3 decoder rows
    assert len(table) == 13
    assert [sum(r.method is m for r in table) for m in Method] == [3, 4, 3, 3]
    assert by_label("5-16 Decoder").area == 20.11
    assert by_label("4bit LFSR+Comp.").latency == 0.16
    r = by_label("3-4 Decoder")
    assert (r.bsl, r.power, r.area, r.latency) == (16, 0.265, 3.352, 0.01)


def test_levels_column():
    for r in builtin_table():
        if r.method in (Method.LFSR, Method.LD):
            assert r.levels == r.bsl
        else:
            assert r.levels ** 2 == r.bsl


def test_derive_energy():
    assert derive_energy(by_label("4bit LFSR+Comp.")) == pytest.approx(1.0592)
    assert derive_energy(by_label("3-4 Decoder")) == pytest.approx(0.00265)


def test_derive_efficiency():
    assert derive_efficiency(by_label("5-16 Decoder")) == pytest.approx(31604.94, abs=0.01)
    assert derive_efficiency(by_label("3-4 Decoder")) == pytest.approx(6037.74, abs=0.01)
    assert derive_efficiency(by_label("4-8 Decoder")) == pytest.approx(12800)


def test_zero_energy_domain_error():
    r = by_label("3-4 Decoder")
    object.__setattr__(r, "power", 0.0)
    assert derive_energy(r) == 0
    with pytest.raises(ZeroDivisionError):
        derive_efficiency(r)


def test_record_validation():
    with pytest.raises(ValueError):
        SynthesisRecord(Method.LD, "x", 16, 16, 0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        SynthesisRecord("bogus", "x", 16, 16, 1.0, 1.0, 1.0)


def test_round_like():
    assert round_like(0.00265, 0.003) == 0.003
    assert round_like(6037.74, 6038) == 6038
    assert round_like(1.0496, 1.05) == 1.05


@pytest.mark.parametrize("record", builtin_table(), ids=lambda r: r.component_label)
def test_table_round_trip(record):
    assert matches_printed(derive_energy(record), record.energy)
    assert matches_printed(derive_efficiency(record), record.efficiency)
    assert latency_model(record.method, record.bsl, 0.01) == record.latency


def test_latency_model():
    assert latency_model(Method.LFSR, 256, 0.01) == 2.56
    assert latency_model(Method.THERMOMETER_PARALLEL, 256, 0.01) == 0.01
    assert latency_model("LD", 16, 0.01) == 0.16
    with pytest.raises(ValueError):
        latency_model(Method.LD, 16, 0)


def test_accuracy_bound():
    assert accuracy_bound(4) == 1 / 65536


def test_record_specs():
    assert record_spec(by_label("7bit Counter+Comp.")) == LdPair(7)
    assert record_spec(by_label("4-8 Decoder")) == ParallelThermometerPair(8)
    spec = record_spec(by_label("8bit LFSR+Comp."))
    assert isinstance(spec, LfsrPair) and spec.bsl == 256 and spec.cfg_a.seed == 0


@pytest.fixture(scope="module")
def paper_mse():
    return mse_by_config(builtin_table(), 4)


def test_qualifying_set(paper_mse):
    report = compare_with_accuracy_bound(builtin_table(), paper_mse, 4)
    assert {r.component_label for r in report.qualifying} == {
        "8bit LFSR+Comp.", "7bit Counter+Comp.", "8bit Counter+Comp.",
        "4Bit Counter+Comp.", "5-16 Decoder"}
    assert report.parallel.component_label == "5-16 Decoder"


def test_ratios(paper_mse):
    ratios = compare_with_accuracy_bound(builtin_table(), paper_mse, 4).ratios
    assert ratios["area"] == pytest.approx(50.8 / 20.11)
    assert ratios["power"] == pytest.approx(4.51 / 0.81)
    assert ratios["energy"] == pytest.approx(4.51 * 1.28 / 0.0081)
    assert ratios["efficiency"] == pytest.approx((256 / 0.0081) / (128 / (4.51 * 1.28)))


def test_empty_result_marker():
    table = builtin_table()
    report = compare_with_accuracy_bound(table, {r.config: 1.0 for r in table}, 4)
    assert report.empty and report.ratios is None
    assert json.loads(report.to_json())["empty"] is True
    assert "no qualifying" in report.to_text()


def test_missing_mse_rejected():
    with pytest.raises(KeyError):
        compare_with_accuracy_bound(builtin_table(), {}, 4)


@given(st.floats(0.01, 100), st.floats(0.01, 100))
def test_ratios_scale_invariant(power_scale, area_scale):
    table = builtin_table()
    mse = {r.config: (0.0 if r.bsl >= 128 else 1.0) for r in table}
    base = compare_with_accuracy_bound(table, mse, 4).ratios
    scaled = [SynthesisRecord(r.method, r.component_label, r.bsl, r.levels,
                              r.power * power_scale, r.area * area_scale, r.latency)
              for r in table]
    got = compare_with_accuracy_bound(scaled, mse, 4).ratios
    for key in base:
        assert math.isclose(got[key], base[key], rel_tol=1e-9)


def test_csv_round_trip():
    table = builtin_table()
    assert read_table_csv(table_csv(table)) == table
    derived = read_table_csv(table_csv(table, derived=True))
    assert derived == table


def test_csv_missing_columns():
    with pytest.raises(ValueError):
        read_table_csv("Component,Power (μW)\nx,1\n")


def test_report_json(paper_mse):
    report = compare_with_accuracy_bound(builtin_table(), paper_mse, 4)
    data = json.loads(report.to_json())
    assert data["parallel"] == "5-16 Decoder"
    assert set(data["ratios"]) == {"area", "power", "energy", "efficiency"}
    assert len(data["qualifying"]) == 5
    assert data["mse"]["8bit Counter+Comp."] == 0.0
