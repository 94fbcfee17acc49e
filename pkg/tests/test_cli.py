import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from scbitgen.analysis import mse_multiplication, read_error_grid_csv, seed_search
from scbitgen.bitstream import Bitstream
from scbitgen.cli import run
from scbitgen.cost import builtin_table, read_table_csv, table_csv
from scbitgen.generators import LdPair


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_gen_parallel_thermo(capsys):
    code, out, _ = invoke(capsys, "gen", "--method", "parallel-thermo", "--levels", "4",
                          "--b1", "3", "--b2", "2")
    assert code == 0
    streams = {r["stream"]: r["bits"] for r in rows(out)}
    assert streams["A"] == "1110" * 4
    assert streams["B"] == "1111" * 2 + "0000" * 2
    assert Bitstream.from_string(streams["product"]).popcount() == 6


def test_gen_lfsr_json(capsys):
    code, out, _ = invoke(capsys, "gen", "--method", "lfsr", "--width", "4", "--tap-mask", "c",
                          "--seeds", "0", "12", "--b1", "8", "--b2", "8", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["streams"]["A"]["bits"] == "1000011101100101"
    assert data["spec"]["seeds"] == [0, 12]


def test_gen_thermo_quantizes_with_n(capsys):
    code, out, _ = invoke(capsys, "gen", "--method", "thermo", "--levels", "4", "--n", "4",
                          "--b1", "3", "--b2", "15")
    streams = {r["stream"]: r for r in rows(out)}
    assert int(streams["A"]["ones"]) == 1 * 4
    assert int(streams["B"]["ones"]) == 4 * 4


def test_mse_thermo_256(capsys):
    code, out, _ = invoke(capsys, "mse", "--method", "thermo", "--n", "4", "--bsl", "256")
    assert code == 0
    (row,) = rows(out)
    assert row == {"method": "thermo", "bsl": "256", "n": "4", "mse": "0.0",
                   "max_abs_error": "0.0"}


def test_mse_default_sweep_skips_invalid(capsys):
    code, out, _ = invoke(capsys, "mse")
    assert code == 0
    got = {(r["method"], int(r["bsl"])) for r in rows(out)}
    assert ("thermo", 128) not in got
    assert ("ld", 128) in got and ("lfsr", 16) in got
    assert len(got) == 14
    ld = next(r for r in rows(out) if r["method"] == "ld" and r["bsl"] == "64")
    assert float(ld["mse"]) == mse_multiplication(LdPair(6), 4).mse


def test_mse_lfsr_uses_min_seed(capsys):
    code, out, _ = invoke(capsys, "mse", "--method", "lfsr", "--bsl", "256")
    assert float(rows(out)[0]["mse"]) == seed_search(8, n=4).min_mse


def test_grid_round_trip(capsys):
    code, out, _ = invoke(capsys, "grid", "--method", "ld", "--width", "5")
    assert code == 0
    np.testing.assert_array_equal(read_error_grid_csv(out), mse_multiplication(LdPair(5), 4).grid)


def test_seeds_csv_and_json(capsys):
    code, out, _ = invoke(capsys, "seeds", "--width", "6", "--n", "4")
    assert code == 0
    ref = seed_search(6, n=4)
    assert [float(r["mse"]) for r in rows(out)] == list(ref.mses)
    code, out, _ = invoke(capsys, "seeds", "--width", "6", "--format", "json", "--threads", "2")
    data = json.loads(out)
    assert data["argmin"] == ref.argmin and len(data["mse"]) == 63


def test_discrepancy(capsys):
    code, out, _ = invoke(capsys, "discrepancy", "--method", "lfsr", "--width", "4")
    assert code == 0
    table = rows(out)
    assert len(table) == 16
    assert float(table[-1]["d_star"]) == 1 / 16
    assert float(table[0]["d_star"]) == 1.0


def test_cost_outputs(capsys):
    code, out, _ = invoke(capsys, "cost", "--n", "4", "--format", "json")
    assert code == 0
    ratios = json.loads(out)["ratios"]
    assert ratios["area"] >= 2.5 and ratios["power"] >= 5.5
    assert ratios["energy"] >= 712 and ratios["efficiency"] >= 1425
    code, out, _ = invoke(capsys, "cost")
    assert code == 0 and "5-16 Decoder" in out
    code, out, _ = invoke(capsys, "cost", "--format", "csv")
    assert read_table_csv(out) == builtin_table()


def test_cost_custom_table(capsys, tmp_path):
    path = tmp_path / "table.csv"
    code, out, _ = invoke(capsys, "cost", "--format", "csv", "-o", str(path))
    assert code == 0 and out == ""
    code, out, _ = invoke(capsys, "cost", "--table", str(path), "--format", "json")
    assert code == 0 and json.loads(out)["parallel"] == "5-16 Decoder"


@pytest.mark.parametrize("argv", [
    ["mse", "--method", "thermo", "--bsl", "128"],
    ["mse", "--method", "ld", "--bsl", "100"],
    ["gen", "--method", "lfsr", "--width", "4", "--b1", "16", "--b2", "0"],
    ["gen", "--method", "lfsr", "--width", "4", "--tap-mask", "8", "--seeds", "0", "1",
     "--b1", "1", "--b2", "1"],
    ["seeds", "--width", "4", "--n", "5"],
    ["grid", "--method", "lfsr", "--bsl", "300", "--width", "8"],
    ["bogus"],
    ["mse", "--unknown-flag"],
    ["seeds", "--threads", "0"],
    ["cost", "--table", "/nonexistent/table.csv"],
])
def test_usage_errors(capsys, argv):
    code, out, err = invoke(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


def test_non_primitive_mask_is_usage_error(capsys):
    code, out, err = invoke(capsys, "discrepancy", "--method", "lfsr", "--width", "4",
                            "--tap-mask", "8")
    assert code == 2 and "not primitive" in err


def test_computation_error_exit_1(capsys, tmp_path):
    # loads fine, but a 5-level thermometer cannot produce a 16-bit stream
    path = tmp_path / "bad.csv"
    text = table_csv(builtin_table()).replace("3-4 Decoder,16,4,", "3-4 Decoder,16,5,")
    path.write_text(text, encoding="utf-8")
    code, out, err = invoke(capsys, "cost", "--table", str(path))
    assert code == 1 and out == "" and "levels squared" in err


def test_byte_identical_outputs(capsys):
    argv = ["mse", "--method", "lfsr", "ld", "--bsl", "16", "64"]
    _, first, _ = invoke(capsys, *argv)
    _, second, _ = invoke(capsys, *argv)
    assert first == second


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "scbitgen", "discrepancy", "--method", "ld",
                           "--width", "3"], capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[0] == "N,d_star"
    assert len(proc.stdout.splitlines()) == 9
