import csv
import io
import stat
import subprocess
import sys

import pytest

from mcore import basic, cli
from mcore.rangequery import BENCH_FIELDS


@pytest.fixture(autouse=True)
def _no_seed(monkeypatch):
    monkeypatch.delenv(cli.SEED_ENV, raising=False)


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def keys(tmp_path, capsys):
    d = tmp_path / "k"
    assert run(capsys, "setup", "--clients", 3, "--bits", 8, "--out-dir", d)[0] == 0
    for j in (1, 2):
        assert run(capsys, "genkey", "--client", j, "--dir", d)[0] == 0
    assert run(capsys, "cmpkey", "--pair", "1,2", "--dir", d)[0] == 0
    return d


def _enc(capsys, d, j, v, out):
    code, _, err = run(capsys, "encrypt", "--client", j, "--value", v, "--dir", d, "--out", out)
    assert code == 0, err
    return out


def test_setup_writes_parseable_files(keys):
    mk = basic.MasterKey.from_bytes((keys / "master.key").read_bytes())
    pp = basic.PublicParams.from_bytes((keys / "public.params").read_bytes())
    assert mk.N == 3 and pp.n == 8
    assert basic.MasterKey.from_bytes(mk.to_bytes()) == mk


def test_secret_files_are_private(keys):
    for name in ("master.key", "client-1.key", "cmpkey-1-2.key"):
        assert stat.S_IMODE((keys / name).stat().st_mode) == 0o600
    assert stat.S_IMODE((keys / "public.params").stat().st_mode) != 0o600


def test_setup_rejects_bad_sizes_and_overwrite(tmp_path, capsys, keys):
    code, _, err = run(capsys, "setup", "--clients", 0, "--dir", tmp_path / "z")
    assert code == cli.EXIT_BAD_VALUE and "at least 1" in err
    assert run(capsys, "setup", "--clients", 2, "--dir", keys)[0] == cli.EXIT_EXISTS
    assert run(capsys, "setup", "--clients", 2, "--dir", keys, "--force")[0] == 0


def test_compare_less_and_geq(keys, tmp_path, capsys):
    a = _enc(capsys, keys, 1, 5, tmp_path / "a.ct")
    b = _enc(capsys, keys, 1, 7, tmp_path / "b.ct")
    assert run(capsys, "compare", a, b, "--dir", keys) == (cli.EXIT_LESS, "LESS msdb=7\n", "")
    assert run(capsys, "compare", b, a, "--dir", keys) == (0, "GEQ msdb=7\n", "")
    assert run(capsys, "compare", a, a, "--dir", keys) == (0, "GEQ msdb=9\n", "")


def test_encrypt_is_byte_identical_across_runs(keys, tmp_path, capsys):
    a = _enc(capsys, keys, 1, 200, tmp_path / "a.ct").read_bytes()
    b = _enc(capsys, keys, 1, 200, tmp_path / "b.ct").read_bytes()
    assert a == b


def test_encrypt_rejects_out_of_range(keys, tmp_path, capsys):
    code, _, err = run(capsys, "encrypt", "--client", 1, "--value", 256, "--dir", keys, "--out", tmp_path / "x")
    assert code == cli.EXIT_BAD_VALUE and "8 bits" in err


def test_comparemc_and_orientation(keys, tmp_path, capsys):
    a = _enc(capsys, keys, 1, 100, tmp_path / "a.ct")
    c = _enc(capsys, keys, 2, 99, tmp_path / "c.ct")
    ck = keys / "cmpkey-1-2.key"
    assert run(capsys, "comparemc", c, a, "--cmpkey", ck, "--dir", keys) == (cli.EXIT_LESS, "LESS msdb=6\n", "")
    assert run(capsys, "comparemc", a, c, "--cmpkey", ck, "--dir", keys)[:2] == (0, "GEQ msdb=6\n")
    run(capsys, "genkey", "--client", 3, "--dir", keys)
    run(capsys, "cmpkey", "--pair", "1,3", "--dir", keys)
    code, _, err = run(capsys, "comparemc", a, c, "--cmpkey", keys / "cmpkey-1-3.key", "--dir", keys)
    assert code == cli.EXIT_ORIENTATION and "orientation" in err
    code, _, _ = run(capsys, "compare", a, c, "--dir", keys)
    assert code == cli.EXIT_ORIENTATION


def test_format_and_scheme_errors_have_distinct_codes(keys, tmp_path, capsys):
    a = _enc(capsys, keys, 1, 1, tmp_path / "a.ct")
    trunc = tmp_path / "t.ct"
    trunc.write_bytes(a.read_bytes()[:50])
    assert run(capsys, "compare", trunc, a, "--dir", keys)[0] == cli.EXIT_FORMAT
    junk = tmp_path / "j.ct"
    junk.write_bytes(b"not a ciphertext")
    assert run(capsys, "compare", junk, a, "--dir", keys)[0] == cli.EXIT_FORMAT
    # a key file where a ciphertext belongs
    assert run(capsys, "compare", keys / "client-1.key", a, "--dir", keys)[0] == cli.EXIT_SCHEME
    assert run(capsys, "compare", tmp_path / "missing", a, "--dir", keys)[0] == cli.EXIT_MISSING
    codes = {cli.EXIT_FORMAT, cli.EXIT_SCHEME, cli.EXIT_ORIENTATION, cli.EXIT_INTEGRITY, cli.EXIT_MISSING}
    assert len(codes) == 5


def test_integrity_error_exit_code(keys, tmp_path, capsys):
    a = _enc(capsys, keys, 1, 9, tmp_path / "a.ct")
    rogue = basic.ClientSecretKey(1, 31337)
    pp = basic.PublicParams.from_bytes((keys / "public.params").read_bytes())
    b = tmp_path / "b.ct"
    b.write_bytes(basic.encrypt(9, rogue, pp).to_bytes())
    assert run(capsys, "compare", a, b, "--dir", keys)[0] == cli.EXIT_INTEGRITY


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == cli.EXIT_USAGE
    assert run(capsys, "setup")[0] == cli.EXIT_USAGE


def test_query_over_column(keys, tmp_path, capsys):
    col = tmp_path / "col"
    values = [3, 200, 50, 49, 50, 0]
    for i, v in enumerate(values):
        code, _, err = run(capsys, "encrypt", "--client", 1, "--value", v, "--dir", keys,
                           "--column", col, "--row-id", i)
        assert code == 0, err
    q = _enc(capsys, keys, 2, 50, tmp_path / "q.ct")
    outputs = set()
    for method in ("simple", "binsearch", "hybrid"):
        code, out, _ = run(capsys, "query", "--column", col, "--method", method, "--query", q,
                           "--cmpkey", keys / "cmpkey-1-2.key")
        assert code == 0
        outputs.add(out.splitlines()[0])
    assert outputs == {"rows: 0 3 5"}


def test_enhanced_flow(tmp_path, capsys):
    d = tmp_path / "e"
    run(capsys, "setup", "--scheme", "enhanced", "--clients", 2, "--bits", 8, "--dir", d)
    run(capsys, "genkey", "--client", 1, "--dir", d)
    run(capsys, "genkey", "--client", 2, "--dir", d)
    run(capsys, "cmpkey", "--pair", "2,1", "--dir", d)
    a = _enc(capsys, d, 1, 3, tmp_path / "a")
    b = _enc(capsys, d, 1, 9, tmp_path / "b")
    c = _enc(capsys, d, 2, 4, tmp_path / "c")
    assert run(capsys, "compare", a, b, "--dir", d)[:2] == (cli.EXIT_LESS, "LESS msdb=5\n")
    assert run(capsys, "comparemc", c, a, "--cmpkey", d / "cmpkey-2-1.key", "--dir", d)[:2] == (0, "GEQ msdb=6\n")


def test_eore_has_no_public_compare(tmp_path, capsys):
    d = tmp_path / "e"
    run(capsys, "setup", "--scheme", "eore", "--clients", 2, "--bits", 4, "--dir", d)
    run(capsys, "genkey", "--client", 1, "--dir", d)
    a = _enc(capsys, d, 1, 3, tmp_path / "a")
    assert run(capsys, "compare", a, a, "--dir", d)[0] == cli.EXIT_SCHEME


def test_seed_requires_insecure_flag(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(cli.SEED_ENV, "7")
    assert run(capsys, "setup", "--clients", 2, "--dir", tmp_path / "a")[0] == cli.EXIT_SEED
    assert run(capsys, "setup", "--clients", 2, "--dir", tmp_path / "a", "--insecure-test")[0] == 0
    assert run(capsys, "setup", "--clients", 2, "--dir", tmp_path / "b", "--insecure-test")[0] == 0
    assert (tmp_path / "a" / "master.key").read_bytes() == (tmp_path / "b" / "master.key").read_bytes()


def test_bench_csv(capsys):
    code, out, _ = run(capsys, "bench", "--range", "2^8", "--size", 3, "--bits", 8)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert tuple(rows[0]) == BENCH_FIELDS and len(rows) == 3
    assert run(capsys, "bench", "--range", "2^9", "--bits", 8)[0] == cli.EXIT_BAD_VALUE


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "mcore.cli", "setup", "--clients", "1",
                           "--bits", "4", "--dir", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0 and "N=1 n=4" in proc.stdout
