"""Command-line front end over file-based keys and ciphertexts.

All key material for one deployment lives in a directory (``--dir``)::

    master.key          master key (basic or EORE/enhanced)
    public.params       public parameters
    client-<j>.key      client secret keys
    cmpkey-<j>-<k>.key  comparison keys

Exit codes: 0 success / GEQ, 10 LESS, 2x usage errors, 3x format and
integrity errors.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from pathlib import Path

from . import basic, eore, enhanced, rangequery, wire
from .basic import IntegrityError, OrientationError
from .ore import OreSecretKey
from .pairing import DeserializationError

EXIT_OK = 0
EXIT_LESS = 10
EXIT_USAGE = 20
EXIT_BAD_VALUE = 21
EXIT_EXISTS = 22
EXIT_ORIENTATION = 23
EXIT_SEED = 24
EXIT_FORMAT = 30
EXIT_SCHEME = 31
EXIT_INTEGRITY = 32
EXIT_MISSING = 33

SEED_ENV = "MCORE_TEST_SEED"
SCHEMES = ("basic", "eore", "enhanced")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --- file helpers ----------------------------------------------------------------


def _write(path: Path, data: bytes, *, secret: bool, force: bool) -> None:
    if path.exists() and not force:
        raise CliError(EXIT_EXISTS, f"{path} exists (use --force to overwrite)")
    path.parent.mkdir(parents=True, exist_ok=True)
    if secret:
        fd = os.open(path, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 0o600)
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.chmod(path, 0o600)
    else:
        path.write_bytes(data)


def _read(path) -> bytes:
    path = Path(path)
    if not path.is_file():
        raise CliError(EXIT_MISSING, f"{path}: no such file")
    return path.read_bytes()


def _load(path, *types):
    data = _read(path)
    tag = wire.peek_tag(data)
    for t in types:
        if _TAGS[t] == tag:
            return t.from_bytes(data)
    want = ", ".join(t.__name__ for t in types)
    raise CliError(EXIT_SCHEME, f"{path}: holds type tag 0x{tag:02x}, expected {want}")


_TAGS = {
    basic.PublicParams: wire.TAG_BASIC_PP,
    eore.EorePublicParams: wire.TAG_EORE_PP,
    basic.MasterKey: wire.TAG_BASIC_MK,
    eore.EoreMasterKey: wire.TAG_EORE_MK,
    basic.ClientSecretKey: wire.TAG_CLIENT_SK,
    enhanced.EnhancedSecretKey: wire.TAG_ENHANCED_SK,
    OreSecretKey: wire.TAG_ORE_SK,
    basic.BasicCiphertext: wire.TAG_BASIC_CT,
    eore.EoreCiphertext: wire.TAG_EORE_CT,
    enhanced.EnhancedCiphertext: wire.TAG_ENHANCED_CT,
    basic.BasicComparisonKey: wire.TAG_BASIC_CK,
    eore.EoreComparisonKey: wire.TAG_EORE_CK,
}


def _rng(args):
    seed = os.environ.get(SEED_ENV)
    if seed is None:
        return None
    if not getattr(args, "insecure_test", False):
        raise CliError(EXIT_SEED, f"{SEED_ENV} is set; refusing to run without --insecure-test")
    return random.Random(seed)


def _scheme_of(d: Path) -> str:
    """Infer the scheme from the files in a key directory."""
    pp = _load(d / "public.params", basic.PublicParams, eore.EorePublicParams)
    if isinstance(pp, eore.EorePublicParams):
        marker = d / "SCHEME"
        name = marker.read_text().strip() if marker.exists() else "eore"
        return name if name in ("eore", "enhanced") else "eore"
    return "basic"


def _params(d: Path):
    return _load(d / "public.params", basic.PublicParams, eore.EorePublicParams)


def _client_key(d: Path, j: int, scheme: str):
    path = d / f"client-{j}.key"
    if scheme == "enhanced":
        return _load(path, enhanced.EnhancedSecretKey)
    return _load(path, basic.ClientSecretKey)


def _ciphertext(path, scheme: str):
    types = {
        "basic": basic.BasicCiphertext,
        "eore": eore.EoreCiphertext,
        "enhanced": enhanced.EnhancedCiphertext,
    }
    return _load(path, types[scheme])


def _parse_int(text: str) -> int:
    text = text.strip()
    if "^" in text:
        base, exp = text.split("^", 1)
        return int(base) ** int(exp)
    return int(text, 0)


def _outcome(res) -> int:
    print(f"{'LESS' if res.less else 'GEQ'} msdb={res.msdb}")
    return EXIT_LESS if res.less else EXIT_OK


# --- commands --------------------------------------------------------------------


def cmd_setup(args) -> int:
    rng = _rng(args)
    if args.clients < 1:
        raise CliError(EXIT_BAD_VALUE, "--clients must be at least 1")
    if not 1 <= args.bits <= 0xFFFF:
        raise CliError(EXIT_BAD_VALUE, "--bits must be in [1, 65535]")
    d = Path(args.dir)
    if args.scheme == "basic":
        mk, pp = basic.setup(args.clients, args.bits, rng=rng)
    else:
        mk, pp = eore.eore_setup(args.clients, args.bits, rng=rng)
    _write(d / "master.key", mk.to_bytes(), secret=True, force=args.force)
    _write(d / "public.params", pp.to_bytes(), secret=False, force=args.force)
    (d / "SCHEME").write_text(args.scheme + "\n")
    print(f"{args.scheme}: N={args.clients} n={args.bits} -> {d}")
    return EXIT_OK


def cmd_genkey(args) -> int:
    rng = _rng(args)
    d = Path(args.dir)
    scheme = _scheme_of(d)
    pp = _params(d)
    try:
        if scheme == "basic":
            sk = basic.gen_key(args.client, _load(d / "master.key", basic.MasterKey), pp)
        elif scheme == "eore":
            sk = eore.eore_gen_key(args.client, _load(d / "master.key", eore.EoreMasterKey), pp)
        else:
            sk = enhanced.enh_gen_key(args.client, _load(d / "master.key", eore.EoreMasterKey), pp, rng=rng)
    except ValueError as exc:
        raise CliError(EXIT_BAD_VALUE, str(exc)) from exc
    out = d / f"client-{args.client}.key"
    _write(out, sk.to_bytes(), secret=True, force=args.force)
    print(out)
    return EXIT_OK


def cmd_encrypt(args) -> int:
    rng = _rng(args)
    d = Path(args.dir)
    scheme = _scheme_of(d)
    pp = _params(d)
    sk = _client_key(d, args.client, scheme)
    if not 0 <= args.value < 1 << pp.n:
        raise CliError(EXIT_BAD_VALUE, f"value {args.value} does not fit in {pp.n} bits")
    if scheme == "basic":
        ct = basic.encrypt(args.value, sk, pp)
    elif scheme == "eore":
        ct = eore.eore_encrypt(args.value, sk, pp, rng=rng)
    else:
        ct = enhanced.enh_encrypt(args.value, sk, pp, rng=rng)
    if args.column:
        if scheme != "basic":
            raise CliError(EXIT_SCHEME, "columns hold basic-scheme ciphertexts only")
        if args.row_id is None:
            raise CliError(EXIT_USAGE, "--column requires --row-id")
        try:
            rangequery.EncryptedColumn.append_to_file(Path(args.column) / "column.mcdb", args.row_id, ct)
        except ValueError as exc:
            raise CliError(EXIT_BAD_VALUE, str(exc)) from exc
        print(f"row {args.row_id} -> {args.column}")
        return EXIT_OK
    data = ct.to_bytes()
    if args.out:
        _write(Path(args.out), data, secret=False, force=args.force)
    else:
        sys.stdout.buffer.write(data)
    return EXIT_OK


def cmd_compare(args) -> int:
    d = Path(args.dir)
    scheme = _scheme_of(d)
    if scheme == "eore":
        raise CliError(EXIT_SCHEME, "EORE ciphertexts cannot be compared without a comparison key")
    ct, ct2 = _ciphertext(args.ct1, scheme), _ciphertext(args.ct2, scheme)
    if ct.j != ct2.j:
        raise CliError(EXIT_ORIENTATION, f"ciphertexts of clients {ct.j} and {ct2.j}; use comparemc")
    if scheme == "basic":
        return _outcome(basic.compare(ct, ct2))
    return _outcome(enhanced.enh_compare(ct, ct2))


def _parse_pair(text: str) -> tuple[int, int]:
    try:
        j, k = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise CliError(EXIT_USAGE, f"--pair expects 'j,k', got {text!r}") from exc
    return j, k


def cmd_cmpkey(args) -> int:
    rng = _rng(args)
    d = Path(args.dir)
    scheme = _scheme_of(d)
    pp = _params(d)
    j, k = _parse_pair(args.pair)
    try:
        if scheme == "basic":
            ck = basic.gen_cmp_key(j, k, _load(d / "master.key", basic.MasterKey), pp, rng=rng)
        else:
            ck = eore.eore_gen_cmp_key(j, k, _load(d / "master.key", eore.EoreMasterKey), pp, rng=rng)
    except ValueError as exc:
        raise CliError(EXIT_BAD_VALUE, str(exc)) from exc
    out = Path(args.out) if args.out else d / f"cmpkey-{j}-{k}.key"
    _write(out, ck.to_bytes(), secret=True, force=args.force)
    print(out)
    return EXIT_OK


def cmd_comparemc(args) -> int:
    d = Path(args.dir)
    scheme = _scheme_of(d)
    ct, ct2 = _ciphertext(args.ct1, scheme), _ciphertext(args.ct2, scheme)
    if scheme == "basic":
        ck = _load(args.cmpkey, basic.BasicComparisonKey)
        return _outcome(basic.compare_mc(ct, ct2, ck))
    ck = _load(args.cmpkey, eore.EoreComparisonKey)
    if scheme == "eore":
        return _outcome(eore.eore_compare_mc(ct, ct2, ck))
    return _outcome(enhanced.enh_compare_mc(ct, ct2, ck))


def cmd_query(args) -> int:
    rng = _rng(args)
    col = rangequery.EncryptedColumn.from_bytes(_read(Path(args.column) / "column.mcdb"))
    qct = _load(args.query, basic.BasicCiphertext)
    ck = _load(args.cmpkey, basic.BasicComparisonKey)
    try:
        res = rangequery.run_query(args.method, col, qct, ck, rng=rng)
    except ValueError as exc:
        if isinstance(exc, OrientationError):
            raise
        raise CliError(EXIT_BAD_VALUE, str(exc)) from exc
    print("rows:", " ".join(str(r) for r in sorted(res.row_ids)))
    s = res.stats
    print(f"compare_mc_calls={s.compare_mc_calls} compare_calls={s.compare_calls} pairings={s.pairings}")
    return EXIT_OK


def cmd_bench(args) -> int:
    rng = _rng(args) or random.Random()
    methods = rangequery.METHODS if args.method == "all" else (args.method,)
    try:
        R = _parse_int(args.range)
        rows = rangequery.bench(R, args.size, methods, args.iters, n=args.bits, rng=rng)
    except ValueError as exc:
        raise CliError(EXIT_BAD_VALUE, str(exc)) from exc
    text = rangequery.bench_csv(rows)
    if args.out:
        _write(Path(args.out), text.encode(), secret=False, force=args.force)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- wiring ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mcore", description="Multi-client order-revealing encryption.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, *, dir_=True, force=False, out_dir=False):
        if dir_:
            names = ("--dir", "--out-dir") if out_dir else ("--dir",)
            sp.add_argument(*names, dest="dir", default=".", help="key directory (default: .)")
        if force:
            sp.add_argument("--force", action="store_true", help="overwrite existing files")
        sp.add_argument("--insecure-test", action="store_true",
                        help=f"allow a pinned {SEED_ENV} (test fixtures only)")

    sp = sub.add_parser("setup", help="create master key and public parameters")
    sp.add_argument("--scheme", choices=SCHEMES, default="basic")
    sp.add_argument("--clients", type=int, required=True)
    sp.add_argument("--bits", type=int, default=32)
    common(sp, force=True, out_dir=True)
    sp.set_defaults(func=cmd_setup)

    sp = sub.add_parser("genkey", help="derive a client secret key")
    sp.add_argument("--client", type=int, required=True)
    common(sp, force=True)
    sp.set_defaults(func=cmd_genkey)

    sp = sub.add_parser("encrypt", help="encrypt a value under a client key")
    sp.add_argument("--client", type=int, required=True)
    sp.add_argument("--value", type=int, required=True)
    sp.add_argument("--out", help="ciphertext file (default: stdout)")
    sp.add_argument("--column", help="append to the column in this directory instead")
    sp.add_argument("--row-id", type=int)
    common(sp, force=True)
    sp.set_defaults(func=cmd_encrypt)

    sp = sub.add_parser("compare", help="public same-client comparison")
    sp.add_argument("ct1")
    sp.add_argument("ct2")
    common(sp)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("cmpkey", help="issue a comparison key for two clients")
    sp.add_argument("--pair", required=True, help="j,k")
    sp.add_argument("--out")
    common(sp, force=True)
    sp.set_defaults(func=cmd_cmpkey)

    sp = sub.add_parser("comparemc", help="cross-client comparison with a comparison key")
    sp.add_argument("ct1")
    sp.add_argument("ct2")
    sp.add_argument("--cmpkey", required=True)
    common(sp)
    sp.set_defaults(func=cmd_comparemc)

    sp = sub.add_parser("query", help="range query: rows strictly below the query value")
    sp.add_argument("--column", required=True, help="column directory")
    sp.add_argument("--method", choices=rangequery.METHODS, default="hybrid")
    sp.add_argument("--query", required=True, help="query ciphertext file")
    sp.add_argument("--cmpkey", required=True)
    common(sp, dir_=False)
    sp.set_defaults(func=cmd_query)

    sp = sub.add_parser("bench", help="benchmark the range-query methods (CSV)")
    sp.add_argument("--range", default="2^32", help="value range R, e.g. 2^16")
    sp.add_argument("--size", type=int, default=100)
    sp.add_argument("--iters", type=int, default=1)
    sp.add_argument("--bits", type=int, default=32)
    sp.add_argument("--method", choices=("all",) + rangequery.METHODS, default="all")
    sp.add_argument("--out")
    common(sp, dir_=False, force=True)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except CliError as exc:
        print(f"mcore: {exc}", file=sys.stderr)
        return exc.code
    except OrientationError as exc:
        print(f"mcore: orientation mismatch: {exc}", file=sys.stderr)
        return EXIT_ORIENTATION
    except IntegrityError as exc:
        print(f"mcore: integrity error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except DeserializationError as exc:
        print(f"mcore: format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
