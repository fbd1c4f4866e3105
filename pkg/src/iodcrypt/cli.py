"""Command-line front end over the key, table, signature, and ciphertext files.

Every subcommand is a thin composition of library calls — no protocol
logic lives here.  The default key directory is ``$IODCRYPT_HOME`` (or
``~/.iodcrypt``), overridable per call with ``--home``.  Conventional
file names inside it::

    kgc.sec       KGC master secret          system.pub   system public key
    <id>.key      drone private key (0600)   <id>.rec     public identity record
    bpv.tbl       standard nonce table       <id>.dtbl    designated table for <id>

Exit codes: 0 success; 1 cryptographic failure (one stderr line,
``ErrorClass: detail``); 2 usage error; 3 I/O error.  All writes are
atomic (temp file then rename) and secret files are created with
owner-only permissions where the platform supports it.

``--test-seed`` makes randomness reproducible and must be paired with
``--insecure-test``; without that guard the flag is refused.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
from pathlib import Path

from .bench import (
    BENCH_OPS,
    DeviceProfile,
    PROFILES,
    device_report,
    format_ldjson,
    format_text_table,
    host_report,
    run_bench,
)
from .bpv import (
    BpvParams,
    DesignatedTable,
    PrecompTable,
    bpv_offline,
    deserialize_table,
    serialize_table,
)
from .encrypt import (
    SenderContext,
    decrypt,
    deserialize_ciphertext_file,
    enc_kg_sender,
    encrypt,
    reference_encrypt,
    serialize_ciphertext_file,
)
from .errors import IodCryptError, KeyVerFailed, UnsupportedParams, VerifyFailed
from .selfcert import (
    aq_hang_finalize,
    aq_hang_initiate,
    aq_kg,
    deserialize_drone_keypair,
    deserialize_kgc_keypair,
    deserialize_record,
    deserialize_system_public,
    key_ver,
    kgc_setup,
    reconstruct_pub,
    serialize_drone_keypair,
    serialize_kgc_keypair,
    serialize_record,
    serialize_system_public,
)
from .sign import (
    SignerContext,
    VerifierContext,
    deserialize_signature_file,
    serialize_signature_file,
    sign,
    verify,
)

DEFAULT_PARAMS = (28, 256)


# ---------------------------------------------------------------------------
# Plumbing
# ---------------------------------------------------------------------------


def _home(args) -> Path:
    if args.home:
        return Path(args.home)
    env = os.environ.get("IODCRYPT_HOME")
    if env:
        return Path(env)
    return Path.home() / ".iodcrypt"


def _rng(args):
    if args.test_seed is not None:
        return random.Random(args.test_seed)
    return random.SystemRandom()


def _write(path: Path, data: bytes, secret: bool = False) -> None:
    """Atomic write: temp file in the target directory, then rename.

    mkstemp creates the file 0600; keep that for secrets and widen
    public files to the conventional umask-style mode.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        os.fchmod(fd, 0o600 if secret else 0o644)
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def _read(path: Path) -> bytes:
    return path.read_bytes()


def _resolve(args, name_or_path: str, suffix: str) -> Path:
    """Resolve a file argument: explicit path, home/<name> as given, or
    home/<name><suffix>."""
    direct = Path(name_or_path)
    if direct.exists() or os.sep in name_or_path:
        return direct
    named = _home(args) / name_or_path
    if named.exists():
        return named
    return _home(args) / f"{name_or_path}{suffix}"


def _parse_params(text: str) -> BpvParams:
    try:
        v_str, k_str = text.split(",")
        v, k = int(v_str), int(k_str)
    except ValueError as exc:
        raise UnsupportedParams(f"parameters must look like '28,256', got {text!r}") from exc
    return BpvParams(v=v, k=k)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_kgc_init(args) -> int:
    home = _home(args)
    kgc = kgc_setup(_rng(args))
    _write(home / "kgc.sec", serialize_kgc_keypair(kgc), secret=True)
    _write(home / "system.pub", serialize_system_public(kgc.public))
    _emit(
        args,
        {"ok": True, "home": str(home), "files": ["kgc.sec", "system.pub"]},
        f"initialized key generation centre in {home}",
    )
    return 0


def cmd_kgc_issue(args) -> int:
    home = _home(args)
    kgc = deserialize_kgc_keypair(_read(home / "kgc.sec"))
    keypair = aq_kg(kgc, args.id.encode(), _rng(args))
    key_path = home / f"{args.id}.key"
    rec_path = home / f"{args.id}.rec"
    _write(key_path, serialize_drone_keypair(keypair), secret=True)
    _write(rec_path, serialize_record(keypair.record))
    _emit(
        args,
        {"ok": True, "id": args.id, "key": str(key_path), "record": str(rec_path)},
        f"issued key for {args.id!r}: {key_path} (secret), {rec_path} (public)",
    )
    return 0


def cmd_keyver(args) -> int:
    keypair = deserialize_drone_keypair(_read(_resolve(args, args.key, ".key")))
    system_public = deserialize_system_public(_read(_resolve(args, args.system, ".pub")))
    if not key_ver(keypair.record, keypair.secret, system_public):
        raise KeyVerFailed(f"key for {keypair.record.drone_id!r} fails verification")
    _emit(
        args,
        {"ok": True, "id": keypair.record.drone_id.decode(errors="replace")},
        f"key for {keypair.record.drone_id!r} verifies against the system key",
    )
    return 0


def cmd_table_gen(args) -> int:
    home = _home(args)
    params = _parse_params(args.params)
    rng = _rng(args)
    if args.designated:
        record = deserialize_record(_read(_resolve(args, args.recipient, ".rec")))
        system_public = deserialize_system_public(_read(_resolve(args, args.system, ".pub")))
        ctx = enc_kg_sender(record, system_public, params, rng)
        table: PrecompTable | DesignatedTable = ctx.table
        out = Path(args.out) if args.out else home / f"{args.recipient}.dtbl"
    else:
        table = bpv_offline(params, rng)
        out = Path(args.out) if args.out else home / "bpv.tbl"
    _write(out, serialize_table(table), secret=True)
    _emit(
        args,
        {"ok": True, "path": str(out), "k": params.k, "v": params.v,
         "designated": bool(args.designated)},
        f"wrote {'designated ' if args.designated else ''}table ({params.k} entries) to {out}",
    )
    return 0


def cmd_sign(args) -> int:
    keypair = deserialize_drone_keypair(_read(_resolve(args, args.key, ".key")))
    table = deserialize_table(_read(_resolve(args, args.table, ".tbl")))
    if isinstance(table, DesignatedTable):
        raise UnsupportedParams("signing needs a standard table, not a designated one")
    ctx = SignerContext(keypair=keypair, table=table)
    message = _read(Path(args.infile))
    sig = sign(ctx, message, _rng(args))
    out = Path(args.out) if args.out else Path(args.infile + ".sig")
    _write(out, serialize_signature_file(keypair.record.drone_id, sig))
    _emit(
        args,
        {"ok": True, "signature": str(out), "signer": keypair.record.drone_id.decode(errors="replace")},
        f"signed {args.infile} -> {out}",
    )
    return 0


def cmd_verify(args) -> int:
    signer_id, sig = deserialize_signature_file(_read(Path(args.sig)))
    record_arg = args.record if args.record else signer_id.decode(errors="replace")
    record = deserialize_record(_read(_resolve(args, record_arg, ".rec")))
    system_public = deserialize_system_public(_read(_resolve(args, args.system, ".pub")))
    vctx = VerifierContext.build(record, system_public)
    message = _read(Path(args.infile))
    if not verify(vctx, message, sig):
        raise VerifyFailed(f"signature by {signer_id!r} does not verify for {args.infile}")
    _emit(
        args,
        {"ok": True, "signer": signer_id.decode(errors="replace")},
        f"good signature by {signer_id!r} on {args.infile}",
    )
    return 0


def cmd_encrypt(args) -> int:
    record = deserialize_record(_read(_resolve(args, args.to, ".rec")))
    system_public = deserialize_system_public(_read(_resolve(args, args.system, ".pub")))
    message = _read(Path(args.infile))
    rng = _rng(args)
    table_path = (
        Path(args.table) if args.table else _home(args) / f"{args.to}.dtbl"
    )
    if table_path.exists():
        table = deserialize_table(_read(table_path))
        if not isinstance(table, DesignatedTable):
            raise UnsupportedParams(f"{table_path} is not a designated table")
        ctx = SenderContext(table=table, receiver=record)
        ct = encrypt(ctx, message, rng)
        mode = "table"
    else:
        recipient_key = reconstruct_pub(record, system_public)
        ct = reference_encrypt(recipient_key, message, rng)
        mode = "direct"
    out = Path(args.out) if args.out else Path(args.infile + ".enc")
    _write(out, serialize_ciphertext_file(ct))
    _emit(
        args,
        {"ok": True, "ciphertext": str(out), "mode": mode, "overhead_bytes": 48},
        f"encrypted {args.infile} -> {out} ({mode} path)",
    )
    return 0


def cmd_decrypt(args) -> int:
    keypair = deserialize_drone_keypair(_read(_resolve(args, args.key, ".key")))
    ct = deserialize_ciphertext_file(_read(Path(args.infile)))
    message = decrypt(keypair, ct)
    if args.out:
        out = Path(args.out)
    elif args.infile.endswith(".enc"):
        out = Path(args.infile[: -len(".enc")] + ".dec")
    else:
        out = Path(args.infile + ".dec")
    _write(out, message)
    _emit(
        args,
        {"ok": True, "plaintext": str(out), "length": len(message)},
        f"decrypted {args.infile} -> {out} ({len(message)} bytes)",
    )
    return 0


def cmd_exchange(args) -> int:
    side_a = deserialize_drone_keypair(_read(_resolve(args, args.key_a, ".key")))
    side_b = deserialize_drone_keypair(_read(_resolve(args, args.key_b, ".key")))
    system_public = deserialize_system_public(_read(_resolve(args, args.system, ".pub")))
    for keypair in (side_a, side_b):
        if not key_ver(keypair.record, keypair.secret, system_public):
            raise KeyVerFailed(
                f"key for {keypair.record.drone_id!r} was not issued under this system key"
            )
    rng = _rng(args)
    state_a = aq_hang_initiate(side_a, rng)
    state_b = aq_hang_initiate(side_b, rng)
    session_a = aq_hang_finalize(side_a, state_a, state_b.message)
    session_b = aq_hang_finalize(side_b, state_b, state_a.message)
    if session_a.key != session_b.key:
        raise KeyVerFailed("the two sides derived different session keys")
    _emit(
        args,
        {
            "ok": True,
            "fingerprint_a": session_a.fingerprint(),
            "fingerprint_b": session_b.fingerprint(),
        },
        f"{side_a.record.drone_id.decode(errors='replace')}: {session_a.fingerprint()}\n"
        f"{side_b.record.drone_id.decode(errors='replace')}: {session_b.fingerprint()}\n"
        "session keys agree",
    )
    return 0


def cmd_bench(args) -> int:
    if args.profile in PROFILES:
        rows = device_report(args.profile)
        if args.op:
            rows = [row for row in rows if row["op"] == args.op]
            if not rows:
                raise UnsupportedParams(
                    f"no reference figures for op {args.op!r} on {args.profile!r}"
                )
    else:  # host measurement
        if not args.op:
            raise UnsupportedParams("--profile host requires --op")
        result = run_bench(args.op, args.iterations, _rng(args))
        profile = None
        if args.voltage and args.current:
            profile = DeviceProfile(name="host", voltage=args.voltage, current=args.current)
        rows = host_report([result], profile)
    print(format_ldjson(rows) if args.json else format_text_table(rows))
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # Global options live in a parent parser attached to every leaf
    # subcommand too, so they are accepted both before and after the
    # subcommand words.  SUPPRESS keeps an unused occurrence from
    # clobbering a value parsed at the other position.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--home", default=argparse.SUPPRESS,
                        help="key directory (default: $IODCRYPT_HOME or ~/.iodcrypt)")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--test-seed", type=int, default=argparse.SUPPRESS,
                        help="deterministic randomness for tests; requires --insecure-test")
    common.add_argument("--insecure-test", action="store_true", default=argparse.SUPPRESS,
                        help="acknowledge that seeded randomness is insecure")

    parser = argparse.ArgumentParser(
        prog="iodcrypt",
        description="Self-certified keys, precomputed signing, and hybrid "
        "encryption for drone-class devices.",
        parents=[common],
    )
    commands = parser.add_subparsers(dest="command")

    kgc = commands.add_parser("kgc", help="key generation centre role")
    kgc_commands = kgc.add_subparsers(dest="kgc_command")
    kgc_init = kgc_commands.add_parser("init", parents=[common],
                                       help="create a fresh KGC master key")
    kgc_init.set_defaults(func=cmd_kgc_init)
    kgc_issue = kgc_commands.add_parser("issue", parents=[common],
                                        help="issue a self-certified key")
    kgc_issue.add_argument("--id", required=True, help="identity to issue for")
    kgc_issue.set_defaults(func=cmd_kgc_issue)

    keyver = commands.add_parser("keyver", parents=[common],
                                 help="check a key against the system key")
    keyver.add_argument("--key", required=True, help="drone key file or identity name")
    keyver.add_argument("--system", default="system", help="system public key file or name")
    keyver.set_defaults(func=cmd_keyver)

    table = commands.add_parser("table", help="precomputation tables")
    table_commands = table.add_subparsers(dest="table_command")
    table_gen = table_commands.add_parser("gen", parents=[common], help="generate a table")
    table_gen.add_argument("--designated", action="store_true",
                           help="bind the table to a recipient for encryption")
    table_gen.add_argument("--recipient", help="recipient record (required with --designated)")
    table_gen.add_argument("--system", default="system", help="system public key file or name")
    table_gen.add_argument("--params", default=f"{DEFAULT_PARAMS[0]},{DEFAULT_PARAMS[1]}",
                           help="v,k sizing (default %(default)s)")
    table_gen.add_argument("--out", help="output path")
    table_gen.set_defaults(func=cmd_table_gen)

    sign_cmd = commands.add_parser("sign", parents=[common], help="sign a file")
    sign_cmd.add_argument("--key", required=True, help="signer key file or identity name")
    sign_cmd.add_argument("--table", default="bpv", help="nonce table file or name")
    sign_cmd.add_argument("--out", help="signature output path (default <in>.sig)")
    sign_cmd.add_argument("infile", help="file to sign")
    sign_cmd.set_defaults(func=cmd_sign)

    verify_cmd = commands.add_parser("verify", parents=[common],
                                     help="verify a detached signature")
    verify_cmd.add_argument("--sig", required=True, help="signature file")
    verify_cmd.add_argument("--record", help="signer record (default: resolve signer id)")
    verify_cmd.add_argument("--system", default="system", help="system public key file or name")
    verify_cmd.add_argument("infile", help="signed file")
    verify_cmd.set_defaults(func=cmd_verify)

    encrypt_cmd = commands.add_parser("encrypt", parents=[common],
                                      help="encrypt a file to an identity")
    encrypt_cmd.add_argument("--to", required=True, help="recipient record or identity name")
    encrypt_cmd.add_argument("--system", default="system", help="system public key file or name")
    encrypt_cmd.add_argument("--table", help="designated table (default <to>.dtbl if present)")
    encrypt_cmd.add_argument("--out", help="ciphertext output path (default <in>.enc)")
    encrypt_cmd.add_argument("infile", help="file to encrypt")
    encrypt_cmd.set_defaults(func=cmd_encrypt)

    decrypt_cmd = commands.add_parser("decrypt", parents=[common],
                                      help="decrypt a ciphertext file")
    decrypt_cmd.add_argument("--key", required=True, help="recipient key file or identity name")
    decrypt_cmd.add_argument("--out", help="plaintext output path")
    decrypt_cmd.add_argument("infile", help="ciphertext file")
    decrypt_cmd.set_defaults(func=cmd_decrypt)

    exchange = commands.add_parser("exchange", parents=[common],
                                   help="run both sides of a key exchange")
    exchange.add_argument("--key-a", required=True, help="first key file or identity name")
    exchange.add_argument("--key-b", required=True, help="second key file or identity name")
    exchange.add_argument("--system", default="system", help="system public key file or name")
    exchange.set_defaults(func=cmd_exchange)

    bench = commands.add_parser("bench", parents=[common],
                                help="benchmarks and energy projection")
    bench.add_argument("--profile", required=True, choices=[*PROFILES, "host"])
    bench.add_argument("--op", choices=BENCH_OPS, help="operation to benchmark")
    bench.add_argument("--iterations", type=int, default=50)
    bench.add_argument("--voltage", type=float, help="host energy projection: volts")
    bench.add_argument("--current", type=float, help="host energy projection: amperes")
    bench.set_defaults(func=cmd_bench)

    return parser


_GLOBAL_DEFAULTS = (("home", None), ("json", False),
                    ("test_seed", None), ("insecure_test", False))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # The global flags use SUPPRESS defaults (so either position wins);
    # fill in the base values for any that were never given.
    for dest, value in _GLOBAL_DEFAULTS:
        if not hasattr(args, dest):
            setattr(args, dest, value)
    if args.test_seed is not None and not args.insecure_test:
        parser.error("--test-seed requires --insecure-test")
    if getattr(args, "designated", False) and not getattr(args, "recipient", None):
        parser.error("--designated requires --recipient")
    func = getattr(args, "func", None)
    if func is None:
        parser.print_help(sys.stderr)
        return 2
    try:
        return func(args)
    except IodCryptError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"IOError: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
