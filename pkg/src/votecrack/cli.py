"""Command-line entry point.

Exit codes: 0 success, 1 scenario or attack failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .audit import KeyFileV1, audit_keyfile, parse_keyfile, serialize_keyfile
from .dlp import recover_private_key
from .elgamal import (
    Ciphertext,
    MultiCiphertext,
    MultiParams,
    Version,
    decode_message,
    decrypt,
    encode_message,
    encrypt,
    multi_decrypt,
    multi_encrypt,
)
from .errors import VotecrackError
from .harness.election import create_election, run_election
from .harness.ledger import BallotLedger
from .harness.reproduce import reproduce_appendix_b, reproduce_appendix_c
from .harness.scenarios import (
    APPENDIX_C_IDS,
    attack1_scenario,
    attack2_scenario,
    break_modified,
    params_from_keyfile,
)
from .modmath import make_rng
from .qrattack import QrClass

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2
DEFAULT_BITS = {Version.ORIGINAL: 40, Version.MODIFIED: 1024, Version.FINAL: 1024}


class InputError(Exception):
    pass


def _emit(args, text: str, machine: dict) -> None:
    if args.format == "machine":
        print(json.dumps(machine, indent=2, default=str))
    else:
        print(text)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _load_keyfile(path: str) -> KeyFileV1:
    return parse_keyfile(_read(path).encode("utf-8"))


def _bits(args) -> int:
    return args.bits or DEFAULT_BITS[args.version]


def _group(kf: KeyFileV1, version: Version):
    levels = params_from_keyfile(kf)
    if version is Version.ORIGINAL:
        if len(levels) != 3:
            raise InputError("the original version needs a three-level key file")
        return MultiParams(tuple(levels))
    if len(levels) != 1:
        raise InputError(f"the {version.value} version needs a single-level key file")
    return levels[0]


def _ciphertext_doc(ct) -> dict:
    return {k: str(v) for k, v in vars(ct).items()}


def _parse_ciphertext(text: str):
    if text.startswith("@"):
        text = _read(text[1:])
    try:
        doc = json.loads(text)
        if "b1" in doc:
            return MultiCiphertext(*(int(doc[k]) for k in ("b1", "b2", "a3", "b3")))
        return Ciphertext(int(doc["a"]), int(doc["b"]))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed ciphertext: {exc}") from None


# ---------------------------------------------------------------- commands


def cmd_keygen(args) -> int:
    rng = make_rng(args.seed)
    e = create_election(args.version, rng, bits=_bits(args))
    public = serialize_keyfile(e.keyfile())
    secret = json.dumps({"secretKeys": [str(s) for s in e.secret_keys]}, indent=2) + "\n"
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _write(os.path.join(args.out, "public-key.json"), public)
        _write(os.path.join(args.out, "secret-key.json"), secret)
        _emit(args, f"wrote {args.out}/public-key.json and secret-key.json", {"out": args.out})
    else:
        _emit(args, public.rstrip(), {"public": json.loads(public), "secret": json.loads(secret)})
    return EXIT_OK


def cmd_encrypt(args) -> int:
    kf = _load_keyfile(args.keyfile)
    group = _group(kf, args.version)
    rng = make_rng(args.seed)
    if isinstance(group, MultiParams):
        ct = multi_encrypt(group, kf.public_keys, args.message, rng)
    else:
        ct = encrypt(group, kf.public_keys[0], encode_message(args.version, args.message, group.p), rng)
    doc = _ciphertext_doc(ct)
    _emit(args, json.dumps(doc), doc)
    return EXIT_OK


def cmd_decrypt(args) -> int:
    kf = _load_keyfile(args.keyfile)
    group = _group(kf, args.version)
    try:
        sks = tuple(int(s) for s in json.loads(_read(args.secret))["secretKeys"])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed secret key file: {exc}") from None
    ct = _parse_ciphertext(args.ciphertext)
    if isinstance(group, MultiParams):
        if not isinstance(ct, MultiCiphertext):
            raise InputError("the original version expects a (b1, b2, a3, b3) ciphertext")
        m = multi_decrypt(group, sks, ct)
    else:
        if not isinstance(ct, Ciphertext):
            raise InputError("expected an (a, b) ciphertext")
        m = decode_message(args.version, decrypt(group, sks[0], ct), group.p)
    _emit(args, str(m), {"message": m})
    return EXIT_OK


def cmd_audit(args) -> int:
    kf = _load_keyfile(args.keyfile)
    report = audit_keyfile(kf, args.version if args.version_given else None)
    if args.format == "machine":
        print(report.to_machine())
    else:
        print(report.to_text())
    return EXIT_OK


def cmd_attack_dlp(args) -> int:
    if args.keyfile:
        kf = _load_keyfile(args.keyfile)
        levels = params_from_keyfile(kf)

        def solve(i):
            return recover_private_key(levels[i], kf.public_keys[i], rng=make_rng(args.seed + i))

        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            keys = list(pool.map(solve, range(len(levels))))
        text = "\n".join(f"private key {i + 1}: {k}" for i, k in enumerate(keys))
        _emit(args, text, {"secretKeys": [str(k) for k in keys]})
        return EXIT_OK

    rep = attack1_scenario(bits=args.bits or 40, n_voters=args.voters, seed=args.seed, workers=args.workers)
    lines = [f"attack 1: {rep.bits}-bit three-level election, {rep.n_voters} ballots"]
    for i, (k, s) in enumerate(zip(rep.recovered_keys, rep.key_seconds), start=1):
        lines.append(f"  key {i}: {k} ({s:.3f} s)")
    lines.append(f"  recovered tally: {rep.recovered_tally}")
    lines.append(f"  true tally:      {rep.true_tally}")
    lines += [f"  error: {e}" for e in rep.errors]
    lines.append(f"  {'PASS' if rep.ok else 'FAIL'} in {rep.seconds:.2f} s")
    machine = {
        "ok": rep.ok,
        "bits": rep.bits,
        "voters": rep.n_voters,
        "keys": [str(k) for k in rep.recovered_keys],
        "key_seconds": rep.key_seconds,
        "recovered_tally": rep.recovered_tally,
        "true_tally": rep.true_tally,
        "flagged": rep.flagged,
        "errors": rep.errors,
        "seconds": rep.seconds,
    }
    _emit(args, "\n".join(lines), machine)
    return EXIT_OK if rep.ok else EXIT_FAILED


def cmd_attack_qr(args) -> int:
    version = args.version if args.version_given else Version.MODIFIED
    if args.ledger:
        if not args.keyfile or not args.ids:
            raise InputError("--ledger needs --keyfile and --ids")
        try:
            id_a, id_b = (int(x) for x in args.ids.split(","))
        except ValueError:
            raise InputError("--ids takes two comma-separated deputy ids") from None
        group = _group(_load_keyfile(args.keyfile), version)
        ledger = BallotLedger.load(args.ledger)
        status, _, result = break_modified(group, version, ledger, id_a, id_b)
        text = f"status: {status}\n" + "\n".join(
            f"ballot {i}: {d}" for i, d in enumerate(result.decisions)
        ) + f"\ntally: {result.counts}"
        _emit(args, text, {"status": status, "decisions": result.decisions, "tally": result.counts})
        return EXIT_OK if status == "decoded" else EXIT_FAILED

    rep = attack2_scenario(n_voters=args.voters, seed=args.seed, version=version)
    lines = [f"attack 2 ({version.value}): {rep.n_voters} ballots, status {rep.status}"]
    lines += [f"  id {i}: {c}" for i, c in rep.classes.items()]
    lines.append(f"  recovered tally: {rep.recovered_tally}")
    lines.append(f"  true tally:      {rep.true_tally}")
    lines.append(f"  per-ballot accuracy {rep.accuracy:.3f}, prefix tallies exact: {rep.prefix_exact}")
    lines.append(f"  {'PASS' if rep.ok else 'FAIL'} in {rep.seconds:.2f} s")
    machine = {
        "ok": rep.ok,
        "status": rep.status,
        "classes": rep.classes,
        "recovered_tally": rep.recovered_tally,
        "true_tally": rep.true_tally,
        "accuracy": rep.accuracy,
        "prefix_exact": rep.prefix_exact,
        "seconds": rep.seconds,
    }
    _emit(args, "\n".join(lines), machine)
    return EXIT_OK if rep.ok else EXIT_FAILED


def cmd_simulate(args) -> int:
    rng = make_rng(args.seed)
    ids = APPENDIX_C_IDS if args.version is not Version.ORIGINAL and _bits(args) > 32 else None
    e = create_election(args.version, rng, bits=_bits(args), candidate_ids=ids)
    os.makedirs(args.out, exist_ok=True)
    ledger_path = os.path.join(args.out, "ledger.jsonl")
    if os.path.exists(ledger_path):
        raise InputError(f"{ledger_path} exists; the ledger is append-only")
    weights = [1 / len(e.candidates)] * len(e.candidates)
    ledger, truth = run_election(e, args.voters, weights, rng, BallotLedger(ledger_path))
    _write(os.path.join(args.out, "public-key.json"), serialize_keyfile(e.keyfile()))
    _write(os.path.join(args.out, "election.json"), e.public_metadata())
    _write(os.path.join(args.out, "secret-key.json"),
           json.dumps({"secretKeys": [str(s) for s in e.secret_keys]}, indent=2) + "\n")
    _write(os.path.join(args.out, "truth.json"), truth.to_json())
    _emit(args, f"{len(ledger)} ballots written to {ledger_path}",
          {"ledger": ledger_path, "ballots": len(ledger), "ids": e.ids})
    return EXIT_OK


def cmd_reproduce(args) -> int:
    if args.which == "appendix-b":
        rep = reproduce_appendix_b()
        lines = [f"{rep.p_bits}-bit p, {len(rep.symbols)} ciphertexts"]
        lines += [
            f"  b[{i}]: {'residue' if s == 1 else 'non-residue'} (Euler {'1' if e == 1 else 'p-1'})"
            for i, (s, e) in enumerate(zip(rep.symbols, rep.euler))
        ]
        lines.append(f"  residues: {rep.residues} of {len(rep.symbols)}  {'PASS' if rep.ok else 'FAIL'}")
        machine = {"ok": rep.ok, "residues": rep.residues, "symbols": rep.symbols, "euler": rep.euler}
    else:
        rep = reproduce_appendix_c(n_voters=args.voters, seed=args.seed)
        lines = [f"{rep.p_bits}-bit p"]
        lines += [f"  id {i}: {c.value}" for i, c in rep.classes.items()]
        if rep.attack is not None:
            lines.append(
                f"  simulated {rep.attack.n_voters}-ballot election decoded with accuracy {rep.attack.accuracy:.3f}"
            )
        lines.append(f"  {'PASS' if rep.ok else 'FAIL'}")
        machine = {
            "ok": rep.ok,
            "classes": {str(i): c.value for i, c in rep.classes.items()},
            "residue_id": rep.residue_id,
            "attack_accuracy": rep.attack.accuracy if rep.attack else None,
        }
    _emit(args, "\n".join(lines), machine)
    return EXIT_OK if rep.ok else EXIT_FAILED


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--version", type=Version, choices=list(Version), default=None,
                        metavar="{original,modified,final}")
    common.add_argument("--bits", type=int, default=None)
    common.add_argument("--voters", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=3)
    common.add_argument("--format", choices=("text", "machine"), default="text")

    parser = argparse.ArgumentParser(prog="votecrack", description=__doc__)
    parser.add_argument("-V", action="version", version=f"votecrack {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", parents=[common], help="generate parameters and keys")
    p.add_argument("--out", help="directory for public-key.json and secret-key.json")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", parents=[common], help="encrypt a deputy id")
    p.add_argument("--keyfile", required=True)
    p.add_argument("--message", type=int, required=True)
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", parents=[common], help="decrypt with secret keys")
    p.add_argument("--keyfile", required=True)
    p.add_argument("--secret", required=True)
    p.add_argument("--ciphertext", required=True, help="JSON object or @file")
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("audit", parents=[common], help="audit a public-key.json file")
    p.add_argument("keyfile")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("attack-dlp", parents=[common], help="attack 1: discrete-log key recovery")
    p.add_argument("--keyfile", help="recover keys for this file instead of running a scenario")
    p.set_defaults(func=cmd_attack_dlp, voters_default=200)

    p = sub.add_parser("attack-qr", parents=[common], help="attack 2: residuosity vote decoding")
    p.add_argument("--ledger")
    p.add_argument("--keyfile")
    p.add_argument("--ids", help="two deputy ids, comma separated")
    p.set_defaults(func=cmd_attack_qr, voters_default=500)

    p = sub.add_parser("simulate", parents=[common], help="run an election into a ledger directory")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate, voters_default=100)

    p = sub.add_parser("reproduce", parents=[common], help="recompute the published checks")
    p.add_argument("which", choices=("appendix-b", "appendix-c"))
    p.set_defaults(func=cmd_reproduce, voters_default=100)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.version_given = args.version is not None
    if args.version is None:
        args.version = Version.ORIGINAL if args.command == "attack-dlp" else Version.MODIFIED
    if args.voters is None:
        args.voters = getattr(args, "voters_default", 100)
    if args.workers < 1 or args.voters < 0 or (args.bits is not None and args.bits < 5):
        print("error: --workers >= 1, --voters >= 0, --bits >= 5", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, VotecrackError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
