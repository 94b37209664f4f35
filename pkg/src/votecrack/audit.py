"""Outside-attacker audit of published group parameters and key files.

Works only from public data: the ``public-key.json`` layout of the voting
repository (parallel ``modulos`` / ``generators`` / ``publicKeys`` arrays of
decimal strings) and the encoding rules of each code revision.
"""

from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass, field

from .elgamal import Version
from .errors import KeyFileError
from .modmath import GroupParams, generator_order_class, is_probable_prime

KEYFILE_FIELDS = ("modulos", "generators", "publicKeys")
SOLIDITY_MAX_INT = (1 << 256) - 1


class Severity(enum.IntEnum):
    OK = 0
    WARN = 1
    CRITICAL = 2

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Thresholds:
    """Key-size cut-offs in bits; below ``critical_below`` keys fall in minutes."""

    critical_below: int = 512
    warn_below: int = 2048


@dataclass(frozen=True)
class Finding:
    level: int | None
    check: str
    severity: Severity
    reason_code: str
    detail: str

    def to_dict(self) -> dict:
        d = asdict(self)
        d["severity"] = self.severity.name
        return d


@dataclass
class AuditReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def overall(self) -> Severity:
        return max((f.severity for f in self.findings), default=Severity.OK)

    def codes(self, severity: Severity | None = None) -> list[str]:
        return [f.reason_code for f in self.findings if severity is None or f.severity == severity]

    def to_text(self) -> str:
        lines = []
        for f in self.findings:
            where = "-" if f.level is None else str(f.level)
            lines.append(f"[{f.severity.name:8}] level {where:>2} {f.check:<18} {f.reason_code}: {f.detail}")
        lines.append(f"overall: {self.overall.name}")
        return "\n".join(lines)

    def to_machine(self) -> str:
        payload = {
            "overall": self.overall.name,
            "findings": [f.to_dict() for f in self.findings],
        }
        return json.dumps(payload, indent=2)


@dataclass(frozen=True)
class KeyFileV1:
    modulos: tuple[int, ...]
    generators: tuple[int, ...]
    public_keys: tuple[int, ...]

    def __len__(self):
        return len(self.modulos)


def _parse_decimal(value, path: str) -> int:
    if isinstance(value, int) and not isinstance(value, bool):
        text = str(value)
    elif isinstance(value, str):
        text = value.strip()
    else:
        raise KeyFileError(path, f"expected a decimal string, got {type(value).__name__}")
    if not text.isdigit() or not text.isascii():
        raise KeyFileError(path, f"not a decimal integer: {text[:40]!r}")
    n = int(text)
    if n <= 0:
        raise KeyFileError(path, "must be a positive integer")
    return n


def parse_keyfile(text: bytes | str) -> KeyFileV1:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise KeyFileError("$", f"not UTF-8: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise KeyFileError("$", f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise KeyFileError("$", "top level must be an object")
    arrays = {}
    for name in KEYFILE_FIELDS:
        if name not in doc:
            raise KeyFileError(f"$.{name}", "missing field")
        raw = doc[name]
        if not isinstance(raw, list):
            raise KeyFileError(f"$.{name}", "must be an array")
        arrays[name] = tuple(_parse_decimal(v, f"$.{name}[{i}]") for i, v in enumerate(raw))
    lengths = {name: len(v) for name, v in arrays.items()}
    if len(set(lengths.values())) != 1:
        raise KeyFileError("$", f"array length mismatch {lengths}")
    return KeyFileV1(arrays["modulos"], arrays["generators"], arrays["publicKeys"])


def serialize_keyfile(kf: KeyFileV1) -> str:
    doc = {
        "modulos": [str(v) for v in kf.modulos],
        "generators": [str(v) for v in kf.generators],
        "publicKeys": [str(v) for v in kf.public_keys],
    }
    return json.dumps(doc, indent=2) + "\n"


def _key_size_finding(p: int, level: int | None, thresholds: Thresholds) -> Finding:
    bits = p.bit_length()
    if bits < thresholds.critical_below:
        return Finding(level, "key_size", Severity.CRITICAL, "KEY_TOO_SMALL",
                       f"{bits}-bit p: discrete logs are computable in minutes with public NFS software")
    if bits < thresholds.warn_below:
        return Finding(level, "key_size", Severity.WARN, "KEY_SIZE_WEAK",
                       f"{bits}-bit p: not enough for medium-term security")
    return Finding(level, "key_size", Severity.OK, "KEY_SIZE_OK", f"{bits}-bit p")


def audit_group(p: int, g: int, level: int | None = None, thresholds: Thresholds = Thresholds()) -> list[Finding]:
    out: list[Finding] = []

    def add(check, severity, code, detail):
        out.append(Finding(level, check, severity, code, detail))

    p_prime = p >= 3 and is_probable_prime(p)
    if p_prime:
        add("prime", Severity.OK, "P_PRIME", "p passes Miller-Rabin")
    else:
        add("prime", Severity.CRITICAL, "P_NOT_PRIME", "p is composite; the group is not a prime field")

    q = (p - 1) // 2
    safe = p_prime and is_probable_prime(q)
    if safe:
        add("safe_prime", Severity.OK, "SAFE_PRIME", "(p-1)/2 is prime")
    else:
        add("safe_prime", Severity.CRITICAL, "NOT_SAFE_PRIME",
            "(p-1)/2 is not prime; Pohlig-Hellman applies to its small factors")

    out.append(_key_size_finding(p, level, thresholds))
    if p <= SOLIDITY_MAX_INT:
        add("key_size", Severity.OK, "FITS_SOLIDITY_UINT256",
            "p fits the 256-bit native integer of the contract language; a likely but unconfirmed cause of the size")

    if safe:
        order = generator_order_class(p, g)
        if order == "q":
            add("generator", Severity.OK, "GENERATOR_ORDER_Q", "g generates the quadratic residues")
        elif order == "2q":
            add("generator", Severity.WARN, "GENERATOR_ORDER_2Q",
                "g generates all of F_p^*: Legendre symbols of a, b, pk leak the residuosity of m")
        else:
            add("generator", Severity.CRITICAL, "GENERATOR_ORDER_OTHER", "g has order 1 or 2")

    add("provenance", Severity.OK, "PRIME_PROVENANCE_UNVERIFIED",
        "no generation seed published; a trapdoored prime cannot be ruled out")
    return out


def audit_public_key(p: int, g: int, pk: int, level: int | None = None) -> list[Finding]:
    if not 1 <= pk <= p - 1:
        return [Finding(level, "public_key", Severity.CRITICAL, "PK_OUT_OF_RANGE", "pk not in [1, p-1]")]
    q = (p - 1) // 2
    if generator_order_class(p, g) == "q" and pow(pk, q, p) != 1:
        return [Finding(level, "public_key", Severity.CRITICAL, "PK_OUTSIDE_SUBGROUP",
                        "pk is not in the subgroup generated by g")]
    return [Finding(level, "public_key", Severity.OK, "PK_IN_SUBGROUP", "pk lies in <g>")]


def audit_message_encoding(
    version: Version, params: GroupParams | None = None, thresholds: Thresholds = Thresholds()
) -> list[Finding]:
    """Weaknesses of how each code revision maps votes to group elements."""
    if version is Version.ORIGINAL:
        return [
            Finding(None, "encoding", Severity.CRITICAL, "SMALL_KEYS_FULL_GROUP_LEAK",
                    "sub-256-bit levels with order-2q generators: keys recoverable, residuosity leaks"),
            Finding(None, "encoding", Severity.WARN, "MULTILEVEL_NO_ADDED_SECURITY",
                    "three chained levels are broken one discrete log at a time, in parallel"),
        ]
    if version is Version.MODIFIED:
        return [
            Finding(None, "encoding", Severity.CRITICAL, "RESIDUOSITY_LEAK",
                    "messages range over all of [1, p-1] with g in Q_p: (b/p) = (m/p), "
                    "the scheme is not semantically secure"),
        ]
    findings = [
        Finding(None, "encoding", Severity.OK, "SQUARED_ENCODING",
                "messages are squared into Q_p before encryption; residuosity leak closed"),
        # informational: only matters if the protocol ever exposes a decryption oracle
        Finding(None, "encoding", Severity.OK, "NOT_IND_CCA2",
                "textbook ElGamal is malleable; any decryption oracle decrypts every ballot"),
    ]
    if params is not None:
        findings.append(_key_size_finding(params.p, None, thresholds))
        if params.p % 4 != 3:
            findings.append(Finding(None, "encoding", Severity.CRITICAL, "SQRT_UNSUPPORTED",
                                    "p != 3 mod 4: the (p+1)/4 square root decoder does not apply"))
    return findings


def audit_keyfile(
    kf: KeyFileV1, version: Version | None = None, thresholds: Thresholds = Thresholds()
) -> AuditReport:
    report = AuditReport()
    for i, (p, g, pk) in enumerate(zip(kf.modulos, kf.generators, kf.public_keys), start=1):
        report.findings += audit_group(p, g, i, thresholds)
        report.findings += audit_public_key(p, g, pk, i)
    if len(kf) > 1:
        ordered = all(a < b for a, b in zip(kf.modulos, kf.modulos[1:]))
        report.findings.append(
            Finding(None, "multilevel", Severity.OK if ordered else Severity.CRITICAL,
                    "LEVELS_INCREASING" if ordered else "LEVELS_NOT_INCREASING",
                    "p1 < p2 < p3" if ordered else "lifting between levels loses information")
        )
    if version is not None:
        report.findings += audit_message_encoding(version)
    return report
