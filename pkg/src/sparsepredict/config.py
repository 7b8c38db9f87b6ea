"""Flat ``key = value`` experiment configuration.

One key per line, ``#`` starts a comment. Command-line overrides use the
same keys. List-valued keys accept comma lists; ``times`` also accepts
``a:b`` or ``a:b:step`` ranges (inclusive) and the token ``max``.
"""

import warnings
from dataclasses import dataclass, fields, replace

from .errors import CapacityError, ConfigError

KINDS = ("dyadic-sparse", "grover", "strip", "shor")
FORMATS = ("csv", "json")
MAX_QUBITS = 14


def _int(text):
    try:
        return int(text, 0)
    except ValueError:
        raise ConfigError(f"expected an integer, got {text!r}") from None


def _float(text):
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return float(num) / float(den)
        if text.startswith("2^"):
            return 2.0 ** float(text[2:])
        return float(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"expected a number, got {text!r}") from None


def _list(conv):
    def parse(text):
        items = [s.strip() for s in text.split(",") if s.strip()]
        return tuple(conv(s) for s in items)
    return parse


def _times(text):
    out = []
    for item in (s.strip() for s in text.split(",")):
        if not item:
            continue
        if item == "max":
            out.append("max")
        elif ":" in item:
            parts = [_int(x) for x in item.split(":")]
            if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] == 0):
                raise ConfigError(f"bad time range {item!r}")
            step = parts[2] if len(parts) == 3 else 1
            out.extend(range(parts[0], parts[1] + (1 if step > 0 else -1), step))
        else:
            out.append(_int(item))
    return tuple(out)


def _choice(options):
    def parse(text):
        text = text.strip()
        if text not in options:
            raise ConfigError(f"expected one of {', '.join(options)}, got {text!r}")
        return text
    return parse


def _opt_int(text):
    return None if text.strip().lower() in ("", "auto", "none") else _int(text)


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str = "dyadic-sparse"
    n: tuple = (10,)
    count: int | None = None
    gap: float | None = None
    strips: int | None = None
    width: tuple = (2.0 ** -10,)
    a: int = 7
    modulus: int = 15
    marked: int = 0
    delta: tuple = (0.5,)
    p: tuple = (5,)
    q: int | None = None
    precision: int | None = None
    times: tuple = ("max",)
    trials: int = 100
    seed: int = 0
    K: tuple = (2, 4, 8)
    out: str | None = None
    format: str = "csv"
    tolerance: float = 1e-9
    max_qubits: int = MAX_QUBITS
    eigenvectors: int = 1

    def single(self, key):
        value = getattr(self, key)
        if len(value) != 1:
            raise ConfigError(f"{key} must be a single value for this command, got {len(value)}")
        return value[0]

    def check(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.times and self.kind != "shor":
            raise ConfigError("time list is empty")
        if not self.delta or (not self.n and self.kind != "shor"):
            raise ConfigError("n and delta ranges must not be empty")
        for d in self.delta:
            if not 0 < d < 1:
                raise ConfigError(f"delta must lie in (0, 1), got {d}")
        guard = self.max_qubits
        if guard > MAX_QUBITS:
            warnings.warn(f"capacity guard raised to {guard} qubits; memory use grows as 2^(n+q)")
        for n in self.n:
            if n < 1:
                raise ConfigError(f"n must be >= 1, got {n}")
            if n > guard:
                raise CapacityError(f"n={n} exceeds the capacity guard of {guard} qubits")
        if self.kind == "grover" and any(self.marked >= (1 << n) for n in self.n):
            raise ConfigError(f"marked={self.marked} does not fit in n bits")
        if self.kind == "shor" and any((1 << n) < self.modulus for n in self.n):
            raise ConfigError(f"2^n must be at least modulus={self.modulus}")
        for w in self.width:
            if not 0 < w < 1:
                raise ConfigError(f"strip width must lie in (0, 1), got {w}")
        return self


PARSERS = {
    "kind": _choice(KINDS),
    "n": _list(_int),
    "count": _opt_int,
    "gap": _float,
    "strips": _opt_int,
    "width": _list(_float),
    "a": _int,
    "modulus": _int,
    "marked": _int,
    "delta": _list(_float),
    "p": _list(_int),
    "q": _opt_int,
    "precision": _opt_int,
    "times": _times,
    "trials": _int,
    "seed": _int,
    "K": _list(_int),
    "out": lambda s: s.strip() or None,
    "format": _choice(FORMATS),
    "tolerance": _float,
    "max_qubits": _int,
    "eigenvectors": _int,
}

assert set(PARSERS) == {f.name for f in fields(ExperimentConfig)}


def parse_pairs(pairs, base=None):
    """Apply ``(key, text)`` pairs on top of ``base`` (default config)."""
    updates = {}
    for key, text in pairs:
        key = key.strip().replace("-", "_")
        if key not in PARSERS:
            raise ConfigError(f"unknown config key {key!r}")
        updates[key] = PARSERS[key](text)
    return replace(base or ExperimentConfig(), **updates)


def parse_text(text, base=None):
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        key, value = line.split("=", 1)
        pairs.append((key, value))
    return parse_pairs(pairs, base)


def load(path, base=None):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_text(fh.read(), base)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None

