"""Flat key=value reports between begin/end markers, and their parser."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import Matrix, fmt_matrix, fmt_vector
from .verdict import Verdict

BEGIN = "begin coringkit-report"
END = "end coringkit-report"

EXIT_CODES = {"verified": 0, "refuted": 1, "undecided": 2}
INPUT_ERROR = 3


def format_value(v) -> str:
    if v is True:
        return "true"
    if v is False:
        return "false"
    if v is None:
        return "unknown"
    if isinstance(v, Matrix):
        return f"{v.nrows}x{v.ncols}: {fmt_matrix(v)}"
    if isinstance(v, (tuple, list)):
        if all(isinstance(x, (int, Fraction)) and not isinstance(x, bool) for x in v):
            return fmt_vector(v)
        return " | ".join(format_value(x) for x in v)
    return " ".join(str(v).split())


@dataclass
class Report:
    command: str
    instance: str
    field_name: str
    objects: tuple[str, ...]
    verdict: Verdict
    info: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)

    @property
    def outcome(self) -> str:
        return self.verdict.outcome

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict.outcome]

    def lines(self) -> list[str]:
        v = self.verdict
        out = [BEGIN, f"command={self.command}", f"instance={self.instance}",
               f"field={self.field_name}", f"objects={','.join(self.objects)}"]
        out += [f"option.{k}={format_value(x)}" for k, x in self.options.items()]
        out += [f"outcome={v.outcome}", f"reason={format_value(v.reason)}"]
        for prefix, d in (("info", self.info), ("check", v.checks), ("witness", v.witnesses),
                          ("ledger", v.ledger)):
            out += [f"{prefix}.{k}={format_value(x)}" for k, x in d.items()]
        out.append(END)
        return out

    def render(self) -> str:
        return "\n".join(self.lines()) + "\n"


def parse_report(text: str) -> dict[str, str]:
    """Key/value pairs of the first report block in ``text``."""
    inside, out = False, {}
    for line in text.splitlines():
        if line == BEGIN:
            inside = True
            continue
        if line == END and inside:
            return out
        if inside and "=" in line:
            k, v = line.split("=", 1)
            out[k] = v
    if not inside:
        raise ValueError("no report block found")
    raise ValueError("report block is not terminated")


def parse_vector(text: str) -> tuple:
    return tuple(Fraction(t) for t in text.split())
