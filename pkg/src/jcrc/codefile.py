"""Line-oriented code files and JSON/text reports.

A code file starts with a header line ``n w``, followed by one block per line
as space-separated increasing 1-based integers.  Blank lines and lines
starting with ``#`` are ignored.  Writing always emits blocks in colex order,
so a parse/write cycle is byte-stable.
"""

from __future__ import annotations

from fractions import Fraction

from .analysis import Code, CrcReport
from .errors import CodeFileError, ParameterError
from .johnson import JohnsonParams, elements, theta_index

SCHEMA_VERSION = 1
SAFE_INT = 2**53


def parse_code(text: str, source: str = "<input>") -> Code:
    params = None
    blocks = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            nums = [int(f) for f in fields]
        except ValueError:
            bad = next(i for i, f in enumerate(fields, 1) if not f.lstrip("-").isdigit())
            raise CodeFileError(f"{source}:{lineno}: field {bad} ({fields[bad - 1]!r}) is not an integer")
        if params is None:
            if len(nums) != 2:
                raise CodeFileError(f"{source}:{lineno}: header must be 'n w', got {len(nums)} fields")
            try:
                params = JohnsonParams(*nums)
            except ParameterError as e:
                raise CodeFileError(f"{source}:{lineno}: {e}") from None
            continue
        if len(nums) != params.w:
            raise CodeFileError(f"{source}:{lineno}: block has {len(nums)} fields, expected w={params.w}")
        for i, x in enumerate(nums, 1):
            if not 1 <= x <= params.n:
                raise CodeFileError(f"{source}:{lineno}: field {i} ({x}) outside 1..{params.n}")
        if len(set(nums)) != len(nums):
            raise CodeFileError(f"{source}:{lineno}: repeated element in block")
        blocks.append(sorted(nums))
    if params is None:
        raise CodeFileError(f"{source}: missing 'n w' header")
    if not blocks:
        raise CodeFileError(f"{source}: no blocks after the header")
    return Code.from_blocks(params, blocks)


def read_code(path: str) -> Code:
    with open(path) as fh:
        return parse_code(fh.read(), path)


def format_code(code: Code) -> str:
    lines = [f"{code.n} {code.w}"]
    lines += [" ".join(map(str, elements(b))) for b in code.blocks]
    return "\n".join(lines) + "\n"


def write_code(code: Code, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(format_code(code))


def exact(x):
    """JSON-safe exact number: ints stay ints unless beyond 53 bits; rationals become strings."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            x = x.numerator
        else:
            return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int) and abs(x) >= SAFE_INT:
        return str(x)
    return x


def spectrum_entries(n: int, w: int, values) -> list[dict]:
    return [{"index": theta_index(n, w, t), "value": exact(t)} for t in values]


def spectrum_text(n: int, w: int, values) -> str:
    return "{" + ", ".join(f"θ{theta_index(n, w, t)} = {t}" for t in values) + "}"


def report_dict(rep: CrcReport, extra: dict | None = None) -> dict:
    code = rep.code
    out = {
        "schema": SCHEMA_VERSION,
        "graph": {"n": code.n, "w": code.w},
        "size": exact(len(code)),
        "crc": rep.is_crc,
        "rho": rep.rho,
        "cell_sizes": [exact(s) for s in rep.cell_sizes],
        "strength": rep.strength,
        "lambdas": [exact(x) for x in rep.lambdas],
    }
    if rep.is_crc:
        m = rep.matrix
        out["matrix"] = {
            "alpha": list(m.alpha),
            "beta": list(m.beta),
            "gamma": list(m.gamma),
            "array": m.array_str(),
        }
        out["spectrum"] = spectrum_entries(code.n, code.w, rep.spectrum)
    else:
        wt = rep.witness
        out["witness"] = {
            "cell": wt.cell,
            "toward": wt.cell + wt.direction,
            "vertex": list(elements(wt.vertex)),
            "count": wt.count,
            "reference": list(elements(wt.reference)),
            "expected": wt.expected,
        }
    if extra:
        out.update(extra)
    return out


def report_text(rep: CrcReport) -> str:
    code = rep.code
    lines = [f"graph J({code.n},{code.w}), |C| = {len(code)}"]
    if rep.is_crc:
        m = rep.matrix
        lines += [
            f"completely regular: yes, rho = {rep.rho}",
            f"intersection array {m.array_str()}, alpha = {list(m.alpha)}",
            f"spectrum {spectrum_text(code.n, code.w, rep.spectrum)}",
        ]
    else:
        wt = rep.witness
        lines += [
            "completely regular: no",
            f"witness: {list(elements(wt.vertex))} and {list(elements(wt.reference))} lie in "
            f"C_{wt.cell} with {wt.count} vs {wt.expected} neighbours in C_{wt.cell + wt.direction}",
        ]
    lines += [
        f"cell sizes {rep.cell_sizes}",
        f"strength {rep.strength}, lambda = {rep.lambdas}",
    ]
    return "\n".join(lines) + "\n"
