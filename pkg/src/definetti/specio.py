"""JSON specs, tabulated oracles, and TSV/JSON bound tables.

Rationals are always written as ``"p/q"`` strings.  JSON numbers are
accepted only when they are integers.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .intervals import OpenIntervalSet, SetTuple, parse_set_tuple
from .oracles import MarginalOracle
from .processes import MeasureSpec, ProcessSpec, SpecError
from .transform import TransformResult


def fmt_rational(q: Fraction) -> str:
    q = Fraction(q)
    return "%d/%d" % (q.numerator, q.denominator)


def parse_rational(value) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise SpecError("rationals must be \"p/q\" strings, got %r" % (value,))
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise SpecError("rationals must be \"p/q\" strings, got %r" % (value,))
    try:
        return Fraction(value.strip())
    except (ValueError, ZeroDivisionError):
        raise SpecError("bad rational %r" % value) from None


def truncated_decimal(q: Fraction, places: int = 10) -> str:
    """Decimal expansion truncated toward zero."""
    q = Fraction(q)
    sign = "-" if q < 0 else ""
    q = abs(q)
    scaled = q.numerator * 10 ** places // q.denominator
    whole, frac = divmod(scaled, 10 ** places)
    return "%s%d.%0*d" % (sign, whole, places, frac)


def _get(obj: dict, key: str):
    if key not in obj:
        raise SpecError("missing field %r" % key)
    return obj[key]


def _mixture(obj: dict):
    table = _get(obj, "mixture")
    if not isinstance(table, list):
        raise SpecError("mixture must be a list of [weight, coin] pairs")
    out = []
    for entry in table:
        if not isinstance(entry, list) or len(entry) != 2:
            raise SpecError("mixture entries are [weight, coin] pairs")
        out.append((parse_rational(entry[0]), parse_rational(entry[1])))
    return tuple(out)


# processes

def process_from_json(obj) -> ProcessSpec:
    if not isinstance(obj, dict):
        raise SpecError("a process spec is a JSON object")
    kind = _get(obj, "process")
    if kind == "polya":
        return ProcessSpec("polya", alpha=parse_rational(_get(obj, "alpha")),
                           beta=parse_rational(_get(obj, "beta")))
    if kind == "constant_atom":
        return ProcessSpec("constant_atom", atom=parse_rational(_get(obj, "atom")))
    if kind == "iid_bernoulli_mixture":
        return ProcessSpec("iid_bernoulli_mixture", mixture=_mixture(obj))
    if kind in ("iid_uniform", "constant_uniform"):
        return ProcessSpec(kind)
    raise SpecError("unknown process kind %r" % (kind,))


def process_to_json(spec: ProcessSpec) -> dict:
    out = {"process": spec.kind}
    if spec.kind == "polya":
        out["alpha"] = fmt_rational(spec.alpha)
        out["beta"] = fmt_rational(spec.beta)
    elif spec.kind == "constant_atom":
        out["atom"] = fmt_rational(spec.atom)
    elif spec.kind == "iid_bernoulli_mixture":
        out["mixture"] = [[fmt_rational(w), fmt_rational(p)] for w, p in spec.mixture]
    return out


class TableOracle(MarginalOracle):
    """Box lower bounds read from a file.

    Boxes not listed get the trivial bound 0.  Lookups ignore full
    coordinates and coordinate order, which is what exchangeability and
    marginal consistency license.
    """

    def __init__(self, entries: Iterable[Tuple[SetTuple, int, Fraction]]):
        self._table: Dict[tuple, List[Tuple[int, Fraction]]] = {}
        for sets, fuel, value in entries:
            if fuel < 1:
                raise SpecError("table fuel must be positive")
            if not 0 <= value <= 1:
                raise SpecError("table bounds must lie in [0, 1]")
            self._table.setdefault(self._key(sets), []).append((fuel, value))

    @staticmethod
    def _key(sets) -> tuple:
        live = [s for s in sets if not s.is_full()]
        return tuple(sorted(live, key=lambda s: s.intervals))

    def box_lower(self, sigma, fuel: int) -> Fraction:
        if any(s.is_empty() for s in sigma):
            return Fraction(0)
        key = self._key(sigma)
        if not key:
            return Fraction(1)
        return max((v for f, v in self._table.get(key, ()) if f <= fuel), default=Fraction(0))


def table_from_json(obj: dict) -> TableOracle:
    entries = []
    for e in _get(obj, "entries"):
        try:
            sets = parse_set_tuple(_get(e, "box"))
        except ValueError as exc:
            raise SpecError(str(exc)) from None
        fuel = _get(e, "fuel")
        if not isinstance(fuel, int) or isinstance(fuel, bool):
            raise SpecError("table fuel must be an integer")
        entries.append((sets, fuel, parse_rational(_get(e, "lower"))))
    return TableOracle(entries)


# measures

def measure_from_json(obj) -> MeasureSpec:
    if not isinstance(obj, dict):
        raise SpecError("a measure spec is a JSON object")
    kind = _get(obj, "measure")
    if kind == "beta_bernoulli":
        return MeasureSpec(kind, alpha=parse_rational(_get(obj, "alpha")),
                           beta=parse_rational(_get(obj, "beta")))
    if kind == "dirac_at_atom":
        return MeasureSpec(kind, atom=parse_rational(_get(obj, "atom")))
    if kind == "bernoulli_mixture":
        return MeasureSpec(kind, mixture=_mixture(obj))
    if kind == "definetti_oracle":
        return MeasureSpec(kind, process=process_from_json(_get(obj, "process")))
    if kind in ("dirac_at_uniform", "uniform_on_diracs"):
        return MeasureSpec(kind)
    raise SpecError("unknown measure kind %r" % (kind,))


def measure_to_json(spec: MeasureSpec) -> dict:
    out = {"measure": spec.kind}
    if spec.kind == "beta_bernoulli":
        out["alpha"] = fmt_rational(spec.alpha)
        out["beta"] = fmt_rational(spec.beta)
    elif spec.kind == "dirac_at_atom":
        out["atom"] = fmt_rational(spec.atom)
    elif spec.kind == "bernoulli_mixture":
        out["mixture"] = [[fmt_rational(w), fmt_rational(p)] for w, p in spec.mixture]
    elif spec.kind == "definetti_oracle":
        out["process"] = process_to_json(spec.process)
    return out


def transform_to_json(result: TransformResult) -> dict:
    out = measure_to_json(result.measure)
    out["verified_depth"] = result.verified_depth
    out["status"] = result.status
    out["input"] = process_to_json(result.process)
    out["notes"] = list(result.notes)
    return out


def load_json(source: str):
    """``source`` is inline JSON (starting with ``{``) or a file path."""
    text = source
    if not source.lstrip().startswith("{"):
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise SpecError("cannot read %s: %s" % (source, exc.strerror)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError("malformed JSON: %s" % exc) from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


# bound tables

def table_rows(fuels: Sequence[int], lowers: Sequence[Fraction],
               uppers: Optional[Sequence[Fraction]] = None):
    rows = []
    for i, f in enumerate(fuels):
        row = {"fuel": f, "lower": lowers[i]}
        if uppers is not None:
            row["upper"] = uppers[i]
        rows.append(row)
    return rows


def render_tsv(rows) -> str:
    two_sided = bool(rows) and "upper" in rows[0]
    cols = ["fuel", "lower_rational", "lower_decimal"]
    if two_sided:
        cols += ["upper_rational", "upper_decimal"]
    lines = ["\t".join(cols)]
    for r in rows:
        cells = [str(r["fuel"]), fmt_rational(r["lower"]), truncated_decimal(r["lower"])]
        if two_sided:
            cells += [fmt_rational(r["upper"]), truncated_decimal(r["upper"])]
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def render_json(rows) -> str:
    out = []
    for r in rows:
        item = {"fuel": r["fuel"], "lower": fmt_rational(r["lower"]),
                "lower_decimal": truncated_decimal(r["lower"])}
        if "upper" in r:
            item["upper"] = fmt_rational(r["upper"])
            item["upper_decimal"] = truncated_decimal(r["upper"])
        out.append(item)
    return dumps({"rows": out})
