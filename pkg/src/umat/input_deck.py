"""Reader and writer for the keyword-based material deck.

Recognized keywords (case-insensitive)::

    *MATERIAL, NAME=<label>[, UNITS=<unit>]
    *ANISOTROPIC HYPERELASTIC, USER, FORMULATION=INVARIANT,
        TYPE=INCOMPRESSIBLE|COMPRESSIBLE, LOCAL DIRECTIONS=<0..3>
    *PARAMETER TABLE TYPE, NAME="<name>", PARAMETERS=<n>
        <TYPE>, <default>, "<description>"        (n declaration lines)
    *PARAMETER TABLE, TYPE="UNIVERSAL_TAB"
        kfinv, kf0, kf1, kf2, w0, w1, w2
    *PARAMETER TABLE, TYPE="MIXED_INV"
        n, k1, ..., k15                            (may wrap after a trailing comma)
    *FIBER DIRECTIONS
        x, y, z                                    (one line per direction)

Lines starting with ``**`` are comments. A keyword line ending in a comma
continues on the next line. ``*INCLUDE`` is rejected.
"""
from __future__ import annotations

import csv
import re
import warnings
from dataclasses import dataclass, field

from .errors import ParseError
from .kinematics import MIXED_BASE, NBASE, FiberSet, MixedInvariantRow, SLOT_TABLE
from .table import MAX_POWER, MaterialType, NeuronRow, ParameterTable

UNIVERSAL_TAB = "UNIVERSAL_TAB"
MIXED_INV = "MIXED_INV"

_KNOWN_LAYOUTS = {
    UNIVERSAL_TAB: ["INTEGER"] * 4 + ["FLOAT"] * 3,
    MIXED_INV: ["INTEGER"] + ["FLOAT"] * NBASE,
}

_INT_RE = re.compile(r"^[+-]?\d+$")
_FLOAT_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


@dataclass(frozen=True)
class MaterialSpec:
    name: str = ""
    table: ParameterTable = field(default_factory=ParameterTable)
    fibers: FiberSet | None = None
    units: str = ""

    def __post_init__(self):
        if self.fibers is not None and self.fibers.ndir == 0:
            object.__setattr__(self, "fibers", None)
        if self.fibers is not None and self.fibers.ndir != self.table.ndir:
            raise ValueError(
                f"{self.fibers.ndir} fiber directions given for LOCAL DIRECTIONS={self.table.ndir}"
            )

    def fiber_set(self) -> FiberSet:
        """Fibers to evaluate with: the declared ones, else the first ndir axes."""
        if self.fibers is not None:
            return self.fibers
        return FiberSet(tuple(_axis(k) for k in range(self.table.ndir)))


def _axis(k):
    v = [0.0, 0.0, 0.0]
    v[k] = 1.0
    return v


# --- lexing -----------------------------------------------------------------

def _logical_lines(text):
    """Yield (lineno, content, kind) with keyword continuations joined.

    kind is "keyword" or "data"; comments and blank lines are dropped.
    """
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        raw = lines[i].strip()
        lineno = i + 1
        i += 1
        if not raw or raw.startswith("**"):
            continue
        if raw.startswith("*"):
            while raw.endswith(",") and i < len(lines):
                nxt = lines[i].strip()
                if not nxt or nxt.startswith("*"):
                    break
                raw = raw + " " + nxt
                i += 1
            yield lineno, raw, "keyword"
        else:
            yield lineno, raw, "data"


def _split_keyword(line, lineno):
    try:
        parts = next(csv.reader([line[1:]], skipinitialspace=True))
    except csv.Error as exc:
        raise ParseError(lineno, f"malformed keyword line: {exc}")
    parts = [p.strip() for p in parts]
    name = " ".join(parts[0].upper().split())
    opts = {}
    for p in parts[1:]:
        if not p:
            continue
        if "=" in p:
            k, v = p.split("=", 1)
            key = " ".join(k.upper().split())
            v = v.strip()
            if len(v) >= 2 and v[0] == v[-1] == '"':
                v = v[1:-1]
            opts[key] = v
        else:
            opts[" ".join(p.upper().split())] = None
    return name, opts


def _fields(line):
    """Comma-split a data line, returning (token, column) pairs."""
    out = []
    col = 1
    for tok in line.split(","):
        stripped = tok.strip()
        lead = len(tok) - len(tok.lstrip())
        out.append((stripped, col + lead))
        col += len(tok) + 1
    return out


def _int(tok, col, lineno, what):
    if not _INT_RE.match(tok):
        raise ParseError(lineno, f"{what}: expected an integer, got {tok!r}", col)
    return int(tok)


def _float(tok, col, lineno, what):
    if not _FLOAT_RE.match(tok):
        raise ParseError(lineno, f"{what}: expected a number, got {tok!r}", col)
    return float(tok)


# --- parsing ----------------------------------------------------------------

_ROW_FIELDS = ("kfinv", "kf0", "kf1", "kf2", "w0", "w1", "w2")


def _parse_neuron(line, lineno):
    fs = _fields(line)
    if len(fs) != 7:
        raise ParseError(lineno, f"UNIVERSAL_TAB row needs 7 fields, got {len(fs)}")
    ints = [_int(t, c, lineno, n) for (t, c), n in zip(fs[:4], _ROW_FIELDS[:4])]
    floats = [_float(t, c, lineno, n) for (t, c), n in zip(fs[4:], _ROW_FIELDS[4:])]
    kfinv, kf0, kf1, kf2 = ints
    if not (1 <= kfinv <= NBASE or kfinv > MIXED_BASE):
        raise ParseError(lineno, f"kfinv {kfinv} out of range", fs[0][1])
    if kf0 not in (1, 2, 3):
        raise ParseError(lineno, f"kf0 must be 1, 2 or 3, got {kf0}", fs[1][1])
    if kf1 < 1:
        raise ParseError(lineno, f"kf1 must be >= 1, got {kf1}", fs[2][1])
    if kf1 > MAX_POWER:
        raise ParseError(lineno, f"kf1 must be <= {MAX_POWER}, got {kf1}", fs[2][1])
    if kf2 not in (1, 2, 3):
        raise ParseError(lineno, f"kf2 must be 1, 2 or 3, got {kf2}", fs[3][1])
    return NeuronRow(kfinv, kf0, kf1, kf2, *floats)


def _parse_mixed(fs, lineno):
    if len(fs) != NBASE + 1:
        raise ParseError(lineno, f"MIXED_INV row needs {NBASE + 1} fields, got {len(fs)}")
    n = _int(fs[0][0], fs[0][1], lineno, "mixed invariant index")
    if n < 1:
        raise ParseError(lineno, f"mixed invariant index must be positive, got {n}", fs[0][1])
    index = n if n > MIXED_BASE else MIXED_BASE + n
    kappa = [_float(t, c, lineno, f"K{j + 1}") for j, (t, c) in enumerate(fs[1:])]
    return MixedInvariantRow(index, tuple(kappa))


def _check_declaration(name, nparam, decls, lineno):
    if len(decls) != nparam:
        raise ParseError(lineno, f"table type {name} declares {nparam} parameters but lists {len(decls)}")
    layout = _KNOWN_LAYOUTS.get(name)
    if layout is None:
        return
    if nparam != len(layout):
        raise ParseError(lineno, f"table type {name} must have {len(layout)} parameters, got {nparam}")
    for (dl, typ), want in zip(decls, layout):
        if typ != want:
            raise ParseError(dl, f"table type {name}: expected {want} field, got {typ}")


def parse_deck(text: str) -> MaterialSpec:
    """Parse a material deck. Raises ParseError; never returns a partial spec."""
    name = ""
    units = ""
    header = None  # (lineno, type, ndir)
    rows = []  # (lineno, NeuronRow)
    mixed = []  # (lineno, MixedInvariantRow)
    fibers = []  # (lineno, vector)
    declared = {}

    mode = None  # current data-taking block
    decl = None  # [name, nparam, lineno, fields]
    pending = None  # [first lineno, fields] of a wrapped MIXED_INV row

    def close_block():
        nonlocal decl, pending
        if pending is not None:
            raise ParseError(pending[0], "MIXED_INV row ends with a trailing comma but is not continued")
        if decl is not None:
            _check_declaration(decl[0], decl[1], decl[3], decl[2])
            declared[decl[0]] = decl[1]
            decl = None

    for lineno, line, kind in _logical_lines(text):
        if kind == "keyword":
            close_block()
            kw, opts = _split_keyword(line, lineno)
            if kw == "INCLUDE":
                raise ParseError(lineno, "*INCLUDE is not supported; inline the included content")
            if kw == "MATERIAL":
                name = opts.get("NAME") or ""
                units = opts.get("UNITS") or ""
                mode = None
            elif kw == "ANISOTROPIC HYPERELASTIC":
                if header is not None:
                    raise ParseError(lineno, "duplicate *ANISOTROPIC HYPERELASTIC header")
                form = (opts.get("FORMULATION") or "INVARIANT").upper()
                if form != "INVARIANT":
                    raise ParseError(lineno, f"unsupported FORMULATION={form}")
                typ = (opts.get("TYPE") or "INCOMPRESSIBLE").upper()
                if typ not in ("INCOMPRESSIBLE", "COMPRESSIBLE"):
                    raise ParseError(lineno, f"unknown material TYPE={typ}")
                nd = opts.get("LOCAL DIRECTIONS") or "0"
                if not _INT_RE.match(nd) or not 0 <= int(nd) <= 3:
                    raise ParseError(lineno, f"LOCAL DIRECTIONS must be an integer 0..3, got {nd!r}")
                header = (lineno, MaterialType(typ), int(nd))
                mode = None
            elif kw == "PARAMETER TABLE TYPE":
                tname = opts.get("NAME")
                npar = opts.get("PARAMETERS")
                if not tname:
                    raise ParseError(lineno, "*PARAMETER TABLE TYPE needs NAME")
                if npar is None or not _INT_RE.match(npar) or int(npar) < 1:
                    raise ParseError(lineno, f"*PARAMETER TABLE TYPE needs a positive PARAMETERS count, got {npar!r}")
                decl = [tname.upper(), int(npar), lineno, []]
                mode = "declaration"
            elif kw == "PARAMETER TABLE":
                ttype = (opts.get("TYPE") or "").upper()
                if ttype not in _KNOWN_LAYOUTS:
                    raise ParseError(lineno, f"unsupported parameter table TYPE={ttype!r}")
                mode = ttype
            elif kw == "FIBER DIRECTIONS":
                mode = "fibers"
            else:
                raise ParseError(lineno, f"unknown keyword *{kw}")
            continue

        if mode is None:
            raise ParseError(lineno, "data line outside of a data block")
        if mode == "declaration":
            try:
                parts = next(csv.reader([line], skipinitialspace=True))
            except csv.Error as exc:
                raise ParseError(lineno, f"malformed declaration: {exc}")
            typ = parts[0].strip().upper()
            if typ not in ("INTEGER", "FLOAT", "STRING"):
                raise ParseError(lineno, f"unknown parameter type {parts[0].strip()!r}")
            decl[3].append((lineno, typ))
        elif mode == UNIVERSAL_TAB:
            rows.append((lineno, _parse_neuron(line, lineno)))
        elif mode == MIXED_INV:
            cont = line.endswith(",")
            body = line[:-1] if cont else line
            fs = _fields(body)
            if pending is None:
                pending = [lineno, fs]
            else:
                pending[1].extend(fs)
            if cont and len(pending[1]) < NBASE + 1:
                continue
            first, allfs = pending
            pending = None
            mixed.append((first, _parse_mixed(allfs, first)))
        elif mode == "fibers":
            fs = _fields(line)
            if len(fs) != 3:
                raise ParseError(lineno, f"fiber direction needs 3 components, got {len(fs)}")
            v = [_float(t, c, lineno, "fiber component") for t, c in fs]
            if v == [0.0, 0.0, 0.0]:
                raise ParseError(lineno, "fiber direction is the zero vector")
            fibers.append((lineno, v))
    close_block()

    if header is None:
        raise ParseError(1, "missing *ANISOTROPIC HYPERELASTIC header")
    hline, mtype, ndir = header

    seen = {}
    for lineno, m in mixed:
        if m.index in seen:
            raise ParseError(lineno, f"duplicate mixed invariant index {m.index - MIXED_BASE} "
                                     f"(first defined on line {seen[m.index]})")
        seen[m.index] = lineno
    for lineno, r in rows:
        if r.kfinv > MIXED_BASE and r.kfinv not in seen:
            raise ParseError(lineno, f"kfinv {r.kfinv} refers to an undeclared mixed invariant")
        if r.kfinv <= NBASE and r.kfinv >= 4 and SLOT_TABLE[r.kfinv][2] > ndir:
            warnings.warn(f"line {lineno}: slot {r.kfinv} uses a fiber beyond LOCAL DIRECTIONS={ndir}; "
                          "it will contribute nothing", stacklevel=2)
        if r.kfinv == 3 and mtype is MaterialType.INCOMPRESSIBLE:
            warnings.warn(f"line {lineno}: volumetric row in an incompressible material", stacklevel=2)
    if fibers and len(fibers) != ndir:
        raise ParseError(fibers[-1][0], f"{len(fibers)} fiber directions given for LOCAL DIRECTIONS={ndir}")

    fs = FiberSet.from_vectors([_unit(v) for _, v in fibers]) if fibers else None
    table = ParameterTable(mtype, ndir, tuple(r for _, r in rows), tuple(m for _, m in mixed))
    return MaterialSpec(name=name, table=table, fibers=fs, units=units)


def _unit(v):
    n = sum(c * c for c in v) ** 0.5
    # leave vectors that are already unit untouched so written decks round-trip
    if abs(n - 1.0) <= 1e-13:
        return v
    return [c / n for c in v]


# --- writing ----------------------------------------------------------------

def _num(x: float) -> str:
    # shortest repr that round-trips bit-exactly
    s = repr(float(x))
    if s in ("inf", "-inf", "nan"):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    return s


def _label(s):
    if any(c in s for c in ',"\n') or s != s.strip():
        raise ValueError(f"label {s!r} cannot be written to a deck")
    return s


def serialize_deck(spec: MaterialSpec) -> str:
    t = spec.table
    out = []
    if spec.name or spec.units:
        line = "*MATERIAL"
        if spec.name:
            line += f", NAME={_label(spec.name)}"
        if spec.units:
            line += f", UNITS={_label(spec.units)}"
        out.append(line)
    out.append(
        "*ANISOTROPIC HYPERELASTIC, USER, FORMULATION=INVARIANT, "
        f"TYPE={t.material_type.value}, LOCAL DIRECTIONS={t.ndir}"
    )
    if spec.fibers is not None and spec.fibers.ndir:
        out.append("*FIBER DIRECTIONS")
        for v in spec.fibers.n0:
            out.append(",".join(_num(c) for c in v))
    if t.mixed:
        out.append('*PARAMETER TABLE, TYPE="MIXED_INV"')
        for m in t.mixed:
            out.append(",".join([str(m.index - MIXED_BASE)] + [_num(k) for k in m.kappa]))
    out.append('*PARAMETER TABLE, TYPE="UNIVERSAL_TAB"')
    for r in t.rows:
        out.append(f"{r.kfinv},{r.kf0},{r.kf1},{r.kf2},{_num(r.w0)},{_num(r.w1)},{_num(r.w2)}")
    return "\n".join(out) + "\n"
