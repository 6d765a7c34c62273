"""Instance files: a line-oriented description of a path category, bundles and modules."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path as FilePath
from typing import Optional

from .exactlin import FieldSpec
from .funmod import FModule, ProjBundle, indecomposable_injective, simple, yoneda_projective
from .pathcat import PathCategory, Quiver, Relation, UnknownVertex, build_path_category

FIXTURE_DIR = FilePath(__file__).parent / "fixtures"

_NAME = r"[A-Za-z0-9_]+"
_ARROW = r"[A-Za-z_][A-Za-z0-9_']*"
_TERM = re.compile(rf"^(?:(-?\d+)\*)?({_ARROW}(?:\.{_ARROW})*)$")


class InstanceSyntaxError(ValueError):
    """Malformed instance text; carries a 1-based line and column."""

    def __init__(self, line: int, col: int, msg: str):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line, self.col, self.msg = line, col, msg


class InstanceSemanticError(ValueError):
    """Well-formed text that names something undeclared or inconsistent."""

    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line, self.msg = line, msg


@dataclass(frozen=True)
class ModuleDef:
    name: str
    dims: tuple[tuple[str, int], ...]
    maps: tuple[tuple[str, tuple[tuple[Fraction, ...], ...]], ...]


@dataclass
class InstanceSpec:
    characteristic: int = 0
    vertices: list[str] = field(default_factory=list)
    arrows: list[tuple[str, str, str]] = field(default_factory=list)
    relations: list[tuple[tuple[int, tuple[str, ...]], ...]] = field(default_factory=list)
    bundles: dict[str, tuple[str, ...]] = field(default_factory=dict)
    modules: dict[str, ModuleDef] = field(default_factory=dict)
    maxlen: Optional[int] = None
    seed: Optional[int] = None
    lines: dict[str, int] = field(default_factory=dict, compare=False)


def _col(raw: str, token: str) -> int:
    i = raw.find(token)
    return i + 1 if i >= 0 else 1


def _parse_scalar(tok: str, ln: int, raw: str) -> Fraction:
    try:
        return Fraction(tok.strip())
    except (ValueError, ZeroDivisionError):
        raise InstanceSyntaxError(ln, _col(raw, tok.strip()), f"bad matrix entry {tok.strip()!r}") from None


def _parse_matrix(text: str, ln: int, raw: str) -> tuple[tuple[Fraction, ...], ...]:
    s = text.replace(" ", "")
    if not (s.startswith("[") and s.endswith("]")):
        raise InstanceSyntaxError(ln, _col(raw, text.strip()), "matrix must look like [[a,b],[c,d]]")
    inner = s[1:-1]
    if inner == "":
        return ()
    if not (inner.startswith("[") and inner.endswith("]")):
        raise InstanceSyntaxError(ln, _col(raw, text.strip()), "matrix rows must be bracketed")
    rows = []
    for r in inner[1:-1].split("],["):
        if "[" in r or "]" in r:
            raise InstanceSyntaxError(ln, _col(raw, r), "unbalanced brackets in matrix")
        rows.append(tuple(_parse_scalar(t, ln, raw) for t in r.split(",")) if r else ())
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise InstanceSyntaxError(ln, _col(raw, text.strip()), "matrix rows have different lengths")
    return tuple(rows)


def _parse_module(body: str, name: str, ln: int, raw: str) -> ModuleDef:
    dims, maps = [], []
    for part in body.split(";"):
        part = part.strip()
        if not part:
            continue
        m = re.fullmatch(rf"dim\s+({_NAME})\s*=\s*(\d+)", part)
        if m:
            dims.append((m.group(1), int(m.group(2))))
            continue
        m = re.fullmatch(rf"map\s+({_ARROW})\s*=\s*(.+)", part, re.S)
        if m:
            maps.append((m.group(1), _parse_matrix(m.group(2), ln, raw)))
            continue
        raise InstanceSyntaxError(ln, _col(raw, part.split()[0]), f"expected 'dim' or 'map' in module {name}")
    return ModuleDef(name, tuple(dims), tuple(maps))


def _logical_lines(text: str):
    """Yield (line number, raw text) with comments removed and module blocks joined."""
    buf, start = None, 0
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if buf is not None:
            buf += " " + line.strip()
            if "}" in line:
                yield start, buf
                buf = None
            continue
        if not line.strip():
            continue
        if line.lstrip().startswith("module") and "{" in line and "}" not in line:
            buf, start = line, i
            continue
        yield i, line
    if buf is not None:
        raise InstanceSyntaxError(start, 1, "module block is not closed with '}'")


def parse_instance(text: str) -> InstanceSpec:
    spec = InstanceSpec()
    seen_field = False
    for ln, raw in _logical_lines(text):
        line = raw.strip()
        kw = line.split()[0]
        col = _col(raw, kw)
        if kw == "field":
            m = re.fullmatch(r"field\s+(Q|F\s+(\d+))", line)
            if not m:
                raise InstanceSyntaxError(ln, col, "expected 'field Q' or 'field F <p>'")
            if seen_field:
                raise InstanceSemanticError(ln, "field declared twice")
            seen_field = True
            spec.characteristic = int(m.group(2)) if m.group(2) else 0
            if spec.characteristic:
                try:
                    FieldSpec.prime(spec.characteristic)
                except ValueError as e:
                    raise InstanceSemanticError(ln, str(e)) from None
        elif kw == "vertex":
            m = re.fullmatch(rf"vertex\s+({_NAME})", line)
            if not m:
                raise InstanceSyntaxError(ln, col, "expected 'vertex <name>'")
            if m.group(1) in spec.vertices:
                raise InstanceSemanticError(ln, f"vertex {m.group(1)} declared twice")
            spec.vertices.append(m.group(1))
        elif kw == "arrow":
            m = re.fullmatch(rf"arrow\s+({_ARROW})\s*:\s*({_NAME})\s*->\s*({_NAME})", line)
            if not m:
                raise InstanceSyntaxError(ln, col, "expected 'arrow <name>: <src> -> <dst>'")
            name, s, t = m.groups()
            for v in (s, t):
                if v not in spec.vertices:
                    raise UnknownVertex(f"line {ln}: unknown vertex {v!r} in arrow {name}")
            if any(a[0] == name for a in spec.arrows):
                raise InstanceSemanticError(ln, f"arrow {name} declared twice")
            spec.arrows.append((name, s, t))
            spec.lines[f"arrow:{name}"] = ln
        elif kw == "relation":
            rest = line[len("relation"):].strip()
            if not rest:
                raise InstanceSyntaxError(ln, col, "relation needs at least one term")
            terms = []
            for tok in rest.split("+"):
                tm = _TERM.match(tok.strip())
                if not tm:
                    raise InstanceSyntaxError(ln, _col(raw, tok.strip() or "+"), f"bad relation term {tok.strip()!r}")
                coef = int(tm.group(1)) if tm.group(1) else 1
                terms.append((coef, tuple(tm.group(2).split("."))))
            spec.relations.append(tuple(terms))
            spec.lines[f"relation:{len(spec.relations) - 1}"] = ln
        elif kw == "bundle":
            m = re.fullmatch(rf"bundle\s+({_NAME})\s*=\s*({_NAME}(?:\s*,\s*{_NAME})*)", line)
            if not m:
                raise InstanceSyntaxError(ln, col, "expected 'bundle <name> = <vertex>[,<vertex>]*'")
            verts = tuple(v.strip() for v in m.group(2).split(","))
            for v in verts:
                if v not in spec.vertices:
                    raise UnknownVertex(f"line {ln}: unknown vertex {v!r} in bundle {m.group(1)}")
            if m.group(1) in spec.bundles:
                raise InstanceSemanticError(ln, f"bundle {m.group(1)} declared twice")
            spec.bundles[m.group(1)] = verts
        elif kw == "module":
            m = re.fullmatch(rf"module\s+({_NAME})\s*\{{(.*)\}}", line, re.S)
            if not m:
                raise InstanceSyntaxError(ln, col, "expected 'module <name> { ... }'")
            name = m.group(1)
            if name in spec.modules:
                raise InstanceSemanticError(ln, f"module {name} declared twice")
            spec.modules[name] = _parse_module(m.group(2), name, ln, raw)
            spec.lines[f"module:{name}"] = ln
        elif kw == "maxlen":
            m = re.fullmatch(r"maxlen\s+(\d+)", line)
            if not m or int(m.group(1)) < 1:
                raise InstanceSyntaxError(ln, col, "expected 'maxlen <n>' with n >= 1")
            spec.maxlen = int(m.group(1))
        elif kw == "seed":
            m = re.fullmatch(r"seed\s+(\d+)", line)
            if not m:
                raise InstanceSyntaxError(ln, col, "expected 'seed <n>'")
            spec.seed = int(m.group(1))
        else:
            raise InstanceSyntaxError(ln, col, f"unknown declaration {kw!r}")
    return spec


def _fmt_scalar(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_instance(spec: InstanceSpec) -> str:
    """Canonical text of an instance; parse_instance inverts it."""
    out = ["field Q" if spec.characteristic == 0 else f"field F {spec.characteristic}"]
    out += [f"vertex {v}" for v in spec.vertices]
    out += [f"arrow {n}: {s} -> {t}" for n, s, t in spec.arrows]
    for rel in spec.relations:
        terms = [("" if c == 1 else f"{c}*") + ".".join(w) for c, w in rel]
        out.append("relation " + " + ".join(terms))
    if spec.maxlen is not None:
        out.append(f"maxlen {spec.maxlen}")
    if spec.seed is not None:
        out.append(f"seed {spec.seed}")
    out += [f"bundle {n} = {','.join(vs)}" for n, vs in spec.bundles.items()]
    for md in spec.modules.values():
        parts = [f"dim {v}={d}" for v, d in md.dims]
        for a, rows in md.maps:
            body = ",".join("[" + ",".join(_fmt_scalar(x) for x in r) + "]" for r in rows)
            parts.append(f"map {a}=[{body}]")
        out.append(f"module {md.name} {{ " + "; ".join(parts) + " }")
    return "\n".join(out) + "\n"


@dataclass
class Instance:
    """A parsed instance with its category built."""

    spec: InstanceSpec
    category: PathCategory
    name: str = "instance"

    @property
    def field(self) -> FieldSpec:
        return self.category.field

    def bundle(self, name: str) -> ProjBundle:
        if name not in self.spec.bundles:
            raise KeyError(f"unknown bundle {name!r}")
        return ProjBundle(self.category, self.spec.bundles[name])

    def module(self, name: str) -> FModule:
        """A declared module, or a builtin S<v>, P<v>, I<v>."""
        C = self.category
        if name in self.spec.modules:
            return _realize_module(self.spec.modules[name], C, self.spec.lines.get(f"module:{name}", 0))
        m = re.fullmatch(rf"([SPI])({_NAME})", name)
        if m and m.group(2) in C.vertices:
            kind, v = m.groups()
            if kind == "S":
                return simple(C, v)
            if kind == "P":
                return yoneda_projective(C, v)
            return indecomposable_injective(C, v)
        raise KeyError(f"unknown module {name!r}")


def _realize_module(md: ModuleDef, C: PathCategory, ln: int) -> FModule:
    fs = C.field
    dims = {}
    for v, d in md.dims:
        if v not in C.vertices:
            raise UnknownVertex(f"line {ln}: unknown vertex {v!r} in module {md.name}")
        dims[v] = d
    action = {}
    arrows = {a.name: a for a in C.arrows}
    for a, rows in md.maps:
        if a not in arrows:
            raise InstanceSemanticError(ln, f"unknown arrow {a!r} in module {md.name}")
        shape = (dims.get(arrows[a].target, 0), dims.get(arrows[a].source, 0))
        got = (len(rows), len(rows[0]) if rows else 0)
        if got != shape and not (shape[0] * shape[1] == 0 and got[0] * got[1] == 0):
            raise InstanceSemanticError(ln, f"map {a} in module {md.name} has shape {got}, expected {shape}")
        m = fs.zeros(*shape)
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                m[i, j] = fs.scalar(x)
        action[a] = m
    return FModule(C, dims, action, check=True)


def build_instance(spec: InstanceSpec, name: str = "instance") -> Instance:
    fs = FieldSpec.rationals() if spec.characteristic == 0 else FieldSpec.prime(spec.characteristic)
    q = Quiver.from_lists(spec.vertices, spec.arrows)
    rels = [Relation(tuple((c, w) for c, w in rel)) for rel in spec.relations]
    max_len = spec.maxlen if spec.maxlen is not None else max(len(spec.vertices), 1)
    C = build_path_category(q, rels, fs, max_len=max_len)
    return Instance(spec, C, name)


def resolve_instance_path(path: str) -> FilePath:
    """The file itself if it exists, otherwise a shipped fixture of that name."""
    p = FilePath(path)
    if p.exists():
        return p
    for cand in (FIXTURE_DIR / p.name, FIXTURE_DIR / f"{p.name}.cat"):
        if cand.exists():
            return cand
    raise FileNotFoundError(f"no instance file {path!r}")


def load_instance(path: str) -> Instance:
    p = resolve_instance_path(path)
    return build_instance(parse_instance(p.read_text()), p.name)


def fixture_names() -> list[str]:
    return sorted(p.name for p in FIXTURE_DIR.glob("*.cat"))
