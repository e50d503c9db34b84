"""Line-oriented instance files: parsing into a workspace of validated objects.

The grammar is documented in ``docs/instance_format.md``.  Every declaration
is validated as soon as it is read, and every error carries the line number
of the offending declaration.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import (AlgebraMap, AlgebraPresentation, Bimodule, ground, group_algebra,
                      matrix_algebra, poly_quotient, product_algebra,
                      tensor, upper_triangular, validate_presentation)
from .cohom import CoendCoring, FiniteComatrix
from .comodule import Bicomodule, cotensor, regular_comodule, regular_left, regular_right
from .coring import (Coring, CoringMorphism, check_coring, coalgebra, divided_power_coalgebra,
                     grouplike_coalgebra, matrix_coalgebra, opposite_coring, trivial_coring)
from .equivalence import EquivalenceCertificate
from .graded import (BigradedBimodule, FiniteGroup, GradedAlgebra, GradedInductionData,
                     GradedModule, GSet, graded_coring, hat_bimodule, validate_graded)
from .linalg import QQ, DimensionError, Field, Matrix, parse_field
from .verdict import StructureError

KINDS = ("algebra", "bimodule", "coring", "comodule", "algebra_map", "morphism", "certificate",
         "group", "gset", "graded", "graded_module", "bigraded", "induction")

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_BUILDER = re.compile(rf"^({_NAME})\s+({_NAME})\s*=\s*({_NAME})\s*\((.*)\)\s*$")
_HEADER = re.compile(rf"^({_NAME})\s+({_NAME})((?:\s+{_NAME}=\S+)*)$")
_DATA = re.compile(rf"^({_NAME}(?:\[\d+\])?)\s*:\s*(.*)$")


class InstanceError(ValueError):
    """Syntax, reference or validation error at a given line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class Entry:
    kind: str
    name: str
    obj: object
    line: int


@dataclass
class Workspace:
    field: Field
    source: str = ""
    entries: dict[str, Entry] = field(default_factory=dict)

    def __contains__(self, name):
        return name in self.entries

    def __len__(self):
        return len(self.entries)

    def get(self, name: str, kinds: tuple[str, ...] | str | None = None, line: int | None = None):
        if name not in self.entries:
            raise InstanceError(f"undeclared name {name!r}", line)
        e = self.entries[name]
        if kinds is not None:
            kinds = (kinds,) if isinstance(kinds, str) else kinds
            if e.kind not in kinds:
                raise InstanceError(f"{name!r} is a {e.kind}, expected {' or '.join(kinds)}", line)
        return e.obj

    def names(self, kind: str) -> list[str]:
        return [n for n, e in self.entries.items() if e.kind == kind]

    def last(self, kind: str, count: int = 1) -> list[str]:
        names = self.names(kind)
        if len(names) < count:
            raise InstanceError(f"instance declares {len(names)} {kind} object(s), {count} needed")
        return names[-count:]


# ---------------------------------------------------------------------------
# lexical helpers


def parse_number(tok: str, line: int):
    if not re.fullmatch(r"[+-]?\d+(/[+-]?\d+)?", tok):
        raise InstanceError(f"not an integer or fraction: {tok!r}", line)
    if "/" in tok and int(tok.split("/")[1]) == 0:
        raise InstanceError(f"zero denominator in {tok!r}", line)
    return tok


def parse_matrix(text: str, f: Field, line: int, ncols: int | None = None) -> Matrix:
    """Rows separated by ``;``, entries by whitespace.  ``(empty)`` gives a matrix with no rows."""
    text = text.strip()
    if text in ("(empty)", ""):
        return Matrix.zeros(f, 0, ncols or 0)
    rows = [[parse_number(t, line) for t in r.split()] for r in text.split(";")]
    try:
        return Matrix(f, rows)
    except DimensionError as e:
        raise InstanceError(f"bad matrix: {e}", line) from None


def parse_ints(text: str, line: int, sep: str = ",") -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(sep) if t.strip())
    except ValueError:
        raise InstanceError(f"expected integers separated by {sep!r}: {text!r}", line) from None


def _split_args(text: str) -> list[str]:
    return [a.strip() for a in text.split(",") if a.strip()]


# ---------------------------------------------------------------------------
# the parser


class _Parser:
    def __init__(self, text: str, source: str, field_override: Field | None):
        self.lines = text.splitlines()
        self.ws = Workspace(field_override or QQ, source)
        self.field_fixed = field_override is not None
        self.field_seen = False

    @property
    def f(self) -> Field:
        return self.ws.field

    def run(self) -> Workspace:
        i = 0
        while i < len(self.lines):
            lineno = i + 1
            raw = self.lines[i].split("#", 1)[0].strip()
            i += 1
            if not raw:
                continue
            if raw.startswith("field "):
                self._field(raw[6:], lineno)
                continue
            m = _BUILDER.match(raw)
            if m:
                kind, name, builder, args = m.groups()
                self._declare(kind, name, lineno, lambda: self._build(kind, name, builder,
                                                                      _split_args(args), lineno))
                continue
            colon = raw.endswith(":")
            m = _HEADER.match(raw[:-1].rstrip() if colon else raw)
            if not m:
                raise InstanceError(f"cannot parse {raw!r}", lineno)
            kind, name, attr_text = m.groups()
            attrs = dict(a.split("=", 1) for a in attr_text.split())
            data: dict[str, tuple[str, int]] = {}
            if colon:
                closed = False
                while i < len(self.lines):
                    body = self.lines[i].split("#", 1)[0].strip()
                    i += 1
                    if not body:
                        continue
                    if body == "end":
                        closed = True
                        break
                    dm = _DATA.match(body)
                    if not dm:
                        raise InstanceError(f"expected 'key: value' or 'end', got {body!r}", i)
                    if dm.group(1) in data:
                        raise InstanceError(f"duplicate key {dm.group(1)!r}", i)
                    data[dm.group(1)] = (dm.group(2), i)
                if not closed:
                    raise InstanceError(f"block {name!r} is not closed by 'end'", lineno)
            self._declare(kind, name, lineno, lambda: self._block(kind, name, attrs, data, lineno))
        return self.ws

    def _field(self, text: str, lineno: int):
        if self.field_seen or self.ws.entries:
            raise InstanceError("field must be declared once, before any object", lineno)
        self.field_seen = True
        if self.field_fixed:
            return
        try:
            self.ws.field = parse_field(text)
        except ValueError as e:
            raise InstanceError(str(e), lineno) from None

    def _declare(self, kind: str, name: str, lineno: int, make):
        if kind not in KINDS:
            raise InstanceError(f"unknown declaration kind {kind!r}", lineno)
        if name in self.ws:
            raise InstanceError(f"{name!r} already declared", lineno)
        try:
            obj = make()
            self._validate(kind, obj, lineno)
        except InstanceError:
            raise
        except (StructureError, DimensionError, ValueError, IndexError, TypeError) as e:
            raise InstanceError(f"{kind} {name}: {e}", lineno) from None
        self.ws.entries[name] = Entry(kind, name, obj, lineno)

    def _validate(self, kind: str, obj, lineno: int):
        if kind in ("algebra", "bimodule"):
            v = validate_presentation(obj)
        elif kind == "coring":
            v = check_coring(obj)
        elif kind == "algebra_map":
            v = obj.check()
        elif kind in ("group", "gset", "graded", "graded_module", "bigraded"):
            v = validate_graded(obj)
        else:
            return
        if not v:
            raise InstanceError(f"validation failed: {v.reason}", lineno)

    # -- helpers -----------------------------------------------------
    def _get(self, name, kinds, lineno):
        return self.ws.get(name, kinds, lineno)

    def _int(self, text, lineno):
        try:
            return int(text)
        except ValueError:
            raise InstanceError(f"expected an integer, got {text!r}", lineno) from None

    def _need(self, attrs_or_data: dict, key: str, lineno: int):
        if key not in attrs_or_data:
            raise InstanceError(f"missing {key!r}", lineno)
        return attrs_or_data[key]

    def _mat(self, data, key, lineno, ncols=None):
        text, ln = self._need(data, key, lineno)
        return parse_matrix(text, self.f, ln, ncols)

    def _arity(self, builder, args, n, lineno):
        if len(args) != n:
            raise InstanceError(f"{builder} takes {n} argument(s), got {len(args)}", lineno)

    # -- builder shorthands -------------------------------------------
    def _build(self, kind, name, builder, args, lineno):
        f = self.f
        key = (kind, builder)
        if key == ("algebra", "ground"):
            self._arity(builder, args, 0, lineno)
            return ground(f)
        if key == ("algebra", "matrix"):
            self._arity(builder, args, 1, lineno)
            return _renamed(matrix_algebra(f, self._int(args[0], lineno)), name)
        if key == ("algebra", "upper"):
            self._arity(builder, args, 1, lineno)
            return _renamed(upper_triangular(f, self._int(args[0], lineno)), name)
        if key == ("algebra", "poly"):
            return poly_quotient(f, [parse_number(a, lineno) for a in args], name=name)
        if key == ("algebra", "product"):
            self._arity(builder, args, 2, lineno)
            return _renamed(product_algebra(*(self._get(a, "algebra", lineno) for a in args)), name)
        if key == ("algebra", "group"):
            self._arity(builder, args, 1, lineno)
            g = self._get(args[0], "group", lineno)
            return group_algebra(f, g.table, name=name)
        if key == ("bimodule", "regular"):
            self._arity(builder, args, 1, lineno)
            a = self._get(args[0], "algebra", lineno)
            r = a.regular
            return Bimodule(a, a, r.dim, r.L, r.R, name)
        if key == ("coring", "trivial"):
            self._arity(builder, args, 1, lineno)
            return trivial_coring(self._get(args[0], "algebra", lineno))
        if kind == "coring" and builder in ("matrix", "grouplike", "divided"):
            self._arity(builder, args, 1, lineno)
            n = self._int(args[0], lineno)
            make = {"matrix": matrix_coalgebra, "grouplike": grouplike_coalgebra,
                    "divided": divided_power_coalgebra}[builder]
            return make(f, n)
        if key == ("coring", "opposite"):
            self._arity(builder, args, 1, lineno)
            return opposite_coring(self._get(args[0], "coring", lineno))
        if key == ("coring", "graded"):
            self._arity(builder, args, 2, lineno)
            return graded_coring(self._get(args[0], "graded", lineno), self._get(args[1], "gset", lineno))
        if key == ("coring", "comatrix"):
            self._arity(builder, args, 1, lineno)
            return FiniteComatrix(self._get(args[0], "bimodule", lineno)).coring
        if key == ("coring", "coend"):
            self._arity(builder, args, 1, lineno)
            return CoendCoring(self._get(args[0], "comodule", lineno)).coring
        if kind == "comodule" and builder in ("regular", "regular_right", "regular_left"):
            self._arity(builder, args, 1, lineno)
            c = self._get(args[0], "coring", lineno)
            make = {"regular": regular_comodule, "regular_right": regular_right,
                    "regular_left": regular_left}[builder]
            return make(c)
        if key == ("morphism", "identity"):
            self._arity(builder, args, 1, lineno)
            return CoringMorphism.identity(self._get(args[0], "coring", lineno))
        if key == ("morphism", "counit"):
            self._arity(builder, args, 1, lineno)
            return CoringMorphism.counit(self._get(args[0], "coring", lineno))
        if key == ("group", "cyclic"):
            self._arity(builder, args, 1, lineno)
            return FiniteGroup.cyclic(self._int(args[0], lineno))
        if key == ("group", "trivial"):
            self._arity(builder, args, 0, lineno)
            return FiniteGroup.trivial()
        if kind == "gset" and builder in ("regular", "point"):
            self._arity(builder, args, 1, lineno)
            g = self._get(args[0], "group", lineno)
            return GSet.regular(g) if builder == "regular" else GSet.point(g)
        if key == ("bigraded", "hat"):
            self._arity(builder, args, 2, lineno)
            return hat_bimodule(self._get(args[0], "graded", lineno), self._get(args[1], "gset", lineno))
        raise InstanceError(f"unknown builder {builder!r} for {kind}", lineno)

    # -- explicit blocks ----------------------------------------------
    def _block(self, kind, name, attrs, data, lineno):
        return getattr(self, f"_block_{kind}")(name, attrs, data, lineno)

    def _block_algebra(self, name, attrs, data, lineno):
        n = self._int(self._need(attrs, "dim", lineno), lineno)
        mu = self._mat(data, "mu", lineno)
        unit = self._mat(data, "unit", lineno)
        if unit.nrows != 1:
            raise InstanceError("unit must be a single row", data["unit"][1])
        return AlgebraPresentation(self.f, n, mu, unit.rows[0], name)

    def _block_bimodule(self, name, attrs, data, lineno):
        n = self._int(self._need(attrs, "dim", lineno), lineno)
        left = self._get(attrs.get("left", "k"), "algebra", lineno) if "left" in attrs else ground(self.f)
        right = self._get(attrs["right"], "algebra", lineno) if "right" in attrs else ground(self.f)
        acts = []
        for side, alg in (("left", left), ("right", right)):
            mats = []
            for i in range(alg.dim):
                key = f"{side}[{i}]"
                if key in data:
                    mats.append(self._mat(data, key, lineno, n))
                elif alg.is_ground:
                    mats.append(Matrix.identity(self.f, n))
                else:
                    raise InstanceError(f"missing action matrix {key!r}", lineno)
            acts.append(mats)
        return Bimodule(left, right, n, acts[0], acts[1], name)

    def _block_coring(self, name, attrs, data, lineno):
        base = self._get(attrs["base"], "algebra", lineno) if "base" in attrs else ground(self.f)
        if "module" in attrs:
            mod = self._get(attrs["module"], "bimodule", lineno)
        else:
            n = self._int(self._need(attrs, "dim", lineno), lineno)
            if not base.is_ground:
                raise InstanceError("a coring over a non-ground base needs module=", lineno)
            ident = Matrix.identity(self.f, n)
            mod = Bimodule(base, base, n, (ident,), (ident,), name)
        delta_k = self._mat(data, "delta", lineno)
        eps = self._mat(data, "eps", lineno)
        if base.is_ground and "module" not in attrs:
            return coalgebra(self.f, mod.dim, delta_k, eps, name)
        cc = tensor(mod, mod)
        if delta_k.nrows != mod.dim * mod.dim:
            raise InstanceError(f"delta must have {mod.dim * mod.dim} rows", data["delta"][1])
        return Coring(base, mod, cc.pi @ delta_k, eps, name)

    def _block_comodule(self, name, attrs, data, lineno):
        mod = self._get(self._need(attrs, "module", lineno), "bimodule", lineno)
        right = (self._get(attrs["right"], "coring", lineno) if "right" in attrs
                 else trivial_coring(mod.right))
        left = (self._get(attrs["left"], "coring", lineno) if "left" in attrs
                else trivial_coring(mod.left))
        if mod.left is not left.base or mod.right is not right.base:
            raise InstanceError("module algebras do not match the corings", lineno)
        rho = lam = None
        if "rho" in data:
            rt = tensor(mod, right.bimodule)
            rho = rt.pi @ self._mat(data, "rho", lineno, mod.dim)
        if "lambda" in data:
            lt = tensor(left.bimodule, mod)
            lam = lt.pi @ self._mat(data, "lambda", lineno, mod.dim)
        return Bicomodule(left, right, mod, lam, rho, name)

    def _block_algebra_map(self, name, attrs, data, lineno):
        a = self._get(self._need(attrs, "source", lineno), "algebra", lineno)
        b = self._get(self._need(attrs, "target", lineno), "algebra", lineno)
        return AlgebraMap(a, b, self._mat(data, "matrix", lineno, a.dim))

    def _block_morphism(self, name, attrs, data, lineno):
        c = self._get(self._need(attrs, "source", lineno), "coring", lineno)
        d = self._get(self._need(attrs, "target", lineno), "coring", lineno)
        rho = self._get(attrs["algebra_map"], "algebra_map", lineno) if "algebra_map" in attrs else None
        return CoringMorphism(c, d, self._mat(data, "phi", lineno, c.dim), rho)

    def _block_certificate(self, name, attrs, data, lineno):
        x = self._get(self._need(attrs, "x", lineno), "comodule", lineno)
        lam = self._get(self._need(attrs, "lam", lineno), "comodule", lineno)
        if x.left is not lam.right or x.right is not lam.left:
            raise InstanceError("certificate: coring mismatch between x and lam", lineno)
        xl, lx = cotensor(x, lam), cotensor(lam, x)
        f_k = self._mat(data, "f", lineno, xl.ambient.dim)
        g_k = self._mat(data, "g", lineno, lx.ambient.dim)
        # maps are given on the k-tensor products and restricted to the cotensors
        f = f_k @ xl.ambient.sigma @ xl.inclusion
        g = g_k @ lx.ambient.sigma @ lx.inclusion
        return EquivalenceCertificate(x, lam, f, g)

    def _block_group(self, name, attrs, data, lineno):
        table = self._mat(data, "table", lineno)
        return FiniteGroup([[int(v) for v in r] for r in table.rows], name)

    def _block_gset(self, name, attrs, data, lineno):
        g = self._get(self._need(attrs, "group", lineno), "group", lineno)
        act = self._mat(data, "action", lineno)
        return GSet(g, [[int(v) for v in r] for r in act.rows], name)

    def _block_graded(self, name, attrs, data, lineno):
        a = self._get(self._need(attrs, "algebra", lineno), "algebra", lineno)
        g = self._get(self._need(attrs, "group", lineno), "group", lineno)
        return GradedAlgebra(a, g, parse_ints(self._need(attrs, "degrees", lineno), lineno))

    def _block_graded_module(self, name, attrs, data, lineno):
        m = self._get(self._need(attrs, "module", lineno), "bimodule", lineno)
        ga = self._get(self._need(attrs, "algebra", lineno), "graded", lineno)
        x = self._get(self._need(attrs, "gset", lineno), "gset", lineno)
        return GradedModule(m, ga, x, parse_ints(self._need(attrs, "degrees", lineno), lineno), name)

    def _block_bigraded(self, name, attrs, data, lineno):
        m = self._get(self._need(attrs, "module", lineno), "bimodule", lineno)
        ga = self._get(self._need(attrs, "left", lineno), "graded", lineno)
        gb = self._get(self._need(attrs, "right", lineno), "graded", lineno)
        x = self._get(self._need(attrs, "left_set", lineno), "gset", lineno)
        y = self._get(self._need(attrs, "right_set", lineno), "gset", lineno)
        pairs = []
        for item in self._need(attrs, "bidegrees", lineno).split(","):
            pairs.append(parse_ints(item, lineno, sep=":"))
        return BigradedBimodule(m, ga, gb, x, y, pairs, name)

    def _block_induction(self, name, attrs, data, lineno):
        ga = self._get(self._need(attrs, "source", lineno), "graded", lineno)
        gb = self._get(self._need(attrs, "target", lineno), "graded", lineno)
        x = self._get(self._need(attrs, "source_set", lineno), "gset", lineno)
        y = self._get(self._need(attrs, "target_set", lineno), "gset", lineno)
        gm = parse_ints(self._need(attrs, "group_map", lineno), lineno)
        sm = parse_ints(self._need(attrs, "set_map", lineno), lineno)
        alpha = self._mat(data, "alpha", lineno, ga.algebra.dim)
        return GradedInductionData(ga, gb, x, y, gm, sm, alpha)


def _renamed(a: AlgebraPresentation, name: str) -> AlgebraPresentation:
    a.name = name
    return a


def parse_text(text: str, source: str = "<string>", field: Field | None = None) -> Workspace:
    return _Parser(text, source, field).run()


def parse_instance(path: str | Path, field: Field | None = None) -> Workspace:
    """Read and validate an instance file; ``field`` overrides its ``field`` line."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise InstanceError(f"cannot read {path}: {e.strerror}") from None
    return parse_text(text, str(path), field)
