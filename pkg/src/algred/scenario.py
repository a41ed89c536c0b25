"""Sectioned text scenario files.

Example::

    [space]
    pairs = p q

    [lie]
    basis = t

    [momentum]
    t = p^2/2
    mu(t) = 0

    [chart]
    dp = q

    [polarization]
    span = q

    [jets]
    supports = 0
    max_order = 3

    [run]
    degree = 3
    seed = 42

Other sections: ``[orbit]`` (optional ``pairs`` plus one momentum line per
basis element), ``[rep H]`` and ``[rep HO]`` (``dim``, ``rho(x) = row; row``
with comma-separated entries, optional ``form``, ``unitary``, ``irreducible``).
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .dual import detect_supports
from .isotypic import IsotypicError, RepData
from .parsing import ExpressionError, parse_poly, parse_scalar
from .poly import Poly
from .quantization import BundleChart, Polarization, QuantizationError
from .reduction import LieAlgebraData, MomentumMap, ReductionError
from .scalars import Scalar
from .symplectic import PhaseSpace, SymplecticError

SECTIONS = ("space", "lie", "momentum", "chart", "polarization", "orbit", "rep H", "rep HO",
            "jets", "run")
_HEADER = re.compile(r"^\[\s*([A-Za-z]+(?:\s+[A-Za-z]+)?)\s*\]$")
_CALL = re.compile(r"^([A-Za-z_]+)\(\s*([^)]*?)\s*\)$")


class ScenarioError(ValueError):
    def __init__(self, msg: str, path: str = "<scenario>", line: int = 0, col: int = 0):
        self.msg, self.path, self.line, self.col = msg, path, line, col
        where = f"{path}:{line}:{col}" if line else path
        super().__init__(f"{where}: {msg}")


@dataclass
class Entry:
    key: str
    value: str
    line: int
    col: int  # 1-based column where the value starts


@dataclass
class Section:
    name: str
    line: int
    entries: List[Entry] = field(default_factory=list)

    def get(self, key: str) -> Optional[Entry]:
        for e in self.entries:
            if e.key == key:
                return e
        return None


@dataclass
class Scenario:
    name: str
    digest: str
    space: PhaseSpace
    lie: LieAlgebraData
    momentum: MomentumMap
    mu: Tuple[Scalar, ...]
    chart: Optional[BundleChart] = None
    polarization: Optional[Polarization] = None
    orbit: Optional[MomentumMap] = None
    rep_H: Optional[RepData] = None
    rep_O: Optional[RepData] = None
    supports: Optional[List[Tuple[Scalar, ...]]] = None
    max_order: int = 3
    actions: List[Poly] = field(default_factory=list)
    degree: int = 3
    seed: int = 0


def split_sections(text: str, path: str) -> Dict[str, Section]:
    sections: Dict[str, Section] = {}
    current: Optional[Section] = None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            m = _HEADER.match(stripped)
            if not m:
                raise ScenarioError("malformed section header", path, n, raw.index("[") + 1)
            name = " ".join(m.group(1).split())
            if name not in SECTIONS:
                raise ScenarioError(f"unknown section [{name}]", path, n, raw.index("[") + 1)
            if name in sections:
                raise ScenarioError(f"duplicate section [{name}]", path, n, raw.index("[") + 1)
            current = sections[name] = Section(name, n)
            continue
        if current is None:
            raise ScenarioError("entry outside of any section", path, n, 1)
        if "=" not in line:
            raise ScenarioError("expected 'key = value'", path, n, len(raw) - len(raw.lstrip()) + 1)
        key, value = line.split("=", 1)
        vcol = len(key) + 2 + (len(value) - len(value.lstrip()))
        key = " ".join(key.split())
        if not key:
            raise ScenarioError("missing key before '='", path, n, 1)
        current.entries.append(Entry(key, value.strip(), n, vcol))
    return sections


class _Builder:
    def __init__(self, text: str, path: str):
        self.path = path
        self.sections = split_sections(text, path)

    def err(self, msg: str, entry: Entry | None = None, section: Section | None = None, col=None):
        if entry is not None:
            raise ScenarioError(msg, self.path, entry.line, col or entry.col)
        if section is not None:
            raise ScenarioError(msg, self.path, section.line, 1)
        raise ScenarioError(msg, self.path)

    def poly(self, e: Entry, vars) -> Poly:
        try:
            return parse_poly(e.value, vars)
        except ExpressionError as x:
            self.err(x.msg, e, col=e.col + x.pos)

    def scalar(self, e: Entry, text: str | None = None, offset: int = 0) -> Scalar:
        text = e.value if text is None else text
        try:
            return parse_scalar(text)
        except ExpressionError as x:
            self.err(x.msg, e, col=e.col + offset + x.pos)

    def integer(self, e: Entry) -> int:
        try:
            v = int(e.value)
        except ValueError:
            self.err(f"expected an integer for '{e.key}'", e)
        if v < 0:
            self.err(f"'{e.key}' must be nonnegative", e)
        return v

    def flag(self, e: Entry) -> bool:
        v = e.value.lower()
        if v not in ("true", "false", "yes", "no", "1", "0"):
            self.err(f"expected true/false for '{e.key}'", e)
        return v in ("true", "yes", "1")

    def matrix(self, e: Entry) -> List[List[Scalar]]:
        rows = []
        offset = 0
        for rtext in e.value.split(";"):
            row = []
            roff = offset
            for ent in rtext.split(","):
                lead = len(ent) - len(ent.lstrip())
                if not ent.strip():
                    self.err("empty matrix entry", e, col=e.col + roff)
                row.append(self.scalar(e, ent.strip(), roff + lead))
                roff += len(ent) + 1
            rows.append(row)
            offset += len(rtext) + 1
        if any(len(r) != len(rows[0]) for r in rows):
            self.err("matrix rows have different lengths", e)
        return rows

    def _pairs(self, e: Entry) -> List[Tuple[str, str]]:
        pairs = []
        for chunk in e.value.split(","):
            names = chunk.split()
            if len(names) != 2:
                self.err("each canonical pair needs exactly two names 'p q'", e)
            pairs.append((names[0], names[1]))
        return pairs

    def space_from(self, sec: Section, optional: bool = False) -> PhaseSpace:
        pe, ce, oe = sec.get("pairs"), sec.get("coords"), sec.get("omega")
        try:
            if pe is not None:
                return PhaseSpace.canonical(self._pairs(pe))
            if ce is not None:
                coords = tuple(ce.value.split())
                if oe is None:
                    self.err("'coords' needs an 'omega' matrix", ce)
                return PhaseSpace(coords, tuple(map(tuple, self.matrix(oe))))
        except SymplecticError as x:
            self.err(str(x), pe or oe or ce)
        if optional:
            return PhaseSpace((), ())
        self.err("phase space needs 'pairs' or 'coords' + 'omega'", section=sec)

    def lie_from(self, momentum: Section) -> LieAlgebraData:
        sec = self.sections.get("lie")
        if sec is None:
            names = [e.key for e in momentum.entries if not _CALL.match(e.key)]
            return LieAlgebraData.abelian(names)
        be = sec.get("basis")
        if be is None:
            self.err("[lie] needs 'basis'", section=sec)
        names = be.value.split()
        if len(set(names)) != len(names) or not names:
            self.err("basis names must be distinct and nonempty", be)
        brackets: Dict[Tuple[str, str], Dict[str, Scalar]] = {}
        for e in sec.entries:
            if e.key == "basis":
                continue
            m = _CALL.match(e.key)
            if not m or m.group(1) != "bracket":
                self.err(f"unknown [lie] key '{e.key}'", e, col=1)
            args = [a.strip() for a in m.group(2).split(",")]
            if len(args) != 2 or any(a not in names for a in args):
                self.err(f"bracket arguments must be two basis names, got '{m.group(2)}'", e, col=1)
            rhs = self.poly(e, names)
            if rhs.degree() > 1 or rhs.constant():
                self.err("bracket must be a linear combination of basis elements", e)
            brackets[(args[0], args[1])] = {n: rhs.coeff(tuple(1 if k == j else 0 for k in range(len(names))))
                                            for j, n in enumerate(names)}
        try:
            return LieAlgebraData.from_brackets(names, brackets)
        except ReductionError as x:
            self.err(str(x), section=sec)

    def momentum_from(self, sec: Section, space: PhaseSpace, lie: LieAlgebraData, what: str):
        comps: Dict[str, Poly] = {}
        mu: Dict[str, Scalar] = {}
        for e in sec.entries:
            if e.key in ("pairs", "coords", "omega"):
                continue
            m = _CALL.match(e.key)
            if m and m.group(1) == "mu":
                if m.group(2) not in lie.names:
                    self.err(f"unknown basis element '{m.group(2)}' in mu(...)", e, col=1)
                mu[m.group(2)] = self.scalar(e)
                continue
            if e.key not in lie.names:
                self.err(f"'{e.key}' is not a Lie algebra basis element", e, col=1)
            comps[e.key] = self.poly(e, space.coords)
        if not comps:
            self.err(f"empty {what} list", section=sec)
        missing = [n for n in lie.names if n not in comps]
        if missing:
            self.err(f"{what} component missing for {', '.join(missing)}", section=sec)
        try:
            J = MomentumMap(space, lie, tuple(comps[n] for n in lie.names))
        except ReductionError as x:
            self.err(str(x), section=sec)
        return J, tuple(mu.get(n, Scalar.of(0)) for n in lie.names)

    def rep_from(self, sec: Section, lie: LieAlgebraData) -> RepData:
        de = sec.get("dim")
        if de is None:
            self.err(f"[{sec.name}] needs 'dim'", section=sec)
        dim = self.integer(de)
        mats: Dict[str, List[List[Scalar]]] = {}
        form = None
        unitary = irreducible = False
        for e in sec.entries:
            if e.key == "dim":
                continue
            if e.key == "form":
                form = self.matrix(e)
            elif e.key == "unitary":
                unitary = self.flag(e)
            elif e.key == "irreducible":
                irreducible = self.flag(e)
            else:
                m = _CALL.match(e.key)
                if not m or m.group(1) != "rho" or m.group(2) not in lie.names:
                    self.err(f"unknown [{sec.name}] key '{e.key}'", e, col=1)
                M = self.matrix(e)
                if len(M) != dim or len(M[0]) != dim:
                    self.err(f"rho({m.group(2)}) must be {dim}x{dim}", e)
                mats[m.group(2)] = M
        missing = [n for n in lie.names if n not in mats]
        if missing:
            self.err(f"generator matrix missing for {', '.join(missing)}", section=sec)
        try:
            return RepData(lie, tuple(mats[n] for n in lie.names), form, unitary, irreducible,
                           sec.name.split()[1])
        except IsotypicError as x:
            self.err(str(x), section=sec)

    def build(self, text: str) -> Scenario:
        S = self.sections
        run = S.get("run")
        degree, seed = 3, 0
        if run:
            for e in run.entries:
                if e.key == "degree":
                    degree = self.integer(e)
                elif e.key == "seed":
                    seed = self.integer(e)
                else:
                    self.err(f"unknown [run] key '{e.key}'", e, col=1)
        if "space" not in S:
            if "rep H" in S:
                space = PhaseSpace((), ())
            else:
                self.err("missing [space] section")
        else:
            space = self.space_from(S["space"])
        mom = S.get("momentum")
        if mom is None:
            if "rep H" not in S:
                self.err("missing [momentum] section")
            lie = self.lie_from(Section("momentum", 0))
            J, mu = None, ()
        else:
            lie = self.lie_from(mom)
            J, mu = self.momentum_from(mom, space, lie, "momentum")
        chart = pol = None
        if "chart" in S:
            sec = S["chart"]
            comps = {}
            for e in sec.entries:
                if not e.key.startswith("d") or e.key[1:] not in space.coords:
                    self.err(f"chart keys are 'd<coordinate>', got '{e.key}'", e, col=1)
                comps[e.key[1:]] = self.poly(e, space.coords)
            try:
                chart = BundleChart.from_components(space, comps)
            except QuantizationError as x:
                self.err(str(x), section=sec)
        if "polarization" in S:
            sec = S["polarization"]
            e = sec.get("span")
            if e is None:
                self.err("[polarization] needs 'span'", section=sec)
            try:
                pol = Polarization.spanned_by(space, e.value.replace(",", " ").split())
            except QuantizationError as x:
                self.err(str(x), e)
        orbit = None
        if "orbit" in S:
            sec = S["orbit"]
            ospace = self.space_from(sec, optional=True)
            orbit, _ = self.momentum_from(sec, ospace, lie, "orbit momentum")
        rep_H = self.rep_from(S["rep H"], lie) if "rep H" in S else None
        rep_O = self.rep_from(S["rep HO"], lie) if "rep HO" in S else None
        if (rep_H is None) != (rep_O is None):
            self.err("isotypic mode needs both [rep H] and [rep HO]")
        supports, max_order, actions = None, 3, []
        if "jets" in S:
            sec = S["jets"]
            trans = pol.transverse if pol else space.coords
            for e in sec.entries:
                if e.key == "supports":
                    if e.value.strip().lower() == "auto":
                        supports = None
                        continue
                    supports = []
                    off = 0
                    for ptext in e.value.split(";"):
                        pt = []
                        poff = off
                        for c in ptext.split(","):
                            lead = len(c) - len(c.lstrip())
                            pt.append(self.scalar(e, c.strip(), poff + lead))
                            poff += len(c) + 1
                        if len(pt) != len(trans):
                            self.err(f"support point needs {len(trans)} coordinates", e)
                        supports.append(tuple(pt))
                        off += len(ptext) + 1
                elif e.key == "max_order":
                    max_order = self.integer(e)
                elif e.key == "actions":
                    off = 0
                    for ktext in e.value.split(";"):
                        lead = len(ktext) - len(ktext.lstrip())
                        try:
                            actions.append(parse_poly(ktext.strip(), space.coords))
                        except ExpressionError as x:
                            self.err(x.msg, e, col=e.col + off + lead + x.pos)
                        off += len(ktext) + 1
                else:
                    self.err(f"unknown [jets] key '{e.key}'", e, col=1)
        return Scenario(
            name=Path(self.path).name,
            digest=hashlib.sha256(text.encode()).hexdigest(),
            space=space, lie=lie, momentum=J, mu=mu, chart=chart, polarization=pol,
            orbit=orbit, rep_H=rep_H, rep_O=rep_O, supports=supports, max_order=max_order,
            actions=actions, degree=degree, seed=seed)


def parse_scenario(text: str, path: str = "<scenario>") -> Scenario:
    return _Builder(text, path).build(text)


def load_scenario(path) -> Scenario:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as x:
        raise ScenarioError(f"cannot read scenario: {x.strerror}", str(path)) from None
    return parse_scenario(text, str(path))


def bundled(name: str) -> Path:
    """Path of a scenario shipped with the package."""
    p = Path(__file__).parent / "scenarios" / f"{name}.scn"
    if not p.exists():
        raise FileNotFoundError(name)
    return p


def resolve_supports(sc: Scenario, Js: List[Poly]):
    if sc.supports is not None:
        return sc.supports
    return detect_supports(Js, sc.polarization.transverse if sc.polarization else sc.space.coords)
