"""The worked transformations as machine-readable fixtures, plus the
verification procedures tying every recorded fact back to a computation.

Each fixture file under fixtures/ holds verbatim transcriptions of the
equation blocks for one item together with `expect` lines carrying the
recorded facts and their source anchors.  `run_item` executes the item's
scripted checks and emits a VerificationReport; any mismatch fails the
run.  Facts verified over GF(p) are reported as probabilistic matches with
the prime and seed; exact-field runs report plain matches.
"""

from __future__ import annotations

import hashlib
import random
import re
import time
from dataclasses import dataclass, field as dc_field
from importlib import resources
from itertools import combinations
from pathlib import Path

from ..errors import InfeasibleError, NotGenericallyFiniteError, ParseError
from ..fields import GF, QQ_FIELD, field_from_spec
from ..groebner import Ideal, ideal_equal, normal_form, saturate_irrelevant
from ..hilbert import (
    dim_degree_genus,
    graded_piece_dim,
    hilbert_poly_to_str,
    hilbert_polynomial,
)
from ..linalg import rank_mod
from ..numerology import dims_from, Inadmissible
from ..ratmap import (
    RationalMap,
    base_locus,
    codim2_quadric_map,
    find_inverse,
    image_ideal,
    linear_system_dim,
    map_degree_probabilistic,
    project_parameterization,
    restrict_to_hyperplane,
    verify_birational_pair,
)
from ..rings import (
    PolyRing,
    Polynomial,
    content_and_gcd,
    exact_div,
    jacobian,
    poly_from_str,
    poly_to_str,
    substitute,
)
from ..varieties import (
    quadric_rank,
    secant_is_hypersurface_of_degree,
    singular_locus_dim,
)

import numpy as np


@dataclass
class Fact:
    key: str
    status: str  # match | mismatch | skipped | probabilistic-match
    expected: str = ""
    got: str = ""
    anchor: str = ""
    note: str = ""
    seconds: float = 0.0

    def as_dict(self):
        return {
            "key": self.key, "status": self.status, "expected": self.expected,
            "got": self.got, "anchor": self.anchor, "note": self.note,
            "seconds": round(self.seconds, 3),
        }


@dataclass
class VerificationReport:
    item: str
    field: str
    seed: int
    facts: list = dc_field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(f.status != "mismatch" for f in self.facts)

    def as_dict(self):
        return {
            "item": self.item, "field": self.field, "seed": self.seed,
            "ok": self.ok, "seconds": round(self.seconds, 3),
            "facts": [f.as_dict() for f in self.facts],
        }


# ---------------------------------------------------------------------------
# fixtures


@dataclass
class Fixture:
    name: str
    tier: str
    field_spec: str
    rings: dict
    maps: dict        # name -> (src_ring_name, tgt_ring_name, list of form strings)
    form_lists: dict  # name -> (ring_name, list of form strings)
    points: dict
    expects: dict     # key -> (value string, anchor)
    raw: str = ""


_EXPECT_RE = re.compile(r"expect\s+(\w+)\s*=\s*(.+?)\s*(?:#\s*(?:anchor|derived):\s*(.*))?$")


def parse_fixture(text: str) -> Fixture:
    name = tier = None
    field_spec = "qq"
    rings: dict = {}
    maps: dict = {}
    form_lists: dict = {}
    points: dict = {}
    expects: dict = {}
    lines = iter(text.splitlines())

    def read_bracket_list(first_line):
        buf = first_line
        while buf.count("[") > buf.count("]"):
            buf += " " + next(lines)
        inner = buf[buf.index("[") + 1 : buf.rindex("]")]
        return [s.strip() for s in inner.split(",") if s.strip()]

    for line in lines:
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            continue
        if stripped.startswith("item "):
            name = stripped.split()[1]
        elif stripped.startswith("tier "):
            tier = stripped.split()[1]
        elif stripped.startswith("field "):
            field_spec = stripped.split()[1]
        elif stripped.startswith("ring "):
            m = re.match(r"ring\s+(\w+)\s*=\s*(.+)$", stripped)
            rings[m.group(1)] = m.group(2).split()
        elif stripped.startswith("map "):
            m = re.match(r"map\s+(\w+)\s*:\s*(\w+)\s*->\s*(\w+)\s*=\s*(.*)$", stripped)
            maps[m.group(1)] = (m.group(2), m.group(3), read_bracket_list(m.group(4)))
        elif stripped.startswith("forms ") or stripped.startswith("ideal "):
            m = re.match(r"(?:forms|ideal)\s+(\w+)\s+in\s+(\w+)\s*=\s*(.*)$", stripped)
            form_lists[m.group(1)] = (m.group(2), read_bracket_list(m.group(3)))
        elif stripped.startswith("point "):
            m = re.match(r"point\s+(\w+)\s*=\s*\[(.*)\]\s*$", stripped)
            points[m.group(1)] = [int(v) for v in m.group(2).split(",")]
        elif stripped.startswith("expect "):
            m = _EXPECT_RE.match(stripped)
            if not m:
                raise ParseError(f"bad expect line: {stripped!r}")
            val = m.group(2).strip().strip('"')
            anchor = (m.group(3) or "").strip().strip('"')
            expects[m.group(1)] = (val, anchor)
        else:
            raise ParseError(f"unrecognized fixture line: {stripped!r}")
    return Fixture(name or "input", tier or "light", field_spec, rings, maps,
                   form_lists, points, expects, raw=text)


def _fixture_dir() -> Path:
    return Path(__file__).parent / "fixtures"


def load_fixture(name: str, override_dir=None) -> Fixture:
    base = Path(override_dir) if override_dir else _fixture_dir()
    path = base / f"{name}.qbt"
    if not path.exists():
        raise FileNotFoundError(f"no fixture for item {name!r} in {base}")
    return parse_fixture(path.read_text())


def list_items(override_dir=None):
    base = Path(override_dir) if override_dir else _fixture_dir()
    return sorted(p.stem for p in base.glob("*.qbt"))


def fixture_checksums(override_dir=None):
    base = Path(override_dir) if override_dir else _fixture_dir()
    out = {}
    for p in sorted(base.glob("*.qbt")):
        out[p.name] = hashlib.sha256(p.read_bytes()).hexdigest()
    return out


class FixtureContext:
    """Materialized fixture objects over a chosen coefficient field."""

    def __init__(self, fx: Fixture, field):
        self.fx = fx
        self.field = field
        self.rings = {nm: PolyRing(names, field=field) for nm, names in fx.rings.items()}
        self.maps = {}
        for nm, (src, tgt, forms) in fx.maps.items():
            R, S = self.rings[src], self.rings[tgt]
            self.maps[nm] = RationalMap(R, S, [poly_from_str(R, s) for s in forms])
        self.form_lists = {}
        for nm, (ring, forms) in fx.form_lists.items():
            R = self.rings[ring]
            self.form_lists[nm] = [poly_from_str(R, s) for s in forms]
        self.points = dict(fx.points)
        self.expects = dict(fx.expects)


# ---------------------------------------------------------------------------
# Severi Cremona constructions


def _pfaffian(entries, idx, ring):
    """Pfaffian of the antisymmetric matrix with upper entries entries[(i,j)],
    restricted to the (even-sized) index tuple idx."""
    if not idx:
        return ring.one()
    i0 = idx[0]
    rest = idx[1:]
    total = ring.zero()
    for k, j in enumerate(rest):
        sub = tuple(t for t in rest if t != j)
        term = entries[(i0, j)] * _pfaffian(entries, sub, ring)
        total = total + term if k % 2 == 0 else total - term
    return total


def build_severi_cremona(kind: str, field=None) -> RationalMap:
    """The classical quadro-quadric Cremona whose base locus is the Veronese
    surface (adjugate of a symmetric 3x3 matrix), the Segre P^2 x P^2
    (adjugate of a 3x3 matrix), or G(1,5) (gradient of the Pfaffian of an
    antisymmetric 6x6 matrix)."""
    field = field or QQ_FIELD
    if kind == "veronese":
        R = PolyRing.make("x", 6, field=field)
        S = PolyRing.make("y", 6, field=field)
        x = R.gens()
        m = [[x[0], x[1], x[2]], [x[1], x[3], x[4]], [x[2], x[4], x[5]]]
        adj = _adjugate3(m)
        # one form per distinct symmetric slot, in the labeling of m
        forms = [adj[0][0], adj[0][1], adj[0][2], adj[1][1], adj[1][2], adj[2][2]]
        return RationalMap(R, S, forms)
    if kind == "segre":
        R = PolyRing.make("x", 9, field=field)
        S = PolyRing.make("y", 9, field=field)
        x = R.gens()
        m = [[x[0], x[1], x[2]], [x[3], x[4], x[5]], [x[6], x[7], x[8]]]
        adj = _adjugate3(m)
        forms = [adj[i][j] for i in range(3) for j in range(3)]
        return RationalMap(R, S, forms)
    if kind == "pfaffian":
        R = PolyRing.make("x", 15, field=field)
        S = PolyRing.make("y", 15, field=field)
        x = R.gens()
        entries = {}
        k = 0
        for i in range(6):
            for j in range(i + 1, 6):
                entries[(i, j)] = x[k]
                k += 1
        pf = _pfaffian(entries, tuple(range(6)), R)
        forms = [pf.diff(i) for i in range(15)]
        return RationalMap(R, S, forms)
    raise ValueError(f"unknown Severi kind {kind!r}")


def _adjugate3(m):
    """Transposed cofactor matrix of a 3x3 polynomial matrix."""
    def c(i, j):
        r = [k for k in range(3) if k != i]
        s = [k for k in range(3) if k != j]
        det = m[r[0]][s[0]] * m[r[1]][s[1]] - m[r[0]][s[1]] * m[r[1]][s[0]]
        return det if (i + j) % 2 == 0 else -det
    return [[c(j, i) for j in range(3)] for i in range(3)]


# ---------------------------------------------------------------------------
# checker helpers


class ItemRun:
    def __init__(self, name: str, field, seed: int, budget: int):
        self.name = name
        self.field = field
        self.seed = seed
        self.budget = budget
        self.facts: list = []
        self.match_status = "match" if field.char == 0 else "probabilistic-match"

    def record(self, key, expected, got, anchor="", note=""):
        t0 = time.time()
        ok = expected == got
        self.facts.append(Fact(
            key, self.match_status if ok else "mismatch",
            str(expected), str(got), anchor, note, time.time() - t0,
        ))

    def check(self, key, expected_str, anchor, fn, note=""):
        t0 = time.time()
        try:
            got = fn()
        except InfeasibleError as e:
            self.facts.append(Fact(key, "skipped", expected_str, "", anchor,
                                   f"{note} {e}".strip(), time.time() - t0))
            return None
        status = self.match_status if str(got) == str(expected_str) else "mismatch"
        self.facts.append(Fact(key, status, str(expected_str), str(got), anchor, note,
                               time.time() - t0))
        return got

    def skip(self, key, expected_str, anchor, reason):
        self.facts.append(Fact(key, "skipped", expected_str, "", anchor, reason))


def _monic_str(p: Polynomial) -> str:
    return poly_to_str(p.monic())


def _poly_answer(computed: Polynomial, expected_str: str, ring: PolyRing) -> str:
    """Report the expected string when computed equals it up to scalar,
    else the canonical form of what came out."""
    want = poly_from_str(ring, expected_str)
    if want and computed and want.monic() == computed.monic():
        return expected_str
    return poly_to_str(computed)


def _image_as_monic(phi: RationalMap, budget, seed) -> Polynomial:
    img = image_ideal(phi, budget=budget, seed=seed)
    if len(img.gens) != 1:
        raise AssertionError(f"expected a hypersurface image, got {len(img.gens)} generators")
    return img.gens[0].monic()


def _span_equal(forms_a, forms_b) -> bool:
    ring = forms_a[0].ring
    support = sorted({m for f in list(forms_a) + list(forms_b) for m, _ in f.terms})
    col = {m: k for k, m in enumerate(support)}
    field = ring.field

    def rank_of(rows_forms, extra=()):
        rows = list(rows_forms) + list(extra)
        if field.char:
            mat = np.zeros((len(rows), len(support)), dtype=np.int64)
            for r, f in enumerate(rows):
                for m, c in f.terms:
                    mat[r, col[m]] = c
            return rank_mod(mat, field.char)
        from ..linalg import rank_qq

        mm = [[0] * len(support) for _ in rows]
        for r, f in enumerate(rows):
            for m, c in f.terms:
                mm[r][col[m]] = c
        return rank_qq(mm)

    ra = rank_of(forms_a)
    rb = rank_of(forms_b)
    rab = rank_of(forms_a, forms_b)
    return ra == rb == rab


def _random_hyperplane(ring: PolyRing, rng) -> Polynomial:
    field = ring.field
    while True:
        coeffs = [rng.randrange(1, field.char) if field.char else rng.randrange(-9, 10)
                  for _ in range(ring.nvars)]
        if any(coeffs):
            d = {}
            for i, c in enumerate(coeffs):
                if field(c) != field.zero:
                    m = [0] * ring.nvars
                    m[i] = 1
                    d[tuple(m)] = field(c)
            return ring.from_dict(d)


def _restrict_many(phi: RationalMap, k: int, rng) -> RationalMap:
    cur = phi
    for _ in range(k):
        cur = restrict_to_hyperplane(cur, _random_hyperplane(cur.source, rng))
    return cur


# ---------------------------------------------------------------------------
# item checkers


def _support_radical_check(I: Ideal, vars_idx) -> bool:
    """V(I) == V(x_i : i in vars_idx) as sets: generators lie in the linear
    ideal, and each x_i is nilpotent mod I (Rabinowitsch membership)."""
    ring = I.ring
    lin = Ideal(ring, [ring.gen(i) for i in vars_idx])
    gb = lin.gb()
    if not all(normal_form(g, gb).is_zero() for g in I.gens):
        return False
    from ..groebner import colon_element_power

    for i in vars_idx:
        # x_i in radical(I)  iff  I : x_i^inf = <1>
        sat = colon_element_power(I, ring.gen(i))
        if not sat.is_one():
            return False
    return True


def _check_example_4_3(run: ItemRun, ctx: FixtureContext):
    psi = ctx.maps["psi"]
    exp = ctx.expects
    t0 = time.time()
    img = _image_as_monic(psi, run.budget, run.seed)
    run.check("image", exp["image"][0], exp["image"][1],
              lambda: _poly_answer(img, exp["image"][0], psi.target))
    I_img = Ideal(psi.target, [img])
    cubics = ctx.form_lists["inverse_cubics"]
    run.check("type", exp["type"][0], exp["type"][1],
              lambda: str(verify_birational_pair(psi, cubics, I_img).types).replace(" ", ""))
    B = base_locus(psi, budget=run.budget, seed=run.seed)
    run.check("hilbert_base", exp["hilbert_base"][0], exp["hilbert_base"][1],
              lambda: hilbert_poly_to_str(hilbert_polynomial(B)))
    run.check("h0_quadrics", exp["h0_quadrics"][0], exp["h0_quadrics"][1],
              lambda: graded_piece_dim(B, 2))
    run.check("base_dim_deg_genus", exp["base_dim_deg_genus"][0], exp["base_dim_deg_genus"][1],
              lambda: str(dim_degree_genus(B)))
    Y = saturate_irrelevant(
        Ideal(psi.target, cubics + [img]), budget=run.budget, seed=run.seed)
    run.check("hilbert_inverse_base", exp["hilbert_inverse_base"][0],
              exp["hilbert_inverse_base"][1],
              lambda: hilbert_poly_to_str(hilbert_polynomial(Y)))
    run.check("sing_dim_inverse_base", exp["sing_dim_inverse_base"][0],
              exp["sing_dim_inverse_base"][1],
              lambda: singular_locus_dim(Y, codim=3, budget=run.budget))

    def transition():
        R8 = PolyRing.make("x", 8, field=run.field)
        Q0 = _edge_quadrics(R8)
        b = {k: 0 for k in _edge_b_indices()}
        for k in ("00", "07", "15", "16", "22", "33"):
            b[k] = 1
        Q, Qp = _edge_Q_Qp(R8, b)
        big = RationalMap(R8, PolyRing.make("y", 8, field=run.field), Q0 + [Q, Qp])
        h = R8.gen(7) - R8.gen(0)
        restricted = restrict_to_hyperplane(big, h, new_names=[f"x{i}" for i in range(7)])
        return "span-equal" if _span_equal(list(restricted.forms), list(psi.forms)) else "span-differs"

    run.check("from_4_2_restriction", exp["from_4_2_restriction"][0],
              exp["from_4_2_restriction"][1], transition)


def _edge_quadrics(R8: PolyRing):
    return [poly_from_str(R8, s) for s in (
        "-x1*x4 + x0*x5", "-x2*x4 + x0*x6", "-x3*x4 + x0*x7",
        "-x2*x5 + x1*x6", "-x3*x5 + x1*x7", "-x3*x6 + x2*x7")]


def _edge_b_indices():
    out = []
    zero = {"14", "24", "34", "25", "35", "36"}
    for i in range(4):
        for j in range(i, 8):
            k = f"{i}{j}"
            if k not in zero:
                out.append(k)
    return out


def _edge_Q_Qp(R8: PolyRing, b: dict):
    field = R8.field
    x = R8.gens()

    def mono(i, j):
        return x[i] * x[j]

    Q = R8.zero()
    for k in _edge_b_indices():
        i, j = int(k[0]), int(k[1])
        Q = Q + mono(i, j).scale(field(b[k]))
    # the printed second quadric, a fixed bilinear pattern in the same b's
    terms = [("37", 7, 7), ("27", 6, 7), ("17", 5, 7), ("07", 4, 7), ("33", 3, 7),
             ("26", 6, 6), ("16", 5, 6), ("06", 4, 6), ("23", 3, 6), ("22", 2, 6),
             ("15", 5, 5), ("05", 4, 5), ("13", 3, 5), ("12", 2, 5), ("11", 1, 5),
             ("04", 4, 4), ("03", 3, 4), ("02", 2, 4), ("01", 1, 4), ("00", 0, 4)]
    Qp = R8.zero()
    for k, i, j in terms:
        Qp = Qp + mono(i, j).scale(field(b[k]))
    return Q, Qp


def _check_example_4_2(run: ItemRun, ctx: FixtureContext):
    exp = ctx.expects
    field = run.field
    R8 = PolyRing(ctx.fx.rings["R"], field=field)
    S8 = PolyRing(ctx.fx.rings["S"], field=field)
    Q0 = _edge_quadrics(R8)
    rng = random.Random(run.seed)
    images = []
    fibers = []
    degrees = []
    for trial in range(3):
        b = {k: rng.randrange(1, 100) for k in _edge_b_indices()}
        Q, Qp = _edge_Q_Qp(R8, b)
        psi = RationalMap(R8, S8, Q0 + [Q, Qp])
        img = _image_as_monic(psi, run.budget, run.seed + trial)
        images.append(poly_to_str(img))
        try:
            map_degree_probabilistic(psi, seed=run.seed + trial, budget=run.budget)
            fibers.append("finite")
        except NotGenericallyFiniteError as e:
            fibers.append(str(e).split(":")[0].split()[-1])
        restricted = _restrict_many(psi, 1, rng)
        degrees.append(map_degree_probabilistic(restricted, seed=run.seed + trial,
                                                budget=run.budget))
    run.check("image", exp["image"][0], exp["image"][1],
              lambda: _poly_answer(poly_from_str(S8, images[0]), exp["image"][0], S8)
              if len(set(images)) == 1 else "seeds disagree: " + str(images))
    run.check("image_rank", exp["image_rank"][0], exp["image_rank"][1],
              lambda: quadric_rank(poly_from_str(S8, images[0])))
    run.check("general_fiber_dim", exp["general_fiber_dim"][0], exp["general_fiber_dim"][1],
              lambda: fibers[0] if len(set(fibers)) == 1 else "seeds disagree")
    run.check("restricted_degree", exp["restricted_degree"][0], exp["restricted_degree"][1],
              lambda: degrees[0] if len(set(degrees)) == 1 else "seeds disagree")


def _check_example_4_4(run: ItemRun, ctx: FixtureContext):
    psi = ctx.maps["psi"]
    exp = ctx.expects
    img = _image_as_monic(psi, run.budget, run.seed)
    run.check("image", exp["image"][0], exp["image"][1],
              lambda: _poly_answer(img, exp["image"][0], psi.target))
    run.check("image_rank", exp["image_rank"][0], exp["image_rank"][1],
              lambda: quadric_rank(img))
    rng = random.Random(run.seed)
    restricted = _restrict_many(psi, 7, rng)

    def h0():
        B = base_locus(restricted, budget=run.budget, seed=run.seed)
        return graded_piece_dim(B, 2)

    run.check("restricted_h0", exp["restricted_h0"][0], exp["restricted_h0"][1], h0)

    def type_d():
        good = [d for d in range(2, 7) if not isinstance(dims_from(8, d, 2), Inadmissible)]
        return good[0] if len(good) == 1 else f"ambiguous {good}"

    run.check("restricted_type_d", exp["restricted_type_d"][0], exp["restricted_type_d"][1],
              type_d, note="necessity from the dimension formula")


def _build_v0(Z: PolyRing):
    z = Z.gens()
    u = [z[0] * z[0], z[0] * z[1], z[0] * z[2], z[0] * z[3],
         z[1] * z[1] + z[2] * z[2] + z[3] * z[3]]
    pairs = [(i, j) for i in range(5) for j in range(i, 5)]
    return [u[i] * u[j] for (i, j) in pairs if (i, j) != (0, 4)]


def _check_example_4_5(run: ItemRun, ctx: FixtureContext):
    exp = ctx.expects
    field = run.field
    Z = PolyRing(ctx.fx.rings["Z"], field=field)
    v = _build_v0(Z)
    for key in ("p1", "p2", "p3", "p4", "p5"):
        q = [field(c) for c in ctx.points[key]]
        v, _ = project_parameterization(v, source_point=q)
    printed = ctx.form_lists["v5_printed"]

    run.check("pipeline_matches_printed", exp["pipeline_matches_printed"][0],
              exp["pipeline_matches_printed"][1],
              lambda: "exact" if list(v) == list(printed) else "differs")

    psi = ctx.maps["psi"]
    g = content_and_gcd([f for f in printed if f])
    stripped = [exact_div(f, g) if f else f for f in printed] if g.degree() > 0 else printed
    v5_map = RationalMap(Z, psi.source, stripped)

    def v5_image():
        img = image_ideal(v5_map, method="elim", budget=run.budget, seed=run.seed)
        eq, _ = ideal_equal(img, Ideal(psi.source, list(psi.forms)))
        return "ideal-equal" if eq else "differs"

    run.check("v5_image_is_quadrics", exp["v5_image_is_quadrics"][0],
              exp["v5_image_is_quadrics"][1], v5_image)

    cubic = ctx.form_lists["cubic_printed"][0]
    img = _image_as_monic(psi, run.budget, run.seed)
    run.check("image", "cubic", exp["image"][1],
              lambda: "cubic" if img == cubic.monic() else "differs from printed cubic")
    run.check("sing_dim_image", exp["sing_dim_image"][0], exp["sing_dim_image"][1],
              lambda: singular_locus_dim(Ideal(psi.target, [cubic]), codim=1,
                                         budget=run.budget))
    B = base_locus(psi, budget=run.budget, seed=run.seed)
    run.check("h0_quadrics", exp["h0_quadrics"][0], exp["h0_quadrics"][1],
              lambda: graded_piece_dim(B, 2))
    run.check("base_dim_deg_genus", exp["base_dim_deg_genus"][0],
              exp["base_dim_deg_genus"][1], lambda: str(dim_degree_genus(B)))


def _check_example_4_6(run: ItemRun, ctx: FixtureContext):
    psi = ctx.maps["psi"]
    exp = ctx.expects
    quartic = ctx.form_lists["quartic_printed"][0]
    inverse = ctx.form_lists["inverse_printed"]
    img = _image_as_monic(psi, run.budget, run.seed)
    run.check("image", "quartic", exp["image"][1],
              lambda: "quartic" if img == quartic.monic() else "differs from printed quartic")
    I_img = Ideal(psi.target, [img])
    run.check("type", exp["type"][0], exp["type"][1],
              lambda: str(verify_birational_pair(psi, inverse, I_img).types).replace(" ", ""))

    def inverse_recovered():
        cert = find_inverse(psi, I_img, degree_cap=2, budget=run.budget)
        got = [g.monic() for g in cert.inverse]
        want = [g.monic() for g in inverse]
        return "recovered" if got == want else "differs"

    run.check("inverse_recovered", "recovered", exp["type"][1], inverse_recovered)
    B = base_locus(psi, budget=run.budget, seed=run.seed)
    run.check("base_dim_deg_genus", exp["base_dim_deg_genus"][0],
              exp["base_dim_deg_genus"][1], lambda: str(dim_degree_genus(B)))
    run.check("h0_quadrics", exp["h0_quadrics"][0], exp["h0_quadrics"][1],
              lambda: graded_piece_dim(B, 2))
    run.check("secant_degree", exp["secant_degree"][0], exp["secant_degree"][1],
              lambda: secant_is_hypersurface_of_degree(B, budget=run.budget)[0])
    run.check("sing_dim_image", exp["sing_dim_image"][0], exp["sing_dim_image"][1],
              lambda: singular_locus_dim(Ideal(psi.target, [quartic]), codim=1,
                                         budget=run.budget))


def _check_small_pair_item(run: ItemRun, ctx: FixtureContext):
    """Shared checker for the P^3 / P^4 items: image + rank + type + h0."""
    phi = ctx.maps["phi"]
    exp = ctx.expects
    img = _image_as_monic(phi, run.budget, run.seed)
    run.check("image", exp["image"][0], exp["image"][1],
              lambda: _poly_answer(img, exp["image"][0], phi.target))
    run.check("image_rank", exp["image_rank"][0], exp["image_rank"][1],
              lambda: quadric_rank(img))
    I_img = Ideal(phi.target, [img])
    if "type" in exp:
        run.check("type", exp["type"][0], exp["type"][1],
                  lambda: str(find_inverse(phi, I_img, degree_cap=3,
                                           budget=run.budget).types).replace(" ", ""))
    B = base_locus(phi, budget=run.budget, seed=run.seed)
    if "h0_quadrics" in exp:
        run.check("h0_quadrics", exp["h0_quadrics"][0], exp["h0_quadrics"][1],
                  lambda: graded_piece_dim(B, 2))
    if "hilbert_base" in exp:
        run.check("hilbert_base", exp["hilbert_base"][0], exp["hilbert_base"][1],
                  lambda: hilbert_poly_to_str(hilbert_polynomial(B)))
    if "gcd_is_unit" in exp:
        run.check("gcd_is_unit", exp["gcd_is_unit"][0], exp["gcd_is_unit"][1],
                  lambda: 1 if content_and_gcd(list(phi.forms)).degree() == 0 else 0)
    if "secant_degree" in exp:
        run.check("secant_degree", exp["secant_degree"][0], exp["secant_degree"][1],
                  lambda: secant_is_hypersurface_of_degree(B, budget=run.budget)[0])
    if "jacobian_rank_at_curve_point" in exp:
        def jac_rank():
            rows = jacobian(list(phi.forms))
            pt = [phi.source.field(c) for c in (1, 0, 0, 0, 0)]
            p = run.field.char if run.field.char else 1_073_741_789
            mat = [[int(f.eval(pt)) % p for f in row] for row in rows]
            return rank_mod(np.array(mat, dtype=np.int64), p)
        run.check("jacobian_rank_at_curve_point", exp["jacobian_rank_at_curve_point"][0],
                  exp["jacobian_rank_at_curve_point"][1], jac_rank)


def _check_example_7_5(run: ItemRun, ctx: FixtureContext):
    phi = ctx.maps["phi"]
    exp = ctx.expects
    img = _image_as_monic(phi, run.budget, run.seed)
    run.check("image", exp["image"][0], exp["image"][1],
              lambda: _poly_answer(img, exp["image"][0], phi.target))
    run.check("image_rank", exp["image_rank"][0], exp["image_rank"][1],
              lambda: quadric_rank(img))
    B = base_locus(phi, budget=run.budget, seed=run.seed)
    run.check("hilbert_base", exp["hilbert_base"][0], exp["hilbert_base"][1],
              lambda: hilbert_poly_to_str(hilbert_polynomial(B)))
    run.check("base_support", exp["base_support"][0], exp["base_support"][1],
              lambda: "x0,x1,x2" if _support_radical_check(B, [0, 1, 2]) else "differs")

    def involution():
        # drop the last coordinate (projection from [0,...,0,1]) and compose
        comp = [substitute(f, list(phi.forms)[:5], phi.source) for f in list(phi.forms)[:5]]
        x = phi.source.gens()
        for i, j in combinations(range(5), 2):
            if not (comp[i] * x[j] - comp[j] * x[i]).is_zero():
                return f"fails at ({i},{j})"
        return "cross-product identity"

    run.check("involution", exp["involution"][0], exp["involution"][1], involution)


def _check_type21_family(run: ItemRun, ctx: FixtureContext):
    exp = ctx.expects
    ok_types = True
    ok_ranks = True
    detail = []
    for n in range(3, 9):
        for s in range(1, n):
            phi, img_poly, inverse = codim2_quadric_map(n, s, field=run.field)
            I_img = Ideal(phi.target, [img_poly])
            cert = verify_birational_pair(phi, inverse, I_img)
            if cert.types != (2, 1):
                ok_types = False
                detail.append(f"(n={n},s={s}) type {cert.types}")
            rk_S = quadric_rank(img_poly)
            x = phi.source.gens()
            b = phi.source.zero()
            for i in range(s + 1):
                b = b + x[i] * x[i]
            rk_B = quadric_rank(b)
            if rk_B != rk_S - 2:
                ok_ranks = False
                detail.append(f"(n={n},s={s}) ranks {rk_B} vs {rk_S}")
    run.check("types", exp["types"][0], exp["types"][1],
              lambda: "(2,1)" if ok_types else "; ".join(detail))
    run.check("rank_relation", exp["rank_relation"][0], exp["rank_relation"][1],
              lambda: "rk(B) = rk(S) - 2" if ok_ranks else "; ".join(detail))


def _check_severi(run: ItemRun, ctx: FixtureContext, kind: str):
    exp = ctx.expects
    psi = build_severi_cremona(kind, field=run.field)
    B = base_locus(psi, budget=run.budget, seed=run.seed)
    run.check("base_dim", exp["base_dim"][0], exp["base_dim"][1],
              lambda: dim_degree_genus(B)[0])
    if "base_degree" in exp:
        run.check("base_degree", exp["base_degree"][0], exp["base_degree"][1],
                  lambda: dim_degree_genus(B)[1])
    run.check("h0_quadrics", exp["h0_quadrics"][0], exp["h0_quadrics"][1],
              lambda: graded_piece_dim(B, 2))
    if "base_matches_printed_block" in exp:
        def printed_block():
            R = psi.source
            block = [poly_from_str(R, s) for s in (
                "x5*x7 - x4*x8", "x2*x7 - x1*x8", "x5*x6 - x3*x8", "x4*x6 - x3*x7",
                "x2*x6 - x0*x8", "x1*x6 - x0*x7", "x2*x4 - x1*x5", "x2*x3 - x0*x5",
                "x1*x3 - x0*x4")]
            eq, _ = ideal_equal(B, Ideal(R, block))
            return 1 if eq else 0
        run.check("base_matches_printed_block", exp["base_matches_printed_block"][0],
                  exp["base_matches_printed_block"][1], printed_block)

    def cremona_type():
        # F(F(y)) proportional to y certifies the quadro-quadric involution
        same = [psi.target.from_dict(dict(f.terms)) for f in psi.forms]
        cert = verify_birational_pair(psi, same, Ideal(psi.target, []))
        return str(cert.types).replace(" ", "")

    run.check("cremona_type", exp["cremona_type"][0], exp["cremona_type"][1], cremona_type)

    rng = random.Random(run.seed)
    restricted = _restrict_many(psi, 1, rng)
    if "restricted_image_rank" in exp:
        def r_rank():
            img = _image_as_monic(restricted, run.budget, run.seed)
            return quadric_rank(img)
        run.check("restricted_image_rank", exp["restricted_image_rank"][0],
                  exp["restricted_image_rank"][1], r_rank)
    if "restricted_h0" in exp:
        def r_h0():
            Br = base_locus(restricted, budget=run.budget, seed=run.seed)
            return graded_piece_dim(Br, 2)
        run.check("restricted_h0", exp["restricted_h0"][0], exp["restricted_h0"][1], r_h0)
    if "restricted_type" in exp:
        def r_type():
            img = _image_as_monic(restricted, run.budget, run.seed)
            cert = find_inverse(restricted, Ideal(restricted.target, [img]),
                                degree_cap=2, budget=run.budget)
            return str(cert.types).replace(" ", "")
        run.check("restricted_type", exp["restricted_type"][0], exp["restricted_type"][1],
                  r_type)
    if "restricted_profile" in exp:
        def r_profile():
            Br = base_locus(restricted, budget=run.budget, seed=run.seed)
            r, lam, g = dim_degree_genus(Br)
            dims = dims_from(restricted.n, 2, 2)
            return str((r, dims[1])) if not isinstance(dims, Inadmissible) else "inadmissible"
        run.check("restricted_profile", exp["restricted_profile"][0],
                  exp["restricted_profile"][1], r_profile)
    if "restricted_base_smooth" in exp:
        def r_smooth():
            Br = base_locus(restricted, budget=run.budget, seed=run.seed)
            r, _, _ = dim_degree_genus(Br)
            codim = restricted.n - r
            return 1 if singular_locus_dim(Br, codim=codim, budget=run.budget) == -1 else 0
        run.check("restricted_base_smooth", exp["restricted_base_smooth"][0],
                  exp["restricted_base_smooth"][1], r_smooth)


CHECKERS = {
    "example_4_2": _check_example_4_2,
    "example_4_3": _check_example_4_3,
    "example_4_4": _check_example_4_4,
    "example_4_5": _check_example_4_5,
    "example_4_6": _check_example_4_6,
    "prop_7_2_ii": _check_small_pair_item,
    "prop_7_4_quartic": _check_small_pair_item,
    "prop_7_4_cubic_line": _check_small_pair_item,
    "prop_7_4_conic_lines": _check_small_pair_item,
    "prop_7_4_four_lines": _check_small_pair_item,
    "example_7_5": _check_example_7_5,
    "type21_family": _check_type21_family,
    "severi_veronese": lambda run, ctx: _check_severi(run, ctx, "veronese"),
    "severi_segre": lambda run, ctx: _check_severi(run, ctx, "segre"),
    "severi_pfaffian": lambda run, ctx: _check_severi(run, ctx, "pfaffian"),
}


def run_item(name: str, field=None, seed: int = 0, budget: int = 2_000_000,
             exact: bool = False, override_dir=None) -> VerificationReport:
    """Execute one corpus item's scripted checks against its recorded facts."""
    fx = load_fixture(name, override_dir)
    if field is None:
        field = QQ_FIELD if exact else field_from_spec(fx.field_spec)
    ctx = FixtureContext(fx, field)
    run = ItemRun(name, field, seed, budget)
    checker = CHECKERS.get(name)
    if checker is None:
        raise KeyError(f"no checker registered for item {name!r}")
    t0 = time.time()
    checker(run, ctx)
    # every expect key must have been addressed
    addressed = {f.key for f in run.facts}
    for key, (val, anchor) in fx.expects.items():
        if key not in addressed:
            run.facts.append(Fact(key, "skipped", val, "", anchor, "no check executed"))
    return VerificationReport(name, repr(field), seed, run.facts, time.time() - t0)
