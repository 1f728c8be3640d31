"""Basic finite-dimensional algebras presented by quivers with relations.

A presentation is a finite quiver plus an admissible ideal given by linear
combinations of parallel paths of length >= 2.  ``build_algebra`` turns a
presentation into explicit structure constants over F_p by working with the
span of all paths up to a length cap, growing the cap until some length
stratum dies inside the ideal (which bounds the nilpotency degree), then
rebuilding once more with a cap large enough that every product of surviving
basis paths is still reduced exactly.

Composition is written left to right throughout: ``a*b`` means "a then b",
and the structure tensor satisfies ``mult[i, j] = coordinates of b_i . b_j``.

Algebras produced by other parts of the package (endomorphism algebras,
triangular matrix algebras) use the same ``Algebra`` class, constructed
directly from a multiplication tensor; for those the radical is computed on
demand from the corner algebras at the primitive idempotents.
"""

import hashlib
import re
from itertools import product

import numpy as np

from . import linalg as la
from .errors import NotAdmissible, SearchCapExceeded, SpecFileError

_ARROW_NAME = re.compile(r"[A-Za-z_]\w*$")
_REL_TOKEN = re.compile(r"[A-Za-z_]\w*|\d+|[-+*]")

PATH_COUNT_CAP = 200000
MAX_NILPOTENCY_SEARCH = 32
CORNER_ENUM_CAP = 2 ** 20


class QuiverPresentation:
    """A quiver with relations over F_p.

    vertices: list of vertex names (strings; may be numeric strings).
    arrows:   list of (name, source, target) triples.
    relations: each relation is a list of (coeff, path) terms, where path is
        a tuple of arrow names composed left to right; all terms of one
        relation must be parallel paths of length >= 2.
    """

    def __init__(self, vertices, arrows, relations=(), p=2, name="quiver"):
        self.p = la.check_prime(p)
        self.name = name
        self.vertices = [str(v) for v in vertices]
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex name")
        vset = set(self.vertices)
        self.arrows = []
        seen = set()
        for nm, s, t in arrows:
            nm, s, t = str(nm), str(s), str(t)
            if not _ARROW_NAME.match(nm):
                raise ValueError(f"bad arrow name {nm!r}")
            if nm in seen or nm in vset:
                raise ValueError(f"arrow name {nm!r} reused")
            if s not in vset or t not in vset:
                raise ValueError(f"arrow {nm!r} endpoint not a vertex")
            seen.add(nm)
            self.arrows.append((nm, s, t))
        self._arrow_map = {nm: (s, t) for nm, s, t in self.arrows}
        self.relations = []
        for rel in relations:
            terms = [(int(c) % self.p, tuple(str(a) for a in path))
                     for c, path in rel]
            terms = [(c, path) for c, path in terms if c]
            if not terms:
                continue
            ends = None
            for _, path in terms:
                if len(path) < 2:
                    raise ValueError("relation term shorter than 2 arrows")
                for a in path:
                    if a not in self._arrow_map:
                        raise ValueError(f"unknown arrow {a!r} in relation")
                for a, b in zip(path, path[1:]):
                    if self._arrow_map[a][1] != self._arrow_map[b][0]:
                        raise ValueError(
                            f"non-composable arrows {a!r}*{b!r} in relation")
                e = (self._arrow_map[path[0]][0], self._arrow_map[path[-1]][1])
                if ends is None:
                    ends = e
                elif e != ends:
                    raise ValueError("relation terms are not parallel")
            self.relations.append(terms)

    def canonical_text(self):
        lines = [f"field p={self.p}", "vertices " + " ".join(self.vertices)]
        for nm, s, t in self.arrows:
            lines.append(f"arrow {nm}: {s} -> {t}")
        for rel in self.relations:
            parts = []
            for c, path in rel:
                term = "*".join(path)
                parts.append(term if c == 1 else f"{c} {term}")
            lines.append("relation " + " + ".join(parts))
        return "\n".join(lines) + "\n"

    def spec_hash(self):
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()


def _rel_error(msg, lineno, col):
    raise SpecFileError(msg, line=lineno, col=col)


def _parse_relation(rest, offset, lineno, arrow_map):
    """Parse one relation expression; returns a list of (coeff, path)."""
    tokens = []
    pos = 0
    while pos < len(rest):
        if rest[pos].isspace():
            pos += 1
            continue
        m = _REL_TOKEN.match(rest, pos)
        if not m:
            _rel_error(f"unexpected character {rest[pos]!r} in relation",
                       lineno, offset + pos + 1)
        tokens.append((m.group(), offset + pos + 1))
        pos = m.end()
    if not tokens:
        _rel_error("empty relation", lineno, offset + 1)
    terms = []
    i = 0
    first = True
    while i < len(tokens):
        sign = 1
        tok, col = tokens[i]
        if tok in "+-":
            if first and tok == "+":
                _rel_error("relation may not start with '+'", lineno, col)
            sign = -1 if tok == "-" else 1
            i += 1
        elif not first:
            _rel_error(f"expected '+' or '-' before {tok!r}", lineno, col)
        first = False
        coeff = 1
        if i < len(tokens) and tokens[i][0].isdigit():
            coeff = int(tokens[i][0])
            i += 1
            if i < len(tokens) and tokens[i][0] == "*":
                i += 1
        path = []
        expect_name = True
        while i < len(tokens):
            tok, col = tokens[i]
            if expect_name:
                if not _ARROW_NAME.match(tok):
                    _rel_error(f"expected arrow name, got {tok!r}",
                               lineno, col)
                if tok not in arrow_map:
                    _rel_error(f"unknown arrow {tok!r}", lineno, col)
                path.append(tok)
                expect_name = False
                i += 1
            elif tok == "*":
                expect_name = True
                i += 1
            else:
                break
        if expect_name:
            where = tokens[i - 1][1] if i > 0 else offset + 1
            _rel_error("relation term ends with '*'", lineno, where)
        if not path:
            _rel_error("empty relation term", lineno,
                       tokens[i - 1][1] if i else offset + 1)
        if len(path) < 2:
            _rel_error("relation term must compose at least two arrows",
                       lineno, col)
        for a, b in zip(path, path[1:]):
            if arrow_map[a][1] != arrow_map[b][0]:
                _rel_error(f"arrows {a!r} and {b!r} do not compose",
                           lineno, col)
        terms.append((sign * coeff, tuple(path)))
    ends = {(arrow_map[t[0]][0], arrow_map[t[-1]][1]) for _, t in terms}
    if len(ends) > 1:
        _rel_error("relation terms are not parallel paths", lineno, offset + 1)
    return terms


def parse_spec(text, p=None, name="spec"):
    """Parse the algebra spec file format.

    Recognized lines (blank lines and ``#`` comments are skipped)::

        field p=<prime>
        vertices <v1> <v2> ...
        arrow <name>: <src> -> <tgt>
        relation <term> [+|- <term> ...]    # term = [coeff] a*b*c

    Anything else raises SpecFileError with the line and column.  The ``p``
    argument overrides a ``field`` line.
    """
    vertices = []
    arrows = []
    arrow_map = {}
    relations = []
    field_p = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        head = line.split()[0]
        col0 = line.index(head) + 1
        rest = line[col0 - 1 + len(head):]
        if head == "field":
            m = re.fullmatch(r"\s*p\s*=\s*(\d+)\s*", rest)
            if not m:
                _rel_error("field line must read 'field p=<prime>'",
                           lineno, col0)
            field_p = int(m.group(1))
            if not la.is_prime(field_p):
                _rel_error(f"{field_p} is not prime", lineno,
                           col0 + len(head) + m.start(1))
        elif head == "vertices":
            for m in re.finditer(r"\S+", rest):
                v = m.group()
                if not re.fullmatch(r"\w+", v):
                    _rel_error(f"bad vertex name {v!r}", lineno,
                               col0 + len(head) + m.start())
                if v in vertices:
                    _rel_error(f"duplicate vertex {v!r}", lineno,
                               col0 + len(head) + m.start())
                vertices.append(v)
        elif head == "arrow":
            m = re.fullmatch(
                r"\s*([A-Za-z_]\w*)\s*:\s*(\w+)\s*->\s*(\w+)\s*", rest)
            if not m:
                _rel_error("arrow line must read 'arrow name: src -> tgt'",
                           lineno, col0)
            nm, s, t = m.groups()
            base = col0 + len(head)
            if nm in arrow_map:
                _rel_error(f"duplicate arrow {nm!r}", lineno,
                           base + m.start(1))
            if s not in vertices:
                _rel_error(f"unknown vertex {s!r}", lineno, base + m.start(2))
            if t not in vertices:
                _rel_error(f"unknown vertex {t!r}", lineno, base + m.start(3))
            arrow_map[nm] = (s, t)
            arrows.append((nm, s, t))
        elif head == "relation":
            relations.append(_parse_relation(rest, col0 - 1 + len(head),
                                             lineno, arrow_map))
        else:
            _rel_error(f"unknown section {head!r}", lineno, col0)
    p_eff = p if p is not None else (field_p if field_p is not None else 2)
    try:
        return QuiverPresentation(vertices, arrows, relations, p=p_eff,
                                  name=name)
    except ValueError as exc:  # pragma: no cover - parser should catch first
        raise SpecFileError(str(exc)) from exc


def load_spec(path, p=None):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    name = re.sub(r"\.[^.]*$", "", path.replace("\\", "/").rsplit("/", 1)[-1])
    return parse_spec(text, p=p, name=name)


def _rref_accumulate(rows, p, chunk=512):
    """Row-space basis (rref rows) of a large stack, built incrementally."""
    if rows.shape[0] == 0:
        return rows
    rows = np.unique(rows % p, axis=0)
    basis = np.zeros((0, rows.shape[1]), dtype=np.int64)
    for i in range(0, rows.shape[0], chunk):
        stacked = np.vstack([basis, rows[i:i + chunk]])
        basis = la.row_space(stacked, p)
    return basis


class _Paths:
    """All paths of length <= L in a quiver, canonically ordered."""

    def __init__(self, pres, L, cap=PATH_COUNT_CAP):
        self.vidx = {v: i for i, v in enumerate(pres.vertices)}
        self.aidx = {nm: i for i, (nm, _, _) in enumerate(pres.arrows)}
        arr = [(self.vidx[s], self.vidx[t]) for _, s, t in pres.arrows]
        out = {}
        for i, (s, _) in enumerate(arr):
            out.setdefault(s, []).append(i)
        items = [(v, ()) for v in range(len(pres.vertices))]
        frontier = items[:]
        for _ in range(L):
            nxt = []
            for src, word in frontier:
                end = arr[word[-1]][1] if word else src
                for a in out.get(end, []):
                    nxt.append((src, word + (a,)))
            items.extend(nxt)
            frontier = nxt
            if len(items) > cap:
                raise NotAdmissible(
                    f"more than {cap} paths of length <= {L}; "
                    "the ideal does not look admissible")
            if not frontier:
                break
        items.sort(key=lambda it: (len(it[1]), it[0], it[1]))
        self.items = items
        self.index = {it: i for i, it in enumerate(items)}
        self.n = len(items)
        self.arr = arr
        self.src = np.array([s for s, _ in items], dtype=np.int64)
        self.tgt = np.array(
            [arr[w[-1]][1] if w else s for s, w in items], dtype=np.int64)
        self.length = np.array([len(w) for _, w in items], dtype=np.int64)
        self.names = [nm for nm, _, _ in pres.arrows]

    def label(self, i):
        src, word = self.items[i]
        if not word:
            verts = list(self.vidx)
            return f"e_{verts[src]}"
        return "*".join(self.names[a] for a in word)

    def ideal_rows(self, relations, L, p):
        """Rows spanning {u.r.v : every term of length <= L}."""
        rows = []
        by_tgt = {}
        by_src = {}
        for i, (s, w) in enumerate(self.items):
            by_src.setdefault(self.src[i], []).append(i)
            by_tgt.setdefault(self.tgt[i], []).append(i)
        for terms in relations:
            paths = [(c, tuple(self.aidx[a] for a in word))
                     for c, word in terms]
            longest = max(len(w) for _, w in paths)
            rs = self.arr[paths[0][1][0]][0]
            rt = self.arr[paths[0][1][-1]][1]
            for iu in by_tgt.get(rs, []):
                lu = int(self.length[iu])
                if lu + longest > L:
                    continue
                su, wu = self.items[iu]
                for iv in by_src.get(rt, []):
                    lv = int(self.length[iv])
                    if lu + longest + lv > L:
                        continue
                    _, wv = self.items[iv]
                    row = np.zeros(self.n, dtype=np.int64)
                    for c, w in paths:
                        row[self.index[(su, wu + w + wv)]] += c
                    rows.append(row % p)
        if not rows:
            return np.zeros((0, self.n), dtype=np.int64)
        return np.array(rows, dtype=np.int64)


def build_algebra(pres, verify=True):
    """Structure constants of the path algebra modulo the relations."""
    p = pres.p
    nv = len(pres.vertices)
    if nv == 0:
        z = np.zeros((0, 0, 0), dtype=np.int64)
        return Algebra(p, z, np.zeros(0, dtype=np.int64),
                       np.zeros((0, 0), dtype=np.int64), [], labels=[],
                       name=pres.name, rad_rows=np.zeros((0, 0), np.int64),
                       gen_rows=np.zeros((0, 0), np.int64), pres=pres)
    maxrel = max((len(w) for rel in pres.relations for _, w in rel), default=0)

    L = max(2, maxrel)
    ell0 = None
    while True:
        P = _Paths(pres, L)
        ideal = _rref_accumulate(P.ideal_rows(pres.relations, L, p), p)
        for ell in range(2, L + 1):
            stratum = np.nonzero(P.length == ell)[0]
            if stratum.size == 0:
                ell0 = ell
                break
            inds = np.zeros((stratum.size, P.n), dtype=np.int64)
            inds[np.arange(stratum.size), stratum] = 1
            if not la.reduce_rows(inds, ideal, p).any():
                ell0 = ell
                break
        if ell0 is not None:
            break
        L += 1
        if L > MAX_NILPOTENCY_SEARCH:
            raise NotAdmissible(
                f"no power of the arrow ideal dies by length "
                f"{MAX_NILPOTENCY_SEARCH}; the quotient is not obviously "
                "finite-dimensional")

    # Rebuild with a cap so large that (a) every ideal element supported on
    # short paths is visibly in the generated span and (b) any product of two
    # surviving basis paths is still inside the indexed range.
    Lp = 2 * ell0 + maxrel
    P = _Paths(pres, Lp)
    gen = P.ideal_rows(pres.relations, Lp, p)
    dead = np.nonzero(P.length >= ell0)[0]
    extra = np.zeros((dead.size, P.n), dtype=np.int64)
    extra[np.arange(dead.size), dead] = 1
    ideal = _rref_accumulate(np.vstack([gen, extra]), p)
    rk = ideal.shape[0]

    basis_idx = []
    K = ideal
    for i in range(P.n):
        if P.length[i] >= ell0:
            continue
        ind = np.zeros((1, P.n), dtype=np.int64)
        ind[0, i] = 1
        if la.reduce_rows(ind, K, p).any():
            basis_idx.append(i)
            K = la.row_space(np.vstack([K, ind]), p)
    dim = len(basis_idx)

    sel = np.zeros((dim, P.n), dtype=np.int64)
    sel[np.arange(dim), basis_idx] = 1
    expander = la.LinExpander(np.vstack([ideal, sel]), p)
    coeffs, ok = expander.expand_matrix(np.eye(P.n, dtype=np.int64))
    assert ok.all(), "path outside ideal + basis span"
    red = coeffs[:, rk:]

    mult = np.zeros((dim, dim, dim), dtype=np.int64)
    for a, ia in enumerate(basis_idx):
        sa, wa = P.items[ia]
        ta = P.tgt[ia]
        for b, ib in enumerate(basis_idx):
            sb, wb = P.items[ib]
            if P.src[ib] != ta:
                continue
            mult[a, b] = red[P.index[(sa, wa + wb)]]

    lengths = P.length[basis_idx]
    trivial = np.nonzero(lengths == 0)[0]
    assert trivial.size == nv, "a trivial path fell into the ideal"
    unit = np.zeros(dim, dtype=np.int64)
    unit[trivial] = 1
    idem = np.zeros((nv, dim), dtype=np.int64)
    idem[np.arange(nv), trivial] = 1
    arrow_pos = {}
    for b, ib in enumerate(basis_idx):
        _, word = P.items[ib]
        if len(word) == 1:
            arrow_pos[word[0]] = b
    assert len(arrow_pos) == len(pres.arrows), "an arrow fell into the ideal"
    gen_rows = np.zeros((nv + len(pres.arrows), dim), dtype=np.int64)
    gen_rows[:nv] = idem
    for a in range(len(pres.arrows)):
        gen_rows[nv + a, arrow_pos[a]] = 1
    rad = np.zeros((dim - nv, dim), dtype=np.int64)
    rad[np.arange(dim - nv), np.nonzero(lengths > 0)[0]] = 1

    A = Algebra(
        p, mult, unit, idem, list(pres.vertices),
        labels=[P.label(i) for i in basis_idx], name=pres.name,
        rad_rows=rad, gen_rows=gen_rows, pres=pres,
        path_src=P.src[basis_idx], path_tgt=P.tgt[basis_idx],
        path_len=lengths)
    if verify:
        A.verify()
    return A


class Algebra:
    """A unital associative F_p-algebra given by structure constants.

    mult[i, j] is the coordinate vector of (basis i) * (basis j).  The rows
    of ``idempotent_rows`` must be a complete set of orthogonal primitive
    idempotents (for path algebras: the trivial paths, in vertex order).
    """

    def __init__(self, p, mult, unit, idempotent_rows, idempotent_labels,
                 labels=None, name="", rad_rows=None, gen_rows=None,
                 pres=None, path_src=None, path_tgt=None, path_len=None):
        self.p = p
        self.mult = np.asarray(mult, dtype=np.int64) % p
        self.dim = self.mult.shape[0]
        self.unit = np.asarray(unit, dtype=np.int64) % p
        idem = np.asarray(idempotent_rows, dtype=np.int64)
        if idem.ndim != 2:
            k = idem.size // self.dim if self.dim else 0
            idem = idem.reshape(k, self.dim)
        self.idempotent_rows = idem % p
        self.idempotent_labels = list(idempotent_labels)
        self.labels = list(labels) if labels is not None else \
            [f"b{i}" for i in range(self.dim)]
        self.name = name
        self._rad_rows = rad_rows
        if gen_rows is None:
            gen_rows = np.eye(self.dim, dtype=np.int64)
        self.gen_rows = np.asarray(gen_rows, dtype=np.int64)
        self.pres = pres
        self.path_src = path_src
        self.path_tgt = path_tgt
        self.path_len = path_len
        self._op = None

    def __repr__(self):
        return f"Algebra({self.name or 'anonymous'}, dim={self.dim}, p={self.p})"

    @property
    def n_idempotents(self):
        return self.idempotent_rows.shape[0]

    def e(self, i):
        return self.idempotent_rows[i]

    def multiply(self, x, y):
        return np.einsum("i,j,ijk->k", x % self.p, y % self.p,
                         self.mult) % self.p

    def left_mult(self, a):
        """Matrix of x -> a*x acting on row vectors (x @ L_a)."""
        return np.einsum("j,jik->ik", a % self.p, self.mult) % self.p

    def right_mult(self, a):
        """Matrix of x -> x*a acting on row vectors (x @ R_a)."""
        return np.einsum("j,ijk->ik", a % self.p, self.mult) % self.p

    @property
    def rad_rows(self):
        if self._rad_rows is None:
            self._rad_rows = _generic_radical(self)
        return self._rad_rows

    def opposite(self):
        """The opposite algebra; an involution (op.op is the same object)."""
        if self._op is None:
            op = Algebra(
                self.p, self.mult.transpose(1, 0, 2), self.unit,
                self.idempotent_rows, self.idempotent_labels,
                labels=self.labels, name=self.name + "^op",
                rad_rows=self._rad_rows, gen_rows=self.gen_rows,
                pres=self.pres,
                path_src=self.path_tgt, path_tgt=self.path_src,
                path_len=self.path_len)
            op._op = self
            self._op = op
        return self._op

    def verify(self):
        """Unit, idempotent and associativity sanity checks."""
        p, d = self.p, self.dim
        eye = np.eye(d, dtype=np.int64)
        if d:
            assert np.array_equal(self.left_mult(self.unit), eye)
            assert np.array_equal(self.right_mult(self.unit), eye)
        k = self.n_idempotents
        for i in range(k):
            for j in range(k):
                prod = self.multiply(self.e(i), self.e(j))
                want = self.e(i) if i == j else np.zeros(d, dtype=np.int64)
                assert np.array_equal(prod, want), "idempotents not orthogonal"
        assert np.array_equal(self.idempotent_rows.sum(axis=0) % p, self.unit)
        flat = self.mult.reshape(d, d * d)
        flat2 = self.mult.reshape(d * d, d)
        for i in range(d):
            lhs = (self.mult[i] @ flat) % p          # (b_i b_j) b_k
            rhs = (flat2 @ self.mult[i]) % p         # b_i (b_j b_k)
            assert np.array_equal(lhs.reshape(d, d, d),
                                  rhs.reshape(d, d, d)), \
                "multiplication not associative"
        return True


def _corner_radical(A, corner_rows):
    """Radical of a local corner algebra by exhaustive nilpotency testing."""
    p = A.p
    C = corner_rows
    c = C.shape[0]
    if c == 0:
        return np.zeros((0, A.dim), dtype=np.int64)
    prods = np.einsum("ai,bj,ijk->abk", C, C, A.mult) % p
    exp = la.LinExpander(C, p)
    flat, ok = exp.expand_matrix(prods.reshape(c * c, A.dim))
    assert ok.all(), "corner not closed under multiplication"
    cmult = flat.reshape(c, c, c)
    total = p ** c
    if total > CORNER_ENUM_CAP:
        raise SearchCapExceeded(
            f"corner algebra of dimension {c} over F_{p} is too large "
            "to scan for its radical")
    m = 1
    while 2 ** m < c:
        m += 1
    powers = p ** np.arange(c, dtype=np.int64)
    basis = np.zeros((0, c), dtype=np.int64)
    count = 0
    for start in range(0, total, 1 << 14):
        idx = np.arange(start, min(start + (1 << 14), total), dtype=np.int64)
        X = (idx[:, None] // powers) % p
        Y = X.copy()
        for _ in range(m):
            Y = np.einsum("ni,nj,ijk->nk", Y, Y, cmult) % p
        nil = ~Y.any(axis=1)
        count += int(nil.sum())
        rem = la.reduce_rows(X[nil], basis, p)
        keep = rem.any(axis=1)
        if keep.any():
            basis = la.row_space(np.vstack([basis, rem[keep]]), p)
    assert count == p ** basis.shape[0], "corner is not local"
    return la.mm(p, basis, C)


def _generic_radical(A):
    """rad(A) from the block decomposition at the primitive idempotents.

    Off-diagonal blocks e_i A e_j (i != j) are radical because the
    idempotents are primitive and the corresponding projectives pairwise
    non-isomorphic; diagonal corners are local, so their radical is the set
    of nilpotent elements.
    """
    p = A.p
    k = A.n_idempotents
    Ls = [A.left_mult(A.e(i)) for i in range(k)]
    Rs = [A.right_mult(A.e(i)) for i in range(k)]
    pieces = []
    for i in range(k):
        for j in range(k):
            # image of x -> e_i x e_j, i.e. the row space of L_{e_i} R_{e_j}
            block = la.row_space(la.mm(p, Ls[i], Rs[j]), p)
            if i == j:
                pieces.append(_corner_radical(A, block))
            else:
                pieces.append(block)
    if not pieces:
        return np.zeros((0, A.dim), dtype=np.int64)
    return la.row_space(np.vstack(pieces), p)


def cyclic_nakayama(m, ell, p=2):
    """Presentation of the self-injective Nakayama algebra with m vertices
    and all paths of length ell set to zero (for m = 1: one loop t, t^ell)."""
    if m < 1 or ell < 2:
        raise ValueError("need m >= 1 and ell >= 2")
    vertices = [str(i + 1) for i in range(m)]
    arrows = [(f"a{i + 1}", str(i + 1), str((i + 1) % m + 1))
              for i in range(m)]
    relations = []
    for start in range(m):
        word = tuple(f"a{(start + k) % m + 1}" for k in range(ell))
        relations.append([(1, word)])
    return QuiverPresentation(vertices, arrows, relations, p=p,
                              name=f"nakayama_{m}_{ell}")
