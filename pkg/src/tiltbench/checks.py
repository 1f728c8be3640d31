"""The verification suite: one checker per statement, emitting certificates.

Every check row is a finite procedure over an instance (algebra, n, add(M))
bounded by explicit caps.  A row returns pass with evidence counts, fail
with a concrete witness that re-triggers the violation, or skipped with the
name of the unmet hypothesis.  Re-running a row reproduces the identical
report except for the timing field, and the certificate for a whole run is
plain JSON-ready data.

Cap policy: the kernel characterizations sweep the full (mult_cap, max_dim)
population of pairs; the quadratic fullness/objectivity loops and the
denseness round-trips run over the indecomposable classes plus sums capped
at multiplicity one and total dimension eight, which keeps the suite at
desk scale.  The caps used are recorded in the witnesses.
"""

import hashlib
import time
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import functcat as fc
from . import linalg as la
from . import modcat as mc
from . import morphcat as mo
from .errors import (EnumerationCapExceeded, NotAdmissible,
                     SearchCapExceeded)

SCHEMA_VERSION = 1

_FULLNESS_DIM = 8


@dataclass
class Caps:
    """Bounds for the enumerations inside a check run."""

    max_ind: int = 512
    max_dim: int = 16
    mult_cap: int = 2
    deep_check: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.max_ind <= 0 or self.max_dim <= 0 or self.mult_cap <= 0:
            raise ValueError("caps must be positive")


@dataclass
class CheckReport:
    check_id: str
    instance: str
    status: str  # pass | fail | skipped
    witnesses: dict = field(default_factory=dict)
    timing: float = 0.0

    def to_dict(self):
        return {"check_id": self.check_id, "instance": self.instance,
                "status": self.status, "witnesses": self.witnesses,
                "timing": self.timing}


def algebra_fingerprint(A):
    """Stable hex digest of the algebra's structure constants.

    Two presentations that build the same basis data hash identically no
    matter how the input file was formatted.
    """
    h = hashlib.sha256()
    for part in (str(A.p), str(A.dim), ",".join(A.idempotent_labels)):
        h.update(part.encode())
        h.update(b"|")
    for arr in (A.mult, A.unit.reshape(1, -1), A.idempotent_rows):
        h.update(np.ascontiguousarray(arr % A.p, dtype=np.int64).tobytes())
        h.update(b"|")
    return h.hexdigest()


def generator_names(sub):
    """Canonical names of the generators (enumeration order of mod A)."""
    A = sub.algebra
    indecs = mc.all_indecs(A)
    names, _ = mc.standard_names(A, indecs)
    out = []
    for M in sub.gens:
        for X in indecs:
            if mc.is_isomorphic(M, X) is not None:
                out.append(names[id(X)])
                break
        else:
            out.append(f"dim{M.dim}")
    return out


def _instance_desc(sub):
    gens = ",".join(generator_names(sub))
    return f"{sub.algebra.name or 'algebra'}, n={sub.n}, M=[{gens}]"


def _ct_certified(sub):
    hit = sub.__dict__.get("_ct_cert")
    if hit is None:
        hit = sub.is_n_cluster_tilting()
        sub.__dict__["_ct_cert"] = hit
    return hit


def _kernel_pairs(sub, caps, kind):
    enum = (mo.enumerate_mono_pairs if kind == "mono"
            else mo.enumerate_epi_pairs)
    return enum(sub, mult_cap=caps.mult_cap, dim_cap=caps.max_dim,
                max_count=8 * caps.max_ind, max_indec=caps.max_ind)


def _small_pairs(sub, caps, kind):
    enum = (mo.enumerate_mono_pairs if kind == "mono"
            else mo.enumerate_epi_pairs)
    return enum(sub, mult_cap=1, dim_cap=min(caps.max_dim, _FULLNESS_DIM),
                max_count=8 * caps.max_ind, max_indec=caps.max_ind)


def _fullness(pairs, values, on_morph, p):
    """Rank of the induced map against dim Nat, for every ordered pair.

    Returns (checked, witness-or-None).
    """
    checked = 0
    for i, x in enumerate(pairs):
        for j, y in enumerate(pairs):
            nats = fc.nat_space(values[i], values[j])
            imgs = [on_morph(s, values[i], values[j]).matrix.ravel()
                    for s in mo.pair_hom_basis(x, y)]
            r = la.rank(np.array(imgs, dtype=np.int64), p) if imgs else 0
            if r != len(nats):
                return checked, {"source": x.name, "target": y.name,
                                 "induced_rank": r, "nat_dim": len(nats)}
            checked += 1
    return checked, None


def _stripped(M):
    parts = [S for S, _, _ in mc.decompose(M) if not mc.is_projective(S)]
    return mc.direct_sum(parts) if parts else mc.zero_module(M.algebra)


def _pd_at_most_one(K):
    return mc.is_projective(mc.syzygy(K)[0])


def _id_at_most_one(K):
    return mc.is_injective(mc.cosyzygy(K)[0])


# ---------------------------------------------------------------------------
# the rows


def _chk_yoneda_equiv(sub, caps):
    A = sub.algebra
    aus = fc.auslander_algebra(sub, "plain")
    small = [X for X in mc.all_indecs(A, caps.max_ind)
             if sub.proper_dimension(X, cap=1) is not None]
    pairs = 0
    for X in small:
        for Y in small:
            lhs = mc.hom_dim(X, Y)
            rhs = len(mc.hom_basis(fc.eval_module(aus, X, "contra"),
                                   fc.eval_module(aus, Y, "contra")))
            if lhs != rhs:
                return "fail", {"X": X.name or f"dim{X.dim}",
                                "Y": Y.name or f"dim{Y.dim}",
                                "hom_dim": lhs, "nat_dim": rhs}
            pairs += 1
    dense = 0
    for K in mc.all_indecs(aus.gamma, caps.max_ind):
        if not _pd_at_most_one(K):
            continue
        U, V, g, _, _ = fc._read_presentation(aus, K)
        X, _ = mc.quotient_module(V, g)
        if mc.is_isomorphic(fc.eval_module(aus, X, "contra"), K) is None:
            return "fail", {"functor_dim": K.dim,
                            "round_trip": "restricted-hom mismatch"}
        dense += 1
    return "pass", {"hom_pairs": pairs, "dense_round_trips": dense,
                    "modules": len(small)}


def _chk_upsilon_suite(sub, caps):
    p = sub.algebra.p
    kernel = 0
    for x in _kernel_pairs(sub, caps, "mono"):
        if (mo.upsilon(x).dim == 0) != mo.is_K(x):
            return "fail", {"pair": x.name, "is_K": mo.is_K(x),
                            "upsilon_dim": mo.upsilon(x).dim}
        kernel += 1
    pairs = _small_pairs(sub, caps, "mono")
    vals = [mo.upsilon(q) for q in pairs]
    full, bad = _fullness(pairs, vals, mo.upsilon_on_morphism, p)
    if bad is not None:
        return "fail", bad
    aus = fc.auslander_algebra(sub, "plain")
    dense = 0
    for K in mc.all_indecs(aus.gamma, caps.max_ind):
        if not _pd_at_most_one(K):
            continue
        U, V, g, _, _ = fc._read_presentation(aus, K)
        x = mo.MonoPair(sub, U, V, g)
        if mc.is_isomorphic(mo.upsilon(x).carrier, K) is None:
            return "fail", {"functor_dim": K.dim,
                            "round_trip": "upsilon preimage mismatch"}
        dense += 1
    return "pass", {"kernel_pairs": kernel, "fullness_pairs": full,
                    "dense_round_trips": dense}


def _chk_phi_suite(sub, caps):
    if not mc.is_self_injective(sub.algebra):
        return "skipped", {"hypothesis": "algebra is not self-injective"}
    p = sub.algebra.p
    kernel = 0
    for x in _kernel_pairs(sub, caps, "mono"):
        if (mo.phi(x).dim == 0) != mo.is_U(x):
            return "fail", {"pair": x.name, "is_U": mo.is_U(x),
                            "phi_dim": mo.phi(x).dim}
        kernel += 1
    pairs = _small_pairs(sub, caps, "mono")
    vals = [mo.phi(q) for q in pairs]
    full, bad = _fullness(pairs, vals, mo.phi_on_morphism, p)
    if bad is not None:
        return "fail", bad
    st = fc.auslander_algebra(sub, "stable")
    dense = 0
    for K in mc.all_indecs(st.gamma, caps.max_ind):
        F = fc.FunctorMod(st, "contra", K)
        x = mo.phi_preimage(F)
        if mc.is_isomorphic(mo.phi(x).carrier, K) is None:
            return "fail", {"functor_dim": K.dim,
                            "round_trip": "phi preimage mismatch"}
        dense += 1
    wit = {"kernel_pairs": kernel, "fullness_pairs": full,
           "dense_round_trips": dense}
    if caps.deep_check:
        checked, bad = _objectivity(sub, pairs, vals, p)
        if bad is not None:
            return "fail", bad
        wit["objectivity_pairs"] = checked
    return "pass", wit


def _objectivity(sub, pairs, vals, p):
    """{squares killed by phi} == {squares factoring through U-objects}."""
    u_objs = [q for q in pairs if mo.is_U(q)]
    checked = 0
    for i, x in enumerate(pairs):
        for j, y in enumerate(pairs):
            sqs = mo.pair_hom_basis(x, y)
            if not sqs:
                continue
            flat = np.array([np.concatenate([s.leg1.ravel(),
                                             s.leg2.ravel()])
                             for s in sqs], dtype=np.int64)
            exp = la.LinExpander(flat, p)
            mats = np.array([mo.phi_on_morphism(s, vals[i],
                                                vals[j]).matrix.ravel()
                             for s in sqs], dtype=np.int64)
            killed = la.row_kernel(mats, p)
            thru = []
            for u in u_objs:
                for s in mo.pair_hom_basis(x, u):
                    for t in mo.pair_hom_basis(u, y):
                        c = s.compose(t)
                        v = exp.expand(np.concatenate([c.leg1.ravel(),
                                                       c.leg2.ravel()]))
                        thru.append(v)
            thru = (np.array(thru, dtype=np.int64) if thru
                    else np.zeros((0, len(sqs)), dtype=np.int64))
            rk_k = la.rank(killed, p)
            rk_t = la.rank(thru, p)
            rk_join = la.rank(np.vstack([killed, thru]), p) \
                if killed.size or thru.size else 0
            if not (rk_k == rk_t == rk_join):
                return checked, {"source": x.name, "target": y.name,
                                 "killed_rank": rk_k,
                                 "through_U_rank": rk_t}
            checked += 1
    return checked, None


def _chk_psi_suite(sub, caps):
    p = sub.algebra.p
    kernel = 0
    for x in _kernel_pairs(sub, caps, "mono"):
        split = mo.is_split_mono(x) is not None
        if not (mo.is_V(x) == split == (mo.psi(x).dim == 0)):
            return "fail", {"pair": x.name, "is_V": mo.is_V(x),
                            "split": split, "psi_dim": mo.psi(x).dim}
        kernel += 1
    pairs = _small_pairs(sub, caps, "mono")
    vals = [mo.psi(q) for q in pairs]

    def on_morph(s, Fx, Fy):
        return mo.psi_on_morphism(s, Fx, Fy, deep_check=caps.deep_check)

    full, bad = _fullness(pairs, vals, on_morph, p)
    if bad is not None:
        return "fail", bad
    st = fc.auslander_algebra(sub, "stable")
    dense = 0
    for K in mc.all_indecs(st.gamma, caps.max_ind):
        F = fc.FunctorMod(st, "contra", K)
        x = mo.psi_preimage(F)
        if mc.is_isomorphic(mo.psi(x).carrier, K) is None:
            return "fail", {"functor_dim": K.dim,
                            "round_trip": "psi preimage mismatch"}
        dense += 1
    return "pass", {"kernel_pairs": kernel, "fullness_pairs": full,
                    "dense_round_trips": dense}


def _chk_theta_suite(sub, caps):
    p = sub.algebra.p
    kernel = 0
    for x in _kernel_pairs(sub, caps, "epi"):
        split = mo.is_split_epi(x) is not None
        th0 = mo.theta(x).dim == 0
        pp0 = mo.psi_prime(x).dim == 0
        if not (th0 == mo.is_W(x) and
                mo.is_Vprime(x) == split == pp0):
            return "fail", {"pair": x.name, "is_W": mo.is_W(x),
                            "is_Vprime": mo.is_Vprime(x), "split": split,
                            "theta_dim": mo.theta(x).dim,
                            "psi_prime_dim": mo.psi_prime(x).dim}
        kernel += 1
    pairs = _small_pairs(sub, caps, "epi")
    vals = [mo.theta(q) for q in pairs]
    full, bad = _fullness(pairs, vals, mo.theta_on_morphism, p)
    if bad is not None:
        return "fail", bad
    st = fc.auslander_algebra(sub, "stable")
    dense = 0
    for K in mc.all_indecs(st.gamma, caps.max_ind):
        F = fc.FunctorMod(st, "contra", K)
        x = mo.theta_preimage(F)
        if mc.is_isomorphic(mo.theta(x).carrier, K) is None:
            return "fail", {"functor_dim": K.dim,
                            "round_trip": "theta preimage mismatch"}
        dense += 1
    return "pass", {"kernel_pairs": kernel, "fullness_pairs": full,
                    "dense_round_trips": dense}


def _chk_equiv_chain(sub, caps):
    st = fc.auslander_algebra(sub, "stable")
    co = fc.auslander_algebra(sub, "costable")
    a = sum(not mo.is_V(q) for q in mo.indec_pairs(sub, "mono",
                                                   caps.max_ind))
    b = len(mc.all_indecs(st.gamma, caps.max_ind))
    c = len(mc.all_indecs(co.gamma.opposite(), caps.max_ind))
    d = sum(not mo.is_Vprime(q) for q in mo.indec_pairs(sub, "epi",
                                                        caps.max_ind))
    wit = {"mono_mod_V": a, "stable_functors": b,
           "costable_functors_op": c, "epi_mod_Vprime": d}
    if a == b == c == d:
        return "pass", wit
    return "fail", wit


def _chk_comparison(sub, caps):
    if not mc.is_self_injective(sub.algebra):
        return "skipped", {"hypothesis": "algebra is not self-injective"}
    if not sub.is_nZ():
        return "skipped", {"hypothesis":
                           "add(M) is not closed under n-(co)syzygies"}
    st = fc.auslander_algebra(sub, "stable")
    boundary = 0
    for M in sub.gens:
        if not mc.is_projective(M):
            x = mo.MonoPair(sub, mc.zero_module(sub.algebra), M,
                            np.zeros((0, M.dim), dtype=np.int64))
            F = mo.phi(x)
            Y = fc.yoneda(st, M, "contra")
            if mc.is_isomorphic(F.carrier, Y.carrier) is None:
                return "fail", {"generator": M.name,
                                "claim": "phi(0 -> M) != stable-yoneda(M)"}
            boundary += 1
        if not mc.is_injective(M):
            I, j = mc.injective_envelope(M)
            x = mo.MonoPair(sub, M, I, j)
            cur = M
            for _ in range(sub.n):
                cur = mc.cosyzygy(cur)[0]
            G = mo.psi(x)
            if mc.is_projective(cur):
                ok = G.dim == 0
            else:
                Y = fc.yoneda(st, cur, "contra")
                ok = mc.is_isomorphic(G.carrier, Y.carrier) is not None
            if not ok:
                return "fail", {"generator": M.name,
                                "claim":
                                "psi(M -> I) != stable-yoneda(cosyzygy^n)"}
            boundary += 1
    checked = 0
    for x in _kernel_pairs(sub, caps, "mono"):
        lhs = _stripped(mo.phi(x).carrier)
        cur = mo.psi(x).carrier
        for _ in range(sub.n):
            cur = mc.syzygy(cur)[0]
        rhs = _stripped(cur)
        if mc.is_isomorphic(lhs, rhs) is None:
            return "fail", {"pair": x.name, "phi_stripped_dim": lhs.dim,
                            "syzygy_psi_stripped_dim": rhs.dim}
        checked += 1
    return "pass", {"pairs": checked, "boundary_values": boundary}


def _chk_defect_lemma(sub, caps):
    st = fc.auslander_algebra(sub, "stable")
    co = fc.auslander_algebra(sub, "costable")
    seqs = proj_end = inj_start = 0
    for x in mo.indec_pairs(sub, "mono", caps.max_ind):
        seq = mo._mono_seq(x)
        seqs += 1
        if mc.is_projective(seq.mods[-2]):
            dstar = fc.contravariant_defect(seq)
            dlow = fc.covariant_defect(seq)
            last = seq.mods[-1]
            if last.dim == 0:
                ok = dstar.dim == 0 and dlow.dim == 0
            else:
                y = fc.yoneda(st, last, "contra")
                E = fc.ext_functor(sub, sub.n, last, "co")
                ok = (mc.is_isomorphic(dstar.carrier, y.carrier) is not None
                      and mc.is_isomorphic(dlow.carrier, E.carrier)
                      is not None)
            if not ok:
                return "fail", {"pair": x.name,
                                "claim": "projective-end defect lemma"}
            proj_end += 1
        if mc.is_injective(seq.mods[1]):
            dstar = fc.contravariant_defect(seq)
            dlow = fc.covariant_defect(seq)
            first = seq.mods[0]
            if first.dim == 0:
                ok = dstar.dim == 0 and dlow.dim == 0
            else:
                y = fc.yoneda(co, first, "co")
                E = fc.ext_functor(sub, sub.n, first, "contra")
                ok = (mc.is_isomorphic(dlow.carrier, y.carrier) is not None
                      and mc.is_isomorphic(dstar.carrier, E.carrier)
                      is not None)
            if not ok:
                return "fail", {"pair": x.name,
                                "claim": "injective-start defect lemma"}
            inj_start += 1
    return "pass", {"sequences": seqs, "projective_end": proj_end,
                    "injective_start": inj_start}


def _chk_sigma_defects(sub, caps):
    st = fc.auslander_algebra(sub, "stable")
    swapped = 0
    for x in mo.indec_pairs(sub, "mono", caps.max_ind):
        if mo.is_V(x):
            continue
        seq = mo._mono_seq(x)
        dstar = fc.contravariant_defect(seq)
        dlow = fc.covariant_defect(seq)
        S = mo.sigma(dstar)
        if mc.is_isomorphic(S.carrier, dlow.carrier) is None:
            return "fail", {"pair": x.name,
                            "claim": "sigma(delta*) != delta_*"}
        swapped += 1
    reps = 0
    for X in sub.gens:
        if mc.is_projective(X):
            continue
        S = mo.sigma(fc.yoneda(st, X, "contra"))
        E = fc.ext_functor(sub, sub.n, X, "co")
        if mc.is_isomorphic(S.carrier, E.carrier) is None:
            return "fail", {"generator": X.name,
                            "claim": "sigma(stable-yoneda) != ext-functor"}
        back = mo.sigma_inverse(S)
        Y = fc.yoneda(st, X, "contra")
        if mc.is_isomorphic(back.carrier, Y.carrier) is None:
            return "fail", {"generator": X.name,
                            "claim": "sigma_inverse round trip"}
        reps += 1
    return "pass", {"sequences": swapped, "representables": reps}


def _chk_hilton_rees(sub, caps):
    checked = 0
    for X in sub.gens:
        for Y in sub.gens:
            EX = fc.ext_functor(sub, sub.n, X, "co")
            EY = fc.ext_functor(sub, sub.n, Y, "co")
            lhs = mc.stable_hom(X, Y).dim
            rhs = len(fc.nat_space(EX, EY))
            if lhs != rhs:
                return "fail", {"X": X.name, "Y": Y.name,
                                "stable_hom": lhs, "nat_dim": rhs}
            CX = fc.ext_functor(sub, sub.n, X, "contra")
            CY = fc.ext_functor(sub, sub.n, Y, "contra")
            lhs2 = mc.costable_hom(X, Y).dim
            rhs2 = len(fc.nat_space(CY, CX))
            if lhs2 != rhs2:
                return "fail", {"X": X.name, "Y": Y.name,
                                "costable_hom": lhs2, "nat_dim": rhs2}
            checked += 1
    return "pass", {"generator_pairs": checked}


def _chk_direct_summand(sub, caps):
    mult = min(2, caps.mult_cap)
    targets_co, targets_contra = [], []
    for B in sub.gens:
        E = fc.ext_functor(sub, sub.n, B, "co")
        if E.dim:
            targets_co.append((B.name, E.carrier))
        C = fc.ext_functor(sub, sub.n, B, "contra")
        if C.dim:
            targets_contra.append((B.name, C.carrier))
    checked = 0
    for counts in product(range(mult + 1), repeat=len(sub.gens)):
        if not any(counts):
            continue
        A_mod = sub.sum_module(counts)
        if A_mod.dim > caps.max_dim:
            continue
        for variance, targets in (("co", targets_co),
                                  ("contra", targets_contra)):
            E = fc.ext_functor(sub, sub.n, A_mod, variance)
            if E.dim == 0:
                continue
            for S, _, _ in mc.decompose(E.carrier):
                if not any(mc.is_isomorphic(S, T) is not None
                           for _, T in targets):
                    return "fail", {"argument": list(counts),
                                    "variance": variance,
                                    "summand_dim": S.dim}
            checked += 1
    return "pass", {"arguments": checked,
                    "generator_functors": len(targets_co)}


def _chk_tau_n_thm(sub, caps):
    nonproj = [M for M in sub.gens if not mc.is_projective(M)]
    noninj = [M for M in sub.gens if not mc.is_injective(M)]
    if len(nonproj) != len(noninj):
        return "fail", {"non_projective": len(nonproj),
                        "non_injective": len(noninj)}
    images = []
    for X in nonproj:
        T = mo.tau_n(sub, X, deep_check=True)
        k = sub.gen_index(T)
        if k is None or mc.is_injective(sub.gens[k]):
            return "fail", {"generator": X.name,
                            "claim": "tau_n image is not a non-injective "
                                     "generator"}
        images.append(k)
    if len(set(images)) != len(images):
        return "fail", {"claim": "tau_n is not one-to-one on generators",
                        "images": sorted(images)}
    dims = 0
    for X in nonproj:
        TX = mo.tau_n(sub, X)
        for Y in sub.gens:
            if mc.ext_dim(sub.n, X, Y) != mc.costable_hom(Y, TX).dim:
                return "fail", {"X": X.name, "Y": Y.name,
                                "claim": "ext/costable-hom dimension"}
            dims += 1
    return "pass", {"translated": len(images), "dimension_pairs": dims}


def _chk_proper_dim_counts(sub, caps):
    aus = fc.auslander_algebra(sub, "plain")
    st = fc.auslander_algebra(sub, "stable")
    c0 = len(mc.all_indecs(st.gamma, caps.max_ind))
    plain = mc.all_indecs(aus.gamma, caps.max_ind)
    c1 = sum(1 for K in plain
             if not mc.is_projective(K) and _pd_at_most_one(K))
    op = mc.all_indecs(aus.gamma.opposite(), caps.max_ind)
    c2 = sum(1 for K in op
             if not mc.is_projective(K) and _pd_at_most_one(K))
    c3 = sum(1 for K in plain
             if not mc.is_injective(K) and _id_at_most_one(K))
    wit = {"stable_modules": c0, "pd1_stripped": c1,
           "pd1_stripped_op": c2, "id1_stripped": c3}
    if c0 == c1 == c2 == c3:
        return "pass", wit
    return "fail", wit


def _chk_finite_type(sub, caps):
    st = fc.auslander_algebra(sub, "stable")
    count = len(mc.all_indecs(st.gamma, caps.max_ind))
    return "pass", {"indecomposables": count}


CHECK_TABLE = [
    ("yoneda_equiv", _chk_yoneda_equiv),
    ("upsilon_suite", _chk_upsilon_suite),
    ("phi_suite", _chk_phi_suite),
    ("psi_suite", _chk_psi_suite),
    ("theta_suite", _chk_theta_suite),
    ("equiv_chain", _chk_equiv_chain),
    ("comparison", _chk_comparison),
    ("defect_lemma", _chk_defect_lemma),
    ("sigma_defects", _chk_sigma_defects),
    ("hilton_rees", _chk_hilton_rees),
    ("direct_summand", _chk_direct_summand),
    ("tau_n_thm", _chk_tau_n_thm),
    ("proper_dim_counts", _chk_proper_dim_counts),
    ("finite_type", _chk_finite_type),
]

CHECK_IDS = [cid for cid, _ in CHECK_TABLE]


def run_check(check_id, sub, caps=None):
    """Execute one check row against (algebra, n, add(M))."""
    caps = caps or Caps()
    table = dict(CHECK_TABLE)
    if check_id not in table:
        raise ValueError(f"unknown check id {check_id!r}; "
                         f"known: {', '.join(CHECK_IDS)}")
    t0 = time.perf_counter()
    ok, reason = _ct_certified(sub)
    if not ok:
        return CheckReport(check_id, _instance_desc(sub), "skipped",
                           {"hypothesis":
                            f"M is not n-cluster-tilting: {reason}"},
                           time.perf_counter() - t0)
    try:
        status, witnesses = table[check_id](sub, caps)
    except (EnumerationCapExceeded, SearchCapExceeded) as e:
        status, witnesses = "skipped", {"cap_exceeded": str(e)}
    except NotAdmissible as e:
        status, witnesses = "skipped", {"hypothesis": str(e)}
    return CheckReport(check_id, _instance_desc(sub), status, witnesses,
                       time.perf_counter() - t0)


def run_all(sub, caps=None):
    """Every check row in table order, plus a trailing summary report."""
    caps = caps or Caps()
    reports = [run_check(cid, sub, caps) for cid in CHECK_IDS]
    tally = {"pass": 0, "fail": 0, "skipped": 0}
    for r in reports:
        tally[r.status] += 1
    reports.append(CheckReport(
        "summary", _instance_desc(sub),
        "fail" if tally["fail"] else "pass", tally,
        sum(r.timing for r in reports)))
    return reports


def certificate(sub, reports, caps=None):
    """JSON-ready certificate for a suite run."""
    caps = caps or Caps()
    return {
        "schema_version": SCHEMA_VERSION,
        "field_p": int(sub.algebra.p),
        "algebra_spec_hash": algebra_fingerprint(sub.algebra),
        "n": int(sub.n),
        "generators": generator_names(sub),
        "caps": {"max_ind": caps.max_ind, "max_dim": caps.max_dim,
                 "mult_cap": caps.mult_cap,
                 "deep_check": caps.deep_check, "seed": caps.seed},
        "reports": [r.to_dict() for r in reports],
    }
