"""Closed-form numerology of codimension-2 subvarieties and the catalog
of known families with automated consistency auditing.

Surfaces in P^4:   d^2 - 10d - 5 HK - 2 K^2 + 12 chi = 0,  HK = 2pi - 2 - d.
3-folds in P^5:    H^2K = 2pi - 2 - 2d,
                   HK^2 = d(d+1)/2 - 9(pi - 1) + 6 chi(O_S),
                   K^3  = -5d^2 + d(2pi + 25) + 24(pi - 1)
                          - 36 chi(O_S) - 24 chi(O_X),
with pluridegrees d_i = (K+H)^i . H^(3-i).
"""

import os
import re
import shlex
from fractions import Fraction
from math import comb, factorial


class InvariantError(ValueError):
    pass


def binom_poly(a, n):
    """C(a + n, n) evaluated as a polynomial (integer, possibly negative a)."""
    num = 1
    for k in range(1, n + 1):
        num *= a + k
    val = Fraction(num, factorial(n))
    assert val.denominator == 1
    return int(val)


def surface_K2(d, pi, chi):
    """(HK, K^2) of a smooth surface in P^4 via the double point formula."""
    hk = 2 * pi - 2 - d
    num = d * d - 10 * d - 5 * hk + 12 * chi
    if num % 2 != 0:
        raise InvariantError("inconsistent parity: K^2 not an integer")
    return hk, num // 2


def threefold_K_products(d, pi, chi_x, chi_s):
    """(H^2K, HK^2, K^3, pluridegrees) of a smooth 3-fold in P^5."""
    h2k = 2 * pi - 2 - 2 * d
    hk2 = d * (d + 1) // 2 - 9 * (pi - 1) + 6 * chi_s
    if d * (d + 1) % 2:
        raise InvariantError("impossible: d(d+1) odd")
    k3 = -5 * d * d + d * (2 * pi + 25) + 24 * (pi - 1) - 36 * chi_s - 24 * chi_x
    plur = [
        d,
        d + h2k,
        d + 2 * h2k + hk2,
        d + 3 * h2k + 3 * hk2 + k3,
    ]
    return h2k, hk2, k3, plur


def adjoint_products(d, pi, chi_x, chi_s):
    """(K+H)^2 . K and (K+H) . K^2, convenience combinations."""
    h2k, hk2, k3, _ = threefold_K_products(d, pi, chi_x, chi_s)
    return k3 + 2 * hk2 + h2k, k3 + hk2


def chi_surface_twist(d, pi, chi, k):
    """chi(O_X(kH)) for a surface: chi + (d k^2 + k(d - 2pi + 2)) / 2."""
    num = d * k * k + k * (d - 2 * pi + 2)
    if num % 2:
        raise InvariantError("surface Riemann-Roch parity failure")
    return chi + num // 2


def chi_threefold_twist(d, pi, chi_x, chi_s, k):
    """chi(O_X(kH)) for a 3-fold, summing hyperplane-section values."""
    acc = chi_x
    if k >= 0:
        for j in range(1, k + 1):
            acc += chi_surface_twist(d, pi, chi_s, j)
    else:
        for j in range(0, k, -1):
            acc -= chi_surface_twist(d, pi, chi_s, j)
    return acc


def chi_twist(invariants, k):
    """Dispatch on dim: invariants dict with d, pi, chi (and chiS for 3-folds)."""
    if invariants.get("dim", 2) == 3:
        return chi_threefold_twist(
            invariants["d"], invariants["pi"], invariants["chi"], invariants["chiS"], k
        )
    return chi_surface_twist(invariants["d"], invariants["pi"], invariants["chi"], k)


def ci_surface_chi(r, s):
    """chi(O) of the complete-intersection surface (r, s) in P^4."""
    return (
        binom_poly(0, 4)
        - binom_poly(-r, 4)
        - binom_poly(-s, 4)
        + binom_poly(-r - s, 4)
    )


def ci_invariants(r, s, n=5):
    """(degree, sectional genus) of a complete intersection 3-fold/surface."""
    return r * s, r * s * (r + s - 4) // 2 + 1


def adjoint_dimension(quotient_res, codim=2):
    """dim |K+H| = h^0(omega_X(1)) - 1, read off the degree-1 piece of
    Ext^codim(R/I, R(-n-1))."""
    from .resolutions import ext_dims

    space = quotient_res.space
    dims = ext_dims(quotient_res, -space.n - 1, codim, [1])
    return dims[1] - 1


def segre_pencil_intersections(d=17, h2s=6, hss=1, sss=0, hs2=None, s2sj=None, s3=None):
    """Intersection numbers forced by the five residual pencils.

    (H - S_i)^2 = 0 gives, paired with H, S_i and S_j:
      H S_i^2   = 2 h2s - d
      S_i^2 S_j = 2 hss - h2s
      S_i^3     = 2 (H S_i^2) - h2s
    and the quintuple-product degree (5H - sum S_i)^3.  Overriding a
    derived value inconsistently with the solved one is an error.
    """
    solved = (2 * h2s - d, 2 * hss - h2s)
    solved = solved + (2 * solved[0] - h2s,)
    for name, given, want in (("hs2", hs2, solved[0]), ("s2sj", s2sj, solved[1]), ("s3", s3, solved[2])):
        if given is not None and given != want:
            raise InvariantError(
                "inconsistent override data: %s = %d but relations force %d"
                % (name, given, want)
            )
    hs2, s2sj, s3 = solved
    # expand (5H - sum S_i)^3 multilinearly with the solved table
    H3 = d
    H2S = 5 * h2s
    HS2 = 5 * hs2 + 20 * hss
    S3_total = 5 * s3 + 60 * s2sj + 60 * sss
    cube = 125 * H3 - 75 * H2S + 15 * HS2 - S3_total
    table = {
        "H.Si^2": hs2,
        "Si^2.Sj": s2sj,
        "Si^3": s3,
        "cube": cube,
    }
    # audit: the defining relations hold identically
    checks = {
        "(H-Si)^2.H": d - 2 * h2s + hs2,
        "(H-Si)^2.Si": h2s - 2 * hs2 + s3,
        "(H-Si)^2.Sj": h2s - 2 * hss + s2sj,
    }
    for name, val in checks.items():
        if val != 0:
            raise InvariantError("inconsistent override data: %s = %d" % (name, val))
    return table


def pencil_cube(a, d, h2s, hs2, s3):
    """(aH - S)^3 for a single pencil divisor S."""
    return a ** 3 * d - 3 * a * a * h2s + 3 * a * hs2 - s3


# ---------------------------------------------------------------------------
# catalog


DATA_DIR = os.path.join(os.path.dirname(__file__), "data")

N6_VALUES = {
    # six-secant counts recorded as opaque data (surface d, pi, chi)
    (11, 11, 3): 5,
}


class CatalogEntry:
    def __init__(self, fields):
        self.label = fields["label"]
        self.d = int(fields["d"])
        self.pi = int(fields["pi"])
        self.pg = int(fields["pg"])
        self.chi_x = int(fields["chiX"])
        self.chi_s = int(fields["chiS"])
        self.kappa = fields["kappa"]
        self.ci = fields.get("ci")
        self.link = fields.get("link")
        self.note = fields.get("note", "")
        self.type = fields.get("type", "")
        self.refs = fields.get("refs", "")

    def k_products(self):
        return threefold_K_products(self.d, self.pi, self.chi_x, self.chi_s)


def load_threefold_catalog(path=None):
    path = path or os.path.join(DATA_DIR, "threefolds.txt")
    entries = {}
    order = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = {}
            for tok in shlex.split(line):
                key, _, val = tok.partition("=")
                fields[key] = val
            e = CatalogEntry(fields)
            entries[e.label] = e
            order.append(e.label)
    return entries, order


def load_surface_table(path=None):
    path = path or os.path.join(DATA_DIR, "surfaces.txt")
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = {}
            for tok in shlex.split(line):
                key, _, val = tok.partition("=")
                fields[key] = val
            rows.append(fields)
    return rows


EXTERNAL_PARTNERS = {
    "P3": (1, 0),
    "Sigma(1,2)": (2, 0),
}


def partner_invariants(token, entries):
    """(d, pi or None, description) for a liaison partner token."""
    if token in entries:
        e = entries[token]
        return e.d, e.pi, token
    if token in EXTERNAL_PARTNERS:
        d, pi = EXTERNAL_PARTNERS[token]
        return d, pi, token
    if token.startswith("union:"):
        total = 0
        for part in token[len("union:") :].split("+"):
            m = re.fullmatch(r"(\d*)(.+)", part)
            mult = int(m.group(1)) if m.group(1) else 1
            name = m.group(2)
            if name in entries:
                total += mult * entries[name].d
            elif name in EXTERNAL_PARTNERS:
                total += mult * EXTERNAL_PARTNERS[name][0]
            else:
                raise InvariantError("unknown union component %r" % name)
        return total, None, token
    raise InvariantError("unknown partner %r" % token)


def audit_edge(e, entries):
    """Both liaison relations for one catalog row; returns check records."""
    out = []
    partner, r, s = e.link.rsplit(":", 2)
    r, s = int(r), int(s)
    dp, pip, desc = partner_invariants(partner, entries)
    drel = e.d + dp == r * s
    rec = {
        "row": e.label,
        "edge": "%s ~(%d,%d) %s" % (e.label, r, s, desc),
        "degree": (e.d + dp, r * s),
        "status": "PASS" if drel else "FAIL",
    }
    if pip is not None:
        grel = 2 * (e.pi - pip) == (r + s - 4) * (e.d - dp)
        rec["genus"] = (e.pi - pip, (r + s - 4) * (e.d - dp) // 2)
        if not grel:
            rec["status"] = "FAIL"
    else:
        rec["genus_derived"] = e.pi - (r + s - 4) * (e.d - (r * s - e.d)) // 2
    out.append(rec)
    return out


def catalog_audit(entries=None, order=None):
    """Check every liaison edge and every row's K-products.

    Returns a list of check records with PASS/FAIL/FLAGGED status; the
    known bad X12 edge is reported FLAGGED (its printed invariants fail
    the degree relation) together with the alternative attribution.
    """
    if entries is None:
        entries, order = load_threefold_catalog()
    checks = []
    for label in order:
        e = entries[label]
        # K-products recompute without contradiction (integrality + any
        # printed extras stored in the note field)
        try:
            h2k, hk2, k3, plur = e.k_products()
            rec = {
                "row": label,
                "check": "K-products",
                "values": (h2k, hk2, k3),
                "status": "PASS",
            }
            m = re.search(r"H2K=(-?\d+)", e.note)
            if m and int(m.group(1)) != h2k:
                rec["status"] = "FAIL"
            checks.append(rec)
        except InvariantError as exc:
            checks.append(
                {"row": label, "check": "K-products", "status": "FAIL", "detail": str(exc)}
            )
        if e.ci:
            r, s = (int(t) for t in e.ci.split(":"))
            d_ci, pi_ci = ci_invariants(r, s)
            ok = d_ci == e.d and pi_ci == e.pi
            checks.append(
                {
                    "row": label,
                    "check": "complete intersection (%d,%d)" % (r, s),
                    "status": "PASS" if ok else "FAIL",
                }
            )
        if e.link:
            recs = audit_edge(e, entries)
            for rec in recs:
                if label == "X12" and rec["status"] == "FAIL":
                    rec["status"] = "FLAGGED"
                    alt = dict(e.__dict__)
                    alt_rec = {
                        "row": label,
                        "edge": "X12 ~(3,4) X1 (alternative attribution)",
                        "degree": (e.d + entries["X1"].d, 12),
                        "genus": (e.pi - entries["X1"].pi, (3 + 4 - 4) * (e.d - entries["X1"].d) // 2),
                        "status": "PASS"
                        if e.d + entries["X1"].d == 12
                        and 2 * (e.pi - entries["X1"].pi) == 3 * (e.d - entries["X1"].d)
                        else "FAIL",
                    }
                    checks.append(rec)
                    checks.append(alt_rec)
                else:
                    checks.append(rec)
            if "printed_X8" in e.note:
                # the table prints the edge under another label; audit it
                # against that owner as well and report both outcomes
                alt = entries["X8"]
                partner, r, s = e.link.rsplit(":", 2)
                r, s = int(r), int(s)
                dp, pip, _ = partner_invariants(partner, entries)
                ok = alt.d + dp == r * s and 2 * (alt.pi - pip) == (r + s - 4) * (
                    alt.d - dp
                )
                checks.append(
                    {
                        "row": label,
                        "edge": "X8 ~(%d,%d) %s (as printed)" % (r, s, partner),
                        "status": "PASS" if ok else "FAIL",
                    }
                )
    return checks


def audit_summary(checks):
    n_pass = sum(1 for c in checks if c["status"] == "PASS")
    n_fail = sum(1 for c in checks if c["status"] == "FAIL")
    n_flag = sum(1 for c in checks if c["status"] == "FLAGGED")
    return {"PASS": n_pass, "FAIL": n_fail, "FLAGGED": n_flag}
