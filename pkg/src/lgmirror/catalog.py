"""The standard verification catalog.

Covers Fermat exponents 2..5, chains up to three variables including the
broad a_n = 2 family, loops including the rank-two identity sector (even n)
and the (2,2) case, plus one Sebastiani-Thom sum for the tensor-product
surfaces.  Everything here has |G_w| <= 64 and mu_{w^T} <= 12, so the
brute-force audits stay at desk scale.
"""

CATALOG = [
    ("fermat_2", "x1^2"),
    ("fermat_3", "x1^3"),
    ("fermat_4", "x1^4"),
    ("fermat_5", "x1^5"),
    ("chain_2_2", "x1^2*x2+x2^2"),
    ("chain_3_2", "x1^3*x2+x2^2"),
    ("chain_4_2", "x1^4*x2+x2^2"),
    ("chain_2_3", "x1^2*x2+x2^3"),
    ("chain_2_2_2", "x1^2*x2+x2^2*x3+x3^2"),
    ("chain_2_2_3", "x1^2*x2+x2^2*x3+x3^3"),
    ("chain_2_3_2", "x1^2*x2+x2^3*x3+x3^2"),
    ("loop_2_2", "x1^2*x2+x2^2*x1"),
    ("loop_3_2", "x1^3*x2+x2^2*x1"),
    ("loop_4_2", "x1^4*x2+x2^2*x1"),
    ("loop_5_2", "x1^5*x2+x2^2*x1"),
    ("loop_3_3", "x1^3*x2+x2^3*x1"),
    ("loop_2_2_2", "x1^2*x2+x2^2*x3+x3^2*x1"),
    ("loop_3_2_2", "x1^3*x2+x2^2*x3+x3^2*x1"),
    ("sum_f3_c22", "x1^3+x2^2*x3+x3^2"),
]

# chains with n <= 3 and all exponents <= 3, for the K-vector shape audit
KSHAPE_CHAINS = [
    ("chain_2_2", "x1^2*x2+x2^2"),
    ("chain_2_3", "x1^2*x2+x2^3"),
    ("chain_3_2", "x1^3*x2+x2^2"),
    ("chain_3_3", "x1^3*x2+x2^3"),
    ("chain_2_2_2", "x1^2*x2+x2^2*x3+x3^2"),
    ("chain_2_2_3", "x1^2*x2+x2^2*x3+x3^3"),
    ("chain_2_3_2", "x1^2*x2+x2^3*x3+x3^2"),
    ("chain_2_3_3", "x1^2*x2+x2^3*x3+x3^3"),
    ("chain_3_2_2", "x1^3*x2+x2^2*x3+x3^2"),
    ("chain_3_2_3", "x1^3*x2+x2^2*x3+x3^3"),
    ("chain_3_3_2", "x1^3*x2+x2^3*x3+x3^2"),
    ("chain_3_3_3", "x1^3*x2+x2^3*x3+x3^3"),
]

# reconstruction-capable entries (atomic) with mu_{w^T} <= 9: the five-point
# reduce-vs-solve oracle runs on these
FIVE_POINT_ORACLE = [
    "fermat_3", "fermat_4", "fermat_5",
    "chain_2_2", "chain_3_2", "chain_4_2", "chain_2_3",
    "chain_2_2_2", "chain_2_2_3", "chain_2_3_2",
    "loop_2_2", "loop_3_2", "loop_4_2", "loop_3_3", "loop_2_2_2",
]


def catalog_texts():
    return dict(CATALOG)
