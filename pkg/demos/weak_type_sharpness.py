"""
Which entropy exponent controls the weak norm
=============================================

Compare ``||S V_{2^N}||_{1,inf}`` with ``1 + int |V| log^r(1 + |V|)``. At
``r = 1/2`` the ratio stays bounded; at ``r = 1/4`` it keeps growing, which
is the numerical face of the exponent 1/2 being sharp.
"""

from lpsquare.experiments import weak_type_sharpness_suite

for r in weak_type_sharpness_suite(range(6, 15)):
    m = r.measurements
    print(f"N={r.params['N']:>2}  weak={m['weak_S']:.4f}  r=1/2 ratio={m['ratio_sharp']:.4f}  "
          f"r=1/4 ratio={m['ratio_under']:.4f}  dual/weak={m['weak_dual'] / m['weak_S']:.3f}")

# two parameters through separability: S_2(V (x) V) = S V (x) S V
recs = weak_type_sharpness_suite(range(6, 12), n=2)
for r in recs:
    m = r.measurements
    print(f"n=2 N={r.params['N']:>2}  ||S_2||_1={m['strong_S_L1']:.2f}  weak={m['weak_S']:.3f}  "
          f"entropy(r=2)={m['entropy_sharp']:.2f}")
print("slope of ||S_2||_1 vs N:", round(recs[0].fits["fit_strong_slope"], 3))
