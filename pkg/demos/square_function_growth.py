"""
Growth of the square function on de la Vallee Poussin kernels
=============================================================

``V_{2^N}`` has L^1 norm at most 3 for every N, yet its square function
grows. The lower-bound chain goes through the dyadic blocks: each
``||Delta_k V||_1`` grows like ``k``, so ``||S V||_1 >= (sum_k
||Delta_k V||_1^2)^(1/2)`` grows like ``N^(3/2)``.

At desk scale the fitted exponent sits near 1.15 and creeps upward; the
local slopes printed at the end show the drift.
"""

import numpy as np

from lpsquare.experiments import bourgain_lower_suite, fit_exponent

records = bourgain_lower_suite(range(6, 15))

print(f"{'N':>3} {'||S V||_1':>10} {'chain':>8} {'ratio_Cp':>9} {'min_k ||D_k V||_1/k':>20}")
for r in records:
    m = r.measurements
    print(f"{r.params['N']:>3} {m['norm_S_L1']:>10.4f} {m['chain_L1']:>8.4f} {m['ratio_Cp']:>9.4f} "
          f"{m['min_block_ratio']:>20.4f}")

fits = records[0].fits
print(f"\nslope of ||S V||_1 vs N:        {fits['fit_S_L1_slope']:.3f}")
print(f"slope of the chain vs N:         {fits['fit_chain_L1_slope']:.3f}")
print(f"slope of ratio_Cp vs 1/(p - 1):  {fits['fit_ratio_Cp_slope']:.3f}")

# local two-point slopes d ln S / d ln N
N = np.array([r.params["N"] for r in records], dtype=float)
S = np.array([r.measurements["norm_S_L1"] for r in records])
local = np.diff(np.log(S)) / np.diff(np.log(N))
print("local slopes:", np.round(local, 3))

# blocks of the largest N: ||Delta_k V||_1 against k
blocks = [float(v) for v in records[-1].measurements["block_L1"].split(";")]
print("block L1 norms, N = 14:", np.round(blocks, 3))
print("fit of block norms vs k (k >= 4):", round(fit_exponent(range(4, 15), blocks[3:]).slope, 3))
