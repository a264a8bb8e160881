"""Per-step diagnostics of a short Willmore flow on a perturbed sphere."""
import math

from willmore.ambient import AmbientManifold
from willmore.cli import perturbed
from willmore.flow import (FlowConfig, area_holder_check, dissipation_check,
                           run, stationarity_measure,
                           variation_identities_check)
from willmore.surface import round_sphere

f0 = perturbed(round_sphere(AmbientManifold.euclidean(3), 1.0, 32), 0.08, 7)
config = FlowConfig(c_cfl=0.1, max_steps=60, chi_rho=0.5, chi_stride=8)
state = run(f0, config)

hist = state.history
print("step      t        W_H       area    max|A|   diss_res  "
      "holder_m    chi")
for rec in hist[:: max(1, len(hist) // 12)] + (hist[-1],):
    print(f"{rec.step:4d}  {rec.t:.2e}  {rec.W_H:8.5f}  {rec.area:8.5f}"
          f"  {rec.max_norm_A:6.3f}  {rec.dissipation_residual:9.2e}"
          f"  {rec.area_holder_margin:9.2e}  {rec.chi_value:6.3f}")

W0, area0 = state.W0, state.area0
mass = min(math.sqrt(2.0 * rec.t) * W0 + area0 - rec.area for rec in hist)
vg, va = variation_identities_check(state, 0.5 * hist[-1].dt)

print(f"\nstatus {state.status} after {hist[-1].step} steps, "
      f"W_H {hist[0].W_H:.5f} -> {hist[-1].W_H:.5f} (8 pi = {8 * math.pi:.5f})")
print(f"dissipation_check (worst relative defect): "
      f"{dissipation_check(hist):.4f}")
print(f"area_holder_check (worst pair margin):     "
      f"{area_holder_check(hist, W0):+.3e}")
print(f"mass bound margin sqrt(2t) W0 + |S_0| - |S_t|: {mass:+.3e}")
print(f"variation identity residuals: metric {vg:.3e}, area {va:.3e}")
print(f"stationarity measure: {stationarity_measure(state):.3e} "
      "(critical spheres sit below 1e-4)")
