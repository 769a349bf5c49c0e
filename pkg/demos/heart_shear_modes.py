"""Simple-shear response of the myocardium presets in the six fs/fn/sf/sn/nf/ns modes."""
from umat import LoadPath, build_preset, run_path
from umat.point_driver import shear_mode_plane

MODES = ("fs", "fn", "sf", "sn", "nf", "ns")

for name in ("heart_guan", "heart_discovered", "heart_generalized_holzapfel"):
    spec = build_preset(name)
    print(f"{name} [{spec.units}] shear stress at gamma = 0.5")
    for mode in MODES:
        a, b = shear_mode_plane(mode)
        curve = run_path(spec, LoadPath.linspace("simple_shear", 0.0, 0.5, 11, plane=(a, b)))
        print(f"  {mode}: {curve[-1].sigma[a - 1, b - 1]:10.4f}")
