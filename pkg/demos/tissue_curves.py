"""Write uniaxial tension/compression and shear CSV curves for every tissue preset."""
import pathlib
import sys

from umat import LoadPath, build_preset, emit_csv, run_path
from umat.point_driver import leading_component
from umat.presets import TISSUE_PRESETS

out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "curves")
out.mkdir(exist_ok=True)
for name in TISSUE_PRESETS:
    spec = build_preset(name)
    peaks = []
    for tag, mode, stop in (("tension", "uniaxial", 1.1), ("compression", "uniaxial", 0.9),
                            ("shear", "simple_shear", 0.3)):
        start = 0.0 if mode == "simple_shear" else 1.0
        curve = run_path(spec, LoadPath.linspace(mode, start, stop, 21))
        (out / f"{name}_{tag}.csv").write_text(emit_csv(curve, mode, spec.units))
        peaks.append(f"{tag} {leading_component(curve, mode)[-1]:+.4g}")
    print(f"{name} [{spec.units}]: " + ", ".join(peaks))
print(f"curves written to {out}/")
