"""Smoke test for the epr2 Python bindings. Run after `maturin develop`."""

import json
import math

import epr2_py as epr2

rho = epr2.DensityMatrix.werner(0.6)
assert abs(rho.concurrence() - 0.4) < 1e-12
assert abs(epr2.concurrence(epr2.DensityMatrix.from_spec("werner:x=0.6")) - 0.4) < 1e-12

table = epr2.DensityMatrix.pure(0.0).joint_table((0, 0, 1), (0, 0, 1))
assert abs(table[0] - 1.0) < 1e-12 and abs(sum(table) - 1.0) < 1e-12

split = epr2.model_gen_werner(0.8, math.pi / 12)
assert abs(split.p_local - 0.7) < 1e-9
report = split.check(20, 8)
assert report["valid"], report

general = split.state.split()
assert abs(general.p_local - split.p_local) < 1e-9
branches = split.state.wootters_decomposition()
assert abs(sum(w for w, _ in branches) - 1.0) < 1e-10

doc = json.loads(epr2.model_bd(x=0.1, y=0.1, a=0.1, b=0.2, gamma=0.5).to_json())
assert set(doc) == {"p_local", "branches"}

freq = epr2.model_werner(1 / 3).simulate((0, 0, 1), (1, 0, 0), samples=200_000, seed=1)
assert abs(sum(freq) - 1.0) < 1e-12
assert all(abs(f - 0.25) < 0.01 for f in freq)

back = epr2.DensityMatrix.from_json(rho.to_json())
assert back.rows() == rho.rows()

try:
    epr2.DensityMatrix.werner(1.5)
except ValueError:
    pass
else:
    raise AssertionError("out-of-range x accepted")

print("smoke test ok")
